#include "hopcycle/numbers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace hopcycle {

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::pow(std::uint64_t base, std::uint64_t exponent) {
    BigUint result(1);
    BigUint acc(base);
    while (exponent) {
        if (exponent & 1) result = result * acc;
        acc = acc * acc;
        exponent >>= 1;
    }
    return result;
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    if (limbs_.size() < rhs.limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
    unsigned __int128 carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        unsigned __int128 sum = carry + limbs_[i];
        if (i < rhs.limbs_.size()) sum += rhs.limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(sum);
        carry = sum >> 64;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
    if (*this < rhs) throw std::underflow_error("BigUint: subtraction would go negative");
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        const std::uint64_t sub = (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0);
        const std::uint64_t before = limbs_[i];
        const std::uint64_t after = before - sub - borrow;
        borrow = (before < sub + borrow || (sub == ~std::uint64_t{0} && borrow)) ? 1 : 0;
        limbs_[i] = after;
    }
    trim();
    return *this;
}

BigUint& BigUint::operator*=(std::uint64_t rhs) {
    if (rhs == 0 || is_zero()) {
        limbs_.clear();
        return *this;
    }
    unsigned __int128 carry = 0;
    for (auto& limb : limbs_) {
        unsigned __int128 prod = static_cast<unsigned __int128>(limb) * rhs + carry;
        limb = static_cast<std::uint64_t>(prod);
        carry = prod >> 64;
    }
    if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
    return *this;
}

BigUint BigUint::operator*(const BigUint& rhs) const {
    if (is_zero() || rhs.is_zero()) return BigUint();
    BigUint out;
    out.limbs_.assign(limbs_.size() + rhs.limbs_.size(), 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        unsigned __int128 carry = 0;
        for (std::size_t j = 0; j < rhs.limbs_.size(); ++j) {
            unsigned __int128 cur = out.limbs_[i + j];
            cur += static_cast<unsigned __int128>(limbs_[i]) * rhs.limbs_[j] + carry;
            out.limbs_[i + j] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        std::size_t k = i + rhs.limbs_.size();
        while (carry) {
            unsigned __int128 cur = static_cast<unsigned __int128>(out.limbs_[k]) + carry;
            out.limbs_[k] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
            ++k;
        }
    }
    out.trim();
    return out;
}

std::uint64_t BigUint::divmod_small(std::uint64_t divisor) {
    if (divisor == 0) throw std::invalid_argument("BigUint: division by zero");
    unsigned __int128 rem = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
        unsigned __int128 cur = (rem << 64) | limbs_[i];
        limbs_[i] = static_cast<std::uint64_t>(cur / divisor);
        rem = cur % divisor;
    }
    trim();
    return static_cast<std::uint64_t>(rem);
}

std::strong_ordering BigUint::operator<=>(const BigUint& rhs) const {
    if (limbs_.size() != rhs.limbs_.size()) return limbs_.size() <=> rhs.limbs_.size();
    for (std::size_t i = limbs_.size(); i-- > 0;)
        if (limbs_[i] != rhs.limbs_[i]) return limbs_[i] <=> rhs.limbs_[i];
    return std::strong_ordering::equal;
}

std::uint64_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    return 64 * (limbs_.size() - 1) + (64 - static_cast<std::uint64_t>(std::countl_zero(limbs_.back())));
}

double BigUint::log_natural() const {
    if (is_zero()) throw std::domain_error("BigUint: log of zero");
    // value = mantissa * 2^(64 * skipped), mantissa built from the top limbs
    const std::size_t used = std::min<std::size_t>(limbs_.size(), 2);
    long double mantissa = 0;
    for (std::size_t i = limbs_.size(); i-- > limbs_.size() - used;)
        mantissa = mantissa * 0x1.0p64L + static_cast<long double>(limbs_[i]);
    const std::uint64_t skipped_bits = 64 * (limbs_.size() - used);
    return static_cast<double>(std::log(mantissa) +
                               static_cast<long double>(skipped_bits) * 0.6931471805599453094L);
}

std::uint64_t BigUint::to_u64() const {
    if (limbs_.size() > 1) throw std::overflow_error("BigUint: value exceeds 64 bits");
    return limbs_.empty() ? 0 : limbs_[0];
}

std::string BigUint::to_string() const {
    if (is_zero()) return "0";
    BigUint tmp = *this;
    std::string out;
    while (!tmp.is_zero()) {
        std::uint64_t chunk = tmp.divmod_small(10'000'000'000'000'000'000ull);  // 10^19
        if (tmp.is_zero()) {
            out = std::to_string(chunk) + out;
        } else {
            std::string part = std::to_string(chunk);
            out = std::string(19 - part.size(), '0') + part + out;
        }
    }
    return out;
}

int mobius(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("mobius: argument must be >= 1");
    int prime_count = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;  // squared prime factor
            ++prime_count;
        }
    }
    if (n > 1) ++prime_count;
    return (prime_count % 2 == 0) ? 1 : -1;
}

BigUint necklace_count(std::uint64_t k, std::uint64_t len) {
    if (k == 0 || len == 0) throw std::invalid_argument("necklace_count: arguments must be >= 1");
    std::vector<std::uint64_t> divisors;
    for (std::uint64_t j = 1; j * j <= len; ++j) {
        if (len % j != 0) continue;
        divisors.push_back(j);
        if (j != len / j) divisors.push_back(len / j);
    }
    // sum over divisors j of len of mu(j) * k^(len/j), split by sign
    BigUint positive, negative;
    for (auto div : divisors) {
        const int mu = mobius(div);
        if (mu == 0) continue;
        BigUint term = BigUint::pow(k, len / div);
        if (mu > 0)
            positive += term;
        else
            negative += term;
    }
    positive -= negative;
    return positive;
}

std::uint64_t primitive_period(const std::string& s) {
    const std::uint64_t len = s.size();
    if (len == 0) throw std::invalid_argument("primitive_period: empty string");
    for (std::uint64_t p = 1; p < len; ++p) {
        if (len % p != 0) continue;
        bool fixed = true;
        for (std::uint64_t i = 0; i < len && fixed; ++i) fixed = s[i] == s[(i + p) % len];
        if (fixed) return p;
    }
    return len;
}

bool is_aperiodic(const std::string& s) { return primitive_period(s) == s.size(); }

std::string random_aperiodic(std::uint64_t len, Rng& rng) {
    if (len == 0) throw std::invalid_argument("random_aperiodic: length must be >= 1");
    std::string s(len, '-');
    while (true) {
        for (auto& ch : s) ch = rng.bernoulli(0.5) ? '+' : '-';
        if (is_aperiodic(s)) return s;
    }
}

double log_lcm(const std::vector<std::uint64_t>& values) {
    if (values.empty()) return 0.0;
    std::uint64_t maxv = 0;
    for (auto v : values) {
        if (v == 0) throw std::invalid_argument("log_lcm: elements must be >= 1");
        maxv = std::max(maxv, v);
    }
    if (maxv == 1) return 0.0;
    // smallest prime factor sieve
    std::vector<std::uint32_t> spf(maxv + 1);
    for (std::uint64_t i = 0; i <= maxv; ++i) spf[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t i = 2; i * i <= maxv; ++i)
        if (spf[i] == i)
            for (std::uint64_t j = i * i; j <= maxv; j += i)
                if (spf[j] == j) spf[j] = static_cast<std::uint32_t>(i);
    std::unordered_map<std::uint64_t, std::uint32_t> max_exponent;
    for (auto v : values) {
        while (v > 1) {
            const std::uint64_t p = spf[v];
            std::uint32_t e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            auto& slot = max_exponent[p];
            slot = std::max(slot, e);
        }
    }
    double total = 0;
    for (auto [p, e] : max_exponent) total += std::log(static_cast<double>(p)) * e;
    return total;
}

double psi_prediction(double m, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("psi_prediction: delta must lie in (0,1)");
    return m * delta * std::log(1.0 / delta) / (1.0 - delta);
}

CapacityEstimate capacity_estimate(const std::vector<std::uint64_t>& lengths) {
    CapacityEstimate est;
    for (auto len : lengths) est.log_num_states += necklace_count(2, len).log_natural();
    est.log_period = log_lcm(lengths);
    est.log_num_cycles = est.log_num_states - est.log_period;
    return est;
}

std::uint64_t lcm_u64(const std::vector<std::uint64_t>& lengths) {
    std::uint64_t acc = 1;
    for (auto len : lengths) {
        if (len == 0) throw std::invalid_argument("lcm: elements must be >= 1");
        const std::uint64_t g = std::gcd(acc, len);
        const std::uint64_t factor = len / g;
        if (acc > ~std::uint64_t{0} / factor) throw std::overflow_error("lcm: exceeds 64 bits");
        acc *= factor;
    }
    return acc;
}

BigUint exact_state_count(const std::vector<std::uint64_t>& lengths) {
    BigUint count(1);
    for (auto len : lengths) count = count * necklace_count(2, len);
    return count;
}

BigUint exact_cycle_count(const std::vector<std::uint64_t>& lengths) {
    BigUint states = exact_state_count(lengths);
    // every rotation orbit of a fully aperiodic labeling has size exactly lcm
    const std::uint64_t period = lcm_u64(lengths);
    const std::uint64_t rem = states.divmod_small(period);
    if (rem != 0) throw std::logic_error("exact_cycle_count: state count not divisible by period");
    return states;
}

std::vector<std::uint64_t> coprime_lengths(std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("coprime_lengths: m must be >= 2");
    std::vector<bool> composite(m + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= m; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t q = p * p; q <= m; q += p) composite[q] = true;
        std::uint64_t power = p;
        while (power <= m / p) power *= p;
        out.push_back(power);
    }
    return out;
}

}  // namespace hopcycle
