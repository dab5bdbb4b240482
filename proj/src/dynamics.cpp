#include "hopcycle/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace hopcycle {

std::uint64_t step_into(const Network& net, const SpinState& cur, SpinState& next, TieRule rule) {
    const std::uint64_t n = net.size();
    if (cur.size() != n || next.size() != n) throw std::invalid_argument("step: dimension mismatch");
    const auto offsets = net.offsets();
    const auto sources = net.sources();
    const auto weights = net.weights();
    const auto cur_words = cur.words();
    const auto anti = net.anti_majority_bitmap();
    auto out_words = next.words();
    std::uint64_t ties = 0;
    for (std::uint64_t w = 0; w < out_words.size(); ++w) {
        std::uint64_t bits = 0;
        const std::uint64_t hi = std::min<std::uint64_t>(n, (w + 1) * 64);
        for (std::uint64_t i = w * 64; i < hi; ++i) {
            std::int64_t field = 0;
            for (std::uint64_t e = offsets[i]; e < offsets[i + 1]; ++e) {
                const std::int64_t wt = weights[e];
                field += ((cur_words[sources[e] >> 6] >> (sources[e] & 63)) & 1u) ? wt : -wt;
            }
            bool out;
            if (field > 0) {
                out = true;
            } else if (field < 0) {
                out = false;
            } else {
                ++ties;
                out = (rule == TieRule::keep_state) ? cur.bit(i) : true;
            }
            if ((anti[w] >> (i & 63)) & 1u) out = !out;
            bits |= static_cast<std::uint64_t>(out) << (i & 63);
        }
        out_words[w] = bits;
    }
    return ties;
}

UpdateReport step(const Network& net, const SpinState& cur, TieRule rule) {
    UpdateReport report{SpinState(net.size()), 0};
    report.ties = step_into(net, cur, report.next, rule);
    return report;
}

SpinState iterate(const Network& net, SpinState x, std::uint64_t steps) {
    SpinState buf(net.size());
    for (std::uint64_t t = 0; t < steps; ++t) {
        step_into(net, x, buf);
        std::swap(x, buf);
    }
    return x;
}

CycleReport detect_cycle(const Network& net, const SpinState& x0, std::uint64_t horizon,
                         std::uint64_t keep_states_limit) {
    if (horizon == 0) throw std::invalid_argument("detect_cycle: horizon must be >= 1");
    CycleReport report;
    std::unordered_map<SpinState, std::uint64_t, SpinStateHash> seen;
    std::vector<SpinState> trajectory;
    SpinState x = x0;
    for (std::uint64_t t = 0;; ++t) {
        auto [it, inserted] = seen.emplace(x, t);
        if (!inserted) {
            report.transient = it->second;
            report.period = t - it->second;
            if (report.period <= keep_states_limit)
                report.cycle_states.assign(trajectory.begin() + static_cast<std::ptrdiff_t>(report.transient),
                                           trajectory.end());
            return report;
        }
        trajectory.push_back(x);
        if (t == horizon) break;
        SpinState nxt(net.size());
        report.ties_total += step_into(net, x, nxt);
        x = std::move(nxt);
    }
    report.horizon_hit = true;
    return report;
}

CycleReport detect_cycle_brent(const Network& net, const SpinState& x0, std::uint64_t horizon) {
    if (horizon == 0) throw std::invalid_argument("detect_cycle: horizon must be >= 1");
    CycleReport report;
    auto advance = [&](SpinState& x) {
        SpinState nxt(net.size());
        report.ties_total += step_into(net, x, nxt);
        x = std::move(nxt);
    };
    // find the period with power-of-two teleports
    std::uint64_t power = 1, lam = 1, steps = 0;
    SpinState tortoise = x0;
    SpinState hare = x0;
    advance(hare);
    ++steps;
    while (!(tortoise == hare)) {
        if (steps > 2 * horizon + 2) {
            report.horizon_hit = true;
            return report;
        }
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        advance(hare);
        ++steps;
        ++lam;
    }
    // find the transient: two pointers lam apart
    tortoise = x0;
    hare = x0;
    for (std::uint64_t i = 0; i < lam; ++i) advance(hare);
    std::uint64_t mu = 0;
    while (!(tortoise == hare)) {
        advance(tortoise);
        advance(hare);
        ++mu;
    }
    report.transient = mu;
    report.period = lam;
    if (mu + lam > horizon) report.horizon_hit = true;
    return report;
}

namespace {

// merge x ≡ r1 (mod m1) with x ≡ r2 (mod m2); moduli need not be coprime
std::optional<std::pair<std::uint64_t, std::uint64_t>> crt_merge(std::uint64_t r1, std::uint64_t m1,
                                                                 std::uint64_t r2, std::uint64_t m2) {
    const std::uint64_t g = std::gcd(m1, m2);
    const std::uint64_t diff = r2 >= r1 ? r2 - r1 : r1 - r2;
    if (diff % g != 0) return std::nullopt;
    const std::uint64_t lcm = m1 / g * m2;
    // solve r1 + m1*t ≡ r2 (mod m2)
    const std::uint64_t m2g = m2 / g;
    // modular inverse of (m1/g) mod m2g by extended Euclid
    std::int64_t a = static_cast<std::int64_t>((m1 / g) % m2g), m = static_cast<std::int64_t>(m2g);
    std::int64_t x0 = 1, x1 = 0, a0 = a, m0 = m;
    while (m0 != 0) {
        std::int64_t q = a0 / m0;
        a0 -= q * m0;
        std::swap(a0, m0);
        x0 -= q * x1;
        std::swap(x0, x1);
    }
    std::uint64_t inv = static_cast<std::uint64_t>(((x0 % m) + m) % m);
    const std::uint64_t delta = ((r2 % m2) + m2 - (r1 % m2)) % m2;  // r2 - r1 mod m2
    const std::uint64_t t =
        static_cast<std::uint64_t>(static_cast<unsigned __int128>((delta / g) % m2g) * inv % m2g);
    const std::uint64_t shift =
        static_cast<std::uint64_t>(static_cast<unsigned __int128>(m1) * t % lcm);
    return std::make_pair((r1 + shift) % lcm, lcm);
}

}  // namespace

ReferenceOrbit::ReferenceOrbit(BlockPartition part, BlockLabels labels, bool waive_aperiodicity)
    : part_(std::move(part)), labels_(std::move(labels)) {
    validate_labels(part_, labels_);
    prim_periods_.reserve(labels_.size());
    for (const auto& s : labels_) {
        const std::uint64_t pp = primitive_period(s);
        prim_periods_.push_back(pp);
        if (pp != s.size()) aperiodic_ = false;
    }
    if (!aperiodic_ && !waive_aperiodicity)
        throw std::invalid_argument(
            "reference orbit: labels contain a periodic string; pass the waiver to accept a shorter period");
    period_ = 1;
    for (auto pp : prim_periods_) period_ = std::lcm(period_, pp);
}

ReferenceOrbit make_reference_orbit(const BlockPartition& part, const BlockLabels& labels,
                                    bool waive_aperiodicity) {
    return ReferenceOrbit(part, labels, waive_aperiodicity);
}

BlockLabels ReferenceOrbit::labels_at(std::uint64_t t) const {
    BlockLabels out;
    out.reserve(labels_.size());
    for (const auto& s : labels_) out.push_back(rotate_label(s, t));
    return out;
}

SpinState ReferenceOrbit::state_at(std::uint64_t t) const {
    return monochromatic_state(part_, labels_at(t));
}

std::optional<std::uint64_t> ReferenceOrbit::locate_labels(const BlockLabels& observed) const {
    if (observed.size() != labels_.size()) return std::nullopt;
    std::uint64_t r = 0, mod = 1;
    for (std::size_t c = 0; c < labels_.size(); ++c) {
        if (observed[c].size() != labels_[c].size()) return std::nullopt;
        // rotations repeat with the primitive period, so only these are distinct
        std::optional<std::uint64_t> r0;
        for (std::uint64_t t = 0; t < prim_periods_[c]; ++t) {
            if (rotate_label(labels_[c], t) == observed[c]) {
                r0 = t;
                break;
            }
        }
        if (!r0) return std::nullopt;
        auto merged = crt_merge(r, mod, *r0, prim_periods_[c]);
        if (!merged) return std::nullopt;
        r = merged->first;
        mod = merged->second;
    }
    return r % period_;
}

std::optional<std::uint64_t> ReferenceOrbit::locate(const SpinState& x) const {
    auto observed = extract_labels(part_, x);
    if (!observed) return std::nullopt;
    return locate_labels(*observed);
}

RecoveryResult exact_recovery(const Network& net, const ReferenceOrbit& orbit, const SpinState& x,
                              std::uint64_t horizon) {
    RecoveryResult result;
    SpinState cur = x;
    SpinState buf(net.size());
    for (std::uint64_t t = 0;; ++t) {
        if (auto phase = orbit.locate(cur)) {
            result.recovered = true;
            result.recovery_time = t;
            result.phase = *phase;
            return result;
        }
        if (t == horizon) break;
        result.ties_total += step_into(net, cur, buf);
        std::swap(cur, buf);
    }
    return result;
}

TrackingResult weak_tracking(const Network& net, const ReferenceOrbit& orbit, const SpinState& x,
                             std::uint64_t k, std::uint64_t horizon, const std::uint64_t* ignore) {
    TrackingResult result;
    const auto& part = orbit.partition();
    const std::uint64_t period = orbit.period();
    const std::uint64_t window = 2 * period + horizon;

    // phase -> reference state, built on demand
    std::unordered_map<std::uint64_t, SpinState> cache;
    auto reference = [&](std::uint64_t phase) -> const SpinState& {
        auto it = cache.find(phase);
        if (it == cache.end()) it = cache.emplace(phase, orbit.state_at(phase)).first;
        return it->second;
    };
    auto within_k = [&](const SpinState& state, std::uint64_t phase) {
        const SpinState& ref = reference(phase);
        for (std::uint64_t blk = 0; blk < part.total_blocks(); ++blk) {
            if (xor_popcount_range_masked(state.words(), ref.words(), ignore, part.block_begin(blk),
                                          part.block_end(blk)) > k)
                return false;
        }
        return true;
    };

    SpinState cur = x;
    SpinState buf(net.size());
    bool have_candidate = false;
    std::uint64_t cand_start = 0, cand_phase = 0;
    for (std::uint64_t t = 0;; ++t) {
        if (have_candidate) {
            const std::uint64_t offset = t - cand_start;
            if (!within_k(cur, (cand_phase + offset) % period))
                have_candidate = false;
            else if (offset == window) {
                result.tracked = true;
                result.transient = cand_start;
                result.phase = cand_phase;
                return result;
            }
        }
        if (!have_candidate && t <= horizon) {
            // the majority pattern must itself sit on the reference rotation
            if (auto maj = majority_labels(part, cur, ignore)) {
                if (auto phase = orbit.locate_labels(*maj)) {
                    if (within_k(cur, *phase)) {
                        have_candidate = true;
                        cand_start = t;
                        cand_phase = *phase;
                        if (window == 0) {
                            result.tracked = true;
                            result.transient = t;
                            result.phase = *phase;
                            return result;
                        }
                    }
                }
            }
        }
        if (!have_candidate && t >= horizon) return result;  // nothing left to open
        result.ties_total += step_into(net, cur, buf);
        std::swap(cur, buf);
    }
}

double dense_one_step_recovery_prob(std::uint32_t d, double p, std::uint64_t n_blocks) {
    if (d == 0 || d % 2 == 0)
        throw std::invalid_argument("one-step recovery oracle: block size must be odd (tie-free majority)");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("one-step recovery oracle: p must be in [0,1]");
    if (p == 0.0) return 1.0;
    if (p == 1.0) return n_blocks == 0 ? 1.0 : 0.0;
    const std::uint32_t half = (d - 1) / 2;
    const double log_p = std::log(p), log_q = std::log1p(-p);
    const double lg_d = std::lgamma(static_cast<double>(d) + 1.0);
    double cdf = 0.0;
    for (std::uint32_t y = 0; y <= half; ++y) {
        const double log_term = lg_d - std::lgamma(static_cast<double>(y) + 1.0) -
                                std::lgamma(static_cast<double>(d - y) + 1.0) + y * log_p +
                                (d - y) * log_q;
        cdf += std::exp(log_term);
    }
    cdf = std::min(cdf, 1.0);
    return std::pow(cdf, static_cast<double>(n_blocks));
}

}  // namespace hopcycle
