#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "hopcycle/rng.hpp"

namespace hopcycle {

// Minimal unsigned big integer: little-endian 64-bit limbs, no leading zero
// limbs. Covers exactly what the exact counting paths need (the aperiodic
// string count of a length-200 cycle overflows any machine word).
class BigUint {
public:
    BigUint() = default;
    BigUint(std::uint64_t v) {
        if (v) limbs_.push_back(v);
    }

    static BigUint pow(std::uint64_t base, std::uint64_t exponent);

    bool is_zero() const { return limbs_.empty(); }

    BigUint& operator+=(const BigUint& rhs);
    BigUint& operator-=(const BigUint& rhs);  // requires *this >= rhs
    BigUint& operator*=(std::uint64_t rhs);
    BigUint operator+(const BigUint& rhs) const { BigUint r = *this; r += rhs; return r; }
    BigUint operator-(const BigUint& rhs) const { BigUint r = *this; r -= rhs; return r; }
    BigUint operator*(const BigUint& rhs) const;

    // Quotient in place, returns remainder. divisor >= 1.
    std::uint64_t divmod_small(std::uint64_t divisor);

    std::strong_ordering operator<=>(const BigUint& rhs) const;
    bool operator==(const BigUint& rhs) const = default;

    std::uint64_t bit_length() const;
    // Natural log; ln(0) is a domain error.
    double log_natural() const;
    // Value as uint64 if it fits, otherwise throws.
    std::uint64_t to_u64() const;

    std::string to_string() const;  // decimal

private:
    void trim();
    std::vector<std::uint64_t> limbs_;
};

// Mobius function mu(n) for n >= 1.
int mobius(std::uint64_t n);

// Number of aperiodic k-ary strings of length len (exact).
BigUint necklace_count(std::uint64_t k, std::uint64_t len);

// Smallest period of s under cyclic shifts; s is aperiodic iff this equals |s|.
std::uint64_t primitive_period(const std::string& s);
bool is_aperiodic(const std::string& s);

// Uniform over aperiodic sign strings of the given length, by rejection.
std::string random_aperiodic(std::uint64_t len, Rng& rng);

// Natural log of lcm(A), via smallest-prime-factor sieve up to max(A).
// Empty A gives 0. Elements must be >= 1.
double log_lcm(const std::vector<std::uint64_t>& values);

// Predicted log-lcm of a density-delta random subset of {1..m}:
// m * delta * ln(1/delta) / (1 - delta), for delta in (0,1).
double psi_prediction(double m, double delta);

struct CapacityEstimate {
    double log_num_states = 0;  // sum of ln M2(len_i)
    double log_period = 0;      // ln lcm(len_i)
    double log_num_cycles = 0;  // difference of the two
};

CapacityEstimate capacity_estimate(const std::vector<std::uint64_t>& lengths);

// Exact number of distinct rotation orbits of aperiodic labelings:
// prod_i M2(len_i) / lcm(len_i). Intended for small length sums.
BigUint exact_cycle_count(const std::vector<std::uint64_t>& lengths);
BigUint exact_state_count(const std::vector<std::uint64_t>& lengths);
std::uint64_t lcm_u64(const std::vector<std::uint64_t>& lengths);  // throws on overflow

// Maximal prime powers <= m, one per prime (pairwise coprime, lcm-maximal
// for the interval {1..m}). Requires m >= 2.
std::vector<std::uint64_t> coprime_lengths(std::uint64_t m);

}  // namespace hopcycle
