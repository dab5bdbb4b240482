#pragma once

#include <cstdint>
#include <random>

namespace hopcycle {

// SplitMix64 finalizer; used to derive substream seeds from a master seed
// plus stream tags, so trial results do not depend on thread schedule.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(master ^ 0x7c1592ad03c471f5ull);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Seedable generator wrapping std::mt19937_64 (whose output sequence is fixed
// by the standard) with self-contained bounded/unit mappings, so identical
// seeds give identical draws on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform over [0, bound); bound >= 1. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v > limit);
        return v % bound;
    }

    // Uniform over the integer interval [lo, hi], inclusive.
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    // Uniform double in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Independent substream derived from this generator's seed and a tag.
    Rng split(std::uint64_t tag) const { return Rng(derive_seed(seed_, tag)); }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

}  // namespace hopcycle
