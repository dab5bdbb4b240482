#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hopcycle/bits.hpp"
#include "hopcycle/rng.hpp"

namespace hopcycle {

// State vector of n binary neurons, one bit per neuron: bit 1 is spin +1,
// bit 0 is spin -1. Bit order equals the canonical block layout, which is
// also the serialization order.
class SpinState {
public:
    SpinState() : n_(0) {}
    explicit SpinState(std::uint64_t n, int fill = -1) : n_(n), words_(words_for_bits(n), 0) {
        if (fill > 0 && n > 0) {
            for (auto& w : words_) w = ~std::uint64_t{0};
            trim();
        }
    }
    SpinState(std::uint64_t n, std::vector<std::uint64_t> words) : n_(n), words_(std::move(words)) {
        if (words_.size() != words_for_bits(n)) throw std::invalid_argument("SpinState: word count mismatch");
        trim();
    }

    static SpinState all_plus(std::uint64_t n) { return SpinState(n, +1); }
    static SpinState all_minus(std::uint64_t n) { return SpinState(n, -1); }

    std::uint64_t size() const { return n_; }

    int get(std::uint64_t i) const { return get_bit(words_, i) ? +1 : -1; }
    bool bit(std::uint64_t i) const { return get_bit(words_, i); }
    void set(std::uint64_t i, int spin) { set_bit(std::span(words_), i, spin > 0); }
    void flip(std::uint64_t i) { flip_bit(std::span(words_), i); }

    // Negate every spin.
    void negate() {
        for (auto& w : words_) w = ~w;
        trim();
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    std::uint64_t count_plus() const { return popcount_range_masked(words_, nullptr, 0, n_); }

    bool operator==(const SpinState& o) const { return n_ == o.n_ && words_ == o.words_; }

    std::uint64_t hash() const {
        return fnv1a64(words_.data(), words_.size() * sizeof(std::uint64_t), splitmix64(n_));
    }

    std::string to_hex() const { return bits_to_hex(words_, n_); }
    static SpinState from_hex(std::uint64_t n, const std::string& hex) {
        return SpinState(n, bits_from_hex(hex, n));
    }

private:
    void trim() {
        if (n_ % 64 != 0 && !words_.empty())
            words_.back() &= low_mask(static_cast<unsigned>(n_ % 64));
    }

    std::uint64_t n_;
    std::vector<std::uint64_t> words_;
};

struct SpinStateHash {
    std::size_t operator()(const SpinState& s) const { return static_cast<std::size_t>(s.hash()); }
};

// Number of coordinates where u and v disagree.
inline std::uint64_t hamming(const SpinState& u, const SpinState& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("hamming: length mismatch (" + std::to_string(u.size()) + " vs " +
                                    std::to_string(v.size()) + ")");
    return xor_popcount_range(u.words(), v.words(), 0, u.size());
}

}  // namespace hopcycle
