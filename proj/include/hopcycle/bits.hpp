#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

namespace hopcycle {

// Packed bit storage convention used across the project: bit i of a state
// lives in word i/64 at position i%64. Unused high bits of the last word
// are kept zero so whole-word operations stay valid.

inline std::size_t words_for_bits(std::uint64_t nbits) {
    return static_cast<std::size_t>((nbits + 63) / 64);
}

// Mask with the low `count` bits set, count in [0,64].
inline std::uint64_t low_mask(unsigned count) {
    return count >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
}

inline bool get_bit(std::span<const std::uint64_t> words, std::uint64_t i) {
    return (words[i >> 6] >> (i & 63)) & 1u;
}

inline void set_bit(std::span<std::uint64_t> words, std::uint64_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
        words[i >> 6] |= mask;
    else
        words[i >> 6] &= ~mask;
}

inline void flip_bit(std::span<std::uint64_t> words, std::uint64_t i) {
    words[i >> 6] ^= std::uint64_t{1} << (i & 63);
}

// Popcount of a^b over the bit range [begin, end).
inline std::uint64_t xor_popcount_range(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b,
                                        std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return 0;
    std::uint64_t first = begin >> 6, last = (end - 1) >> 6;
    std::uint64_t head_drop = begin & 63;
    std::uint64_t tail_keep = ((end - 1) & 63) + 1;
    if (first == last) {
        std::uint64_t w = (a[first] ^ b[first]) & low_mask(static_cast<unsigned>(tail_keep)) &
                          ~low_mask(static_cast<unsigned>(head_drop));
        return std::popcount(w);
    }
    std::uint64_t total = std::popcount((a[first] ^ b[first]) & ~low_mask(static_cast<unsigned>(head_drop)));
    for (std::uint64_t w = first + 1; w < last; ++w) total += std::popcount(a[w] ^ b[w]);
    total += std::popcount((a[last] ^ b[last]) & low_mask(static_cast<unsigned>(tail_keep)));
    return total;
}

// Popcount of (a^b) & ~exclude over [begin, end); exclude may be nullptr.
inline std::uint64_t xor_popcount_range_masked(std::span<const std::uint64_t> a,
                                               std::span<const std::uint64_t> b,
                                               const std::uint64_t* exclude,
                                               std::uint64_t begin, std::uint64_t end) {
    if (!exclude) return xor_popcount_range(a, b, begin, end);
    if (begin >= end) return 0;
    std::uint64_t first = begin >> 6, last = (end - 1) >> 6;
    std::uint64_t head_drop = begin & 63;
    std::uint64_t tail_keep = ((end - 1) & 63) + 1;
    auto word = [&](std::uint64_t w) { return (a[w] ^ b[w]) & ~exclude[w]; };
    if (first == last) {
        std::uint64_t w = word(first) & low_mask(static_cast<unsigned>(tail_keep)) &
                          ~low_mask(static_cast<unsigned>(head_drop));
        return std::popcount(w);
    }
    std::uint64_t total = std::popcount(word(first) & ~low_mask(static_cast<unsigned>(head_drop)));
    for (std::uint64_t w = first + 1; w < last; ++w) total += std::popcount(word(w));
    total += std::popcount(word(last) & low_mask(static_cast<unsigned>(tail_keep)));
    return total;
}

// Popcount of a & ~mask over [begin, end); with mask == nullptr counts a alone.
inline std::uint64_t popcount_range_masked(std::span<const std::uint64_t> a,
                                           const std::uint64_t* exclude,
                                           std::uint64_t begin, std::uint64_t end) {
    if (begin >= end) return 0;
    std::uint64_t first = begin >> 6, last = (end - 1) >> 6;
    std::uint64_t head_drop = begin & 63;
    std::uint64_t tail_keep = ((end - 1) & 63) + 1;
    auto word = [&](std::uint64_t w) { return exclude ? (a[w] & ~exclude[w]) : a[w]; };
    if (first == last) {
        std::uint64_t w = word(first) & low_mask(static_cast<unsigned>(tail_keep)) &
                          ~low_mask(static_cast<unsigned>(head_drop));
        return std::popcount(w);
    }
    std::uint64_t total = std::popcount(word(first) & ~low_mask(static_cast<unsigned>(head_drop)));
    for (std::uint64_t w = first + 1; w < last; ++w) total += std::popcount(word(w));
    total += std::popcount(word(last) & low_mask(static_cast<unsigned>(tail_keep)));
    return total;
}

// Lowercase hex of packed bytes, least-significant byte first (byte k holds
// bits 8k..8k+7). This is the on-disk text encoding for states.
std::string bits_to_hex(std::span<const std::uint64_t> words, std::uint64_t nbits);
std::vector<std::uint64_t> bits_from_hex(const std::string& hex, std::uint64_t nbits);

// FNV-1a 64-bit, used for config digests and state hashing.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace hopcycle
