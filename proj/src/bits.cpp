#include "hopcycle/bits.hpp"

namespace hopcycle {

std::string bits_to_hex(std::span<const std::uint64_t> words, std::uint64_t nbits) {
    static const char digits[] = "0123456789abcdef";
    const std::uint64_t nbytes = (nbits + 7) / 8;
    std::string out;
    out.reserve(nbytes * 2);
    for (std::uint64_t k = 0; k < nbytes; ++k) {
        const unsigned byte = static_cast<unsigned>((words[k >> 3] >> ((k & 7) * 8)) & 0xffu);
        out.push_back(digits[byte >> 4]);
        out.push_back(digits[byte & 0xf]);
    }
    return out;
}

std::vector<std::uint64_t> bits_from_hex(const std::string& hex, std::uint64_t nbits) {
    const std::uint64_t nbytes = (nbits + 7) / 8;
    if (hex.size() != nbytes * 2)
        throw std::invalid_argument("hex state: expected " + std::to_string(nbytes * 2) +
                                    " hex digits for " + std::to_string(nbits) + " bits, got " +
                                    std::to_string(hex.size()));
    auto nibble = [&](char c) -> unsigned {
        if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
        throw std::invalid_argument(std::string("hex state: invalid digit '") + c + "'");
    };
    std::vector<std::uint64_t> words(words_for_bits(nbits), 0);
    for (std::uint64_t k = 0; k < nbytes; ++k) {
        const std::uint64_t byte = (nibble(hex[2 * k]) << 4) | nibble(hex[2 * k + 1]);
        words[k >> 3] |= byte << ((k & 7) * 8);
    }
    // reject set bits past n
    if (nbits % 64 != 0) {
        const std::uint64_t extra = words.back() & ~low_mask(static_cast<unsigned>(nbits % 64));
        if (extra != 0) throw std::invalid_argument("hex state: bits set beyond declared length");
    }
    return words;
}

}  // namespace hopcycle
