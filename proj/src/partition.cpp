#include "hopcycle/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace hopcycle {

BlockPartition::BlockPartition(std::vector<std::uint32_t> cycle_lengths, std::uint32_t block_size)
    : d_(block_size), lengths_(std::move(cycle_lengths)) {
    if (d_ == 0) throw std::invalid_argument("block partition: block size must be >= 1");
    if (lengths_.empty()) throw std::invalid_argument("block partition: cycle list is empty");
    offsets_.reserve(lengths_.size() + 1);
    offsets_.push_back(0);
    for (auto len : lengths_) {
        if (len == 0) throw std::invalid_argument("block partition: cycle length must be >= 1");
        offsets_.push_back(offsets_.back() + len);
    }
    total_blocks_ = offsets_.back();
}

BlockPartition make_block_partition(const std::vector<std::uint32_t>& cycle_lengths,
                                    std::uint32_t block_size) {
    return BlockPartition(cycle_lengths, block_size);
}

std::pair<std::size_t, std::uint32_t> BlockPartition::locate_block(std::uint64_t block) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), block);
    std::size_t cycle = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {cycle, static_cast<std::uint32_t>(block - offsets_[cycle])};
}

std::uint64_t BlockPartition::predecessor_block(std::uint64_t block) const {
    auto [cycle, pos] = locate_block(block);
    std::uint32_t len = lengths_[cycle];
    return offsets_[cycle] + (pos == 0 ? len - 1 : pos - 1);
}

void validate_labels(const BlockPartition& part, const BlockLabels& labels) {
    if (labels.size() != part.cycle_count())
        throw std::invalid_argument("labels: expected " + std::to_string(part.cycle_count()) +
                                    " cycle strings, got " + std::to_string(labels.size()));
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (labels[c].size() != part.cycle_lengths()[c])
            throw std::invalid_argument("labels: cycle " + std::to_string(c) + " expects length " +
                                        std::to_string(part.cycle_lengths()[c]) + ", got " +
                                        std::to_string(labels[c].size()));
        for (char ch : labels[c])
            if (ch != '+' && ch != '-')
                throw std::invalid_argument("labels: only '+' and '-' are allowed");
    }
}

BlockLabels parse_labels(const std::string& text) {
    BlockLabels out;
    std::string cur;
    for (char ch : text) {
        if (ch == ';') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string format_labels(const BlockLabels& labels) {
    std::string out;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (c) out.push_back(';');
        out += labels[c];
    }
    return out;
}

std::string rotate_label(const std::string& s, std::uint64_t t) {
    const std::uint64_t len = s.size();
    std::string out(len, '?');
    for (std::uint64_t p = 0; p < len; ++p) out[p] = s[(p + len - (t % len)) % len];
    return out;
}

std::uint64_t block_max_distance(const SpinState& u, const SpinState& v, const BlockPartition& part) {
    if (u.size() != v.size() || u.size() != part.size())
        throw std::invalid_argument("block_max_distance: dimension mismatch");
    std::uint64_t best = 0;
    for (std::uint64_t b = 0; b < part.total_blocks(); ++b) {
        std::uint64_t dist = xor_popcount_range(u.words(), v.words(), part.block_begin(b), part.block_end(b));
        best = std::max(best, dist);
    }
    return best;
}

SpinState monochromatic_state(const BlockPartition& part, const BlockLabels& labels) {
    validate_labels(part, labels);
    SpinState x(part.size(), -1);
    std::uint64_t block = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        for (char ch : labels[c]) {
            if (ch == '+')
                for (std::uint64_t i = part.block_begin(block); i < part.block_end(block); ++i)
                    x.set(i, +1);
            ++block;
        }
    }
    return x;
}

std::optional<BlockLabels> extract_labels(const BlockPartition& part, const SpinState& x) {
    if (x.size() != part.size()) throw std::invalid_argument("extract_labels: dimension mismatch");
    BlockLabels out(part.cycle_count());
    for (std::size_t c = 0; c < part.cycle_count(); ++c) out[c].reserve(part.cycle_lengths()[c]);
    std::uint64_t block = 0;
    for (std::size_t c = 0; c < part.cycle_count(); ++c) {
        for (std::uint32_t p = 0; p < part.cycle_lengths()[c]; ++p, ++block) {
            std::uint64_t ones =
                popcount_range_masked(x.words(), nullptr, part.block_begin(block), part.block_end(block));
            if (ones == part.block_size())
                out[c].push_back('+');
            else if (ones == 0)
                out[c].push_back('-');
            else
                return std::nullopt;
        }
    }
    return out;
}

std::optional<BlockLabels> majority_labels(const BlockPartition& part, const SpinState& x,
                                           const std::uint64_t* exclude) {
    if (x.size() != part.size()) throw std::invalid_argument("majority_labels: dimension mismatch");
    BlockLabels out(part.cycle_count());
    std::uint64_t block = 0;
    for (std::size_t c = 0; c < part.cycle_count(); ++c) {
        for (std::uint32_t p = 0; p < part.cycle_lengths()[c]; ++p, ++block) {
            const std::uint64_t lo = part.block_begin(block), hi = part.block_end(block);
            std::uint64_t counted = part.block_size();
            if (exclude) counted -= popcount_range_masked({exclude, words_for_bits(x.size())}, nullptr, lo, hi);
            if (counted == 0) return std::nullopt;
            std::uint64_t ones = popcount_range_masked(x.words(), exclude, lo, hi);
            if (2 * ones > counted)
                out[c].push_back('+');
            else if (2 * ones < counted)
                out[c].push_back('-');
            else
                return std::nullopt;  // tie
        }
    }
    return out;
}

}  // namespace hopcycle
