#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hopcycle/spin_state.hpp"

namespace hopcycle {

// Canonical partition of {0,...,n-1} into size-d blocks grouped into block
// cycles. Layout is contiguous cycle-by-cycle, block-by-block: block b owns
// neurons [b*d, (b+1)*d), and cycle c owns blocks
// [cycle_offsets[c], cycle_offsets[c+1]).
class BlockPartition {
public:
    BlockPartition() = default;
    BlockPartition(std::vector<std::uint32_t> cycle_lengths, std::uint32_t block_size);

    std::uint32_t block_size() const { return d_; }
    std::uint64_t total_blocks() const { return total_blocks_; }
    std::uint64_t size() const { return total_blocks_ * d_; }  // neuron count n
    const std::vector<std::uint32_t>& cycle_lengths() const { return lengths_; }
    std::size_t cycle_count() const { return lengths_.size(); }

    std::uint64_t cycle_first_block(std::size_t cycle) const { return offsets_[cycle]; }
    std::uint64_t block_begin(std::uint64_t block) const { return block * d_; }
    std::uint64_t block_end(std::uint64_t block) const { return (block + 1) * d_; }
    std::uint64_t block_of(std::uint64_t neuron) const { return neuron / d_; }

    // Cycle containing the given block, plus the block's position in it.
    std::pair<std::size_t, std::uint32_t> locate_block(std::uint64_t block) const;

    // Block that feeds the given block (previous position on its cycle).
    std::uint64_t predecessor_block(std::uint64_t block) const;

    bool operator==(const BlockPartition& o) const {
        return d_ == o.d_ && lengths_ == o.lengths_;
    }

private:
    std::uint32_t d_ = 0;
    std::vector<std::uint32_t> lengths_;
    std::vector<std::uint64_t> offsets_;  // lengths_ prefix sums, size cycles+1
    std::uint64_t total_blocks_ = 0;
};

BlockPartition make_block_partition(const std::vector<std::uint32_t>& cycle_lengths,
                                    std::uint32_t block_size);

// One sign per block, per cycle: strings over {'+','-'} whose lengths match
// the partition's cycle lengths.
using BlockLabels = std::vector<std::string>;

void validate_labels(const BlockPartition& part, const BlockLabels& labels);
BlockLabels parse_labels(const std::string& text);  // cycles joined by ';'
std::string format_labels(const BlockLabels& labels);

// State after advancing every cycle's label string by t rotations: the block
// at position p takes the label originally at position (p - t) mod len.
std::string rotate_label(const std::string& s, std::uint64_t t);

// Max over blocks of the within-block Hamming distance.
std::uint64_t block_max_distance(const SpinState& u, const SpinState& v, const BlockPartition& part);

// State in which every neuron carries its block's label.
SpinState monochromatic_state(const BlockPartition& part, const BlockLabels& labels);

// Per-block labels of a state, or nullopt if any block is not monochromatic.
std::optional<BlockLabels> extract_labels(const BlockPartition& part, const SpinState& x);

// Per-block majority labels, counting only neurons outside `exclude`
// (a packed bitmap or nullptr). A tied or fully excluded block yields nullopt.
std::optional<BlockLabels> majority_labels(const BlockPartition& part, const SpinState& x,
                                           const std::uint64_t* exclude);

}  // namespace hopcycle
