#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hopcycle/partition.hpp"

namespace hopcycle {

enum class NetworkKind : std::uint32_t { dense = 0, sparse = 1 };

struct NetworkMeta {
    NetworkKind kind = NetworkKind::dense;
    std::uint64_t seed = 0;       // construction seed (0 for deterministic builders)
    std::uint64_t m = 0;          // sampled length range maximum (0 if lengths were explicit)
    std::uint64_t b = 1;          // sampled length range minimum
    std::uint64_t h = 0;          // sparse in-weight (0 for dense)
    std::uint64_t extra_per_block = 0;   // adversarial-edge budget used per block
    std::uint64_t anti_majority_count = 0;
    std::uint64_t resampled_ones = 0;    // length-1 draws replaced during sampling
};

// Immutable weighted directed graph in CSR (in-edge) form, plus per-neuron
// update-mode and adversarial-target flags. Neurons are indexed in the
// canonical block layout of the partition.
class Network {
public:
    Network() = default;
    Network(BlockPartition part, std::vector<std::uint64_t> offsets, std::vector<std::uint32_t> sources,
            std::vector<std::uint32_t> weights, NetworkMeta meta);

    std::uint64_t size() const { return part_.size(); }
    const BlockPartition& partition() const { return part_; }
    const NetworkMeta& meta() const { return meta_; }

    std::uint64_t edge_count() const { return sources_.size(); }
    std::span<const std::uint64_t> offsets() const { return offsets_; }
    std::span<const std::uint32_t> sources() const { return sources_; }
    std::span<const std::uint32_t> weights() const { return weights_; }

    std::span<const std::uint32_t> in_sources(std::uint64_t neuron) const {
        return {sources_.data() + offsets_[neuron], sources_.data() + offsets_[neuron + 1]};
    }
    std::span<const std::uint32_t> in_weights(std::uint64_t neuron) const {
        return {weights_.data() + offsets_[neuron], weights_.data() + offsets_[neuron + 1]};
    }
    std::uint64_t in_weight_sum(std::uint64_t neuron) const {
        std::uint64_t total = 0;
        for (auto w : in_weights(neuron)) total += w;
        return total;
    }

    bool anti_majority(std::uint64_t neuron) const { return get_bit(anti_flags_, neuron); }
    bool adversarial_target(std::uint64_t neuron) const { return get_bit(adv_flags_, neuron); }
    std::span<const std::uint64_t> anti_majority_bitmap() const { return anti_flags_; }
    std::span<const std::uint64_t> adversarial_bitmap() const { return adv_flags_; }

    bool operator==(const Network& o) const;

    // Internal consistency: offsets monotone, sources in range, no self-loops,
    // positive weights, sources sorted per neuron. Throws on violation.
    void validate() const;

private:
    friend Network with_flags(Network net, std::vector<std::uint64_t> anti, std::vector<std::uint64_t> adv,
                              NetworkMeta meta);
    friend class NetworkBuilder;

    BlockPartition part_;
    std::vector<std::uint64_t> offsets_;   // size n+1
    std::vector<std::uint32_t> sources_;   // sorted within each neuron's range
    std::vector<std::uint32_t> weights_;   // >= 1, parallel to sources_
    std::vector<std::uint64_t> anti_flags_;  // packed bitmaps, words_for_bits(n)
    std::vector<std::uint64_t> adv_flags_;
    NetworkMeta meta_;
};

// Rebinds flag bitmaps and metadata onto an existing edge structure.
Network with_flags(Network net, std::vector<std::uint64_t> anti, std::vector<std::uint64_t> adv,
                   NetworkMeta meta);

}  // namespace hopcycle
