#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hopcycle/network.hpp"
#include "hopcycle/rng.hpp"

namespace hopcycle {

// z = 4*(m-b+1) i.i.d. uniform draws from {b,...,m}, duplicates kept.
std::vector<std::uint32_t> sample_lengths(std::uint32_t m, std::uint32_t b, Rng& rng);

// Single ring of ell size-d blocks, all-to-all weight-1 edges between
// consecutive blocks. ell == 1 is rejected: blocks have no internal edges,
// so a block cannot feed itself.
Network dense_block_cycle(std::uint32_t ell, std::uint32_t d);

// Disjoint union of dense block cycles over explicit lengths.
Network dense_network_from_lengths(const std::vector<std::uint32_t>& lengths, std::uint32_t d);

// Dense architecture with lengths sampled from {1..m}; draws of 1 are
// redrawn (counted in meta.resampled_ones).
Network build_dense_network(std::uint32_t m, std::uint32_t d, Rng& rng);

// Single ring where each neuron draws h sources with replacement from the
// predecessor block; edge weight equals the source's multiplicity.
// Requires odd h with 3 <= h < d.
Network sparse_block_cycle(std::uint32_t ell, std::uint32_t d, std::uint32_t h, Rng& rng);

Network sparse_network_from_lengths(const std::vector<std::uint32_t>& lengths, std::uint32_t d,
                                    std::uint32_t h, Rng& rng);

// Sparse architecture with lengths sampled from {b..m}, b < m.
Network build_sparse_network(std::uint32_t m, std::uint32_t b, std::uint32_t d, std::uint32_t h, Rng& rng);

// In each block, per_block distinct neurons (chosen uniformly) each receive
// one extra weight-1 in-edge from a uniformly random other neuron. Affected
// neurons are flagged; everything else is untouched. per_block <= d.
Network add_adversarial_edges(const Network& net, std::uint32_t per_block, Rng& rng);

// Explicit-edge variant for worst-case adversaries: each (target, source)
// pair adds one weight-1 in-edge. At most max_per_block distinct targets per
// block are allowed.
Network add_adversarial_edges(const Network& net,
                              const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges,
                              std::uint32_t max_per_block);

// Flags `count` distinct neurons (uniform over the whole network) as
// anti-majority updaters.
Network mark_anti_majority(const Network& net, std::uint64_t count, Rng& rng);

}  // namespace hopcycle
