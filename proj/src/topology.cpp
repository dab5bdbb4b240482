#include "hopcycle/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hopcycle {

namespace {

// Floyd's sampling: `count` distinct values from [0, universe).
std::vector<std::uint64_t> sample_distinct(std::uint64_t universe, std::uint64_t count, Rng& rng) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(count * 2);
    for (std::uint64_t j = universe - count; j < universe; ++j) {
        std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> sample_lengths_no_ones(std::uint32_t m, std::uint32_t b, Rng& rng,
                                                  std::uint64_t& resampled) {
    if (b < 1 || b > m) throw std::invalid_argument("sample_lengths: need 1 <= b <= m");
    if (m < 2) throw std::invalid_argument("length sampling: m < 2 admits only degenerate cycles");
    const std::uint32_t z = 4 * (m - b + 1);
    std::vector<std::uint32_t> lengths(z);
    resampled = 0;
    for (auto& len : lengths) {
        len = static_cast<std::uint32_t>(rng.between(b, m));
        while (len < 2) {
            ++resampled;
            len = static_cast<std::uint32_t>(rng.between(b, m));
        }
    }
    return lengths;
}

void check_cycle_params(std::uint32_t ell, std::uint32_t d) {
    if (d == 0) throw std::invalid_argument("block cycle: block size must be >= 1");
    if (ell == 0) throw std::invalid_argument("block cycle: length must be >= 1");
    if (ell == 1)
        throw std::invalid_argument("block cycle: length 1 would require edges inside a block");
}

void check_sparse_params(std::uint32_t d, std::uint32_t h) {
    if (h % 2 == 0) throw std::invalid_argument("sparse connection: h must be odd");
    if (h < 3) throw std::invalid_argument("sparse connection: h must be >= 3");
    if (h >= d) throw std::invalid_argument("sparse connection: h must be < d");
}

Network assemble(const std::vector<std::uint32_t>& lengths, std::uint32_t d, std::uint32_t h, Rng* rng,
                 NetworkMeta meta) {
    for (auto len : lengths) check_cycle_params(len, d);
    if (h) check_sparse_params(d, h);
    BlockPartition part = make_block_partition(lengths, d);
    const std::uint64_t n = part.size();
    const std::uint64_t per_neuron = h ? h : d;  // upper bound on stored in-edges
    std::vector<std::uint64_t> offsets(n + 1, 0);
    std::vector<std::uint32_t> sources, weights;
    sources.reserve(n * per_neuron);
    weights.reserve(n * per_neuron);
    std::vector<std::uint32_t> draw(h ? h : 0);
    for (std::uint64_t block = 0; block < part.total_blocks(); ++block) {
        const std::uint64_t pred_begin = part.block_begin(part.predecessor_block(block));
        for (std::uint64_t i = part.block_begin(block); i < part.block_end(block); ++i) {
            if (h == 0) {
                // dense: the whole predecessor block, weight 1
                for (std::uint32_t j = 0; j < d; ++j) {
                    sources.push_back(static_cast<std::uint32_t>(pred_begin + j));
                    weights.push_back(1);
                }
            } else {
                for (auto& v : draw) v = static_cast<std::uint32_t>(pred_begin + rng->below(d));
                std::sort(draw.begin(), draw.end());
                for (std::size_t k = 0; k < draw.size();) {
                    std::size_t run = k + 1;
                    while (run < draw.size() && draw[run] == draw[k]) ++run;
                    sources.push_back(draw[k]);
                    weights.push_back(static_cast<std::uint32_t>(run - k));
                    k = run;
                }
            }
            offsets[i + 1] = sources.size();
        }
    }
    return Network(std::move(part), std::move(offsets), std::move(sources), std::move(weights), meta);
}

}  // namespace

std::vector<std::uint32_t> sample_lengths(std::uint32_t m, std::uint32_t b, Rng& rng) {
    if (b < 1 || b > m) throw std::invalid_argument("sample_lengths: need 1 <= b <= m");
    const std::uint32_t z = 4 * (m - b + 1);
    std::vector<std::uint32_t> lengths(z);
    for (auto& len : lengths) len = static_cast<std::uint32_t>(rng.between(b, m));
    return lengths;
}

Network dense_block_cycle(std::uint32_t ell, std::uint32_t d) {
    NetworkMeta meta;
    meta.kind = NetworkKind::dense;
    return assemble({ell}, d, 0, nullptr, meta);
}

Network dense_network_from_lengths(const std::vector<std::uint32_t>& lengths, std::uint32_t d) {
    NetworkMeta meta;
    meta.kind = NetworkKind::dense;
    return assemble(lengths, d, 0, nullptr, meta);
}

Network build_dense_network(std::uint32_t m, std::uint32_t d, Rng& rng) {
    NetworkMeta meta;
    meta.kind = NetworkKind::dense;
    meta.seed = rng.seed();
    meta.m = m;
    meta.b = 1;
    auto lengths = sample_lengths_no_ones(m, 1, rng, meta.resampled_ones);
    return assemble(lengths, d, 0, nullptr, meta);
}

Network sparse_block_cycle(std::uint32_t ell, std::uint32_t d, std::uint32_t h, Rng& rng) {
    NetworkMeta meta;
    meta.kind = NetworkKind::sparse;
    meta.seed = rng.seed();
    meta.h = h;
    return assemble({ell}, d, h, &rng, meta);
}

Network sparse_network_from_lengths(const std::vector<std::uint32_t>& lengths, std::uint32_t d,
                                    std::uint32_t h, Rng& rng) {
    NetworkMeta meta;
    meta.kind = NetworkKind::sparse;
    meta.seed = rng.seed();
    meta.h = h;
    return assemble(lengths, d, h, &rng, meta);
}

Network build_sparse_network(std::uint32_t m, std::uint32_t b, std::uint32_t d, std::uint32_t h, Rng& rng) {
    if (b >= m) throw std::invalid_argument("sparse architecture: need b < m");
    NetworkMeta meta;
    meta.kind = NetworkKind::sparse;
    meta.seed = rng.seed();
    meta.m = m;
    meta.b = b;
    meta.h = h;
    auto lengths = sample_lengths_no_ones(m, b, rng, meta.resampled_ones);
    return assemble(lengths, d, h, &rng, meta);
}

namespace {

Network insert_extra_edges(const Network& net,
                           const std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>& extra,
                           std::uint32_t budget_used) {
    const std::uint64_t n = net.size();
    std::vector<std::uint64_t> offsets(n + 1, 0);
    std::vector<std::uint32_t> sources, weights;
    sources.reserve(net.edge_count() + extra.size());
    weights.reserve(net.edge_count() + extra.size());
    std::vector<std::uint64_t> adv(words_for_bits(n), 0);
    std::copy(net.adversarial_bitmap().begin(), net.adversarial_bitmap().end(), adv.begin());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> merged;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto src = net.in_sources(i);
        auto wt = net.in_weights(i);
        auto it = extra.find(i);
        if (it == extra.end()) {
            sources.insert(sources.end(), src.begin(), src.end());
            weights.insert(weights.end(), wt.begin(), wt.end());
        } else {
            merged.clear();
            for (std::size_t e = 0; e < src.size(); ++e) merged.emplace_back(src[e], wt[e]);
            for (auto s : it->second) {
                auto pos = std::lower_bound(merged.begin(), merged.end(), std::pair{s, 0u},
                                            [](auto a, auto b) { return a.first < b.first; });
                if (pos != merged.end() && pos->first == s)
                    pos->second += 1;  // duplicate source: weight is multiplicity
                else
                    merged.insert(pos, {s, 1u});
            }
            for (auto [s, w] : merged) {
                sources.push_back(s);
                weights.push_back(w);
            }
            set_bit(std::span(adv), i, true);
        }
        offsets[i + 1] = sources.size();
    }
    NetworkMeta meta = net.meta();
    meta.extra_per_block = std::max<std::uint64_t>(meta.extra_per_block, budget_used);
    std::vector<std::uint64_t> anti(net.anti_majority_bitmap().begin(), net.anti_majority_bitmap().end());
    Network out(net.partition(), std::move(offsets), std::move(sources), std::move(weights), meta);
    return with_flags(std::move(out), std::move(anti), std::move(adv), meta);
}

}  // namespace

Network add_adversarial_edges(const Network& net, std::uint32_t per_block, Rng& rng) {
    const auto& part = net.partition();
    if (per_block > part.block_size())
        throw std::invalid_argument("adversarial edges: per-block budget exceeds block size");
    if (per_block == 0) return net;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> extra;
    for (std::uint64_t block = 0; block < part.total_blocks(); ++block) {
        auto offsets_in_block = sample_distinct(part.block_size(), per_block, rng);
        for (auto off : offsets_in_block) {
            const std::uint64_t target = part.block_begin(block) + off;
            std::uint64_t src = rng.below(net.size() - 1);  // uniform over others
            if (src >= target) ++src;
            extra[target].push_back(static_cast<std::uint32_t>(src));
        }
    }
    return insert_extra_edges(net, extra, per_block);
}

Network add_adversarial_edges(const Network& net,
                              const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges,
                              std::uint32_t max_per_block) {
    const auto& part = net.partition();
    if (max_per_block > part.block_size())
        throw std::invalid_argument("adversarial edges: per-block budget exceeds block size");
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> extra;
    for (auto [dst, src] : edges) {
        if (dst >= net.size() || src >= net.size())
            throw std::invalid_argument("adversarial edges: endpoint out of range");
        if (dst == src) throw std::invalid_argument("adversarial edges: self-loop");
        extra[dst].push_back(static_cast<std::uint32_t>(src));
    }
    std::unordered_map<std::uint64_t, std::uint32_t> per_block_targets;
    for (auto& [dst, srcs] : extra) {
        auto& count = per_block_targets[part.block_of(dst)];
        if (++count > max_per_block)
            throw std::invalid_argument("adversarial edges: more than the allowed targets in one block");
    }
    return insert_extra_edges(net, extra, max_per_block);
}

Network mark_anti_majority(const Network& net, std::uint64_t count, Rng& rng) {
    if (count > net.size()) throw std::invalid_argument("anti-majority: count exceeds neuron count");
    std::vector<std::uint64_t> anti(words_for_bits(net.size()), 0);
    if (count > 0)
        for (auto i : sample_distinct(net.size(), count, rng)) set_bit(std::span(anti), i, true);
    NetworkMeta meta = net.meta();
    meta.anti_majority_count = count;
    std::vector<std::uint64_t> adv(net.adversarial_bitmap().begin(), net.adversarial_bitmap().end());
    return with_flags(net, std::move(anti), std::move(adv), meta);
}

}  // namespace hopcycle
