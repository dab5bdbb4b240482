#include "hopcycle/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace hopcycle {

Network::Network(BlockPartition part, std::vector<std::uint64_t> offsets, std::vector<std::uint32_t> sources,
                 std::vector<std::uint32_t> weights, NetworkMeta meta)
    : part_(std::move(part)),
      offsets_(std::move(offsets)),
      sources_(std::move(sources)),
      weights_(std::move(weights)),
      anti_flags_(words_for_bits(part_.size()), 0),
      adv_flags_(words_for_bits(part_.size()), 0),
      meta_(meta) {
    validate();
}

void Network::validate() const {
    const std::uint64_t n = part_.size();
    if (offsets_.size() != n + 1) throw std::logic_error("network: offset table size mismatch");
    if (offsets_.front() != 0 || offsets_.back() != sources_.size())
        throw std::logic_error("network: offset table endpoints mismatch");
    if (sources_.size() != weights_.size()) throw std::logic_error("network: sources/weights size mismatch");
    for (std::uint64_t i = 0; i < n; ++i) {
        if (offsets_[i] > offsets_[i + 1]) throw std::logic_error("network: offsets not monotone");
        std::uint32_t prev = 0;
        bool first = true;
        for (std::uint64_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
            if (sources_[e] >= n) throw std::logic_error("network: edge source out of range");
            if (sources_[e] == i) throw std::logic_error("network: self-loop");
            if (weights_[e] == 0) throw std::logic_error("network: zero edge weight");
            if (!first && sources_[e] <= prev) throw std::logic_error("network: sources not strictly sorted");
            prev = sources_[e];
            first = false;
        }
    }
}

bool Network::operator==(const Network& o) const {
    return part_ == o.part_ && offsets_ == o.offsets_ && sources_ == o.sources_ && weights_ == o.weights_ &&
           anti_flags_ == o.anti_flags_ && adv_flags_ == o.adv_flags_ && meta_.kind == o.meta_.kind &&
           meta_.seed == o.meta_.seed && meta_.m == o.meta_.m && meta_.b == o.meta_.b && meta_.h == o.meta_.h &&
           meta_.extra_per_block == o.meta_.extra_per_block &&
           meta_.anti_majority_count == o.meta_.anti_majority_count &&
           meta_.resampled_ones == o.meta_.resampled_ones;
}

Network with_flags(Network net, std::vector<std::uint64_t> anti, std::vector<std::uint64_t> adv,
                   NetworkMeta meta) {
    if (anti.size() != net.anti_flags_.size() || adv.size() != net.adv_flags_.size())
        throw std::invalid_argument("with_flags: bitmap size mismatch");
    net.anti_flags_ = std::move(anti);
    net.adv_flags_ = std::move(adv);
    net.meta_ = meta;
    return net;
}

}  // namespace hopcycle
