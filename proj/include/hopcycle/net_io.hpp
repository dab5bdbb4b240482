#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hopcycle/network.hpp"
#include "hopcycle/spin_state.hpp"

namespace hopcycle {

// Binary network image (fixed little-endian layout with a trailing checksum;
// see docs/formats.md). Round-trips the full network including flags,
// weights and construction metadata.
std::vector<std::uint8_t> serialize_network(const Network& net);
Network deserialize_network(const std::vector<std::uint8_t>& bytes);

void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

// Text form of a state: neuron count then hex-encoded packed bits.
std::string format_state(const SpinState& x);
SpinState parse_state(const std::string& line);
void save_state(const std::string& path, const SpinState& x);
SpinState load_state(const std::string& path);

}  // namespace hopcycle
