#include "hopcycle/net_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hopcycle/bits.hpp"

namespace hopcycle {

namespace {

constexpr char kMagic[4] = {'B', 'C', 'A', 'N'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(raw(4, what)); }
    std::uint64_t u64(const char* what) { return raw(8, what); }
    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void expect_end() {
        if (pos_ != bytes_.size())
            throw std::invalid_argument("network file: " + std::to_string(bytes_.size() - pos_) +
                                        " unexpected trailing bytes at offset " + std::to_string(pos_));
    }

private:
    std::uint64_t raw(std::size_t width, const char* what) {
        if (bytes_.size() - pos_ < width)
            throw std::invalid_argument(std::string("network file: truncated while reading ") + what +
                                        " at offset " + std::to_string(pos_));
        std::uint64_t v = 0;
        for (std::size_t k = 0; k < width; ++k)
            v |= static_cast<std::uint64_t>(bytes_[pos_ + k]) << (8 * k);
        pos_ += width;
        return v;
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_network(const Network& net) {
    const auto& part = net.partition();
    std::vector<std::uint8_t> out;
    out.reserve(64 + net.edge_count() * 8 + net.size() * 8);
    for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(net.meta().kind));
    put_u32(out, part.block_size());
    put_u64(out, net.meta().seed);
    put_u64(out, net.meta().m);
    put_u64(out, net.meta().b);
    put_u64(out, net.meta().h);
    put_u64(out, net.meta().extra_per_block);
    put_u64(out, net.meta().anti_majority_count);
    put_u64(out, net.meta().resampled_ones);
    put_u32(out, static_cast<std::uint32_t>(part.cycle_count()));
    for (auto len : part.cycle_lengths()) put_u32(out, len);
    put_u64(out, net.size());
    put_u64(out, net.edge_count());
    for (auto v : net.offsets()) put_u64(out, v);
    for (auto v : net.sources()) put_u32(out, v);
    for (auto v : net.weights()) put_u32(out, v);
    for (auto v : net.anti_majority_bitmap()) put_u64(out, v);
    for (auto v : net.adversarial_bitmap()) put_u64(out, v);
    put_u64(out, fnv1a64(out.data(), out.size()));
    return out;
}

Network deserialize_network(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12) throw std::invalid_argument("network file: too short for header");
    for (int i = 0; i < 4; ++i)
        if (bytes[static_cast<std::size_t>(i)] != static_cast<std::uint8_t>(kMagic[i]))
            throw std::invalid_argument("network file: bad magic at offset " + std::to_string(i));

    Reader in(bytes);
    in.u32("magic");
    const std::uint32_t version = in.u32("version");
    if (version != kVersion)
        throw std::invalid_argument("network file: unsupported version " + std::to_string(version));
    NetworkMeta meta;
    const std::uint32_t kind = in.u32("kind");
    if (kind > 1) throw std::invalid_argument("network file: unknown kind " + std::to_string(kind));
    meta.kind = static_cast<NetworkKind>(kind);
    const std::uint32_t d = in.u32("block size");
    meta.seed = in.u64("seed");
    meta.m = in.u64("m");
    meta.b = in.u64("b");
    meta.h = in.u64("h");
    meta.extra_per_block = in.u64("extra budget");
    meta.anti_majority_count = in.u64("anti-majority count");
    meta.resampled_ones = in.u64("resample count");
    const std::uint32_t cycles = in.u32("cycle count");
    if (in.remaining() < std::uint64_t{cycles} * 4)
        throw std::invalid_argument("network file: truncated cycle table at offset " +
                                    std::to_string(in.offset()));
    std::vector<std::uint32_t> lengths(cycles);
    for (auto& len : lengths) len = in.u32("cycle length");
    BlockPartition part = make_block_partition(lengths, d);
    const std::uint64_t n = in.u64("neuron count");
    if (n != part.size())
        throw std::invalid_argument("network file: neuron count " + std::to_string(n) +
                                    " does not match d * total blocks = " + std::to_string(part.size()));
    const std::uint64_t edges = in.u64("edge count");
    if (edges > in.remaining() / 8 ||
        in.remaining() < (n + 1) * 8 + edges * 8 + words_for_bits(n) * 16 + 8)
        throw std::invalid_argument("network file: truncated body at offset " + std::to_string(in.offset()) +
                                    " (edge count " + std::to_string(edges) + " does not fit)");
    std::vector<std::uint64_t> offsets(n + 1);
    for (auto& v : offsets) v = in.u64("offset");
    std::vector<std::uint32_t> sources(edges), weights(edges);
    for (auto& v : sources) v = in.u32("edge source");
    for (auto& v : weights) v = in.u32("edge weight");
    std::vector<std::uint64_t> anti(words_for_bits(n)), adv(words_for_bits(n));
    for (auto& v : anti) v = in.u64("anti-majority bitmap");
    for (auto& v : adv) v = in.u64("adversarial bitmap");
    const std::uint64_t stored = in.u64("checksum");
    in.expect_end();
    if (fnv1a64(bytes.data(), bytes.size() - 8) != stored)
        throw std::invalid_argument("network file: checksum mismatch (corrupt content)");
    Network net(std::move(part), std::move(offsets), std::move(sources), std::move(weights), meta);
    return with_flags(std::move(net), std::move(anti), std::move(adv), meta);
}

void save_network(const std::string& path, const Network& net) {
    const auto bytes = serialize_network(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Network load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_network(bytes);
}

std::string format_state(const SpinState& x) {
    return std::to_string(x.size()) + " " + x.to_hex();
}

SpinState parse_state(const std::string& line) {
    std::istringstream in(line);
    std::uint64_t n = 0;
    std::string hex;
    if (!(in >> n >> hex)) throw std::invalid_argument("state: expected '<n> <hex>'");
    return SpinState::from_hex(n, hex);
}

void save_state(const std::string& path, const SpinState& x) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << format_state(x) << "\n";
}

SpinState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    std::getline(in, line);
    return parse_state(line);
}

}  // namespace hopcycle
