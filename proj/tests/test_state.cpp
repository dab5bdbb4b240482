#include <doctest.h>

#include <set>

#include "hopcycle/partition.hpp"
#include "hopcycle/rng.hpp"
#include "hopcycle/spin_state.hpp"

using namespace hopcycle;

namespace {

SpinState from_signs(const std::string& signs) {
    SpinState x(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) x.set(i, signs[i] == '+' ? +1 : -1);
    return x;
}

SpinState random_state(std::uint64_t n, Rng& rng) {
    SpinState x(n);
    for (std::uint64_t i = 0; i < n; ++i) x.set(i, rng.bernoulli(0.5) ? +1 : -1);
    return x;
}

}  // namespace

TEST_CASE("block partition canonical layout") {
    const BlockPartition part = make_block_partition({3}, 2);
    CHECK(part.total_blocks() == 3);
    CHECK(part.size() == 6);
    CHECK(part.block_begin(0) == 0);
    CHECK(part.block_end(0) == 2);
    CHECK(part.block_begin(2) == 4);
    CHECK(part.block_of(5) == 2);
    CHECK(part.predecessor_block(0) == 2);
    CHECK(part.predecessor_block(1) == 0);

    const BlockPartition single = make_block_partition({1}, 1);
    CHECK(single.total_blocks() == 1);
    CHECK(single.size() == 1);

    const BlockPartition two = make_block_partition({3, 4}, 2);
    CHECK(two.total_blocks() == 7);
    CHECK(two.size() == 14);
    CHECK(two.cycle_first_block(1) == 3);
    // predecessor wraps within the second cycle, not into the first
    CHECK(two.predecessor_block(3) == 6);
    CHECK(two.locate_block(5) == std::pair<std::size_t, std::uint32_t>{1, 2});

    CHECK_THROWS(make_block_partition({}, 2));
    CHECK_THROWS(make_block_partition({3}, 0));
    CHECK_THROWS(make_block_partition({3, 0}, 2));
}

TEST_CASE("hamming distance") {
    const SpinState u = from_signs("++--+");
    CHECK(hamming(u, u) == 0);
    SpinState v = u;
    v.negate();
    CHECK(hamming(u, v) == 5);
    CHECK(hamming(from_signs("++--"), from_signs("+--+")) == 2);
    CHECK_THROWS(hamming(u, SpinState(4)));
}

TEST_CASE("block-max distance examples") {
    const BlockPartition part2 = make_block_partition({2}, 2);
    CHECK(block_max_distance(from_signs("++--"), from_signs("++--"), part2) == 0);
    CHECK(block_max_distance(from_signs("++--"), from_signs("+---"), part2) == 1);
    const BlockPartition part3 = make_block_partition({2}, 3);
    CHECK(block_max_distance(from_signs("++++++"), from_signs("------"), part3) == 3);
    CHECK_THROWS(block_max_distance(from_signs("++"), from_signs("++--"), part2));
}

TEST_CASE("monochromatic states") {
    CHECK(monochromatic_state(make_block_partition({2}, 2), {"+-"}) == from_signs("++--"));
    CHECK(monochromatic_state(make_block_partition({3}, 1), {"+-+"}) == from_signs("+-+"));
    CHECK(monochromatic_state(make_block_partition({3}, 3), {"+--"}) == from_signs("+++------"));
    CHECK_THROWS(monochromatic_state(make_block_partition({3}, 2), {"+-"}));
    CHECK_THROWS(monochromatic_state(make_block_partition({3}, 2), {"+-x"}));
}

TEST_CASE("distance sandwich and metric properties on random states") {
    Rng rng(1234);
    const BlockPartition part = make_block_partition({3, 5}, 7);
    const std::uint64_t blocks = part.total_blocks();
    for (int it = 0; it < 50; ++it) {
        const SpinState u = random_state(part.size(), rng);
        const SpinState v = random_state(part.size(), rng);
        const SpinState w = random_state(part.size(), rng);
        const std::uint64_t bm_uv = block_max_distance(u, v, part);
        CHECK(bm_uv <= hamming(u, v));
        CHECK(hamming(u, v) <= blocks * bm_uv);
        CHECK(bm_uv == block_max_distance(v, u, part));
        CHECK(block_max_distance(u, u, part) == 0);
        if (!(u == v)) CHECK(bm_uv > 0);
        CHECK(bm_uv <= block_max_distance(u, w, part) + block_max_distance(w, v, part));
    }
}

TEST_CASE("monochromatic injectivity and per-block contributions") {
    const BlockPartition part = make_block_partition({4}, 5);
    Rng rng(77);
    std::set<std::string> seen;
    for (int it = 0; it < 16; ++it) {
        std::string labels;
        for (int b = 0; b < 4; ++b) labels.push_back((it >> b) & 1 ? '+' : '-');
        seen.insert(monochromatic_state(part, {labels}).to_hex());
    }
    CHECK(seen.size() == 16);  // all 2^4 labelings give distinct states

    // between monochromatic states each block contributes 0 or d mismatches
    const SpinState a = monochromatic_state(part, {"++--"});
    const SpinState b = monochromatic_state(part, {"+-+-"});
    for (std::uint64_t blk = 0; blk < part.total_blocks(); ++blk) {
        const std::uint64_t dist =
            xor_popcount_range(a.words(), b.words(), part.block_begin(blk), part.block_end(blk));
        CHECK((dist == 0 || dist == part.block_size()));
    }
    CHECK(block_max_distance(a, b, part) == part.block_size());
}

TEST_CASE("word-crossing blocks against a per-bit oracle") {
    Rng rng(4096);
    const BlockPartition part = make_block_partition({3, 2}, 45);  // n = 225, blocks straddle words
    for (int it = 0; it < 20; ++it) {
        const SpinState u = random_state(part.size(), rng);
        const SpinState v = random_state(part.size(), rng);
        std::uint64_t worst = 0, total = 0;
        for (std::uint64_t blk = 0; blk < part.total_blocks(); ++blk) {
            std::uint64_t dist = 0;
            for (std::uint64_t i = part.block_begin(blk); i < part.block_end(blk); ++i)
                if (u.get(i) != v.get(i)) ++dist;
            worst = std::max(worst, dist);
            total += dist;
        }
        CHECK(block_max_distance(u, v, part) == worst);
        CHECK(hamming(u, v) == total);
    }
}

TEST_CASE("hex round trip") {
    Rng rng(5150);
    for (std::uint64_t n : {1ull, 7ull, 64ull, 65ull, 191ull, 1003ull}) {
        const SpinState x = random_state(n, rng);
        CHECK(SpinState::from_hex(n, x.to_hex()) == x);
    }
    CHECK_THROWS(SpinState::from_hex(5, "ff"));   // bit set past n
    CHECK_THROWS(SpinState::from_hex(8, "f"));    // wrong digit count
    CHECK_THROWS(SpinState::from_hex(8, "zz"));   // not hex
}

TEST_CASE("label helpers") {
    CHECK(parse_labels("+--;+-") == BlockLabels{"+--", "+-"});
    CHECK(format_labels({"+--", "+-"}) == "+--;+-");
    CHECK(rotate_label("+--", 1) == "-+-");
    CHECK(rotate_label("+--", 3) == "+--");
    const BlockPartition part = make_block_partition({3, 2}, 2);
    CHECK_THROWS(validate_labels(part, {"+--"}));
    CHECK_THROWS(validate_labels(part, {"+-", "+-"}));

    const SpinState mono = monochromatic_state(part, {"+--", "-+"});
    auto extracted = extract_labels(part, mono);
    REQUIRE(extracted.has_value());
    CHECK(*extracted == BlockLabels{"+--", "-+"});
    SpinState dirty = mono;
    dirty.flip(0);
    CHECK(!extract_labels(part, dirty).has_value());
    // a single flipped neuron cannot move a majority at d=2... it ties
    CHECK(!majority_labels(part, dirty, nullptr).has_value());
}
