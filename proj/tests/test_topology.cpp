#include <doctest.h>

#include <cmath>
#include <set>

#include "hopcycle/net_io.hpp"
#include "hopcycle/topology.hpp"

using namespace hopcycle;

TEST_CASE("length sampling") {
    Rng rng(7);
    const auto sample = sample_lengths(10, 1, rng);
    CHECK(sample.size() == 40);
    for (auto len : sample) {
        CHECK(len >= 1);
        CHECK(len <= 10);
    }

    Rng rng2(7);
    CHECK(sample_lengths(10, 1, rng2) == sample);  // deterministic under seed

    Rng rng3(9);
    const auto singleton = sample_lengths(5, 5, rng3);
    CHECK(singleton.size() == 4);
    for (auto len : singleton) CHECK(len == 5);

    Rng rng4(1);
    CHECK_THROWS(sample_lengths(3, 4, rng4));
}

TEST_CASE("length sample mean concentrates") {
    Rng rng(2718);
    const std::uint32_t m = 1000, b = 10;
    const auto sample = sample_lengths(m, b, rng);
    const double M = m - b + 1;
    double mean = 0;
    for (auto len : sample) mean += len;
    mean /= static_cast<double>(sample.size());
    const double sigma_mean = std::sqrt((M * M - 1.0) / 12.0 / static_cast<double>(sample.size()));
    CHECK(std::abs(mean - (b + m) / 2.0) <= 3.0 * sigma_mean);
}

TEST_CASE("dense block cycle") {
    CHECK_THROWS(dense_block_cycle(1, 2));  // a block has no internal edges
    CHECK_THROWS(dense_block_cycle(3, 0));
    CHECK_THROWS(dense_block_cycle(0, 2));

    const Network net = dense_block_cycle(3, 2);
    CHECK(net.size() == 6);
    CHECK(net.edge_count() == 12);
    for (std::uint64_t i = 0; i < net.size(); ++i) {
        CHECK(net.in_sources(i).size() == 2);
        CHECK(net.in_weight_sum(i) == 2);
        const std::uint64_t pred = net.partition().predecessor_block(net.partition().block_of(i));
        for (auto src : net.in_sources(i)) CHECK(net.partition().block_of(src) == pred);
        for (auto w : net.in_weights(i)) CHECK(w == 1);
    }

    const Network big = dense_block_cycle(200, 100);
    CHECK(big.size() == 20000);
    std::uint64_t total_weight = 0;
    for (std::uint64_t i = 0; i < big.size(); ++i) total_weight += big.in_weight_sum(i);
    CHECK(total_weight == 200ull * 100 * 100);
}

TEST_CASE("dense architecture from sampled lengths") {
    Rng rng(3);
    const Network net = build_dense_network(3, 1, rng);
    CHECK(net.partition().cycle_count() == 12);  // z = 4*3
    std::uint64_t blocks = 0;
    for (auto len : net.partition().cycle_lengths()) {
        CHECK(len >= 2);  // length-1 draws are replaced
        blocks += len;
    }
    CHECK(blocks == net.partition().total_blocks());
    CHECK(net.size() == blocks * 1);
    CHECK(net.meta().m == 3);
    CHECK(net.meta().seed == 3);

    Rng rng2(3);
    const Network again = build_dense_network(3, 1, rng2);
    CHECK(net == again);

    Rng rng3(3);
    CHECK_THROWS(build_dense_network(1, 2, rng3));  // only degenerate lengths available
}

TEST_CASE("block count scales with m^2") {
    for (std::uint32_t m : {50u, 100u, 200u}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed);
            const Network net = build_dense_network(m, 1, rng);
            const double ratio =
                static_cast<double>(net.partition().total_blocks()) / (static_cast<double>(m) * m);
            CHECK(ratio > 0.5);
            CHECK(ratio < 4.5);
        }
    }
}

TEST_CASE("sparse connections") {
    Rng rng(11);
    CHECK_THROWS(sparse_block_cycle(2, 4, 4, rng));  // even h
    CHECK_THROWS(sparse_block_cycle(2, 4, 1, rng));  // h < 3
    CHECK_THROWS(sparse_block_cycle(2, 3, 3, rng));  // h >= d
    CHECK_THROWS(sparse_block_cycle(1, 4, 3, rng));

    const Network net = sparse_block_cycle(2, 4, 3, rng);
    for (std::uint64_t i = 0; i < net.size(); ++i) {
        CHECK(net.in_weight_sum(i) == 3);
        CHECK(net.in_sources(i).size() >= 1);
        CHECK(net.in_sources(i).size() <= 3);
        const std::uint64_t pred = net.partition().predecessor_block(net.partition().block_of(i));
        for (auto src : net.in_sources(i)) CHECK(net.partition().block_of(src) == pred);
    }

    const Network ring = sparse_block_cycle(200, 10, 3, rng);
    for (std::uint64_t i = 0; i < ring.size(); ++i) {
        const std::uint64_t pred = ring.partition().predecessor_block(ring.partition().block_of(i));
        for (auto src : ring.in_sources(i)) CHECK(ring.partition().block_of(src) == pred);
    }

    Rng rng2(12);
    CHECK_THROWS(build_sparse_network(10, 10, 5, 3, rng2));  // needs b < m
}

TEST_CASE("with-replacement multiplicities match the birthday computation") {
    Rng rng(314);
    const Network net = sparse_block_cycle(2, 1000, 3, rng);
    std::uint64_t distinct3 = 0;
    for (std::uint64_t i = 0; i < net.size(); ++i)
        if (net.in_sources(i).size() == 3) ++distinct3;
    const double rate = static_cast<double>(distinct3) / static_cast<double>(net.size());
    const double expected = 999.0 * 998.0 / (1000.0 * 1000.0);
    const double tol = 3.0 * std::sqrt(expected * (1.0 - expected) / static_cast<double>(net.size()));
    CHECK(std::abs(rate - expected) <= tol);
}

TEST_CASE("adversarial extra edges") {
    Rng rng(21);
    const Network base = sparse_block_cycle(3, 6, 3, rng);

    CHECK(add_adversarial_edges(base, 0, rng) == base);
    CHECK_THROWS(add_adversarial_edges(base, 7, rng));

    const Network touched = add_adversarial_edges(base, 2, rng);
    const auto& part = touched.partition();
    for (std::uint64_t blk = 0; blk < part.total_blocks(); ++blk) {
        std::uint64_t flagged = 0;
        for (std::uint64_t i = part.block_begin(blk); i < part.block_end(blk); ++i)
            if (touched.adversarial_target(i)) ++flagged;
        CHECK(flagged == 2);
    }
    for (std::uint64_t i = 0; i < base.size(); ++i) {
        if (touched.adversarial_target(i)) {
            CHECK(touched.in_weight_sum(i) == base.in_weight_sum(i) + 1);
        } else {
            CHECK(std::equal(base.in_sources(i).begin(), base.in_sources(i).end(),
                             touched.in_sources(i).begin(), touched.in_sources(i).end()));
            CHECK(std::equal(base.in_weights(i).begin(), base.in_weights(i).end(),
                             touched.in_weights(i).begin(), touched.in_weights(i).end()));
        }
    }

    const Network all = add_adversarial_edges(base, 6, rng);
    for (std::uint64_t i = 0; i < all.size(); ++i) CHECK(all.adversarial_target(i));

    // explicit worst-case edges
    const Network manual = add_adversarial_edges(base, {{0, 17}, {1, 17}}, 2);
    CHECK(manual.adversarial_target(0));
    CHECK(manual.adversarial_target(1));
    CHECK(!manual.adversarial_target(2));
    CHECK_THROWS(add_adversarial_edges(base, {{0, 17}, {1, 17}, {2, 17}}, 2));  // 3 targets in block 0
    CHECK_THROWS(add_adversarial_edges(base, {{0, 0}}, 2));                     // self-loop
    CHECK_THROWS(add_adversarial_edges(base, {{0, 99}}, 2));                    // out of range
}

TEST_CASE("anti-majority flags") {
    Rng rng(33);
    const Network base = dense_block_cycle(4, 3);
    CHECK_THROWS(mark_anti_majority(base, base.size() + 1, rng));

    const Network none = mark_anti_majority(base, 0, rng);
    for (std::uint64_t i = 0; i < none.size(); ++i) CHECK(!none.anti_majority(i));

    const Network all = mark_anti_majority(base, base.size(), rng);
    for (std::uint64_t i = 0; i < all.size(); ++i) CHECK(all.anti_majority(i));

    const Network some = mark_anti_majority(base, 5, rng);
    std::uint64_t flagged = 0;
    for (std::uint64_t i = 0; i < some.size(); ++i)
        if (some.anti_majority(i)) ++flagged;
    CHECK(flagged == 5);
    CHECK(some.meta().anti_majority_count == 5);
}

TEST_CASE("construction determinism down to the serialized bytes") {
    auto build = [] {
        Rng rng(424242);
        Network net = build_sparse_network(8, 2, 7, 3, rng);
        net = add_adversarial_edges(net, 1, rng);
        return mark_anti_majority(net, 3, rng);
    };
    CHECK(serialize_network(build()) == serialize_network(build()));
}
