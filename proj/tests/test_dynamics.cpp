#include <doctest.h>

#include <cmath>

#include "hopcycle/dynamics.hpp"
#include "hopcycle/experiments.hpp"
#include "hopcycle/topology.hpp"
#include "oracles.hpp"

using namespace hopcycle;

TEST_CASE("synchronous update rotates monochromatic states") {
    const Network net = dense_block_cycle(3, 2);
    const SpinState x = monochromatic_state(net.partition(), {"+--"});
    const UpdateReport r = step(net, x);
    CHECK(r.next == monochromatic_state(net.partition(), {"-+-"}));
    CHECK(r.ties == 0);
    CHECK_THROWS(step(net, SpinState(5)));
}

TEST_CASE("zero fields keep the old state") {
    // block 0 balanced: its successor sees field 0 and must not move
    const Network net = dense_block_cycle(2, 2);
    SpinState x(4, -1);
    x.set(0, +1);  // block 0 = (+,-), block 1 = (-,-)
    const UpdateReport r = step(net, x);
    CHECK(r.ties == 2);            // both neurons of block 1 tied
    CHECK(r.next.get(2) == -1);    // kept
    CHECK(r.next.get(3) == -1);
    CHECK(r.next.get(0) == -1);    // block 1 is monochromatic -, so block 0 follows it
    CHECK(r.next.get(1) == -1);

    // under the alternative convention the tied neurons go to +1 instead
    const UpdateReport alt = step(net, x, TieRule::prefer_plus);
    CHECK(alt.next.get(2) == +1);
    CHECK(alt.next.get(3) == +1);
}

TEST_CASE("anti-majority neurons invert the update") {
    Rng rng(5);
    const Network net = mark_anti_majority(dense_block_cycle(3, 2), 6, rng);  // every neuron inverted
    const SpinState x = monochromatic_state(net.partition(), {"+--"});
    SpinState expected = monochromatic_state(net.partition(), {"-+-"});
    expected.negate();
    CHECK(step(net, x).next == expected);

    // a tied anti-majority neuron flips its own previous state
    const Network tied = mark_anti_majority(dense_block_cycle(2, 2), 4, rng);
    SpinState y(4, -1);
    y.set(0, +1);  // block 0 balanced; block 1 sees field 0
    const UpdateReport r = step(tied, y);
    CHECK(r.ties == 2);
    CHECK(r.next.get(2) == +1);  // was -, tie keeps -, anti flips to +
    CHECK(r.next.get(3) == +1);
}

TEST_CASE("iterate") {
    const Network net = dense_block_cycle(3, 2);
    const SpinState x = monochromatic_state(net.partition(), {"+--"});
    CHECK(iterate(net, x, 0) == x);
    CHECK(iterate(net, x, 3) == x);

    const Network two = dense_network_from_lengths({3, 4}, 2);
    const SpinState y = monochromatic_state(two.partition(), {"+--", "++--"});
    CHECK(iterate(two, y, 12) == y);
    SpinState cur = y;
    for (int t = 1; t < 12; ++t) {
        cur = step(two, cur).next;
        CHECK(!(cur == y));  // 12 is the first return
    }
}

TEST_CASE("cycle detection") {
    const Network net = dense_block_cycle(3, 2);
    const CycleReport r = detect_cycle(net, monochromatic_state(net.partition(), {"+--"}), 10);
    CHECK(!r.horizon_hit);
    CHECK(r.transient == 0);
    CHECK(r.period == 3);

    // every block balanced: all fields zero, fixed point by the tie rule
    SpinState balanced(6, -1);
    balanced.set(0, +1);
    balanced.set(2, +1);
    balanced.set(4, +1);
    const CycleReport fixed = detect_cycle(net, balanced, 10);
    CHECK(fixed.transient == 0);
    CHECK(fixed.period == 1);
    CHECK(fixed.ties_total == 6);

    const Network two = dense_network_from_lengths({3, 4}, 2);
    const CycleReport both = detect_cycle(two, monochromatic_state(two.partition(), {"+--", "++--"}), 20, 16);
    CHECK(both.period == 12);
    CHECK(both.cycle_states.size() == 12);

    const CycleReport capped = detect_cycle(two, monochromatic_state(two.partition(), {"+--", "++--"}), 5);
    CHECK(capped.horizon_hit);
    CHECK_THROWS(detect_cycle(net, balanced, 0));
}

TEST_CASE("hash and brent detection agree") {
    const Network net = dense_network_from_lengths({3, 4}, 3);
    Rng rng(9999);
    for (int it = 0; it < 25; ++it) {
        SpinState x(net.size());
        for (std::uint64_t i = 0; i < net.size(); ++i) x.set(i, rng.bernoulli(0.5) ? 1 : -1);
        const CycleReport a = detect_cycle(net, x, 100);
        const CycleReport b = detect_cycle_brent(net, x, 100);
        REQUIRE(!a.horizon_hit);
        REQUIRE(!b.horizon_hit);
        CHECK(a.transient == b.transient);
        CHECK(a.period == b.period);
    }
}

TEST_CASE("reference orbits") {
    const BlockPartition part = make_block_partition({3}, 2);
    const ReferenceOrbit orbit(part, {"+--"});
    CHECK(orbit.period() == 3);
    CHECK(orbit.aperiodic());
    CHECK(orbit.state_at(1) == monochromatic_state(part, {"-+-"}));
    CHECK(orbit.state_at(3) == orbit.state_at(0));

    CHECK_THROWS(ReferenceOrbit(make_block_partition({2}, 2), {"++"}));
    const ReferenceOrbit waived(make_block_partition({2}, 2), {"++"}, true);
    CHECK(waived.period() == 1);
    CHECK(!waived.aperiodic());

    const ReferenceOrbit two(make_block_partition({3, 4}, 2), {"+--", "++--"});
    CHECK(two.period() == 12);
    for (std::uint64_t t = 0; t < 12; ++t) {
        auto phase = two.locate(two.state_at(t));
        REQUIRE(phase.has_value());
        CHECK(*phase == t);
    }
    SpinState off = two.state_at(0);
    off.flip(0);
    CHECK(!two.locate(off).has_value());
}

TEST_CASE("phase location with non-coprime cycle lengths") {
    const ReferenceOrbit orbit(make_block_partition({4, 6}, 2), {"++-+", "++-+--"});
    CHECK(orbit.period() == 12);
    for (std::uint64_t t = 0; t < 12; ++t) {
        auto phase = orbit.locate(orbit.state_at(t));
        REQUIRE(phase.has_value());
        CHECK(*phase == t);
    }
    // inconsistent per-cycle rotations never land on the joint orbit
    const SpinState skewed = monochromatic_state(
        orbit.partition(), {rotate_label("++-+", 1), rotate_label("++-+--", 2)});
    CHECK(!orbit.locate(skewed).has_value());
}

TEST_CASE("brent detection reports horizon exhaustion") {
    const Network net = dense_network_from_lengths({3, 4}, 2);
    const SpinState x = monochromatic_state(net.partition(), {"+--", "++--"});
    const CycleReport r = detect_cycle_brent(net, x, 5);
    CHECK(r.horizon_hit);  // the true period 12 exceeds the budget
    const CycleReport ok = detect_cycle_brent(net, x, 14);
    CHECK(!ok.horizon_hit);
    CHECK(ok.transient == 0);
    CHECK(ok.period == 12);
}

TEST_CASE("exact recovery") {
    const Network net = dense_block_cycle(3, 3);
    const ReferenceOrbit orbit(net.partition(), {"+--"});

    const RecoveryResult on = exact_recovery(net, orbit, orbit.state_at(2), 10);
    CHECK(on.recovered);
    CHECK(on.recovery_time == 0);
    CHECK(on.phase == 2);

    // one flipped neuron: the majority fixes it in one step
    SpinState one = orbit.state_at(0);
    one.flip(0);
    const RecoveryResult fixed = exact_recovery(net, orbit, one, 10);
    CHECK(fixed.recovered);
    CHECK(fixed.recovery_time == 1);

    // two of three neurons flipped in a single block: the majority flips and
    // the trajectory lands on a different monochromatic orbit. For labels
    // "+--", no single-block flip gives a rotation, so recovery always fails.
    for (std::uint64_t blk = 0; blk < 3; ++blk) {
        SpinState two = orbit.state_at(0);
        two.flip(blk * 3);
        two.flip(blk * 3 + 1);
        const RecoveryResult r = exact_recovery(net, orbit, two, 30);
        CHECK(!r.recovered);
    }

    // flipping the majorities of blocks 0 and 1 turns "+--" into "-+-",
    // which is a rotation, so the trajectory re-enters the same orbit
    SpinState shift = orbit.state_at(0);
    shift.flip(0);
    shift.flip(1);
    shift.flip(3);
    shift.flip(4);
    const RecoveryResult r = exact_recovery(net, orbit, shift, 10);
    CHECK(r.recovered);
    CHECK(r.recovery_time == 1);
    CHECK(r.phase == 2);  // mono("-+-") advances once more before we see it
}

TEST_CASE("weak tracking reduces to exact recovery at k=0") {
    const Network net = dense_network_from_lengths({3, 4}, 5);
    const ReferenceOrbit orbit(net.partition(), {"+--", "++--"});
    Rng rng(6060);
    for (int it = 0; it < 20; ++it) {
        SpinState x = orbit.state_at(rng.below(12));
        // flip at most two neurons per block
        for (std::uint64_t blk = 0; blk < net.partition().total_blocks(); ++blk)
            for (int f = 0; f < 2; ++f)
                if (rng.bernoulli(0.4)) x.flip(net.partition().block_begin(blk) + rng.below(5));
        const RecoveryResult exact = exact_recovery(net, orbit, x, 15);
        const TrackingResult weak = weak_tracking(net, orbit, x, 0, 15);
        CHECK(exact.recovered == weak.tracked);
        if (exact.recovered) {
            CHECK(exact.recovery_time == weak.transient);
            CHECK(exact.phase == weak.phase);
        }
    }
}

TEST_CASE("weak tracking tolerates small in-block damage") {
    const Network net = dense_block_cycle(4, 9);
    const ReferenceOrbit orbit(net.partition(), {"++-+"});
    SpinState x = orbit.state_at(0);
    x.flip(0);   // one neuron per block, majorities intact
    x.flip(9);
    const TrackingResult r = weak_tracking(net, orbit, x, 1, 5);
    CHECK(r.tracked);
    CHECK(r.transient <= 1);
    CHECK(!weak_tracking(net, orbit, x, 0, 0).tracked);  // the start itself is off-orbit
}

TEST_CASE("weak tracking ignores masked neurons entirely") {
    const Network net = dense_block_cycle(4, 9);
    const ReferenceOrbit orbit(net.partition(), {"++-+"});
    std::vector<std::uint64_t> ignore(words_for_bits(net.size()), 0);
    set_bit(std::span(ignore), 3, true);
    set_bit(std::span(ignore), 11, true);
    SpinState x = orbit.state_at(0);
    x.flip(3);
    x.flip(11);
    const TrackingResult r = weak_tracking(net, orbit, x, 0, 5, ignore.data());
    CHECK(r.tracked);
    CHECK(r.transient == 0);
    CHECK(r.phase == 0);
}

TEST_CASE("one-step recovery oracle") {
    CHECK(dense_one_step_recovery_prob(7, 0.0, 4) == 1.0);
    CHECK(dense_one_step_recovery_prob(1, 0.3, 1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(dense_one_step_recovery_prob(3, 0.5, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dense_one_step_recovery_prob(5, 1.0, 2) == 0.0);
    CHECK_THROWS(dense_one_step_recovery_prob(4, 0.3, 1));
    CHECK_THROWS(dense_one_step_recovery_prob(0, 0.3, 1));
    CHECK_THROWS(dense_one_step_recovery_prob(5, 1.5, 1));

    // lgamma route against the pmf recurrence route
    for (std::uint32_t d : {3u, 5u, 51u, 101u, 201u})
        for (double p : {0.1, 0.45, 0.8}) {
            const double direct = std::pow(oracles::binom_cdf_recurrence(d, p, (d - 1) / 2), 3.0);
            CHECK(dense_one_step_recovery_prob(d, p, 3) == doctest::Approx(direct).epsilon(1e-9));
        }
}

TEST_CASE("one-step Monte-Carlo matches the oracle on a small ring") {
    const std::uint32_t d = 21;
    const Network net = dense_network_from_lengths({4}, d);
    const ReferenceOrbit orbit(net.partition(), {"++-+"});
    for (double p : {0.2, 0.45}) {
        const double q = dense_one_step_recovery_prob(d, p, 4);
        const int trials = 600;
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            const SpinState noisy =
                flip_noise(orbit.state_at(0), NoiseSpec{p, derive_seed(17, static_cast<std::uint64_t>(p * 100),
                                                                       static_cast<std::uint64_t>(t))});
            if (step(net, noisy).next == orbit.state_at(1)) ++hits;
        }
        const double rate = static_cast<double>(hits) / trials;
        CHECK(std::abs(rate - q) <= 3.0 * std::sqrt(q * (1.0 - q) / trials) + 1e-12);
    }
}

TEST_CASE("odd sparse in-weight admits no ties") {
    Rng rng(808);
    const Network net = sparse_block_cycle(6, 9, 3, rng);
    SpinState x(net.size());
    for (std::uint64_t i = 0; i < net.size(); ++i) x.set(i, rng.bernoulli(0.5) ? 1 : -1);
    SpinState keep(net.size()), plus(net.size());
    for (int t = 0; t < 10; ++t) {
        const std::uint64_t ties_keep = step_into(net, x, keep, TieRule::keep_state);
        const std::uint64_t ties_plus = step_into(net, x, plus, TieRule::prefer_plus);
        CHECK(ties_keep == 0);
        CHECK(ties_plus == 0);
        CHECK(keep == plus);  // tie-rule independent when no field vanishes
        x = keep;
    }
}

TEST_CASE("monochromatic invariance for arbitrary labels, dense and sparse") {
    Rng rng(112);
    for (int it = 0; it < 10; ++it) {
        const std::vector<std::uint32_t> lengths = {static_cast<std::uint32_t>(2 + rng.below(5)),
                                                    static_cast<std::uint32_t>(2 + rng.below(5))};
        const std::uint32_t d = static_cast<std::uint32_t>(4 + rng.below(4));
        const Network dense = dense_network_from_lengths(lengths, d);
        const Network sparse = sparse_network_from_lengths(lengths, d, 3, rng);
        BlockLabels labels;
        for (auto len : lengths) {
            std::string s;
            for (std::uint32_t i = 0; i < len; ++i) s.push_back(rng.bernoulli(0.5) ? '+' : '-');
            labels.push_back(s);
        }
        BlockLabels rotated;
        for (const auto& s : labels) rotated.push_back(rotate_label(s, 1));
        for (const Network* net : {&dense, &sparse}) {
            const SpinState x = monochromatic_state(net->partition(), labels);
            CHECK(step(*net, x).next == monochromatic_state(net->partition(), rotated));
        }
    }
}

TEST_CASE("every aperiodic labeling of {2,3} returns in lcm steps") {
    for (std::uint32_t d : {1u, 2u}) {
        const Network net = dense_network_from_lengths({2, 3}, d);
        for (const auto& s2 : oracles::all_aperiodic_strings(2))
            for (const auto& s3 : oracles::all_aperiodic_strings(3)) {
                const CycleReport r =
                    detect_cycle(net, monochromatic_state(net.partition(), {s2, s3}), 8);
                CHECK(r.transient == 0);
                CHECK(r.period == 6);
            }
    }
}
