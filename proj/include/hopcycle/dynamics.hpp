#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hopcycle/network.hpp"
#include "hopcycle/numbers.hpp"
#include "hopcycle/spin_state.hpp"

namespace hopcycle {

// Resolution of a zero local field. The dynamics keep the neuron's previous
// state; the alternative rule exists only to cross-check that results are
// tie-free where the theory assumes odd in-weight.
enum class TieRule { keep_state, prefer_plus };

struct UpdateReport {
    SpinState next;
    std::uint64_t ties = 0;  // neurons whose local field was exactly zero
};

// One synchronous update of every neuron from the old state. Returns the
// number of ties. `next` must already have the right size.
std::uint64_t step_into(const Network& net, const SpinState& cur, SpinState& next,
                        TieRule rule = TieRule::keep_state);

UpdateReport step(const Network& net, const SpinState& cur, TieRule rule = TieRule::keep_state);

SpinState iterate(const Network& net, SpinState x, std::uint64_t steps);

struct CycleReport {
    std::uint64_t transient = 0;  // steps before entering the cycle
    std::uint64_t period = 0;     // minimal cycle length (0 when horizon_hit)
    bool horizon_hit = false;
    std::uint64_t ties_total = 0;
    std::vector<SpinState> cycle_states;  // kept only when period <= keep_states_limit
};

// Finds the minimal (transient, period) by hashing visited states; memory is
// one stored state per step until the first revisit.
CycleReport detect_cycle(const Network& net, const SpinState& x0, std::uint64_t horizon,
                         std::uint64_t keep_states_limit = 0);

// Constant-memory alternative (Brent). May simulate up to ~3x more steps
// than the hashing variant for the same horizon.
CycleReport detect_cycle_brent(const Network& net, const SpinState& x0, std::uint64_t horizon);

// Rotating monochromatic reference orbit: each cycle's label string advances
// one position per step. The period is the lcm of the strings' primitive
// periods, which equals the lcm of the cycle lengths when all strings are
// aperiodic. Non-aperiodic labels are rejected unless explicitly waived.
class ReferenceOrbit {
public:
    ReferenceOrbit(BlockPartition part, BlockLabels labels, bool waive_aperiodicity = false);

    const BlockPartition& partition() const { return part_; }
    const BlockLabels& labels() const { return labels_; }
    std::uint64_t period() const { return period_; }
    bool aperiodic() const { return aperiodic_; }

    BlockLabels labels_at(std::uint64_t t) const;
    SpinState state_at(std::uint64_t t) const;

    // Phase r in [0, period) such that x == state_at(r), if any.
    std::optional<std::uint64_t> locate(const SpinState& x) const;
    std::optional<std::uint64_t> locate_labels(const BlockLabels& observed) const;

private:
    BlockPartition part_;
    BlockLabels labels_;
    std::vector<std::uint64_t> prim_periods_;
    std::uint64_t period_ = 1;
    bool aperiodic_ = true;
};

ReferenceOrbit make_reference_orbit(const BlockPartition& part, const BlockLabels& labels,
                                    bool waive_aperiodicity = false);

struct RecoveryResult {
    bool recovered = false;
    std::uint64_t recovery_time = 0;  // first t with F^t(x) on the orbit
    std::uint64_t phase = 0;
    std::uint64_t ties_total = 0;
};

// True iff some F^t(x), t <= horizon, equals a state of the orbit.
RecoveryResult exact_recovery(const Network& net, const ReferenceOrbit& orbit, const SpinState& x,
                              std::uint64_t horizon);

struct TrackingResult {
    bool tracked = false;
    std::uint64_t transient = 0;  // witnessing T
    std::uint64_t phase = 0;      // witnessing s
    std::uint64_t ties_total = 0;
};

// Weak tracking with blockwise tolerance k: looks for T <= horizon and a
// phase s such that the block-max distance to the rotating reference stays
// <= k over a verification window of 2*period + horizon further steps, with
// neurons in `ignore` (packed bitmap, may be nullptr) excluded from
// distances and majorities. In addition the per-block majority pattern at T
// must equal the reference labels at phase s, so the certified pattern is
// itself exactly periodic under rotation.
TrackingResult weak_tracking(const Network& net, const ReferenceOrbit& orbit, const SpinState& x,
                             std::uint64_t k, std::uint64_t horizon,
                             const std::uint64_t* ignore = nullptr);

// Exact probability that a monochromatic state on n_blocks blocks of odd
// size d, after independent flips with probability p, recovers the rotating
// orbit in one step: every block keeps its majority, so the next update
// lands exactly on the cycle. Computed as [P(Bin(d,p) <= (d-1)/2)]^n_blocks.
double dense_one_step_recovery_prob(std::uint32_t d, double p, std::uint64_t n_blocks);

}  // namespace hopcycle
