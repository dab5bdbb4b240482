#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hopcycle/dynamics.hpp"
#include "hopcycle/network.hpp"
#include "hopcycle/rng.hpp"

namespace hopcycle {

struct NoiseSpec {
    double p = 0.0;          // independent per-neuron flip probability
    std::uint64_t seed = 0;
};

// Each coordinate independently negated with probability spec.p.
SpinState flip_noise(const SpinState& x, const NoiseSpec& spec);

enum class RecoveryMode { exact, weak };

struct TrialRecord {
    bool revived = false;
    std::uint64_t recovery_time = 0;
    std::uint64_t phase = 0;
    std::uint64_t ties = 0;
};

// Perturbs orbit.state_at(0) with flip noise and asks whether the dynamics
// re-enter the orbit (exactly, or weakly within block tolerance k and
// ignored neurons) within the horizon.
TrialRecord trial_revival(const Network& net, const ReferenceOrbit& orbit, const NoiseSpec& noise,
                          std::uint64_t horizon, RecoveryMode mode = RecoveryMode::exact,
                          std::uint64_t weak_k = 0, const std::uint64_t* ignore = nullptr);

enum class ExperimentKind {
    sparse_revival,      // one sparse ring, revival rate over (d, p)
    extra_edges,         // two sparse rings, extra random in-edges, weak recovery over (k, p)
    adversarial_nodes,   // one sparse ring with anti-majority neurons, over (count, p)
    global_convergence,  // random starts, blockwise consensus before one rotation, over d
    lcm_growth,          // log-lcm of sampled length sets against the analytic prediction
    period_law,          // detected period equals the lcm of the cycle lengths
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct CampaignConfig {
    ExperimentKind kind = ExperimentKind::sparse_revival;
    std::uint64_t seed = 0;
    std::uint32_t trials = 50;
    std::uint64_t horizon = 0;  // 0 = one full turn of the longest cycle
    unsigned threads = 0;       // 0 = hardware concurrency
    bool resample_topology = true;

    std::vector<std::uint32_t> ell;     // cycle lengths
    std::vector<std::uint32_t> d_grid;  // block sizes
    std::uint32_t h = 3;
    std::vector<double> p_grid;
    std::vector<std::uint32_t> k_grid;      // extra in-edge targets per block
    std::vector<std::uint64_t> count_grid;  // anti-majority neuron counts
    std::uint64_t weak_k = 0;

    std::vector<std::uint64_t> m_grid;  // lcm growth
    std::uint64_t b = 0;                // 0 = ceil(m^0.3)
    double delta = 0.8646647167633873;  // 1 - e^-2
    std::uint32_t reps = 20;

    std::uint32_t sets = 10;      // period law: random length sets per d
    std::uint32_t sum_max = 24;   // period law: cap on the sum of lengths
};

// Flat key = value text; '#' starts a comment. Unknown or inapplicable keys
// are reported by name. A seed is mandatory.
CampaignConfig parse_campaign_config(std::istream& in);
CampaignConfig load_campaign_config(const std::string& path);

struct CampaignRow {
    std::vector<std::string> params;  // aligned with CampaignTable::param_names
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t revived = 0;
    double revival_rate = 0.0;
    double stderr_value = 0.0;  // sqrt(rate*(1-rate)/trials)
    double mean_recovery = 0.0;
    std::uint64_t ties_total = 0;
    std::uint64_t seed = 0;     // substream seed of this grid point
    std::uint64_t wall_ms = 0;  // measured; reported in the summary, not the CSV
};

struct CampaignTable {
    std::string experiment;
    std::vector<std::string> param_names;
    std::vector<CampaignRow> rows;
    std::uint64_t wall_ms_total = 0;
};

CampaignTable run_campaign(const CampaignConfig& config);

// Frozen CSV bytes: pure function of the table's deterministic fields (the
// wall_ms column is always 0 so reruns are byte-identical).
std::string campaign_csv(const CampaignTable& table);

// Human-readable summary including measured wall-clock.
std::string campaign_summary(const CampaignTable& table);

// Resolved key/value pairs for the run manifest.
std::vector<std::pair<std::string, std::string>> campaign_manifest_entries(const CampaignConfig& config);

}  // namespace hopcycle
