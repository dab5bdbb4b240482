#include "hopcycle/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hopcycle/net_io.hpp"
#include "hopcycle/topology.hpp"

namespace hopcycle {

SpinState flip_noise(const SpinState& x, const NoiseSpec& spec) {
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw std::invalid_argument("flip_noise: p must be in [0,1]");
    SpinState out = x;
    if (spec.p == 0.0) return out;
    Rng rng(spec.seed);
    if (spec.p == 1.0) {
        out.negate();
        // keep the generator semantics uniform: p=1 consumes no draws
        return out;
    }
    for (std::uint64_t i = 0; i < x.size(); ++i)
        if (rng.bernoulli(spec.p)) out.flip(i);
    return out;
}

TrialRecord trial_revival(const Network& net, const ReferenceOrbit& orbit, const NoiseSpec& noise,
                          std::uint64_t horizon, RecoveryMode mode, std::uint64_t weak_k,
                          const std::uint64_t* ignore) {
    const SpinState start = flip_noise(orbit.state_at(0), noise);
    TrialRecord record;
    if (mode == RecoveryMode::exact) {
        const RecoveryResult r = exact_recovery(net, orbit, start, horizon);
        record.revived = r.recovered;
        record.recovery_time = r.recovery_time;
        record.phase = r.phase;
        record.ties = r.ties_total;
    } else {
        const TrackingResult r = weak_tracking(net, orbit, start, weak_k, horizon, ignore);
        record.revived = r.tracked;
        record.recovery_time = r.transient;
        record.phase = r.phase;
        record.ties = r.ties_total;
    }
    return record;
}

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::sparse_revival: return "sparse_revival";
        case ExperimentKind::extra_edges: return "extra_edges";
        case ExperimentKind::adversarial_nodes: return "adversarial_nodes";
        case ExperimentKind::global_convergence: return "global_convergence";
        case ExperimentKind::lcm_growth: return "lcm_growth";
        case ExperimentKind::period_law: return "period_law";
    }
    return "?";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "sparse_revival" || name == "fig1a") return ExperimentKind::sparse_revival;
    if (name == "extra_edges" || name == "fig1b") return ExperimentKind::extra_edges;
    if (name == "adversarial_nodes") return ExperimentKind::adversarial_nodes;
    if (name == "global_convergence") return ExperimentKind::global_convergence;
    if (name == "lcm_growth") return ExperimentKind::lcm_growth;
    if (name == "period_law") return ExperimentKind::period_law;
    throw std::invalid_argument("experiment: unknown kind '" + name + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': expected a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::string fmt_f(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string join_u32(const std::vector<std::uint32_t>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out.push_back(sep);
        out += std::to_string(values[i]);
    }
    return out;
}

void parallel_trials(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& fn) {
    unsigned workers = threads ? threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(count, 256))));
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

BlockLabels all_plus_labels(const std::vector<std::uint32_t>& lengths) {
    BlockLabels labels;
    labels.reserve(lengths.size());
    for (auto len : lengths) labels.emplace_back(len, '+');
    return labels;
}

// ---- config ----------------------------------------------------------------

struct RawConfig {
    std::map<std::string, std::string> values;
    bool has(const std::string& key) const { return values.count(key) != 0; }
};

const std::set<std::string> kAllKeys = {
    "experiment", "seed",  "trials", "horizon", "threads", "resample_topology",
    "ell",        "d",     "h",      "p",       "k",       "count",
    "weak_k",     "m",     "b",      "delta",   "reps",    "sets",
    "sum_max",
};

void require_keys(const RawConfig& raw, const std::vector<std::string>& required,
                  const std::vector<std::string>& allowed, const std::string& kind) {
    for (const auto& key : required)
        if (!raw.has(key))
            throw std::invalid_argument("config: experiment '" + kind + "' requires key '" + key + "'");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    ok.insert(required.begin(), required.end());
    ok.insert({"experiment", "seed", "threads"});
    for (const auto& [key, value] : raw.values)
        if (!ok.count(key))
            throw std::invalid_argument("config: key '" + key + "' is not used by experiment '" + kind + "'");
}

}  // namespace

CampaignConfig parse_campaign_config(std::istream& in) {
    RawConfig raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!kAllKeys.count(key))
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (raw.values.count(key))
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        if (value.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        raw.values[key] = value;
    }

    if (!raw.has("experiment")) throw std::invalid_argument("config: missing required key 'experiment'");
    if (!raw.has("seed"))
        throw std::invalid_argument("config: missing required key 'seed' (campaigns never default to entropy)");

    CampaignConfig config;
    config.kind = parse_experiment_kind(raw.values.at("experiment"));
    config.seed = parse_u64("seed", raw.values.at("seed"));
    const std::string kind = experiment_name(config.kind);

    auto u32_list = [&](const std::string& key) {
        std::vector<std::uint32_t> out;
        for (const auto& item : split_list(raw.values.at(key)))
            out.push_back(static_cast<std::uint32_t>(parse_u64(key, item)));
        return out;
    };
    auto u64_list = [&](const std::string& key) {
        std::vector<std::uint64_t> out;
        for (const auto& item : split_list(raw.values.at(key))) out.push_back(parse_u64(key, item));
        return out;
    };
    auto dbl_list = [&](const std::string& key) {
        std::vector<double> out;
        for (const auto& item : split_list(raw.values.at(key))) out.push_back(parse_double(key, item));
        return out;
    };

    if (raw.has("trials")) config.trials = static_cast<std::uint32_t>(parse_u64("trials", raw.values.at("trials")));
    if (config.trials == 0) throw std::invalid_argument("config key 'trials': must be >= 1");
    if (raw.has("horizon")) config.horizon = parse_u64("horizon", raw.values.at("horizon"));
    if (raw.has("threads")) config.threads = static_cast<unsigned>(parse_u64("threads", raw.values.at("threads")));
    if (raw.has("resample_topology"))
        config.resample_topology = parse_bool("resample_topology", raw.values.at("resample_topology"));
    if (raw.has("h")) config.h = static_cast<std::uint32_t>(parse_u64("h", raw.values.at("h")));
    if (raw.has("weak_k")) config.weak_k = parse_u64("weak_k", raw.values.at("weak_k"));

    switch (config.kind) {
        case ExperimentKind::sparse_revival:
            require_keys(raw, {"ell", "d", "p"}, {"h", "trials", "horizon", "resample_topology"}, kind);
            config.ell = u32_list("ell");
            config.d_grid = u32_list("d");
            config.p_grid = dbl_list("p");
            if (config.ell.size() != 1)
                throw std::invalid_argument("config key 'ell': sparse_revival uses a single cycle length");
            break;
        case ExperimentKind::extra_edges:
            require_keys(raw, {"ell", "d", "p", "k"},
                         {"h", "weak_k", "trials", "horizon", "resample_topology"}, kind);
            config.ell = u32_list("ell");
            config.d_grid = u32_list("d");
            config.p_grid = dbl_list("p");
            config.k_grid = u32_list("k");
            if (config.d_grid.size() != 1)
                throw std::invalid_argument("config key 'd': extra_edges uses a single block size");
            for (auto k : config.k_grid)
                if (k > config.d_grid[0])
                    throw std::invalid_argument("config key 'k': " + std::to_string(k) +
                                                " exceeds the block size");
            break;
        case ExperimentKind::adversarial_nodes:
            require_keys(raw, {"ell", "d", "p", "count"},
                         {"h", "weak_k", "trials", "horizon", "resample_topology"}, kind);
            config.ell = u32_list("ell");
            config.d_grid = u32_list("d");
            config.p_grid = dbl_list("p");
            config.count_grid = u64_list("count");
            if (config.ell.size() != 1 || config.d_grid.size() != 1)
                throw std::invalid_argument("config: adversarial_nodes uses a single ell and a single d");
            for (auto count : config.count_grid)
                if (count > std::uint64_t{config.ell[0]} * config.d_grid[0])
                    throw std::invalid_argument("config key 'count': " + std::to_string(count) +
                                                " exceeds the neuron count");
            break;
        case ExperimentKind::global_convergence:
            require_keys(raw, {"ell", "d"}, {"h", "trials", "horizon", "resample_topology"}, kind);
            config.ell = u32_list("ell");
            config.d_grid = u32_list("d");
            if (config.ell.size() != 1)
                throw std::invalid_argument("config key 'ell': global_convergence uses a single cycle length");
            break;
        case ExperimentKind::lcm_growth:
            require_keys(raw, {"m"}, {"b", "delta", "reps"}, kind);
            config.m_grid = u64_list("m");
            if (raw.has("b")) config.b = parse_u64("b", raw.values.at("b"));
            if (raw.has("delta")) config.delta = parse_double("delta", raw.values.at("delta"));
            if (!(config.delta > 0.0 && config.delta < 1.0))
                throw std::invalid_argument("config key 'delta': must lie in (0,1)");
            if (raw.has("reps")) config.reps = static_cast<std::uint32_t>(parse_u64("reps", raw.values.at("reps")));
            if (config.reps == 0) throw std::invalid_argument("config key 'reps': must be >= 1");
            break;
        case ExperimentKind::period_law:
            require_keys(raw, {}, {"d", "sets", "sum_max", "trials"}, kind);
            config.d_grid = raw.has("d") ? u32_list("d") : std::vector<std::uint32_t>{1, 2, 3};
            if (raw.has("sets")) config.sets = static_cast<std::uint32_t>(parse_u64("sets", raw.values.at("sets")));
            if (raw.has("sum_max"))
                config.sum_max = static_cast<std::uint32_t>(parse_u64("sum_max", raw.values.at("sum_max")));
            if (config.sum_max < 2) throw std::invalid_argument("config key 'sum_max': must be >= 2");
            break;
    }
    for (double p : config.p_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config key 'p': values must lie in [0,1]");
    return config;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    return parse_campaign_config(in);
}

// ---- campaign execution -----------------------------------------------------

namespace {

struct Aggregate {
    std::uint64_t revived = 0;
    std::uint64_t recovery_sum = 0;
    std::uint64_t ties = 0;
};

Aggregate aggregate_trials(const std::vector<TrialRecord>& records) {
    Aggregate agg;
    for (const auto& r : records) {
        if (r.revived) {
            ++agg.revived;
            agg.recovery_sum += r.recovery_time;
        }
        agg.ties += r.ties;
    }
    return agg;
}

CampaignRow finish_row(std::vector<std::string> params, double p, std::uint64_t trials, const Aggregate& agg,
                       std::uint64_t point_seed, std::chrono::steady_clock::time_point started) {
    CampaignRow row;
    row.params = std::move(params);
    row.p = p;
    row.trials = trials;
    row.revived = agg.revived;
    row.revival_rate = static_cast<double>(agg.revived) / static_cast<double>(trials);
    row.stderr_value = std::sqrt(row.revival_rate * (1.0 - row.revival_rate) / static_cast<double>(trials));
    row.mean_recovery = agg.revived ? static_cast<double>(agg.recovery_sum) / static_cast<double>(agg.revived) : 0.0;
    row.ties_total = agg.ties;
    row.seed = point_seed;
    row.wall_ms = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                                 std::chrono::steady_clock::now() - started)
                                                 .count());
    return row;
}

constexpr std::uint64_t kTopologySalt = 0x746f706f;  // fixed-topology substream tag

std::uint64_t default_horizon(const CampaignConfig& config) {
    if (config.horizon) return config.horizon;
    std::uint32_t longest = 0;
    for (auto len : config.ell) longest = std::max(longest, len);
    return longest;
}

void run_revival_points(const CampaignConfig& config, CampaignTable& table) {
    const std::uint64_t horizon = default_horizon(config);
    // grid axis: d for sparse_revival, k for extra_edges, count for adversarial_nodes
    std::vector<std::uint64_t> axis;
    switch (config.kind) {
        case ExperimentKind::sparse_revival:
            for (auto d : config.d_grid) axis.push_back(d);
            table.param_names = {"ell", "d", "h"};
            break;
        case ExperimentKind::extra_edges:
            for (auto k : config.k_grid) axis.push_back(k);
            table.param_names = {"ell", "d", "h", "k"};
            break;
        case ExperimentKind::adversarial_nodes:
            for (auto c : config.count_grid) axis.push_back(c);
            table.param_names = {"ell", "d", "h", "count"};
            break;
        default: throw std::logic_error("run_revival_points: wrong kind");
    }

    std::uint64_t point_index = 0;
    for (std::uint64_t axis_value : axis) {
        for (double p : config.p_grid) {
            const auto started = std::chrono::steady_clock::now();
            const std::uint64_t point_seed = derive_seed(config.seed, point_index);
            const std::uint32_t d =
                config.kind == ExperimentKind::sparse_revival ? static_cast<std::uint32_t>(axis_value)
                                                              : config.d_grid[0];

            auto build = [&](Rng& rng) {
                Network net = sparse_network_from_lengths(config.ell, d, config.h, rng);
                if (config.kind == ExperimentKind::extra_edges)
                    net = add_adversarial_edges(net, static_cast<std::uint32_t>(axis_value), rng);
                else if (config.kind == ExperimentKind::adversarial_nodes)
                    net = mark_anti_majority(net, axis_value, rng);
                return net;
            };

            // fixed-topology mode builds once; the default rebuilds per trial
            std::optional<Network> shared;
            if (!config.resample_topology) {
                Rng rng(derive_seed(point_seed, kTopologySalt));
                shared = build(rng);
            }

            std::vector<TrialRecord> records(config.trials);
            parallel_trials(config.trials, config.threads, [&](std::uint64_t trial) {
                Rng rng(derive_seed(point_seed, 1, trial));
                const Network* net = shared ? &*shared : nullptr;
                std::optional<Network> own;
                if (!net) {
                    own = build(rng);
                    net = &*own;
                }
                ReferenceOrbit orbit(net->partition(), all_plus_labels(config.ell), true);
                NoiseSpec noise{p, rng.next_u64()};
                if (config.kind == ExperimentKind::sparse_revival) {
                    records[trial] = trial_revival(*net, orbit, noise, horizon);
                } else {
                    const std::uint64_t* ignore = config.kind == ExperimentKind::extra_edges
                                                      ? net->adversarial_bitmap().data()
                                                      : net->anti_majority_bitmap().data();
                    records[trial] =
                        trial_revival(*net, orbit, noise, horizon, RecoveryMode::weak, config.weak_k, ignore);
                }
            });

            std::vector<std::string> params = {join_u32(config.ell, ';'), std::to_string(d),
                                               std::to_string(config.h)};
            if (config.kind != ExperimentKind::sparse_revival) params.push_back(std::to_string(axis_value));
            table.rows.push_back(
                finish_row(std::move(params), p, config.trials, aggregate_trials(records), point_seed, started));
            ++point_index;
        }
    }
}

void run_global_convergence(const CampaignConfig& config, CampaignTable& table) {
    table.param_names = {"ell", "d", "h"};
    const std::uint64_t horizon = default_horizon(config);
    std::uint64_t point_index = 0;
    for (std::uint32_t d : config.d_grid) {
        const auto started = std::chrono::steady_clock::now();
        const std::uint64_t point_seed = derive_seed(config.seed, point_index);
        std::optional<Network> shared;
        if (!config.resample_topology) {
            Rng rng(derive_seed(point_seed, kTopologySalt));
            shared = sparse_block_cycle(config.ell[0], d, config.h, rng);
        }
        std::vector<TrialRecord> records(config.trials);
        parallel_trials(config.trials, config.threads, [&](std::uint64_t trial) {
            Rng rng(derive_seed(point_seed, 1, trial));
            std::optional<Network> own;
            const Network* net = shared ? &*shared : nullptr;
            if (!net) {
                own = sparse_block_cycle(config.ell[0], d, config.h, rng);
                net = &*own;
            }
            // uniform random start = fair flips of the all-plus state
            SpinState x = flip_noise(SpinState::all_plus(net->size()), NoiseSpec{0.5, rng.next_u64()});
            TrialRecord record;
            SpinState buf(net->size());
            for (std::uint64_t t = 0;; ++t) {
                if (extract_labels(net->partition(), x)) {
                    record.revived = true;  // every block monochromatic
                    record.recovery_time = t;
                    break;
                }
                if (t == horizon) break;
                record.ties += step_into(*net, x, buf);
                std::swap(x, buf);
            }
            records[trial] = record;
        });
        table.rows.push_back(finish_row({join_u32(config.ell, ';'), std::to_string(d), std::to_string(config.h)},
                                        0.5, config.trials, aggregate_trials(records), point_seed, started));
        ++point_index;
    }
}

void run_lcm_growth(const CampaignConfig& config, CampaignTable& table) {
    table.param_names = {"m", "b", "delta", "rep", "psi", "prediction", "ratio", "flagged"};
    std::uint64_t point_index = 0;
    for (std::uint64_t m : config.m_grid) {
        const std::uint64_t b_eff =
            config.b ? config.b : static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(m), 0.3)));
        if (b_eff > m) throw std::invalid_argument("lcm_growth: b exceeds m");
        const double prediction = psi_prediction(static_cast<double>(m), config.delta);
        for (std::uint32_t rep = 0; rep < config.reps; ++rep) {
            const auto started = std::chrono::steady_clock::now();
            const std::uint64_t point_seed = derive_seed(config.seed, point_index);
            Rng rng(point_seed);
            std::vector<std::uint64_t> sample;
            for (std::uint64_t a = b_eff; a <= m; ++a)
                if (rng.bernoulli(config.delta)) sample.push_back(a);
            const bool flagged = sample.empty();
            const double psi = log_lcm(sample);
            const double ratio = flagged ? 0.0 : psi / prediction;
            Aggregate agg;
            agg.revived = flagged ? 0 : 1;
            CampaignRow row = finish_row({std::to_string(m), std::to_string(b_eff), fmt_g(config.delta),
                                          std::to_string(rep), fmt_f(psi, 6), fmt_f(prediction, 6),
                                          fmt_f(ratio, 6), flagged ? "1" : "0"},
                                         0.0, 1, agg, point_seed, started);
            table.rows.push_back(std::move(row));
            ++point_index;
        }
    }
}

void run_period_law(const CampaignConfig& config, CampaignTable& table) {
    table.param_names = {"lengths", "d"};
    std::uint64_t point_index = 0;
    for (std::uint32_t d : config.d_grid) {
        for (std::uint32_t set = 0; set < config.sets; ++set) {
            const auto started = std::chrono::steady_clock::now();
            const std::uint64_t point_seed = derive_seed(config.seed, point_index);
            // length multiset depends on the set index only, shared across d
            Rng set_rng(derive_seed(config.seed, 0x5e75, set));
            std::vector<std::uint32_t> lengths;
            std::uint32_t remaining = config.sum_max;
            while (remaining >= 2) {
                const std::uint32_t len = static_cast<std::uint32_t>(set_rng.between(2, remaining));
                lengths.push_back(len);
                remaining -= len;
            }
            const Network net = dense_network_from_lengths(lengths, d);
            std::vector<std::uint64_t> lengths64(lengths.begin(), lengths.end());
            const std::uint64_t expected = lcm_u64(lengths64);
            std::vector<TrialRecord> records(config.trials);
            parallel_trials(config.trials, config.threads, [&](std::uint64_t trial) {
                Rng rng(derive_seed(point_seed, 1, trial));
                BlockLabels labels;
                for (auto len : lengths) labels.push_back(random_aperiodic(len, rng));
                const SpinState x0 = monochromatic_state(net.partition(), labels);
                const CycleReport report = detect_cycle(net, x0, expected + 1);
                TrialRecord record;
                record.revived = !report.horizon_hit && report.transient == 0 && report.period == expected;
                record.recovery_time = report.transient;
                record.ties = report.ties_total;
                records[trial] = record;
            });
            table.rows.push_back(finish_row({join_u32(lengths, ';'), std::to_string(d)}, 0.0, config.trials,
                                            aggregate_trials(records), point_seed, started));
            ++point_index;
        }
    }
}

}  // namespace

CampaignTable run_campaign(const CampaignConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    CampaignTable table;
    table.experiment = experiment_name(config.kind);
    switch (config.kind) {
        case ExperimentKind::sparse_revival:
        case ExperimentKind::extra_edges:
        case ExperimentKind::adversarial_nodes: run_revival_points(config, table); break;
        case ExperimentKind::global_convergence: run_global_convergence(config, table); break;
        case ExperimentKind::lcm_growth: run_lcm_growth(config, table); break;
        case ExperimentKind::period_law: run_period_law(config, table); break;
    }
    table.wall_ms_total = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started)
            .count());
    return table;
}

std::string campaign_csv(const CampaignTable& table) {
    std::string out = "experiment";
    for (const auto& name : table.param_names) out += "," + name;
    out += ",p,trials,revived,revival_rate,stderr,mean_T,ties_total,seed,wall_ms\n";
    for (const auto& row : table.rows) {
        out += table.experiment;
        for (const auto& value : row.params) out += "," + value;
        out += "," + std::string(fmt_g(row.p));
        out += "," + std::to_string(row.trials);
        out += "," + std::to_string(row.revived);
        out += "," + fmt_f(row.revival_rate, 6);
        out += "," + fmt_f(row.stderr_value, 6);
        out += "," + fmt_f(row.mean_recovery, 6);
        out += "," + std::to_string(row.ties_total);
        out += "," + std::to_string(row.seed);
        out += ",0\n";  // wall-clock lives in the manifest; the CSV stays reproducible
    }
    return out;
}

std::string campaign_summary(const CampaignTable& table) {
    std::ostringstream out;
    out << "experiment " << table.experiment << ": " << table.rows.size() << " points, "
        << table.wall_ms_total << " ms total\n";
    for (const auto& row : table.rows) {
        out << "  ";
        for (std::size_t i = 0; i < row.params.size(); ++i)
            out << table.param_names[i] << "=" << row.params[i] << " ";
        out << "p=" << fmt_g(row.p) << " revived=" << row.revived << "/" << row.trials << " rate="
            << fmt_f(row.revival_rate, 4) << " +- " << fmt_f(row.stderr_value, 4)
            << " mean_T=" << fmt_f(row.mean_recovery, 2) << " ties=" << row.ties_total << " ["
            << row.wall_ms << " ms]";
        if (row.trials > 1 && (row.revived == 0 || row.revived == row.trials)) out << " (degenerate stderr)";
        out << "\n";
    }
    return out.str();
}

std::vector<std::pair<std::string, std::string>> campaign_manifest_entries(const CampaignConfig& config) {
    std::vector<std::pair<std::string, std::string>> entries;
    entries.emplace_back("experiment", experiment_name(config.kind));
    entries.emplace_back("seed", std::to_string(config.seed));
    entries.emplace_back("trials", std::to_string(config.trials));
    entries.emplace_back("horizon", config.horizon ? std::to_string(config.horizon) : "auto");
    entries.emplace_back("threads", config.threads ? std::to_string(config.threads) : "auto");
    entries.emplace_back("resample_topology", config.resample_topology ? "true" : "false");
    if (!config.ell.empty()) entries.emplace_back("ell", join_u32(config.ell, ','));
    if (!config.d_grid.empty()) entries.emplace_back("d", join_u32(config.d_grid, ','));
    switch (config.kind) {
        case ExperimentKind::sparse_revival:
        case ExperimentKind::extra_edges:
        case ExperimentKind::adversarial_nodes:
        case ExperimentKind::global_convergence: entries.emplace_back("h", std::to_string(config.h)); break;
        default: break;
    }
    if (!config.p_grid.empty()) {
        std::string ps;
        for (std::size_t i = 0; i < config.p_grid.size(); ++i)
            ps += (i ? "," : "") + std::string(fmt_g(config.p_grid[i]));
        entries.emplace_back("p", ps);
    }
    if (!config.k_grid.empty()) entries.emplace_back("k", join_u32(config.k_grid, ','));
    if (!config.count_grid.empty()) {
        std::string cs;
        for (std::size_t i = 0; i < config.count_grid.size(); ++i)
            cs += (i ? "," : "") + std::to_string(config.count_grid[i]);
        entries.emplace_back("count", cs);
    }
    if (config.kind == ExperimentKind::extra_edges || config.kind == ExperimentKind::adversarial_nodes)
        entries.emplace_back("weak_k", std::to_string(config.weak_k));
    if (config.kind == ExperimentKind::adversarial_nodes)
        entries.emplace_back("anti_majority_tie_rule", "invert_kept_state");
    if (config.kind == ExperimentKind::lcm_growth) {
        std::string ms;
        for (std::size_t i = 0; i < config.m_grid.size(); ++i)
            ms += (i ? "," : "") + std::to_string(config.m_grid[i]);
        entries.emplace_back("m", ms);
        entries.emplace_back("b", config.b ? std::to_string(config.b) : "auto");
        entries.emplace_back("delta", fmt_g(config.delta));
        entries.emplace_back("reps", std::to_string(config.reps));
    }
    if (config.kind == ExperimentKind::period_law) {
        entries.emplace_back("sets", std::to_string(config.sets));
        entries.emplace_back("sum_max", std::to_string(config.sum_max));
    }
    return entries;
}

}  // namespace hopcycle
