// Command-line front end: construct and serialize networks, run single
// simulations, launch experiment campaigns from config files, and print
// capacity reports.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopcycle/dynamics.hpp"
#include "hopcycle/experiments.hpp"
#include "hopcycle/net_io.hpp"
#include "hopcycle/numbers.hpp"
#include "hopcycle/topology.hpp"
#include "hopcycle/version.hpp"

namespace fs = std::filesystem;
using namespace hopcycle;

namespace {

std::vector<std::uint32_t> parse_u32_csv(const std::string& text, const char* what) {
    std::vector<std::uint32_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(static_cast<std::uint32_t>(std::stoul(item, &used)));
            if (used != item.size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : entries) out << key << " = " << value << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

void append_manifest(const std::string& path, const std::string& key, const std::string& value) {
    std::ofstream out(path, std::ios::app);
    out << key << " = " << value << "\n";
}

std::uint64_t file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a64(bytes.data(), bytes.size());
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---- construct --------------------------------------------------------------

struct ConstructArgs {
    std::string kind;
    std::string lengths;
    std::uint32_t m = 0, b = 1, d = 0, h = 3;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint32_t extra_per_block = 0;
    std::uint64_t anti = 0;
    std::string out;
};

int run_construct(const ConstructArgs& args) {
    if (args.d == 0) throw std::invalid_argument("--d is required and must be >= 1");
    const bool needs_rng =
        args.lengths.empty() || args.kind == "sparse" || args.extra_per_block > 0 || args.anti > 0;
    if (needs_rng && !args.seed_set)
        throw std::invalid_argument("--seed is required for any randomized construction");

    Rng rng(args.seed);
    std::optional<Network> net;
    if (args.kind == "dense") {
        if (!args.lengths.empty())
            net = dense_network_from_lengths(parse_u32_csv(args.lengths, "--lengths"), args.d);
        else if (args.m > 0)
            net = build_dense_network(args.m, args.d, rng);
        else
            throw std::invalid_argument("dense construction needs --m or --lengths");
    } else if (args.kind == "sparse") {
        if (!args.lengths.empty())
            net = sparse_network_from_lengths(parse_u32_csv(args.lengths, "--lengths"), args.d, args.h, rng);
        else if (args.m > 0)
            net = build_sparse_network(args.m, args.b, args.d, args.h, rng);
        else
            throw std::invalid_argument("sparse construction needs --m or --lengths");
    } else {
        throw std::invalid_argument("--kind must be dense or sparse");
    }
    if (args.extra_per_block > 0) net = add_adversarial_edges(*net, args.extra_per_block, rng);
    if (args.anti > 0) net = mark_anti_majority(*net, args.anti, rng);

    std::vector<std::pair<std::string, std::string>> manifest = {
        {"tool_version", kVersion},
        {"command", "construct"},
        {"kind", args.kind},
        {"d", std::to_string(args.d)},
        {"seed", args.seed_set ? std::to_string(args.seed) : "none"},
        {"out", args.out},
    };
    if (!args.lengths.empty()) manifest.emplace_back("lengths", args.lengths);
    if (args.m) manifest.emplace_back("m", std::to_string(args.m));
    if (args.m && args.kind == "sparse") manifest.emplace_back("b", std::to_string(args.b));
    if (args.kind == "sparse") manifest.emplace_back("h", std::to_string(args.h));
    if (args.extra_per_block) manifest.emplace_back("extra_per_block", std::to_string(args.extra_per_block));
    if (args.anti) {
        manifest.emplace_back("anti_majority", std::to_string(args.anti));
        manifest.emplace_back("anti_majority_tie_rule", "invert_kept_state");
    }
    manifest.emplace_back("n", std::to_string(net->size()));
    manifest.emplace_back("cycles", std::to_string(net->partition().cycle_count()));
    if (net->meta().resampled_ones)
        manifest.emplace_back("resampled_length1_draws", std::to_string(net->meta().resampled_ones));
    write_manifest(args.out + ".manifest", manifest);
    save_network(args.out, *net);
    std::cout << "wrote " << args.out << " (n=" << net->size() << ", edges=" << net->edge_count()
              << ", cycles=" << net->partition().cycle_count() << ")\n";
    return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string net_path;
    std::string labels;
    std::string init;
    std::string state_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t steps = 0;
    bool detect = false;
    bool brent = false;
    std::uint64_t horizon = 10000;
    std::string dump;
};

int run_simulate(const SimulateArgs& args) {
    const Network net = load_network(args.net_path);
    SpinState x0;
    if (!args.labels.empty()) {
        x0 = monochromatic_state(net.partition(), parse_labels(args.labels));
    } else if (args.init == "random") {
        if (!args.seed_set) throw std::invalid_argument("--init random requires --seed");
        x0 = flip_noise(SpinState::all_plus(net.size()), NoiseSpec{0.5, args.seed});
    } else if (!args.state_path.empty()) {
        x0 = load_state(args.state_path);
        if (x0.size() != net.size())
            throw std::invalid_argument("state file has n=" + std::to_string(x0.size()) +
                                        ", network has n=" + std::to_string(net.size()));
    } else {
        throw std::invalid_argument("choose an initial state: --labels, --init random, or --state FILE");
    }

    if (!args.dump.empty()) {
        std::ofstream out(args.dump);
        if (!out) throw std::runtime_error("cannot open for writing: " + args.dump);
        out << "n " << net.size() << "\n";
        SpinState x = x0;
        SpinState buf(net.size());
        for (std::uint64_t t = 0;; ++t) {
            out << t << " " << x.to_hex() << "\n";
            if (t == args.steps) break;
            step_into(net, x, buf);
            std::swap(x, buf);
        }
    }
    if (args.detect) {
        const CycleReport report = args.brent ? detect_cycle_brent(net, x0, args.horizon)
                                              : detect_cycle(net, x0, args.horizon);
        if (report.horizon_hit)
            std::cout << "no cycle within horizon " << args.horizon << " (ties=" << report.ties_total << ")\n";
        else
            std::cout << "T=" << report.transient << " P=" << report.period << " ties=" << report.ties_total
                      << "\n";
    } else {
        const SpinState fin = iterate(net, x0, args.steps);
        std::cout << format_state(fin) << "\n";
    }
    return 0;
}

// ---- campaign ---------------------------------------------------------------

int run_campaign_cmd(const std::string& config_path, std::string out_dir, bool out_dir_given,
                     unsigned threads_override, bool dry_run) {
    CampaignConfig config = load_campaign_config(config_path);
    if (threads_override) config.threads = threads_override;
    if (dry_run) {
        std::cout << "config ok: " << experiment_name(config.kind) << "\n";
        for (const auto& [key, value] : campaign_manifest_entries(config))
            std::cout << "  " << key << " = " << value << "\n";
        return 0;
    }
    // the one allowed environment override: campaign output directory
    if (!out_dir_given)
        if (const char* env = std::getenv("HOPCYCLE_OUT_DIR")) out_dir = env;
    fs::create_directories(out_dir);
    const std::string base = (fs::path(out_dir) / experiment_name(config.kind)).string();
    const std::string csv_path = base + ".csv";
    const std::string manifest_path = base + ".manifest";

    std::vector<std::pair<std::string, std::string>> manifest = {
        {"tool_version", kVersion},
        {"command", "campaign"},
        {"config", config_path},
        {"config_digest", hex64(file_digest(config_path))},
        {"csv", csv_path},
    };
    for (auto& entry : campaign_manifest_entries(config)) manifest.push_back(entry);
    write_manifest(manifest_path, manifest);  // manifest precedes data

    const CampaignTable table = run_campaign(config);

    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    csv << campaign_csv(table);
    csv.close();
    append_manifest(manifest_path, "wall_ms_total", std::to_string(table.wall_ms_total));

    std::cout << campaign_summary(table);
    std::cout << "wrote " << csv_path << "\n";
    return 0;
}

// ---- capacity ---------------------------------------------------------------

int run_capacity(const std::string& lengths_csv, const std::string& net_path) {
    std::vector<std::uint64_t> lengths;
    if (!lengths_csv.empty()) {
        for (auto v : parse_u32_csv(lengths_csv, "--lengths")) lengths.push_back(v);
    } else if (!net_path.empty()) {
        const Network net = load_network(net_path);
        for (auto v : net.partition().cycle_lengths()) lengths.push_back(v);
    } else {
        throw std::invalid_argument("capacity needs --lengths or --net");
    }
    const CapacityEstimate est = capacity_estimate(lengths);
    const double ln2 = std::log(2.0);
    std::cout << "cycle lengths:";
    for (auto v : lengths) std::cout << " " << v;
    std::cout << "\n";
    std::cout << "log2 aperiodic monochromatic states = " << est.log_num_states / ln2 << "\n";
    std::cout << "log2 orbit period                   = " << est.log_period / ln2 << "\n";
    std::cout << "log2 distinct orbits                = " << est.log_num_cycles / ln2 << "\n";
    std::uint64_t total = 0;
    for (auto v : lengths) total += v;
    try {
        std::cout << "period (exact)                      = " << lcm_u64(lengths) << "\n";
    } catch (const std::overflow_error&) {
        std::cout << "period (exact)                      = (exceeds 64 bits)\n";
    }
    if (total <= 20) {
        std::cout << "states (exact)                      = " << exact_state_count(lengths).to_string() << "\n";
        std::cout << "orbits (exact)                      = " << exact_cycle_count(lengths).to_string() << "\n";
    }
    return 0;
}

// ---- verify -----------------------------------------------------------------

int run_verify() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok:   " : "FAIL: ") << name << "\n";
        if (!ok) ++failures;
    };

    // necklace formula against direct enumeration of cyclic shifts
    {
        bool ok = true;
        for (std::uint64_t len = 1; len <= 14 && ok; ++len) {
            std::uint64_t brute = 0;
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
                std::string s(len, '-');
                for (std::uint64_t i = 0; i < len; ++i)
                    if ((bits >> i) & 1) s[i] = '+';
                if (is_aperiodic(s)) ++brute;
            }
            ok = necklace_count(2, len).to_u64() == brute;
        }
        check("necklace count matches enumeration (len <= 14)", ok);
    }

    // Mobius inversion: divisor sums of aperiodic counts recover k^len
    {
        bool ok = true;
        for (std::uint64_t k = 2; k <= 3 && ok; ++k)
            for (std::uint64_t len = 1; len <= 20 && ok; ++len) {
                BigUint total;
                for (std::uint64_t j = 1; j <= len; ++j)
                    if (len % j == 0) total += necklace_count(k, j);
                ok = total == BigUint::pow(k, len);
            }
        check("divisor sums of aperiodic counts equal k^len", ok);
    }

    // rotation period: every aperiodic labeling of cycles {3,4} at d=1
    {
        bool ok = true;
        const Network net = dense_network_from_lengths({3, 4}, 1);
        for (std::uint64_t a = 0; a < 8 && ok; ++a)
            for (std::uint64_t b = 0; b < 16 && ok; ++b) {
                std::string s3(3, '-'), s4(4, '-');
                for (int i = 0; i < 3; ++i)
                    if ((a >> i) & 1) s3[static_cast<std::size_t>(i)] = '+';
                for (int i = 0; i < 4; ++i)
                    if ((b >> i) & 1) s4[static_cast<std::size_t>(i)] = '+';
                if (!is_aperiodic(s3) || !is_aperiodic(s4)) continue;
                const CycleReport r = detect_cycle(net, monochromatic_state(net.partition(), {s3, s4}), 15);
                ok = !r.horizon_hit && r.transient == 0 && r.period == 12;
            }
        check("aperiodic labelings of {3,4} all have T=0, P=12", ok);
    }

    // log-lcm against direct values
    {
        std::vector<std::uint64_t> range10;
        for (std::uint64_t v = 1; v <= 10; ++v) range10.push_back(v);
        const bool ok1 = std::abs(log_lcm(range10) - std::log(2520.0)) < 1e-9;
        std::vector<std::uint64_t> range(10000);
        for (std::uint64_t v = 0; v < range.size(); ++v) range[v] = v + 1;
        const double ratio = log_lcm(range) / 10000.0;
        check("log-lcm of {1..10} equals ln 2520", ok1);
        check("log-lcm of {1..10^4} is within 10% of 10^4", ratio > 0.9 && ratio < 1.1);
        check("coprime lengths for m=10 multiply to 2520",
              std::abs(log_lcm(coprime_lengths(10)) - std::log(2520.0)) < 1e-9);
    }

    // one-step recovery oracle against Monte-Carlo on a small dense ring
    {
        const std::uint32_t d = 51;
        const double p = 0.3;
        const Network net = dense_network_from_lengths({3}, d);
        const ReferenceOrbit orbit(net.partition(), {std::string("+--")});
        const double oracle = dense_one_step_recovery_prob(d, p, 3);
        const int trials = 400;
        int hits = 0;
        for (int t = 0; t < trials; ++t) {
            const SpinState noisy =
                flip_noise(orbit.state_at(0), NoiseSpec{p, derive_seed(2024, 7, static_cast<std::uint64_t>(t))});
            if (step(net, noisy).next == orbit.state_at(1)) ++hits;
        }
        const double rate = static_cast<double>(hits) / trials;
        const double tol = 4.0 * std::sqrt(oracle * (1.0 - oracle) / trials);
        check("one-step revival rate matches the binomial oracle", std::abs(rate - oracle) <= tol);
    }

    // monochromatic states rotate one position per update, dense and sparse
    {
        Rng rng(99);
        bool ok = true;
        for (int kind = 0; kind < 2 && ok; ++kind) {
            const std::vector<std::uint32_t> lengths = {5, 7};
            const Network net = kind == 0 ? dense_network_from_lengths(lengths, 4)
                                          : sparse_network_from_lengths(lengths, 5, 3, rng);
            BlockLabels labels;
            for (auto len : lengths) labels.push_back(random_aperiodic(len, rng));
            const ReferenceOrbit orbit(net.partition(), labels);
            SpinState x = orbit.state_at(0);
            for (std::uint64_t t = 1; t <= 2 * orbit.period() && ok; ++t) {
                x = step(net, x).next;
                ok = x == orbit.state_at(t);
            }
        }
        check("monochromatic labelings rotate exactly, dense and sparse", ok);
    }

    std::cout << (failures ? "verify: FAILED\n" : "verify: all checks passed\n");
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block-cyclic Hopfield network simulator and analysis toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.set_help_flag("--help", "print help");  // leaves --h free for the fan-in flag

    ConstructArgs cons;
    auto* construct = app.add_subcommand("construct", "build a network and write it to disk");
    construct->set_help_flag("--help", "print help");
    construct->add_option("--kind", cons.kind, "dense | sparse")->required();
    construct->add_option("--m", cons.m, "maximum sampled cycle length");
    construct->add_option("--b", cons.b, "minimum sampled cycle length (sparse)");
    construct->add_option("--lengths", cons.lengths, "explicit cycle lengths, comma separated");
    construct->add_option("--d", cons.d, "block size")->required();
    construct->add_option("--h", cons.h, "sparse in-weight (odd, >= 3)");
    construct->add_option("--seed", cons.seed, "construction seed")->each([&](const std::string&) {
        cons.seed_set = true;
    });
    construct->add_option("--extra-per-block", cons.extra_per_block,
                          "adversarial targets per block, one random extra in-edge each");
    construct->add_option("--anti", cons.anti, "number of anti-majority neurons");
    construct->add_option("--out", cons.out, "output network file")->required();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "run the synchronous dynamics");
    simulate->add_option("--net", sim.net_path, "network file")->required();
    simulate->add_option("--labels", sim.labels, "monochromatic start, cycles joined by ';' (e.g. \"+--;+-\")");
    simulate->add_option("--init", sim.init, "random");
    simulate->add_option("--state", sim.state_path, "start from a state file");
    simulate->add_option("--seed", sim.seed, "seed for --init random")->each([&](const std::string&) {
        sim.seed_set = true;
    });
    simulate->add_option("--steps", sim.steps, "steps to run (default 0: echo the start state)");
    simulate->add_flag("--detect-cycle", sim.detect, "report transient and period");
    simulate->add_flag("--brent", sim.brent, "constant-memory cycle detection");
    simulate->add_option("--horizon", sim.horizon, "cycle-detection horizon (default 10000)");
    simulate->add_option("--dump", sim.dump, "write the trajectory (one state per line)");

    std::string campaign_config, campaign_out = ".";
    unsigned campaign_threads = 0;
    auto* campaign = app.add_subcommand("campaign", "run an experiment campaign from a config file");
    campaign->add_option("--config", campaign_config, "flat key = value config file")->required();
    auto* out_opt =
        campaign->add_option("--out", campaign_out, "output directory (default: HOPCYCLE_OUT_DIR or .)");
    campaign->add_option("--threads", campaign_threads, "worker cap (default: hardware)");
    bool campaign_dry = false;
    campaign->add_flag("--dry-run", campaign_dry, "validate the config and print resolved parameters");

    std::string cap_lengths, cap_net;
    auto* capacity = app.add_subcommand("capacity", "capacity and period report for cycle lengths");
    capacity->add_option("--lengths", cap_lengths, "cycle lengths, comma separated");
    capacity->add_option("--net", cap_net, "read lengths from a network file");

    app.add_subcommand("verify", "run the built-in oracle cross-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) return run_construct(cons);
        if (simulate->parsed()) return run_simulate(sim);
        if (campaign->parsed())
            return run_campaign_cmd(campaign_config, campaign_out, out_opt->count() > 0, campaign_threads,
                                    campaign_dry);
        if (capacity->parsed()) return run_capacity(cap_lengths, cap_net);
        return run_verify();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
