#include "rdsync/cli.hpp"

#include "rdsync/config.hpp"
#include "rdsync/version.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rdsync::cli {

namespace fs = std::filesystem;

namespace {

const char* kUsage = R"(usage: rdsync <subcommand> [options]

subcommands:
  simulate   --config FILE [--out DIR] [--seed N]
             integrate the network, write trace.csv and field snapshots
  threshold  --config FILE [--out DIR] [--g-lo X] [--g-hi X] [--resolution X]
             bisect for the minimal synchronizing coupling strength
  sweep      --config FILE [--out DIR] [--topology complete|ring]
             [--n-from A --n-to B | --p-list P1,P2,...]
             [--g-lo X] [--g-hi X] [--resolution X]
             threshold search per node count (or mixture percentage)
  alpha      (--topology complete|ring --n N [--g X] | --matrix FILE)
             [--tie-break lexicographic|ring_alternating] [--a-const X]
             [--out DIR]
             per-edge path loads and the sufficient-condition margins
  fit        --model inverse_n|quadratic --input sweep.csv [--out DIR]
             least-squares scaling-law fit of a sweep table
  validate   --matrix FILE
             check a connectivity matrix against the structural assumptions

The RDSYNC_WORKERS environment variable caps the worker count
(default: all available cores).
)";

struct Args {
    std::string subcommand;
    std::map<std::string, std::string> options;

    bool has(const std::string& key) const { return options.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const {
        auto it = options.find(key);
        return it != options.end() ? it->second : fallback;
    }
    double get_double(const std::string& key, double fallback) const {
        auto it = options.find(key);
        return it != options.end() ? std::stod(it->second) : fallback;
    }
};

Args parse_args(const std::vector<std::string>& argv) {
    Args args;
    if (argv.empty()) return args;
    args.subcommand = argv[0];
    for (std::size_t i = 1; i < argv.size(); ++i) {
        const std::string& tok = argv[i];
        if (tok.rfind("--", 0) != 0) {
            throw std::invalid_argument("unexpected argument '" + tok + "'");
        }
        if (i + 1 >= argv.size()) {
            throw std::invalid_argument("option " + tok + " needs a value");
        }
        args.options[tok.substr(2)] = argv[++i];
    }
    return args;
}

void apply_worker_env() {
#ifdef _OPENMP
    if (const char* env = std::getenv("RDSYNC_WORKERS")) {
        const int workers = std::atoi(env);
        if (workers > 0) omp_set_num_threads(workers);
    }
#endif
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

AppConfig load_config(const Args& args) {
    AppConfig cfg;
    if (args.has("config")) {
        cfg = parse_config(read_file(args.get("config")));
    }
    if (args.has("seed")) cfg.seed = std::stoull(args.get("seed"));
    if (args.has("topology")) {
        const std::string t = args.get("topology");
        if (t == "complete") cfg.topology = Topology::complete;
        else if (t == "ring") cfg.topology = Topology::ring;
        else if (t == "file") cfg.topology = Topology::file;
        else throw std::invalid_argument("unknown topology '" + t + "'");
    }
    if (args.has("matrix")) {
        cfg.topology = Topology::file;
        cfg.matrix_file = args.get("matrix");
    }
    if (args.has("n")) cfg.n = std::stoi(args.get("n"));
    if (args.has("g")) cfg.g = std::stod(args.get("g"));
    if (args.has("g-lo")) cfg.g_lo = std::stod(args.get("g-lo"));
    if (args.has("g-hi")) cfg.g_hi = std::stod(args.get("g-hi"));
    if (args.has("resolution")) cfg.resolution = std::stod(args.get("resolution"));
    if (args.has("n-from")) cfg.n_from = std::stoi(args.get("n-from"));
    if (args.has("n-to")) cfg.n_to = std::stoi(args.get("n-to"));
    if (args.has("p-list")) {
        cfg.p_list.clear();
        std::istringstream ls(args.get("p-list"));
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            if (!tok.empty()) cfg.p_list.push_back(std::stod(tok));
        }
    }
    if (args.has("a-const")) cfg.a_const = std::stod(args.get("a-const"));
    if (args.has("tie-break")) {
        const std::string tb = args.get("tie-break");
        if (tb == "lexicographic") cfg.tie_break = TieBreak::lexicographic;
        else if (tb == "ring_alternating") cfg.tie_break = TieBreak::ring_alternating;
        else throw std::invalid_argument("unknown tie-break '" + tb + "'");
    }
    return cfg;
}

/// Collects produced files and writes the manifest + config echo at the end.
class Manifest {
public:
    Manifest(std::string command, fs::path out_dir, std::uint64_t seed)
        : command_(std::move(command)), out_dir_(std::move(out_dir)), seed_(seed) {
        fs::create_directories(out_dir_);
    }

    const fs::path& dir() const { return out_dir_; }

    std::ofstream create(const std::string& role, const std::string& name) {
        files_.emplace_back(role, name);
        std::ofstream os(out_dir_ / name);
        if (!os) {
            throw std::runtime_error("cannot create output file: " + (out_dir_ / name).string());
        }
        return os;
    }

    void finalize(const AppConfig& cfg) {
        {
            std::ofstream echo = create("config", "config.echo");
            echo << emit_config(cfg);
        }
        std::ofstream os(out_dir_ / "manifest.txt");
        os << "# run manifest\n";
        os << "version = " << kVersion << "\n";
        os << "command = " << command_ << "\n";
        os << "seed = " << seed_ << "\n";
        os << "out_dir = " << out_dir_.string() << "\n";
        for (const auto& [role, name] : files_) {
            os << "file = " << role << ", " << name << "\n";
        }
    }

private:
    std::string command_;
    fs::path out_dir_;
    std::uint64_t seed_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

int cmd_simulate(const Args& args) {
    AppConfig cfg = load_config(args);
    Manifest manifest("simulate", args.get("out", "out"), cfg.seed);

    const SimConfig sim = make_sim_config(cfg);
    RunResult result = run(sim);

    {
        std::ofstream os = manifest.create("trace", "trace.csv");
        write_trace_csv(result.trace, os, cfg.sync_tol_rel, cfg.sync_window_frac);
    }
    for (const auto& snap : result.snapshots) {
        const std::string base = "node" + std::to_string(snap.node) + "_t" + time_tag(snap.time);
        {
            std::ofstream os = manifest.create("snapshot", base + ".csv");
            write_field_csv(snap.u, os);
        }
        {
            std::ofstream os = manifest.create("snapshot", base + ".pgm");
            write_field_pgm(snap.u, os);
        }
    }
    manifest.finalize(cfg);

    if (result.blowup) {
        std::cerr << "error: blow-up at step " << result.blowup->step << " (node "
                  << result.blowup->node << ", t=" << result.blowup->t << ")\n";
        return 1;
    }
    const bool synced = !result.trace.empty() &&
                        is_synchronized(result.trace, cfg.sync_tol_rel, cfg.sync_window_frac);
    std::cout << "simulate: t_end=" << sim.t_end << " n=" << sim.n_nodes()
              << " synchronized=" << (synced ? "true" : "false") << "\n";
    return 0;
}

int cmd_threshold(const Args& args) {
    AppConfig cfg = load_config(args);
    Manifest manifest("threshold", args.get("out", "out"), cfg.seed);

    const ThresholdScenario scenario = make_scenario(cfg);
    const ThresholdResult result = find_threshold(scenario, cfg.g_lo, cfg.g_hi, cfg.resolution);

    {
        std::ofstream os = manifest.create("threshold", "threshold.csv");
        os << "g,synchronized,final_error\n";
        char buf[32];
        for (const auto& eval : result.evaluations) {
            std::snprintf(buf, sizeof(buf), "%.17g", eval.g);
            os << buf << ',' << (eval.synchronized ? 1 : 0) << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", eval.final_error);
            os << buf << '\n';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", result.g_star);
        os << "# g_star=" << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", result.bracket_lo_fail);
        os << " bracket_lo=" << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", result.bracket_hi_pass);
        os << " bracket_hi=" << buf
           << " exhaustive=" << (result.used_exhaustive_scan ? "true" : "false") << "\n";
    }
    manifest.finalize(cfg);
    std::cout << "threshold: g_star=" << result.g_star << " bracket=["
              << result.bracket_lo_fail << "," << result.bracket_hi_pass << "] evaluations="
              << result.evaluations.size() << "\n";
    return 0;
}

int cmd_sweep(const Args& args) {
    AppConfig cfg = load_config(args);
    Manifest manifest("sweep", args.get("out", "out"), cfg.seed);

    ThresholdScenario scenario = make_scenario(cfg);
    std::vector<SweepEntry> entries;
    std::string x_name;
    if (!cfg.p_list.empty()) {
        x_name = "p";
        entries = sweep_p(scenario, cfg.p_list, cfg.g_lo, cfg.g_hi, cfg.resolution);
    } else {
        x_name = "n";
        if (cfg.n_from > cfg.n_to) {
            throw std::invalid_argument("sweep: need n_from <= n_to");
        }
        std::vector<int> n_list;
        for (int n = cfg.n_from; n <= cfg.n_to; ++n) n_list.push_back(n);
        entries = sweep_n(scenario, n_list, cfg.g_lo, cfg.g_hi, cfg.resolution);
    }

    {
        std::ofstream os = manifest.create("sweep", "sweep.csv");
        write_sweep_csv(entries, os, x_name);
    }
    manifest.finalize(cfg);

    int failures = 0;
    for (const auto& e : entries) {
        if (!e.result) ++failures;
    }
    std::cout << "sweep: " << entries.size() << " points, " << failures << " failed\n";
    return failures == static_cast<int>(entries.size()) ? 1 : 0;
}

int cmd_alpha(const Args& args) {
    AppConfig cfg = load_config(args);
    if (!args.has("g") && !args.has("config")) {
        cfg.g = 1.0;  // unit weights: the alpha table itself is strength-free
    }
    Manifest manifest("alpha", args.get("out", "out"), cfg.seed);

    const CouplingMatrix G = build_coupling(cfg);
    const double a_const = cfg.effective_a_const();
    const ThresholdReport report = check_sync_condition(G, a_const, cfg.tie_break);

    {
        std::ofstream os = manifest.create("alpha", "alpha.csv");
        os << "k,l,epsilon_kl,alpha_kl,required_epsilon,margin\n";
        char buf[32];
        for (const auto& edge : report.edges) {
            os << edge.k << ',' << edge.l << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", edge.eps_kl);
            os << buf << ',' << edge.alpha_kl << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", edge.required);
            os << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.17g", edge.margin);
            os << buf << '\n';
        }
    }
    manifest.finalize(cfg);
    std::cout << "alpha: edges=" << report.edges.size() << " a_const=" << a_const
              << " satisfied=" << (report.satisfied ? "true" : "false") << "\n";
    return 0;
}

int cmd_fit(const Args& args) {
    if (!args.has("model") || !args.has("input")) {
        throw std::invalid_argument("fit needs --model and --input");
    }
    AppConfig cfg = load_config(args);
    Manifest manifest("fit", args.get("out", "out"), cfg.seed);

    const std::string model = args.get("model");
    std::istringstream table(read_file(args.get("input")));
    const auto points = read_sweep_points(table);

    FitResult fit;
    if (model == "inverse_n") {
        fit = fit_inverse_n(points);
    } else if (model == "quadratic") {
        fit = fit_quadratic(points);
    } else {
        throw std::invalid_argument("unknown fit model '" + model + "'");
    }

    {
        std::ofstream os = manifest.create("fit", "fit.csv");
        write_fit_csv(fit, os);
    }
    manifest.finalize(cfg);
    std::cout << "fit: model=" << model << " rmse=" << fit.rmse << " r2=" << fit.r_squared
              << "\n";
    return 0;
}

int cmd_validate(const Args& args) {
    if (!args.has("matrix")) {
        throw std::invalid_argument("validate needs --matrix");
    }
    const CouplingMatrix G = load_matrix(read_file(args.get("matrix")));
    std::cout << "validate: ok, n=" << G.n() << ", edges=" << symmetric_edges(G).size()
              << "\n";
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& argv) {
    apply_worker_env();
    Args args;
    try {
        args = parse_args(argv);
    } catch (const std::exception& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }
    if (args.subcommand.empty() || args.subcommand == "help" || args.subcommand == "--help") {
        std::cout << kUsage;
        return args.subcommand.empty() ? 2 : 0;
    }
    try {
        if (args.subcommand == "simulate") return cmd_simulate(args);
        if (args.subcommand == "threshold") return cmd_threshold(args);
        if (args.subcommand == "sweep") return cmd_sweep(args);
        if (args.subcommand == "alpha") return cmd_alpha(args);
        if (args.subcommand == "fit") return cmd_fit(args);
        if (args.subcommand == "validate") return cmd_validate(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: unknown subcommand '" << args.subcommand << "'\n" << kUsage;
    return 2;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args);
}

} // namespace rdsync::cli
