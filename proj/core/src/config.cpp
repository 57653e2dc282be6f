#include "rdsync/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rdsync {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<double> parse_list(const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::istringstream ls(value);
    std::string tok;
    while (std::getline(ls, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("config: non-numeric entry '" + tok + "' in " + key);
        }
    }
    return out;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
        if (i) out += ',';
        out += buf;
    }
    return out;
}

double to_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: expected a number for " + key + ", got '" + value + "'");
    }
}

long long to_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: expected an integer for " + key + ", got '" + value + "'");
    }
}

} // namespace

double AppConfig::effective_a_const() const {
    if (a_const > 0.0) return a_const;
    // Envelope M = 2 from the measured sup-norm bound of the attractor.
    return estimate_constant_a(params.eps, params.a_param, params.b_param, 2.0).a_const;
}

AppConfig parse_config(const std::string& text) {
    AppConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "grid.nx") cfg.nx = static_cast<int>(to_int(value, key));
        else if (key == "grid.ny") cfg.ny = static_cast<int>(to_int(value, key));
        else if (key == "grid.lx") cfg.lx = to_double(value, key);
        else if (key == "grid.ly") cfg.ly = to_double(value, key);
        else if (key == "fhn.eps") cfg.params.eps = to_double(value, key);
        else if (key == "fhn.d_u") cfg.params.d_u = to_double(value, key);
        else if (key == "fhn.a") cfg.params.a_param = to_double(value, key);
        else if (key == "fhn.b") cfg.params.b_param = to_double(value, key);
        else if (key == "forcing.kind") {
            if (value == "constant") cfg.forcing.kind = ForcingProfile::Kind::constant;
            else if (value == "excitable_window") cfg.forcing.kind = ForcingProfile::Kind::excitable_window;
            else throw std::invalid_argument("config: unknown forcing.kind '" + value + "'");
        }
        else if (key == "forcing.level") cfg.forcing.level = to_double(value, key);
        else if (key == "forcing.outside_level") cfg.forcing.outside_level = to_double(value, key);
        else if (key == "forcing.center_x") cfg.forcing.center_x = to_double(value, key);
        else if (key == "forcing.center_y") cfg.forcing.center_y = to_double(value, key);
        else if (key == "forcing.radius") cfg.forcing.radius = to_double(value, key);
        else if (key == "coupling.topology") {
            if (value == "complete") cfg.topology = Topology::complete;
            else if (value == "ring") cfg.topology = Topology::ring;
            else if (value == "file") cfg.topology = Topology::file;
            else throw std::invalid_argument("config: unknown coupling.topology '" + value + "'");
        }
        else if (key == "coupling.n") cfg.n = static_cast<int>(to_int(value, key));
        else if (key == "coupling.g") cfg.g = to_double(value, key);
        else if (key == "coupling.matrix_file") cfg.matrix_file = value;
        else if (key == "time.dt") cfg.dt = to_double(value, key);
        else if (key == "time.t_end") cfg.t_end = to_double(value, key);
        else if (key == "time.record_every") cfg.record_every = static_cast<int>(to_int(value, key));
        else if (key == "time.snapshot_times") cfg.snapshot_times = parse_list(value, key);
        else if (key == "ic.kind") {
            if (value == "homogeneous") cfg.ic.kind = InitialCondition::Kind::homogeneous;
            else if (value == "uniform_random") cfg.ic.kind = InitialCondition::Kind::uniform_random;
            else if (value == "spiral_seed") cfg.ic.kind = InitialCondition::Kind::spiral_seed;
            else if (value == "mixture") cfg.ic.kind = InitialCondition::Kind::mixture;
            else throw std::invalid_argument("config: unknown ic.kind '" + value + "'");
        }
        else if (key == "ic.u0") cfg.ic.u0 = parse_list(value, key);
        else if (key == "ic.v0") cfg.ic.v0 = parse_list(value, key);
        else if (key == "ic.lo") cfg.ic.lo = to_double(value, key);
        else if (key == "ic.hi") cfg.ic.hi = to_double(value, key);
        else if (key == "ic.p_percent") cfg.ic.p_percent = to_double(value, key);
        else if (key == "sync.tol_rel") cfg.sync_tol_rel = to_double(value, key);
        else if (key == "sync.window_frac") cfg.sync_window_frac = to_double(value, key);
        else if (key == "lab.g_lo") cfg.g_lo = to_double(value, key);
        else if (key == "lab.g_hi") cfg.g_hi = to_double(value, key);
        else if (key == "lab.resolution") cfg.resolution = to_double(value, key);
        else if (key == "lab.n_from") cfg.n_from = static_cast<int>(to_int(value, key));
        else if (key == "lab.n_to") cfg.n_to = static_cast<int>(to_int(value, key));
        else if (key == "lab.p_list") cfg.p_list = parse_list(value, key);
        else if (key == "lab.a_const") cfg.a_const = to_double(value, key);
        else if (key == "lab.tie_break") {
            if (value == "lexicographic") cfg.tie_break = TieBreak::lexicographic;
            else if (value == "ring_alternating") cfg.tie_break = TieBreak::ring_alternating;
            else throw std::invalid_argument("config: unknown lab.tie_break '" + value + "'");
        }
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(value, key));
        else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    // Validate what can be validated without touching the filesystem.
    const Grid grid = cfg.make_grid();
    cfg.params.validate();
    cfg.forcing.validate();
    if (cfg.n < 1) {
        throw std::invalid_argument("config: coupling.n must be >= 1");
    }
    if (!(cfg.dt > 0.0)) {
        throw std::invalid_argument("config: time.dt must be positive");
    }
    const double limit = stability_max_dt(grid, cfg.params);
    if (cfg.dt > limit) {
        throw std::invalid_argument("config: stability error, time.dt=" + std::to_string(cfg.dt) +
                                    " exceeds stability_max_dt=" + std::to_string(limit));
    }
    return cfg;
}

std::string emit_config(const AppConfig& cfg) {
    std::ostringstream os;
    char buf[32];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "# network simulation configuration\n";
    os << "grid.nx = " << cfg.nx << "\n";
    os << "grid.ny = " << cfg.ny << "\n";
    os << "grid.lx = " << num(cfg.lx) << "\n";
    os << "grid.ly = " << num(cfg.ly) << "\n";
    os << "fhn.eps = " << num(cfg.params.eps) << "\n";
    os << "fhn.d_u = " << num(cfg.params.d_u) << "\n";
    os << "fhn.a = " << num(cfg.params.a_param) << "\n";
    os << "fhn.b = " << num(cfg.params.b_param) << "\n";
    os << "forcing.kind = "
       << (cfg.forcing.kind == ForcingProfile::Kind::constant ? "constant" : "excitable_window")
       << "\n";
    os << "forcing.level = " << num(cfg.forcing.level) << "\n";
    os << "forcing.outside_level = " << num(cfg.forcing.outside_level) << "\n";
    os << "forcing.center_x = " << num(cfg.forcing.center_x) << "\n";
    os << "forcing.center_y = " << num(cfg.forcing.center_y) << "\n";
    os << "forcing.radius = " << num(cfg.forcing.radius) << "\n";
    os << "coupling.topology = "
       << (cfg.topology == Topology::complete ? "complete"
                                              : cfg.topology == Topology::ring ? "ring" : "file")
       << "\n";
    os << "coupling.n = " << cfg.n << "\n";
    os << "coupling.g = " << num(cfg.g) << "\n";
    if (!cfg.matrix_file.empty()) {
        os << "coupling.matrix_file = " << cfg.matrix_file << "\n";
    }
    os << "time.dt = " << num(cfg.dt) << "\n";
    os << "time.t_end = " << num(cfg.t_end) << "\n";
    os << "time.record_every = " << cfg.record_every << "\n";
    if (!cfg.snapshot_times.empty()) {
        os << "time.snapshot_times = " << format_list(cfg.snapshot_times) << "\n";
    }
    os << "ic.kind = ";
    switch (cfg.ic.kind) {
    case InitialCondition::Kind::homogeneous: os << "homogeneous"; break;
    case InitialCondition::Kind::uniform_random: os << "uniform_random"; break;
    case InitialCondition::Kind::spiral_seed: os << "spiral_seed"; break;
    case InitialCondition::Kind::mixture: os << "mixture"; break;
    }
    os << "\n";
    if (!cfg.ic.u0.empty()) os << "ic.u0 = " << format_list(cfg.ic.u0) << "\n";
    if (!cfg.ic.v0.empty()) os << "ic.v0 = " << format_list(cfg.ic.v0) << "\n";
    os << "ic.lo = " << num(cfg.ic.lo) << "\n";
    os << "ic.hi = " << num(cfg.ic.hi) << "\n";
    os << "ic.p_percent = " << num(cfg.ic.p_percent) << "\n";
    os << "sync.tol_rel = " << num(cfg.sync_tol_rel) << "\n";
    os << "sync.window_frac = " << num(cfg.sync_window_frac) << "\n";
    os << "lab.g_lo = " << num(cfg.g_lo) << "\n";
    os << "lab.g_hi = " << num(cfg.g_hi) << "\n";
    os << "lab.resolution = " << num(cfg.resolution) << "\n";
    os << "lab.n_from = " << cfg.n_from << "\n";
    os << "lab.n_to = " << cfg.n_to << "\n";
    if (!cfg.p_list.empty()) os << "lab.p_list = " << format_list(cfg.p_list) << "\n";
    os << "lab.a_const = " << num(cfg.a_const) << "\n";
    os << "lab.tie_break = "
       << (cfg.tie_break == TieBreak::lexicographic ? "lexicographic" : "ring_alternating")
       << "\n";
    os << "seed = " << cfg.seed << "\n";
    return os.str();
}

CouplingMatrix build_coupling(const AppConfig& cfg) {
    switch (cfg.topology) {
    case Topology::complete:
        return cfg.g == 0.0 ? CouplingMatrix::none(cfg.n) : complete_network(cfg.n, cfg.g);
    case Topology::ring:
        return cfg.g == 0.0 ? CouplingMatrix::none(cfg.n) : ring_unidirectional(cfg.n, cfg.g);
    case Topology::file: {
        if (cfg.matrix_file.empty()) {
            throw std::invalid_argument("config: file topology needs coupling.matrix_file");
        }
        std::ifstream in(cfg.matrix_file);
        if (!in) {
            throw std::runtime_error("cannot open matrix file: " + cfg.matrix_file);
        }
        std::ostringstream text;
        text << in.rdbuf();
        return load_matrix(text.str());
    }
    }
    throw std::logic_error("unreachable");
}

SimConfig make_sim_config(const AppConfig& cfg) {
    SimConfig sim;
    sim.grid = cfg.make_grid();
    sim.params = cfg.params;
    sim.forcing = cfg.forcing;
    sim.coupling = build_coupling(cfg);
    sim.dt = cfg.dt;
    sim.t_end = cfg.t_end;
    sim.ic = cfg.ic;
    sim.seed = cfg.seed;
    sim.record_every = cfg.record_every;
    sim.snapshot_times = cfg.snapshot_times;
    sim.validate();
    return sim;
}

ThresholdScenario make_scenario(const AppConfig& cfg) {
    ThresholdScenario scenario;
    scenario.topology = cfg.topology;
    scenario.n = cfg.n;
    scenario.grid = cfg.make_grid();
    scenario.params = cfg.params;
    scenario.forcing = cfg.forcing;
    scenario.ic = cfg.ic;
    scenario.seed = cfg.seed;
    scenario.dt = cfg.dt;
    scenario.t_end = cfg.t_end;
    scenario.record_every = cfg.record_every;
    scenario.sync_tol_rel = cfg.sync_tol_rel;
    scenario.sync_window_frac = cfg.sync_window_frac;
    if (cfg.topology == Topology::file) {
        scenario.pattern = build_coupling(cfg);
    }
    return scenario;
}

} // namespace rdsync
