#include "rdsync/threshold_lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rdsync {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Evaluator {
    const ThresholdScenario& scenario;
    std::map<double, ThresholdEvaluation> cache{};
    std::vector<ThresholdEvaluation> order{};

    const ThresholdEvaluation& operator()(double g) {
        auto it = cache.find(g);
        if (it != cache.end()) return it->second;
        const SimConfig cfg = scenario.sim_config(g);
        RunResult result = run(cfg);
        if (result.blowup) {
            throw std::runtime_error("blow-up during threshold evaluation at g=" +
                                     std::to_string(g) + " (step " +
                                     std::to_string(result.blowup->step) + ", node " +
                                     std::to_string(result.blowup->node) + ")");
        }
        ThresholdEvaluation eval;
        eval.g = g;
        eval.synchronized = is_synchronized(result.trace, scenario.sync_tol_rel,
                                            scenario.sync_window_frac);
        eval.final_error = result.trace.empty() ? 0.0 : result.trace.samples.back().e_total;
        order.push_back(eval);
        return cache.emplace(g, eval).first->second;
    }
};

} // namespace

CouplingMatrix ThresholdScenario::coupling_for(double g) const {
    if (g < 0.0) {
        throw std::invalid_argument("coupling strength must be nonnegative");
    }
    switch (topology) {
    case Topology::complete:
        return g == 0.0 ? CouplingMatrix::none(n) : complete_network(n, g);
    case Topology::ring:
        return g == 0.0 ? CouplingMatrix::none(n) : ring_unidirectional(n, g);
    case Topology::file:
        if (!pattern) {
            throw std::invalid_argument("file topology needs a connectivity pattern");
        }
        return pattern->scaled(g);
    }
    throw std::logic_error("unreachable");
}

SimConfig ThresholdScenario::sim_config(double g) const {
    SimConfig cfg;
    cfg.grid = grid;
    cfg.params = params;
    cfg.forcing = forcing;
    cfg.coupling = coupling_for(g);
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.ic = ic;
    cfg.seed = seed;
    cfg.record_every = record_every;
    return cfg;
}

ThresholdResult find_threshold(const ThresholdScenario& scenario, double g_lo,
                               double g_hi, double resolution) {
    if (!(g_lo < g_hi)) {
        throw std::invalid_argument("find_threshold: need g_lo < g_hi");
    }
    if (!(resolution > 0.0)) {
        throw std::invalid_argument("find_threshold: resolution must be positive");
    }
    const auto start = Clock::now();
    Evaluator eval{scenario};

    const auto& lo_eval = eval(g_lo);
    const auto& hi_eval = eval(g_hi);
    if (lo_eval.synchronized || !hi_eval.synchronized) {
        throw std::runtime_error(
            "bracket error: g_lo=" + std::to_string(g_lo) +
            (lo_eval.synchronized ? " synchronizes" : " does not synchronize") +
            ", g_hi=" + std::to_string(g_hi) +
            (hi_eval.synchronized ? " synchronizes" : " does not synchronize") +
            "; widen the bracket");
    }

    double lo = g_lo;
    double hi = g_hi;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid).synchronized) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Bisection assumes a monotone response; confirm just below the found
    // threshold and fall back to the exhaustive scan on a contradiction.
    const double below = hi - resolution;
    if (below > g_lo && eval(below).synchronized) {
        ThresholdResult scanned = find_threshold_scan(scenario, g_lo, g_hi, resolution);
        scanned.used_exhaustive_scan = true;
        scanned.wall_time_s = seconds_since(start);
        return scanned;
    }

    ThresholdResult result;
    result.topology = scenario.topology;
    result.n = scenario.n;
    result.g_star = hi;
    result.bracket_lo_fail = lo;
    result.bracket_hi_pass = hi;
    result.evaluations = eval.order;
    result.wall_time_s = seconds_since(start);
    return result;
}

ThresholdResult find_threshold_scan(const ThresholdScenario& scenario, double g_lo,
                                    double g_hi, double resolution) {
    if (!(g_lo < g_hi) || !(resolution > 0.0)) {
        throw std::invalid_argument("find_threshold_scan: invalid bracket or resolution");
    }
    const auto start = Clock::now();
    Evaluator eval{scenario};
    if (eval(g_lo).synchronized) {
        throw std::runtime_error("bracket error: g_lo=" + std::to_string(g_lo) +
                                 " already synchronizes");
    }
    double prev = g_lo;
    const long long cells = std::llround(std::ceil((g_hi - g_lo) / resolution - 1e-12));
    for (long long k = 1; k <= cells; ++k) {
        const double g = std::min(g_lo + static_cast<double>(k) * resolution, g_hi);
        if (eval(g).synchronized) {
            ThresholdResult result;
            result.topology = scenario.topology;
            result.n = scenario.n;
            result.g_star = g;
            result.bracket_lo_fail = prev;
            result.bracket_hi_pass = g;
            result.evaluations = eval.order;
            result.wall_time_s = seconds_since(start);
            return result;
        }
        prev = g;
    }
    throw std::runtime_error("bracket error: no grid point up to g_hi=" +
                             std::to_string(g_hi) + " synchronizes");
}

std::vector<SweepEntry> sweep_n(const ThresholdScenario& base, const std::vector<int>& n_list,
                                double g_lo, double g_hi, double resolution) {
    if (n_list.empty()) {
        throw std::invalid_argument("sweep_n: empty node list");
    }
    std::vector<SweepEntry> entries;
    for (int n : n_list) {
        ThresholdScenario scenario = base;
        scenario.n = n;
        SweepEntry entry;
        entry.x = n;
        try {
            entry.result = find_threshold(scenario, g_lo, g_hi, resolution);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<SweepEntry> sweep_p(const ThresholdScenario& base,
                                const std::vector<double>& p_list, double g_lo,
                                double g_hi, double resolution) {
    if (p_list.empty()) {
        throw std::invalid_argument("sweep_p: empty percentage list");
    }
    std::vector<SweepEntry> entries;
    for (double p : p_list) {
        ThresholdScenario scenario = base;
        scenario.ic.kind = InitialCondition::Kind::mixture;
        scenario.ic.p_percent = p;
        SweepEntry entry;
        entry.x = p;
        try {
            entry.result = find_threshold(scenario, g_lo, g_hi, resolution);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

namespace {

double sum_sq_residuals(const std::vector<std::pair<double, double>>& points,
                        const std::vector<double>& pred) {
    double ss = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = points[i].second - pred[i];
        ss += r * r;
    }
    return ss;
}

void finish_fit(FitResult& fit, const std::vector<std::pair<double, double>>& points,
                const std::vector<double>& pred) {
    const double ss_res = sum_sq_residuals(points, pred);
    double mean = 0.0;
    for (const auto& p : points) mean += p.second;
    mean /= static_cast<double>(points.size());
    double ss_tot = 0.0;
    for (const auto& p : points) ss_tot += (p.second - mean) * (p.second - mean);
    fit.rmse = std::sqrt(ss_res / static_cast<double>(points.size()));
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
}

int distinct_count(const std::vector<std::pair<double, double>>& points) {
    std::vector<double> xs;
    for (const auto& p : points) xs.push_back(p.first);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return static_cast<int>(xs.size());
}

} // namespace

FitResult fit_inverse_n(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) {
        throw std::invalid_argument("fit_inverse_n: insufficient data, need >= 2 points");
    }
    if (distinct_count(points) < 2) {
        throw std::invalid_argument("fit_inverse_n: insufficient rank, regressor 1/n is constant");
    }
    const double m = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [n, g] : points) {
        const double x = 1.0 / n;
        sx += x;
        sy += g;
        sxx += x * x;
        sxy += x * g;
    }
    const double det = m * sxx - sx * sx;
    if (!(std::abs(det) > 1e-30)) {
        throw std::invalid_argument("fit_inverse_n: insufficient rank, degenerate regressor");
    }
    const double alpha = (m * sxy - sx * sy) / det;
    const double beta = (sy - alpha * sx) / m;

    FitResult fit;
    fit.model = FitModel::inverse_n;
    fit.coefficients = {alpha, beta};
    std::vector<double> pred;
    pred.reserve(points.size());
    for (const auto& [n, g] : points) pred.push_back(alpha / n + beta);
    finish_fit(fit, points, pred);
    return fit;
}

FitResult fit_quadratic(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3 || distinct_count(points) < 3) {
        throw std::invalid_argument("fit_quadratic: insufficient data, need >= 3 distinct x");
    }
    // Normal equations for [a b c] over the monomials x^2, x, 1.
    double s[5] = {0, 0, 0, 0, 0};  // sums of x^k
    double t0 = 0.0, t1 = 0.0, t2 = 0.0;
    for (const auto& [x, g] : points) {
        double xk = 1.0;
        for (int k = 0; k <= 4; ++k) {
            s[k] += xk;
            xk *= x;
        }
        t0 += g;
        t1 += g * x;
        t2 += g * x * x;
    }
    double A[3][4] = {
        {s[4], s[3], s[2], t2},
        {s[3], s[2], s[1], t1},
        {s[2], s[1], s[0], t0},
    };
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        }
        if (std::abs(A[pivot][col]) < 1e-30) {
            throw std::invalid_argument("fit_quadratic: insufficient rank in normal equations");
        }
        std::swap(A[col], A[pivot]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
        }
    }
    const double a = A[0][3] / A[0][0];
    const double b = A[1][3] / A[1][1];
    const double c = A[2][3] / A[2][2];

    FitResult fit;
    fit.model = FitModel::quadratic;
    fit.coefficients = {a, b, c};
    std::vector<double> pred;
    pred.reserve(points.size());
    for (const auto& [x, g] : points) pred.push_back(a * x * x + b * x + c);
    finish_fit(fit, points, pred);
    return fit;
}

void write_sweep_csv(const std::vector<SweepEntry>& entries, std::ostream& os,
                     const std::string& x_name) {
    os << x_name << ",g_star,bracket_lo,bracket_hi,evaluations,wall_time\n";
    char buf[32];
    auto put = [&os, &buf](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf << sep;
    };
    for (const auto& e : entries) {
        if (!e.result) {
            std::snprintf(buf, sizeof(buf), "%.17g", e.x);
            os << "# " << x_name << "=" << buf << " failed: " << e.error << "\n";
            continue;
        }
        put(e.x, ',');
        put(e.result->g_star, ',');
        put(e.result->bracket_lo_fail, ',');
        put(e.result->bracket_hi_pass, ',');
        os << e.result->evaluations.size() << ',';
        put(e.result->wall_time_s, '\n');
    }
}

std::vector<std::pair<double, double>> read_sweep_points(std::istream& is) {
    std::vector<std::pair<double, double>> points;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {  // header
            first = false;
            continue;
        }
        std::istringstream ls(line);
        std::string xs, gs;
        if (!std::getline(ls, xs, ',') || !std::getline(ls, gs, ',')) continue;
        try {
            points.emplace_back(std::stod(xs), std::stod(gs));
        } catch (const std::exception&) {
            throw std::invalid_argument("read_sweep_points: non-numeric row '" + line + "'");
        }
    }
    return points;
}

void write_fit_csv(const FitResult& fit, std::ostream& os) {
    os << "model,c0,c1,c2,rmse,r_squared\n";
    os << (fit.model == FitModel::inverse_n ? "inverse_n" : "quadratic");
    char buf[32];
    for (std::size_t k = 0; k < 3; ++k) {
        os << ',';
        if (k < fit.coefficients.size()) {
            std::snprintf(buf, sizeof(buf), "%.17g", fit.coefficients[k]);
            os << buf;
        }
    }
    std::snprintf(buf, sizeof(buf), "%.17g", fit.rmse);
    os << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.17g", fit.r_squared);
    os << ',' << buf << '\n';
}

} // namespace rdsync
