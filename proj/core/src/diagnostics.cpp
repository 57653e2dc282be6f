#include "rdsync/diagnostics.hpp"

#include "rdsync/sync_theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rdsync {

namespace {

double l2_sq(const Field& f) {
    const double d = lq_norm(f, 2);
    return d * d;
}

double pair_dist_sq_u(const NetworkState& s, int i, int j) {
    const double du = l2_distance(s.u[i], s.u[j]);
    return du * du;
}

double pair_dist_sq_v(const NetworkState& s, int i, int j) {
    const double dv = l2_distance(s.v[i], s.v[j]);
    return dv * dv;
}

double sample_scale(const TraceSample& s) {
    return std::sqrt(s.l2_u * s.l2_u + s.l2_v * s.l2_v);
}

bool sample_passes(const TraceSample& s, double tol_rel) {
    return s.e_total <= tol_rel * std::max(1.0, sample_scale(s));
}

} // namespace

std::pair<double, std::vector<double>> sync_error(const NetworkState& state) {
    const int n = state.n();
    std::vector<double> pairs(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            pairs[pair_index(n, i, j)] =
                std::sqrt(pair_dist_sq_u(state, i, j) + pair_dist_sq_v(state, i, j));
        }
    }
    double total = 0.0;
    for (int i = 0; i + 1 < n; ++i) total += pairs[pair_index(n, i, i + 1)];
    return {total, std::move(pairs)};
}

double lyapunov_v(const NetworkState& state) {
    const int n = state.n();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            sum += pair_dist_sq_u(state, i, j) + pair_dist_sq_v(state, i, j);
        }
    }
    return 2.0 * sum;  // ordered pairs count each unordered pair twice
}

TraceSample sample_diagnostics(const NetworkState& state) {
    const int n = state.n();
    TraceSample s;
    s.t = state.t;

    auto [total, pairs] = sync_error(state);
    s.e_total = total;
    s.e_pairs = std::move(pairs);
    s.e_consecutive.resize(static_cast<std::size_t>(std::max(0, n - 1)));
    for (int i = 0; i + 1 < n; ++i) {
        s.e_consecutive[i] = s.e_pairs[pair_index(n, i, i + 1)];
    }
    s.e_total_u = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        s.e_total_u += std::sqrt(pair_dist_sq_u(state, i, i + 1));
    }

    double lyap = 0.0;
    for (double d : s.e_pairs) lyap += d * d;
    s.lyapunov = 2.0 * lyap;

    double l2u = 0.0, l2v = 0.0, h1u = 0.0, l4u4 = 0.0;
    for (int i = 0; i < n; ++i) {
        l2u += l2_sq(state.u[i]);
        l2v += l2_sq(state.v[i]);
        h1u += h1_seminorm_sq(state.u[i]);
        const double l4 = lq_norm(state.u[i], 4);
        l4u4 += l4 * l4 * l4 * l4;
        s.max_abs_u = std::max(s.max_abs_u, max_abs(state.u[i]));
    }
    s.l2_u = std::sqrt(l2u / n);
    s.l2_v = std::sqrt(l2v / n);
    s.h1_u = std::sqrt(h1u / n);
    s.l4_u = std::pow(l4u4 / n, 0.25);
    return s;
}

bool is_synchronized(const SyncTrace& trace, double tol_rel, double window_frac) {
    if (trace.empty()) {
        throw std::invalid_argument("is_synchronized: empty trace");
    }
    if (!(window_frac > 0.0) || window_frac > 1.0) {
        throw std::invalid_argument("is_synchronized: window_frac must be in (0,1]");
    }
    const std::size_t count = trace.samples.size();
    const std::size_t window =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(window_frac * count)));
    for (std::size_t k = count - window; k < count; ++k) {
        if (!sample_passes(trace.samples[k], tol_rel)) return false;
    }
    return true;
}

double first_crossing_time(const SyncTrace& trace, double tol_rel) {
    if (trace.empty()) {
        throw std::invalid_argument("first_crossing_time: empty trace");
    }
    double crossing = std::numeric_limits<double>::quiet_NaN();
    for (auto it = trace.samples.rbegin(); it != trace.samples.rend(); ++it) {
        if (!sample_passes(*it, tol_rel)) break;
        crossing = it->t;
    }
    return crossing;
}

void write_trace_csv(const SyncTrace& trace, std::ostream& os, double tol_rel,
                     double window_frac) {
    os << "t,e_total";
    for (int i = 0; i + 1 < trace.n; ++i) {
        os << ",e_" << i << "_" << (i + 1);
    }
    os << ",V,l2_u,l2_v,h1_u,max_abs_u,l4_u,e_u_total\n";
    char buf[32];
    auto put = [&os, &buf](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf << sep;
    };
    for (const auto& s : trace.samples) {
        put(s.t, ',');
        put(s.e_total, ',');
        for (double e : s.e_consecutive) put(e, ',');
        put(s.lyapunov, ',');
        put(s.l2_u, ',');
        put(s.l2_v, ',');
        put(s.h1_u, ',');
        put(s.max_abs_u, ',');
        put(s.l4_u, ',');
        put(s.e_total_u, '\n');
    }
    if (!trace.empty()) {
        const bool ok = is_synchronized(trace, tol_rel, window_frac);
        const double crossing = first_crossing_time(trace, tol_rel);
        os << "# is_synchronized=" << (ok ? "true" : "false") << " first_crossing_t=";
        std::snprintf(buf, sizeof(buf), "%.17g", crossing);
        os << buf << "\n";
    }
}

SyncTrace read_trace_csv(std::istream& is) {
    SyncTrace trace;
    std::string line;
    if (!std::getline(is, line)) {
        throw std::invalid_argument("read_trace_csv: empty input");
    }
    int columns = 1;
    for (char ch : line) {
        if (ch == ',') ++columns;
    }
    const int consecutive = columns - 9;  // t, e_total, <pairs>, V, 4 norms, l4, e_u
    if (consecutive < 0) {
        throw std::invalid_argument("read_trace_csv: malformed header");
    }
    trace.n = consecutive + 1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ls, tok, ',')) vals.push_back(std::stod(tok));
        if (static_cast<int>(vals.size()) != columns) {
            throw std::invalid_argument("read_trace_csv: row width does not match header");
        }
        TraceSample s;
        std::size_t k = 0;
        s.t = vals[k++];
        s.e_total = vals[k++];
        s.e_consecutive.assign(vals.begin() + k, vals.begin() + k + consecutive);
        k += consecutive;
        s.lyapunov = vals[k++];
        s.l2_u = vals[k++];
        s.l2_v = vals[k++];
        s.h1_u = vals[k++];
        s.max_abs_u = vals[k++];
        s.l4_u = vals[k++];
        s.e_total_u = vals[k++];
        trace.samples.push_back(std::move(s));
    }
    return trace;
}

} // namespace rdsync
