// Synchronization metrics, the pairwise Lyapunov sum and energy monitors.
#pragma once

#include "rdsync/state.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace rdsync {

/// One trace sample.  Pair errors use the full node states U = (u, v):
/// |U_i - U_j| = sqrt(|u_i - u_j|_2^2 + |v_i - v_j|_2^2).  Norms are
/// quadratic means over nodes (max_abs_u is the max); the energy monitors
/// of the absorbing-set bounds are their squares (fourth power for l4_u).
struct TraceSample {
    double t = 0.0;
    double e_total = 0.0;                 // sum over consecutive pairs
    double e_total_u = 0.0;               // same but u components only
    std::vector<double> e_consecutive;    // n-1 entries
    std::vector<double> e_pairs;          // all i<j, pair_index order
    double lyapunov = 0.0;
    double l2_u = 0.0;
    double l2_v = 0.0;
    double h1_u = 0.0;
    double l4_u = 0.0;
    double max_abs_u = 0.0;
};

struct SyncTrace {
    int n = 0;
    std::vector<TraceSample> samples;

    bool empty() const { return samples.empty(); }
};

/// Total consecutive-pair error and the full i<j pair matrix (flattened).
std::pair<double, std::vector<double>> sync_error(const NetworkState& state);

/// Sum over ordered node pairs of the squared L2 norms of the u and v
/// differences; twice the sum over unordered pairs.
double lyapunov_v(const NetworkState& state);

TraceSample sample_diagnostics(const NetworkState& state);

/// Finite-run synchronization predicate: every sample in the trailing
/// window_frac of the trace must satisfy
///     e_total <= tol_rel * max(1, state scale)
/// with the state scale sqrt(l2_u_sq + l2_v_sq).  Throws on an empty trace.
bool is_synchronized(const SyncTrace& trace, double tol_rel = 1e-3,
                     double window_frac = 0.1);

/// Earliest sample time from which the predicate holds through the end of
/// the trace; NaN when the final sample fails it.
double first_crossing_time(const SyncTrace& trace, double tol_rel = 1e-3);

/// Columns: t, e_total, e_i_i+1 per consecutive pair, V, l2_u, l2_v, h1_u,
/// max_abs_u, then l4_u and e_u_total.  The synchronization verdict and
/// first-crossing time go into a trailing comment line.
void write_trace_csv(const SyncTrace& trace, std::ostream& os,
                     double tol_rel = 1e-3, double window_frac = 0.1);

SyncTrace read_trace_csv(std::istream& is);

} // namespace rdsync
