// Explicit time integration of the coupled network with stability guards,
// deterministic traces and snapshot production.
#pragma once

#include "rdsync/coupling.hpp"
#include "rdsync/diagnostics.hpp"
#include "rdsync/fhn.hpp"
#include "rdsync/state.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rdsync {

struct SimConfig {
    Grid grid{32, 32, 100.0, 100.0};
    FhnParams params{};
    ForcingProfile forcing{};
    CouplingMatrix coupling = CouplingMatrix::none(3);
    double dt = 0.005;
    double t_end = 300.0;
    InitialCondition ic{};
    std::uint64_t seed = 1;
    int record_every = 250;
    std::vector<double> snapshot_times;

    int n_nodes() const { return coupling.n(); }

    /// Checks positivity, the parameter invariants and the time-step guards.
    void validate() const;
};

/// Largest stable step for diffusion and reaction alone:
///   min( eps dx^2 dy^2 / (2 d_u (dx^2 + dy^2)),  eps/6 ) / 2
/// The first term is the diffusion CFL of the eps-scaled u-equation, the
/// second caps the reaction rate within the attractor envelope, and the
/// final factor 2 is the safety margin.
double stability_max_dt(const Grid& grid, const FhnParams& params);

/// Coupling-rate bound: eps / (2 max|c_ii|); infinite for an uncoupled
/// network.  Strong coupling, not the stencil, limits the step when the
/// sufficient-condition experiments push g far above the empirical
/// thresholds.
double coupling_max_dt(const CouplingMatrix& G, const FhnParams& params);

/// Effective limit: min of the two guards above.
double max_stable_dt(const Grid& grid, const FhnParams& params, const CouplingMatrix& G);

struct BlowupInfo {
    long long step = -1;
    int node = -1;
    double t = 0.0;
};

struct Snapshot {
    double time = 0.0;
    int node = 0;
    Field u;
    Field v;
};

struct RunResult {
    SyncTrace trace;
    std::vector<Snapshot> snapshots;
    std::optional<BlowupInfo> blowup;
    NetworkState final_state;
};

/// Forward-Euler stepper with the forcing field and the sparse coupling rows
/// precomputed.  One step sweeps the (node, row) blocks, writing into swap
/// buffers.  The sweep runs in parallel only above a work threshold, and the
/// kernel performs no floating-point reductions, so results are bitwise
/// independent of the worker count either way.
class Stepper {
public:
    explicit Stepper(const SimConfig& cfg);

    /// Advances state by dt (state.t untouched; callers own the clock).
    /// Returns the smallest node index that produced a non-finite sample,
    /// or -1 when all values stayed finite.
    int step(NetworkState& state);

private:
    FhnParams params_;
    double dt_;
    Field forcing_;
    std::vector<std::vector<std::pair<int, double>>> coupling_rows_;
    std::vector<Field> u_next_;
    std::vector<Field> v_next_;
    std::vector<unsigned char> row_ok_;
    std::vector<std::vector<double>> coupling_scratch_;  // one row per worker
    bool parallel_ = false;
};

/// Single forward-Euler step as a standalone operation; advances t by dt.
/// Throws on blow-up, naming the offending node.
NetworkState step_euler(const NetworkState& state, const SimConfig& cfg);

/// Integrates to t_end, sampling diagnostics every record_every steps (and at
/// the final step) and capturing snapshots at t = 0 and at each requested
/// time.  On blow-up the partial trace is retained and blowup is set.
/// Identical configs (seed included) produce bitwise-identical traces
/// regardless of the worker count.
RunResult run(const SimConfig& cfg);

} // namespace rdsync
