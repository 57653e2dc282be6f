#include "rdsync/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rdsync {

double stability_max_dt(const Grid& grid, const FhnParams& params) {
    const double dx2 = grid.dx() * grid.dx();
    const double dy2 = grid.dy() * grid.dy();
    const double diffusion = params.eps * dx2 * dy2 / (2.0 * params.d_u * (dx2 + dy2));
    const double reaction = params.eps / 6.0;
    return 0.5 * std::min(diffusion, reaction);
}

double coupling_max_dt(const CouplingMatrix& G, const FhnParams& params) {
    const double rate = G.max_abs_diagonal();
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return params.eps / (2.0 * rate);
}

double max_stable_dt(const Grid& grid, const FhnParams& params, const CouplingMatrix& G) {
    return std::min(stability_max_dt(grid, params), coupling_max_dt(G, params));
}

void SimConfig::validate() const {
    params.validate();
    forcing.validate();
    ic.validate(n_nodes());
    if (!(dt > 0.0)) {
        throw std::invalid_argument("SimConfig: dt must be positive");
    }
    if (t_end < 0.0) {
        throw std::invalid_argument("SimConfig: t_end must be nonnegative");
    }
    if (record_every < 1) {
        throw std::invalid_argument("SimConfig: record_every must be >= 1");
    }
    const double limit = max_stable_dt(grid, params, coupling);
    if (dt > limit) {
        throw std::invalid_argument("SimConfig: stability error, dt=" + std::to_string(dt) +
                                    " exceeds the stable limit " + std::to_string(limit) +
                                    " (stability_max_dt=" +
                                    std::to_string(stability_max_dt(grid, params)) + ")");
    }
}

namespace {

// Work below this many cells is not worth a fork/join per step.
constexpr long long kParallelCellThreshold = 16384;

} // namespace

Stepper::Stepper(const SimConfig& cfg)
    : params_(cfg.params), dt_(cfg.dt),
      forcing_(evaluate_forcing(cfg.forcing, cfg.grid)) {
    const int n = cfg.n_nodes();
    coupling_rows_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double w = cfg.coupling.at(i, k);
            if (w != 0.0) coupling_rows_[i].emplace_back(k, w);
        }
    }
    u_next_.reserve(n);
    v_next_.reserve(n);
    for (int i = 0; i < n; ++i) {
        u_next_.emplace_back(cfg.grid);
        v_next_.emplace_back(cfg.grid);
    }
    row_ok_.assign(static_cast<std::size_t>(n) * cfg.grid.ny, 1);
    parallel_ = static_cast<long long>(n) * cfg.grid.cell_count() >= kParallelCellThreshold;
    int workers = 1;
#ifdef _OPENMP
    workers = omp_get_max_threads();
#endif
    coupling_scratch_.assign(static_cast<std::size_t>(workers),
                             std::vector<double>(static_cast<std::size_t>(cfg.grid.nx), 0.0));
}

int Stepper::step(NetworkState& state) {
    const int n = state.n();
    const Grid& g = state.grid;
    const int nx = g.nx;
    const int ny = g.ny;
    const double inv_dx2 = 1.0 / (g.dx() * g.dx());
    const double inv_dy2 = 1.0 / (g.dy() * g.dy());
    const double inv_eps = 1.0 / params_.eps;
    const double d_u = params_.d_u;
    const double a = params_.a_param;
    const double b = params_.b_param;
    const double dt = dt_;
    const long long total_rows = static_cast<long long>(n) * ny;

    // Gather raw pointers once; the parallel body must not touch the vectors.
    std::vector<const double*> usrc(n), vsrc(n);
    std::vector<double*> udst(n), vdst(n);
    for (int i = 0; i < n; ++i) {
        usrc[i] = state.u[i].data();
        vsrc[i] = state.v[i].data();
        udst[i] = u_next_[i].data();
        vdst[i] = v_next_[i].data();
    }
    const double* cfield = forcing_.data();

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel_)
#endif
    for (long long r = 0; r < total_rows; ++r) {
        const int node = static_cast<int>(r / ny);
        const int j = static_cast<int>(r % ny);
        const int jm = j > 0 ? j - 1 : 0;
        const int jp = j < ny - 1 ? j + 1 : ny - 1;
        const std::size_t off = static_cast<std::size_t>(j) * nx;
        const double* uc = usrc[node] + off;
        const double* um = usrc[node] + static_cast<std::size_t>(jm) * nx;
        const double* up = usrc[node] + static_cast<std::size_t>(jp) * nx;
        const double* vc = vsrc[node] + off;
        const double* cc = cfield + off;
        double* uo = udst[node] + off;
        double* vo = vdst[node] + off;

        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        // Coupling sums accumulate entry by entry, in the fixed row order,
        // so the per-cell result does not depend on the worker layout.
        double* coup = coupling_scratch_[static_cast<std::size_t>(tid)].data();
        std::fill(coup, coup + nx, 0.0);
        for (const auto& [k, w] : coupling_rows_[node]) {
            const double* src = usrc[k] + off;
            for (int i = 0; i < nx; ++i) coup[i] += w * src[i];
        }

        auto update = [&](int i, int im, int ip) {
            const double u = uc[i];
            const double lap = (uc[ip] - 2.0 * u + uc[im]) * inv_dx2 +
                               (up[i] - 2.0 * u + um[i]) * inv_dy2;
            const double du = (d_u * lap - u * u * u + 3.0 * u - vc[i] + coup[i]) * inv_eps;
            uo[i] = u + dt * du;
            vo[i] = vc[i] + dt * (a * u - b * vc[i] + cc[i]);
        };
        update(0, 0, nx > 1 ? 1 : 0);
#ifdef _OPENMP
#pragma omp simd
#endif
        for (int i = 1; i < nx - 1; ++i) {
            const double u = uc[i];
            const double lap = (uc[i + 1] - 2.0 * u + uc[i - 1]) * inv_dx2 +
                               (up[i] - 2.0 * u + um[i]) * inv_dy2;
            const double du = (d_u * lap - u * u * u + 3.0 * u - vc[i] + coup[i]) * inv_eps;
            uo[i] = u + dt * du;
            vo[i] = vc[i] + dt * (a * u - b * vc[i] + cc[i]);
        }
        if (nx > 1) update(nx - 1, nx - 2, nx - 1);

        // finite - finite = 0; any NaN or Inf poisons the canary.
        double canary = 0.0;
#ifdef _OPENMP
#pragma omp simd reduction(+ : canary)
#endif
        for (int i = 0; i < nx; ++i) {
            canary += (uo[i] - uo[i]) + (vo[i] - vo[i]);
        }
        row_ok_[static_cast<std::size_t>(r)] = canary == 0.0 ? 1 : 0;
    }

    int bad_node = -1;
    for (long long r = 0; r < total_rows; ++r) {
        if (!row_ok_[static_cast<std::size_t>(r)]) {
            bad_node = static_cast<int>(r / ny);
            break;
        }
    }
    for (int i = 0; i < n; ++i) {
        state.u[i].values().swap(u_next_[i].values());
        state.v[i].values().swap(v_next_[i].values());
    }
    return bad_node;
}

NetworkState step_euler(const NetworkState& state, const SimConfig& cfg) {
    cfg.validate();
    if (state.n() != cfg.n_nodes() || !(state.grid == cfg.grid)) {
        throw std::invalid_argument("step_euler: state does not match the configuration");
    }
    NetworkState next = state;
    Stepper stepper(cfg);
    const int bad = stepper.step(next);
    if (bad >= 0) {
        throw std::runtime_error("blow-up: non-finite values in node " + std::to_string(bad) +
                                 " after one step from t=" + std::to_string(state.t));
    }
    next.t = state.t + cfg.dt;
    return next;
}

RunResult run(const SimConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_nodes();

    RunResult out;
    out.trace.n = n;
    out.final_state = make_initial(cfg.ic, cfg.grid, n, cfg.seed);
    NetworkState& state = out.final_state;

    auto capture = [&out, &state](double time) {
        for (int node = 0; node < state.n(); ++node) {
            out.snapshots.push_back(Snapshot{time, node, state.u[node], state.v[node]});
        }
    };
    capture(0.0);

    const long long total_steps =
        cfg.t_end <= 0.0 ? 0
                         : std::max<long long>(1, std::llround(cfg.t_end / cfg.dt));
    std::vector<double> wanted = cfg.snapshot_times;
    std::sort(wanted.begin(), wanted.end());
    std::size_t next_snapshot = 0;
    while (next_snapshot < wanted.size() && wanted[next_snapshot] <= 0.0) {
        ++next_snapshot;  // t=0 is always captured
    }

    Stepper stepper(cfg);
    for (long long s = 1; s <= total_steps; ++s) {
        const int bad = stepper.step(state);
        state.t = static_cast<double>(s) * cfg.dt;
        if (bad >= 0) {
            out.blowup = BlowupInfo{s, bad, state.t};
            return out;
        }
        if (s % cfg.record_every == 0 || s == total_steps) {
            out.trace.samples.push_back(sample_diagnostics(state));
        }
        bool snapshot_here = false;
        while (next_snapshot < wanted.size() &&
               (state.t >= wanted[next_snapshot] - 1e-12 || s == total_steps)) {
            snapshot_here = true;
            ++next_snapshot;
        }
        if (snapshot_here) capture(state.t);
    }
    return out;
}

} // namespace rdsync
