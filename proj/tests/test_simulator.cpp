#include <stdexcept>
#include <doctest.h>

#include "rdsync/simulator.hpp"

#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace rdsync;

namespace {

SimConfig small_config(int n = 3, double g = 0.0) {
    SimConfig cfg;
    cfg.grid = Grid(12, 12, 100.0, 100.0);
    cfg.coupling = g == 0.0 ? CouplingMatrix::none(n) : complete_network(n, g);
    cfg.dt = 0.005;
    cfg.t_end = 1.0;
    cfg.record_every = 20;
    return cfg;
}

} // namespace

TEST_CASE("stability bound reproduces its formula") {
    const Grid g(100, 100, 100.0, 100.0);  // dx = dy = 1
    const FhnParams p{};
    const double dx2 = 1.0, dy2 = 1.0;
    const double diffusion = p.eps * dx2 * dy2 / (2.0 * p.d_u * (dx2 + dy2));
    const double reaction = p.eps / 6.0;
    CHECK(stability_max_dt(g, p) == 0.5 * std::min(diffusion, reaction));
    CHECK(stability_max_dt(g, p) == doctest::Approx(0.1 / 12.0));
}

TEST_CASE("vanishing diffusion leaves the reaction bound") {
    Grid g(10, 10, 10.0, 10.0);
    FhnParams p{};
    p.d_u = 1e-12;
    CHECK(stability_max_dt(g, p) == doctest::Approx(0.5 * p.eps / 6.0));
}

TEST_CASE("halving dx quarters the diffusion part of the bound") {
    FhnParams p{};
    p.d_u = 50.0;  // make diffusion the binding term
    const double coarse = stability_max_dt(Grid(50, 50, 100.0, 100.0), p);
    const double fine = stability_max_dt(Grid(100, 100, 100.0, 100.0), p);
    CHECK(fine == doctest::Approx(coarse / 4.0));
}

TEST_CASE("coupling rate bound") {
    FhnParams p{};
    CHECK(std::isinf(coupling_max_dt(CouplingMatrix::none(3), p)));
    // complete n=3, g=10: |c_ii| = 20, bound = eps/40
    CHECK(coupling_max_dt(complete_network(3, 10.0), p) == doctest::Approx(0.1 / 40.0));
    CHECK(max_stable_dt(Grid(10, 10, 100.0, 100.0), p, complete_network(3, 10.0)) ==
          doctest::Approx(0.1 / 40.0));
}

TEST_CASE("config validation rejects unstable steps") {
    SimConfig cfg = small_config();
    cfg.dt = 1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("stability"), std::invalid_argument);
}

TEST_CASE("zero state is a fixed point") {
    SimConfig cfg = small_config(3, 0.02);
    cfg.ic.kind = InitialCondition::Kind::homogeneous;
    cfg.ic.u0 = {0.0};
    cfg.ic.v0 = {0.0};
    NetworkState s = make_initial(cfg.ic, cfg.grid, 3, cfg.seed);
    s = step_euler(s, cfg);
    CHECK(s.t == doctest::Approx(cfg.dt));
    for (const Field& f : s.u) {
        for (double v : f.values()) CHECK(v == 0.0);
    }
    for (const Field& f : s.v) {
        for (double v : f.values()) CHECK(v == 0.0);
    }
}

TEST_CASE("homogeneous single node follows the scalar recursion") {
    SimConfig cfg;
    cfg.grid = Grid(8, 8, 8.0, 8.0);
    cfg.coupling = CouplingMatrix::none(1);
    cfg.dt = 0.002;
    cfg.t_end = 1.0;
    cfg.ic.kind = InitialCondition::Kind::homogeneous;
    cfg.ic.u0 = {0.4};
    cfg.ic.v0 = {-0.2};

    NetworkState s = make_initial(cfg.ic, cfg.grid, 1, cfg.seed);
    Stepper stepper(cfg);
    double u = 0.4, v = -0.2;
    const FhnParams& p = cfg.params;
    for (int step = 0; step < 500; ++step) {
        stepper.step(s);
        const double du = (-u * u * u + 3.0 * u - v) / p.eps;
        const double dv = p.a_param * u - p.b_param * v;
        u += cfg.dt * du;
        v += cfg.dt * dv;
    }
    for (int c = 0; c < s.u[0].size(); ++c) {
        CHECK(std::abs(s.u[0].data()[c] - u) <= 1e-13);
        CHECK(std::abs(s.v[0].data()[c] - v) <= 1e-13);
    }
}

TEST_CASE("identical nodes stay bitwise identical under two-node coupling") {
    SimConfig cfg;
    cfg.grid = Grid(10, 10, 10.0, 10.0);
    cfg.coupling = complete_network(2, 0.35);
    cfg.dt = 0.002;
    cfg.ic.kind = InitialCondition::Kind::homogeneous;
    cfg.ic.u0 = {0.7, 0.7};
    cfg.ic.v0 = {-0.1, -0.1};
    NetworkState s = make_initial(cfg.ic, cfg.grid, 2, cfg.seed);
    // seed some spatial structure, same on both nodes
    for (int c = 0; c < s.u[0].size(); ++c) {
        s.u[0].data()[c] += 0.01 * (c % 7);
        s.u[1].data()[c] += 0.01 * (c % 7);
    }
    Stepper stepper(cfg);
    for (int step = 0; step < 200; ++step) stepper.step(s);
    CHECK(s.u[0].values() == s.u[1].values());
    CHECK(s.v[0].values() == s.v[1].values());
}

TEST_CASE("blow-up reports the offending node") {
    SimConfig cfg = small_config(2);
    cfg.coupling = CouplingMatrix::none(2);
    cfg.ic.kind = InitialCondition::Kind::homogeneous;
    cfg.ic.u0 = {0.1, 1e6};  // the cubic explodes within a few steps
    cfg.ic.v0 = {0.0, 0.0};
    cfg.record_every = 1;

    NetworkState s = make_initial(cfg.ic, cfg.grid, 2, cfg.seed);
    CHECK_THROWS_WITH_AS(
        [&] {
            for (int k = 0; k < 50; ++k) s = step_euler(s, cfg);
        }(),
        doctest::Contains("node 1"), std::runtime_error);

    RunResult r = run(cfg);
    REQUIRE(r.blowup.has_value());
    CHECK(r.blowup->node == 1);
    CHECK(r.blowup->step >= 1);
}

TEST_CASE("zero-length run produces the initial snapshot only") {
    SimConfig cfg = small_config();
    cfg.t_end = 0.0;
    RunResult r = run(cfg);
    CHECK(r.trace.samples.empty());
    CHECK(r.snapshots.size() == 3);  // one per node at t = 0
    for (const auto& snap : r.snapshots) CHECK(snap.time == 0.0);
}

TEST_CASE("snapshots appear at the requested times") {
    SimConfig cfg = small_config();
    cfg.t_end = 1.0;
    cfg.snapshot_times = {0.5, 1.0};
    RunResult r = run(cfg);
    CHECK(r.snapshots.size() == 9);  // t=0, t=0.5, t=1.0 for each of 3 nodes
}

TEST_CASE("initial conditions") {
    Grid g(10, 10, 100.0, 100.0);

    SUBCASE("homogeneous broadcasts and validates") {
        InitialCondition ic;
        ic.kind = InitialCondition::Kind::homogeneous;
        ic.u0 = {0.25};
        ic.v0 = {0.5, -0.5, 0.0};
        NetworkState s = make_initial(ic, g, 3, 9);
        CHECK(s.u[2].at(4, 4) == 0.25);
        CHECK(s.v[1].at(0, 0) == -0.5);
        ic.v0 = {0.5, -0.5};
        CHECK_THROWS_AS(make_initial(ic, g, 3, 9), std::invalid_argument);
    }

    SUBCASE("uniform random is reproducible and in range") {
        InitialCondition ic;
        NetworkState a = make_initial(ic, g, 3, 1234);
        NetworkState b = make_initial(ic, g, 3, 1234);
        NetworkState c = make_initial(ic, g, 3, 999);
        CHECK(a.u[2].values() == b.u[2].values());
        CHECK(a.v[1].values() == b.v[1].values());
        CHECK(a.u[0].values() != c.u[0].values());
        for (double v : a.u[0].values()) {
            CHECK(v >= -1.0);
            CHECK(v < 1.0);
        }
    }

    SUBCASE("spiral seed crosses half planes") {
        InitialCondition ic;
        ic.kind = InitialCondition::Kind::spiral_seed;
        NetworkState s = make_initial(ic, g, 1, 0);
        CHECK(s.u[0].at(2, 1) == 1.8);    // y below midline
        CHECK(s.u[0].at(2, 8) == -1.8);   // y above midline
        CHECK(s.v[0].at(1, 2) == 0.9);    // x left of midline
        CHECK(s.v[0].at(8, 2) == -0.9);   // x right of midline
    }

    SUBCASE("mixture splits nodes by the rounded percentage") {
        InitialCondition ic;
        ic.kind = InitialCondition::Kind::mixture;
        ic.p_percent = 50.0;
        NetworkState s = make_initial(ic, g, 20, 5);
        int random_nodes = 0;
        for (int node = 0; node < 20; ++node) {
            // homogeneous nodes are constant fields
            const auto& vals = s.u[node].values();
            const bool constant =
                std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[0]; });
            if (!constant) ++random_nodes;
        }
        CHECK(random_nodes == 10);
        // the homogeneous constants are distinct across nodes
        for (int a = 10; a < 20; ++a) {
            for (int b = a + 1; b < 20; ++b) {
                CHECK(s.u[a].at(0, 0) != s.u[b].at(0, 0));
            }
        }
        ic.p_percent = 101.0;
        CHECK_THROWS_AS(make_initial(ic, g, 20, 5), std::invalid_argument);
    }
}

TEST_CASE("trace sampling cadence") {
    SimConfig cfg = small_config();
    cfg.t_end = 1.0;  // 200 steps
    cfg.record_every = 20;
    RunResult r = run(cfg);
    CHECK(r.trace.samples.size() == 10);
    CHECK(r.trace.samples.front().t == doctest::Approx(0.1));
    CHECK(r.trace.samples.back().t == doctest::Approx(1.0));
}

TEST_CASE("worker count does not change the trace") {
#ifdef _OPENMP
    // large enough to cross the parallel threshold
    SimConfig cfg;
    cfg.grid = Grid(48, 48, 100.0, 100.0);
    cfg.coupling = complete_network(8, 0.02);
    cfg.dt = 0.005;
    cfg.t_end = 2.0;
    cfg.record_every = 50;
    cfg.ic.kind = InitialCondition::Kind::uniform_random;
    cfg.seed = 4242;

    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    RunResult serial = run(cfg);
    omp_set_num_threads(2);
    RunResult parallel = run(cfg);
    omp_set_num_threads(saved);

    REQUIRE(serial.trace.samples.size() == parallel.trace.samples.size());
    for (std::size_t k = 0; k < serial.trace.samples.size(); ++k) {
        CHECK(serial.trace.samples[k].e_total == parallel.trace.samples[k].e_total);
        CHECK(serial.trace.samples[k].lyapunov == parallel.trace.samples[k].lyapunov);
        CHECK(serial.trace.samples[k].max_abs_u == parallel.trace.samples[k].max_abs_u);
    }
    for (int node = 0; node < 8; ++node) {
        CHECK(serial.final_state.u[node].values() == parallel.final_state.u[node].values());
    }
#endif
}

TEST_CASE("energy norms settle into an IC-independent band") {
    // absorbing-set witness: the trailing-window peak of |u|_2^2 + |v|_2^2
    // lands within a factor two across initial-condition kinds
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int kind = 0; kind < 4; ++kind) {
        SimConfig cfg;
        cfg.grid = Grid(16, 16, 100.0, 100.0);
        cfg.coupling = complete_network(3, 0.02);
        cfg.dt = 0.005;
        cfg.t_end = 150.0;
        cfg.record_every = 100;
        cfg.seed = 1;
        cfg.ic.kind = static_cast<InitialCondition::Kind>(kind);
        cfg.ic.u0 = {0.5, -0.4, 1.1};
        cfg.ic.v0 = {0.1, 0.0, -0.2};
        RunResult r = run(cfg);
        REQUIRE_FALSE(r.blowup.has_value());
        double sup = 0.0;
        const auto& ss = r.trace.samples;
        for (std::size_t k = ss.size() * 4 / 5; k < ss.size(); ++k) {
            sup = std::max(sup, ss[k].l2_u * ss[k].l2_u + ss[k].l2_v * ss[k].l2_v);
        }
        lo = std::min(lo, sup);
        hi = std::max(hi, sup);
    }
    CHECK(hi <= 2.0 * lo);
}

TEST_CASE("halving the step barely moves the final error") {
    // two homogeneous nodes converging: the trajectory is smooth in dt
    auto final_error = [](double dt) {
        SimConfig cfg;
        cfg.grid = Grid(12, 12, 100.0, 100.0);
        cfg.coupling = complete_network(2, 0.02);
        cfg.dt = dt;
        cfg.t_end = 40.0;
        cfg.record_every = 100;
        cfg.ic.kind = InitialCondition::Kind::homogeneous;
        cfg.ic.u0 = {0.5, -0.4};
        cfg.ic.v0 = {0.1, -0.1};
        RunResult r = run(cfg);
        return r.trace.samples.back().e_total;
    };
    const double coarse = final_error(0.005);
    const double fine = final_error(0.0025);
    CHECK(std::abs(coarse - fine) / std::abs(fine) < 0.05);
}
