#include <stdexcept>
#include <doctest.h>

#include "rdsync/fhn.hpp"
#include "rdsync/state.hpp"

#include <cmath>

using namespace rdsync;

namespace {

Field random_field(const Grid& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    Field f(g);
    for (int c = 0; c < f.size(); ++c) {
        f.data()[c] = detail::uniform_sample(seed, static_cast<std::uint64_t>(c), lo, hi);
    }
    return f;
}

const FhnParams kReferenceParams{};  // eps=0.1, d_u=0.05, a=1, b=0.001

} // namespace

TEST_CASE("origin is a reaction equilibrium") {
    Grid g(8, 8, 8.0, 8.0);
    auto [du, dv] = reaction_rhs(Field(g), Field(g), kReferenceParams, Field(g));
    for (double v : du.values()) CHECK(v == 0.0);
    for (double v : dv.values()) CHECK(v == 0.0);
}

TEST_CASE("reaction values for constant states") {
    Grid g(8, 8, 8.0, 8.0);
    auto [du, dv] = reaction_rhs(Field(g, 1.0), Field(g, 0.0), kReferenceParams, Field(g));
    for (double v : du.values()) CHECK(v == doctest::Approx(20.0).epsilon(1e-13));
    for (double v : dv.values()) CHECK(v == doctest::Approx(1.0));

    // cubic nullcline root: -u^3 + 3u = 0 at u = sqrt(3)
    auto [du2, dv2] =
        reaction_rhs(Field(g, std::sqrt(3.0)), Field(g, 0.0), kReferenceParams, Field(g));
    for (double v : du2.values()) CHECK(std::abs(v) <= 1e-13);
}

TEST_CASE("reaction is odd when the drive vanishes") {
    Grid g(9, 7, 5.0, 4.0);
    Field u = random_field(g, 21);
    Field v = random_field(g, 22);
    Field nu(g), nv(g);
    for (int c = 0; c < u.size(); ++c) {
        nu.data()[c] = -u.data()[c];
        nv.data()[c] = -v.data()[c];
    }
    auto [du, dv] = reaction_rhs(u, v, kReferenceParams, Field(g));
    auto [ndu, ndv] = reaction_rhs(nu, nv, kReferenceParams, Field(g));
    for (int c = 0; c < u.size(); ++c) {
        CHECK(ndu.data()[c] == -du.data()[c]);
        CHECK(ndv.data()[c] == -dv.data()[c]);
    }
}

TEST_CASE("reaction rejects mismatched grids") {
    Grid g(8, 8, 8.0, 8.0);
    CHECK_THROWS_AS(reaction_rhs(Field(g), Field(Grid(8, 8, 4.0, 8.0)), kReferenceParams, Field(g)),
                    std::invalid_argument);
}

TEST_CASE("coupling vanishes on the synchronized manifold") {
    Grid g(6, 6, 6.0, 6.0);
    Field u = random_field(g, 31);
    std::vector<Field> nodes{u, u, u, u};
    CouplingMatrix G = complete_network(4, 0.7);
    auto inc = coupling_rhs(nodes, G, 0.1);
    for (const Field& f : inc) {
        for (double v : f.values()) CHECK(std::abs(v) <= 1e-13);
    }
}

TEST_CASE("two-node coupling expansion") {
    Grid g(6, 6, 6.0, 6.0);
    Field u0 = random_field(g, 41);
    Field u1 = random_field(g, 42);
    const double gc = 0.3, eps = 0.1;
    auto inc = coupling_rhs({u0, u1}, complete_network(2, gc), eps);
    for (int c = 0; c < u0.size(); ++c) {
        const double expect = gc * (u1.data()[c] - u0.data()[c]) / eps;
        CHECK(inc[0].data()[c] == doctest::Approx(expect).epsilon(1e-13));
        CHECK(inc[1].data()[c] == doctest::Approx(-expect).epsilon(1e-13));
    }
}

TEST_CASE("coupling matches the dense double loop") {
    Grid g(5, 7, 5.0, 7.0);
    const int n = 4;
    std::vector<Field> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(random_field(g, 50 + i));
    CouplingMatrix G = ring_unidirectional(n, 0.6);
    const double eps = 0.25;
    auto inc = coupling_rhs(nodes, G, eps);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < nodes[0].size(); ++c) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += G.at(i, k) * nodes[k].data()[c];
            CHECK(inc[i].data()[c] == doctest::Approx(s / eps).epsilon(1e-13));
        }
    }
}

TEST_CASE("coupling conserves the node sum pointwise") {
    Grid g(5, 5, 5.0, 5.0);
    const int n = 5;
    std::vector<Field> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(random_field(g, 70 + i));
    auto inc = coupling_rhs(nodes, complete_network(n, 0.45), 0.1);
    for (int c = 0; c < nodes[0].size(); ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += inc[i].data()[c];
        CHECK(std::abs(s) <= 1e-12);
    }
}

TEST_CASE("full right-hand side is identical across synchronized nodes") {
    Grid g(6, 6, 6.0, 6.0);
    Field u = random_field(g, 81);
    Field v = random_field(g, 82);
    CouplingMatrix G = complete_network(3, 0.45);
    std::vector<Field> us{u, u, u};
    auto inc = coupling_rhs(us, G, kReferenceParams.eps);
    auto [du, dv] = reaction_rhs(u, v, kReferenceParams, Field(g));
    for (int i = 0; i < 3; ++i) {
        for (int c = 0; c < u.size(); ++c) {
            const double total_i = du.data()[c] + inc[i].data()[c];
            const double total_0 = du.data()[c] + inc[0].data()[c];
            CHECK(std::abs(total_i - total_0) <= 1e-12 * (1.0 + std::abs(total_0)));
        }
    }
}

TEST_CASE("forcing profiles") {
    Grid g(100, 100, 100.0, 100.0);
    Field zero = evaluate_forcing(ForcingProfile{}, g);
    for (double v : zero.values()) CHECK(v == 0.0);

    ForcingProfile window;
    window.kind = ForcingProfile::Kind::excitable_window;
    window.level = 0.0;
    window.outside_level = -1.1;
    window.center_x = 50.0;
    window.center_y = 50.0;
    window.radius = 5.0;
    Field c = evaluate_forcing(window, g);

    int inside = 0, brute = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.x_center(i) - 50.0;
            const double dy = g.y_center(j) - 50.0;
            if (dx * dx + dy * dy <= 25.0) ++brute;
            if (c.at(i, j) == 0.0) {
                ++inside;
            } else {
                CHECK(c.at(i, j) == -1.1);
            }
        }
    }
    CHECK(inside == brute);
    CHECK(brute == doctest::Approx(M_PI * 25.0).epsilon(0.15));  // ~79 cells

    window.radius = 1000.0;  // covers the whole domain
    Field full = evaluate_forcing(window, g);
    for (double v : full.values()) CHECK(v == 0.0);

    window.radius = 0.0;
    CHECK_THROWS_AS(evaluate_forcing(window, g), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    FhnParams p;
    p.eps = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(coupling_rhs({}, complete_network(2, 1.0), 1.0), std::invalid_argument);
}
