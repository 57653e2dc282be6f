#include "rdsync/state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rdsync {

namespace detail {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

double uniform_sample(std::uint64_t seed, std::uint64_t stream, double lo, double hi) {
    const std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
    return lo + (hi - lo) * ((h >> 11) * 0x1.0p-53);
}

} // namespace detail

void InitialCondition::validate(int n) const {
    if (kind == Kind::homogeneous) {
        if (u0.empty() || v0.empty()) {
            throw std::invalid_argument("InitialCondition: homogeneous needs u0 and v0 values");
        }
        if ((u0.size() != 1 && u0.size() != static_cast<std::size_t>(n)) ||
            (v0.size() != 1 && v0.size() != static_cast<std::size_t>(n))) {
            throw std::invalid_argument(
                "InitialCondition: homogeneous constants must have 1 or n entries");
        }
    }
    if (kind == Kind::uniform_random && !(lo < hi)) {
        throw std::invalid_argument("InitialCondition: need lo < hi");
    }
    if (kind == Kind::mixture && (p_percent < 0.0 || p_percent > 100.0)) {
        throw std::invalid_argument("InitialCondition: mixture percentage must be in [0,100]");
    }
}

namespace {

void fill_uniform(Field& u, Field& v, int node, std::uint64_t seed, double lo, double hi) {
    const int count = u.size();
    for (int cell = 0; cell < count; ++cell) {
        u.data()[cell] = detail::uniform_sample(seed, detail::draw_stream(node, cell, 0), lo, hi);
        v.data()[cell] = detail::uniform_sample(seed, detail::draw_stream(node, cell, 1), lo, hi);
    }
}

void fill_spiral_seed(Field& u, Field& v) {
    const Grid& g = u.grid();
    for (int j = 0; j < g.ny; ++j) {
        const double uy = g.y_center(j) < 0.5 * g.ly ? 1.8 : -1.8;
        for (int i = 0; i < g.nx; ++i) {
            u.at(i, j) = uy;
            v.at(i, j) = g.x_center(i) < 0.5 * g.lx ? 0.9 : -0.9;
        }
    }
}

double mixture_u0(int node, int n) { return -1.0 + 2.0 * (node + 1) / (n + 1); }

} // namespace

NetworkState make_initial(const InitialCondition& ic, const Grid& grid, int n,
                          std::uint64_t seed) {
    if (n < 1) {
        throw std::invalid_argument("make_initial: need at least one node");
    }
    ic.validate(n);

    NetworkState state;
    state.grid = grid;
    state.t = 0.0;
    state.u.reserve(n);
    state.v.reserve(n);
    for (int node = 0; node < n; ++node) {
        state.u.emplace_back(grid);
        state.v.emplace_back(grid);
    }

    switch (ic.kind) {
    case InitialCondition::Kind::homogeneous:
        for (int node = 0; node < n; ++node) {
            const double cu = ic.u0[ic.u0.size() == 1 ? 0 : node];
            const double cv = ic.v0[ic.v0.size() == 1 ? 0 : node];
            state.u[node] = Field(grid, cu);
            state.v[node] = Field(grid, cv);
        }
        break;
    case InitialCondition::Kind::uniform_random:
        for (int node = 0; node < n; ++node) {
            fill_uniform(state.u[node], state.v[node], node, seed, ic.lo, ic.hi);
        }
        break;
    case InitialCondition::Kind::spiral_seed:
        for (int node = 0; node < n; ++node) {
            fill_spiral_seed(state.u[node], state.v[node]);
        }
        break;
    case InitialCondition::Kind::mixture: {
        const int n_random = static_cast<int>(std::lround(ic.p_percent * n / 100.0));
        for (int node = 0; node < n; ++node) {
            if (node < n_random) {
                fill_uniform(state.u[node], state.v[node], node, seed, ic.lo, ic.hi);
            } else {
                const double cu = mixture_u0(node, n);
                state.u[node] = Field(grid, cu);
                state.v[node] = Field(grid, 0.5 * cu);
            }
        }
        break;
    }
    }
    return state;
}

} // namespace rdsync
