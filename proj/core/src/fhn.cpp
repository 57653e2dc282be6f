#include "rdsync/fhn.hpp"

#include <stdexcept>

namespace rdsync {

void FhnParams::validate() const {
    if (!(eps > 0.0) || !(d_u > 0.0) || !(a_param > 0.0) || !(b_param > 0.0)) {
        throw std::invalid_argument("FhnParams: eps, d_u, a, b must all be positive");
    }
}

void ForcingProfile::validate() const {
    if (kind == Kind::excitable_window && !(radius > 0.0)) {
        throw std::invalid_argument("ForcingProfile: excitable window needs a positive radius");
    }
}

Field evaluate_forcing(const ForcingProfile& forcing, const Grid& grid) {
    forcing.validate();
    if (forcing.kind == ForcingProfile::Kind::constant) {
        return Field(grid, forcing.level);
    }
    Field c(grid, forcing.outside_level);
    const double r2 = forcing.radius * forcing.radius;
    for (int j = 0; j < grid.ny; ++j) {
        const double dy = grid.y_center(j) - forcing.center_y;
        for (int i = 0; i < grid.nx; ++i) {
            const double dx = grid.x_center(i) - forcing.center_x;
            if (dx * dx + dy * dy <= r2) c.at(i, j) = forcing.level;
        }
    }
    return c;
}

std::pair<Field, Field> reaction_rhs(const Field& u, const Field& v,
                                     const FhnParams& params, const Field& c_field) {
    params.validate();
    if (!(u.grid() == v.grid()) || !(u.grid() == c_field.grid())) {
        throw std::invalid_argument("reaction_rhs: u, v and c live on different grids");
    }
    const double inv_eps = 1.0 / params.eps;
    Field du = laplacian_neumann(u);
    Field dv(u.grid());
    const int count = u.size();
    const double* pu = u.data();
    const double* pv = v.data();
    const double* pc = c_field.data();
    double* pdu = du.data();
    double* pdv = dv.data();
    for (int idx = 0; idx < count; ++idx) {
        const double uu = pu[idx];
        pdu[idx] = (params.d_u * pdu[idx] - uu * uu * uu + 3.0 * uu - pv[idx]) * inv_eps;
        pdv[idx] = params.a_param * uu - params.b_param * pv[idx] + pc[idx];
    }
    return {std::move(du), std::move(dv)};
}

std::pair<Field, Field> reaction_rhs(const Field& u, const Field& v,
                                     const FhnParams& params,
                                     const ForcingProfile& forcing) {
    return reaction_rhs(u, v, params, evaluate_forcing(forcing, u.grid()));
}

std::vector<Field> coupling_rhs(const std::vector<Field>& node_u,
                                const CouplingMatrix& G, double eps) {
    const int n = G.n();
    if (static_cast<int>(node_u.size()) != n) {
        throw std::invalid_argument("coupling_rhs: node count does not match matrix size");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("coupling_rhs: eps must be positive");
    }
    const double inv_eps = 1.0 / eps;
    std::vector<Field> out;
    out.reserve(node_u.size());
    const int count = node_u.empty() ? 0 : node_u[0].size();
    for (int i = 0; i < n; ++i) {
        Field inc(node_u[0].grid());
        double* acc = inc.data();
        for (int k = 0; k < n; ++k) {
            const double w = G.at(i, k);
            if (w == 0.0) continue;
            const double* src = node_u[k].data();
            for (int idx = 0; idx < count; ++idx) acc[idx] += w * src[idx];
        }
        for (int idx = 0; idx < count; ++idx) acc[idx] *= inv_eps;
        out.push_back(std::move(inc));
    }
    return out;
}

} // namespace rdsync
