// FitzHugh-Nagumo node dynamics: fast cubic variable u with diffusion, slow
// recovery v with an optionally space-dependent drive c(x), and the linear
// network coupling acting on u.
#pragma once

#include "rdsync/coupling.hpp"
#include "rdsync/grid.hpp"

#include <utility>
#include <vector>

namespace rdsync {

/// eps u_t = d_u lap(u) - u^3 + 3u - v
///     v_t = a u - b v + c(x)
struct FhnParams {
    double eps = 0.1;
    double d_u = 0.05;
    double a_param = 1.0;
    double b_param = 0.001;

    void validate() const;
    bool operator==(const FhnParams&) const = default;
};

/// c(x): either a constant, or an "excitable window" that holds c = level
/// inside a disk and outside_level elsewhere.  With level 0 inside and -1.1
/// outside, the disk oscillates and emits periodic pulses into excitable
/// surroundings.
struct ForcingProfile {
    enum class Kind { constant, excitable_window };

    Kind kind = Kind::constant;
    double level = 0.0;
    double outside_level = -1.1;
    double center_x = 50.0;
    double center_y = 50.0;
    double radius = 5.0;

    void validate() const;
    bool operator==(const ForcingProfile&) const = default;
};

Field evaluate_forcing(const ForcingProfile& forcing, const Grid& grid);

/// Reaction time derivatives of one node:
///   du = (d_u lap(u) - u^3 + 3u - v) / eps      (diffusion fused in)
///   dv = a u - b v + c
/// The forcing field must live on the same grid as u and v.
std::pair<Field, Field> reaction_rhs(const Field& u, const Field& v,
                                     const FhnParams& params, const Field& c_field);

/// Convenience overload evaluating the forcing profile on the fly.
std::pair<Field, Field> reaction_rhs(const Field& u, const Field& v,
                                     const FhnParams& params,
                                     const ForcingProfile& forcing);

/// Coupling increments: node i receives (sum_k c_ik u_k) / eps, the term the
/// eps-scaled u-equation adds to du_i.  Zero row sums make identical nodes an
/// invariant manifold.
std::vector<Field> coupling_rhs(const std::vector<Field>& node_u,
                                const CouplingMatrix& G, double eps);

} // namespace rdsync
