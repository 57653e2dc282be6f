// Uniform cell-centered 2D grid, scalar fields, the zero-flux Laplacian
// stencil and the integral norms used by the diagnostics.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace rdsync {

/// Cell-centered discretization of the rectangular domain [0,lx] x [0,ly].
/// Spacings are derived from the stored extents, never stored separately.
struct Grid {
    int nx = 100;
    int ny = 100;
    double lx = 100.0;
    double ly = 100.0;

    Grid() = default;
    Grid(int nx_, int ny_, double lx_, double ly_);

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double cell_area() const { return dx() * dy(); }
    int cell_count() const { return nx * ny; }

    /// Cell-center coordinates of column i / row j.
    double x_center(int i) const { return (i + 0.5) * dx(); }
    double y_center(int j) const { return (j + 0.5) * dy(); }

    bool operator==(const Grid&) const = default;
};

/// One scalar PDE variable sampled at cell centers, row-major (row = y index).
class Field {
public:
    Field() = default;
    explicit Field(const Grid& grid, double fill = 0.0);

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    double& at(int i, int j) { return values_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double at(int i, int j) const { return values_[static_cast<std::size_t>(j) * grid_.nx + i]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// 5-point Laplacian with mirror ghost cells (zero normal flux on the
/// boundary).  Total on finite fields; conserves the discrete integral.
Field laplacian_neumann(const Field& f);

/// |f|_q = (sum |f|^q dA)^(1/q), midpoint quadrature at cell centers.
/// Requires q >= 1.
double lq_norm(const Field& f, int q);

/// Integral of |grad f|^2 from forward differences on interior faces;
/// zero-flux boundaries contribute nothing.
double h1_seminorm_sq(const Field& f);

/// L2 distance of two fields on the same grid.  Throws on grid mismatch.
double l2_distance(const Field& f, const Field& g);

double max_abs(const Field& f);
bool all_finite(const Field& f);

/// Plain-text snapshot: ny rows of nx comma-separated values.
void write_field_csv(const Field& f, std::ostream& os);

/// 8-bit P2 graymap; the linear min/max scaling is recorded in the header
/// comment so the raw values can be recovered.
void write_field_pgm(const Field& f, std::ostream& os);

namespace detail {

/// Fixed-order reduction: per-row partial sums combined in row order.
/// All norms go through this so results never depend on the worker count.
double rowwise_sum(const Field& f, double (*row_term)(const double*, int));

} // namespace detail

} // namespace rdsync
