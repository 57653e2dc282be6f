#include "rdsync/grid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rdsync {

Grid::Grid(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx < 3 || ny < 3) {
        throw std::invalid_argument("Grid: nx and ny must be >= 3, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    }
    if (!(lx > 0.0) || !(ly > 0.0)) {
        throw std::invalid_argument("Grid: domain lengths must be positive");
    }
}

Field::Field(const Grid& grid, double fill)
    : grid_(grid), values_(static_cast<std::size_t>(grid.cell_count()), fill) {}

Field laplacian_neumann(const Field& f) {
    const Grid& g = f.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double inv_dx2 = 1.0 / (g.dx() * g.dx());
    const double inv_dy2 = 1.0 / (g.dy() * g.dy());

    Field out(g);
    const double* src = f.data();
    double* dst = out.data();
    for (int j = 0; j < ny; ++j) {
        const int jm = j > 0 ? j - 1 : 0;          // mirror ghost: reuse boundary cell
        const int jp = j < ny - 1 ? j + 1 : ny - 1;
        const double* row = src + static_cast<std::size_t>(j) * nx;
        const double* row_m = src + static_cast<std::size_t>(jm) * nx;
        const double* row_p = src + static_cast<std::size_t>(jp) * nx;
        double* drow = dst + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const int im = i > 0 ? i - 1 : 0;
            const int ip = i < nx - 1 ? i + 1 : nx - 1;
            const double c = row[i];
            drow[i] = (row[ip] - 2.0 * c + row[im]) * inv_dx2 +
                      (row_p[i] - 2.0 * c + row_m[i]) * inv_dy2;
        }
    }
    return out;
}

namespace detail {

double rowwise_sum(const Field& f, double (*row_term)(const double*, int)) {
    const Grid& g = f.grid();
    std::vector<double> partial(static_cast<std::size_t>(g.ny));
    for (int j = 0; j < g.ny; ++j) {
        partial[j] = row_term(f.data() + static_cast<std::size_t>(j) * g.nx, g.nx);
    }
    double total = 0.0;
    for (int j = 0; j < g.ny; ++j) total += partial[j];
    return total;
}

} // namespace detail

double lq_norm(const Field& f, int q) {
    if (q < 1) {
        throw std::invalid_argument("lq_norm: q must be >= 1");
    }
    const Grid& g = f.grid();
    std::vector<double> partial(static_cast<std::size_t>(g.ny));
    for (int j = 0; j < g.ny; ++j) {
        const double* row = f.data() + static_cast<std::size_t>(j) * g.nx;
        double s = 0.0;
        if (q == 2) {
            for (int i = 0; i < g.nx; ++i) s += row[i] * row[i];
        } else if (q == 4) {
            for (int i = 0; i < g.nx; ++i) {
                const double v2 = row[i] * row[i];
                s += v2 * v2;
            }
        } else {
            for (int i = 0; i < g.nx; ++i) s += std::pow(std::abs(row[i]), q);
        }
        partial[j] = s;
    }
    double total = 0.0;
    for (int j = 0; j < g.ny; ++j) total += partial[j];
    return std::pow(total * g.cell_area(), 1.0 / q);
}

double h1_seminorm_sq(const Field& f) {
    const Grid& g = f.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double inv_dx2 = 1.0 / (g.dx() * g.dx());
    const double inv_dy2 = 1.0 / (g.dy() * g.dy());
    const double area = g.cell_area();

    std::vector<double> partial(static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) {
        const double* row = f.data() + static_cast<std::size_t>(j) * nx;
        double s = 0.0;
        for (int i = 0; i + 1 < nx; ++i) {   // x faces of row j
            const double d = row[i + 1] - row[i];
            s += d * d * inv_dx2;
        }
        if (j + 1 < ny) {                    // y faces between rows j and j+1
            const double* up = f.data() + static_cast<std::size_t>(j + 1) * nx;
            for (int i = 0; i < nx; ++i) {
                const double d = up[i] - row[i];
                s += d * d * inv_dy2;
            }
        }
        partial[j] = s * area;
    }
    double total = 0.0;
    for (int j = 0; j < ny; ++j) total += partial[j];
    return total;
}

double l2_distance(const Field& f, const Field& g) {
    if (!(f.grid() == g.grid())) {
        throw std::invalid_argument("l2_distance: fields live on different grids");
    }
    const Grid& gr = f.grid();
    std::vector<double> partial(static_cast<std::size_t>(gr.ny));
    for (int j = 0; j < gr.ny; ++j) {
        const double* a = f.data() + static_cast<std::size_t>(j) * gr.nx;
        const double* b = g.data() + static_cast<std::size_t>(j) * gr.nx;
        double s = 0.0;
        for (int i = 0; i < gr.nx; ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        partial[j] = s;
    }
    double total = 0.0;
    for (int j = 0; j < gr.ny; ++j) total += partial[j];
    return std::sqrt(total * gr.cell_area());
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const Field& f) {
    for (double v : f.values()) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void write_field_csv(const Field& f, std::ostream& os) {
    const Grid& g = f.grid();
    char buf[32];
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", f.at(i, j));
            os << buf;
            os << (i + 1 < g.nx ? ',' : '\n');
        }
    }
}

void write_field_pgm(const Field& f, std::ostream& os) {
    const Grid& g = f.grid();
    double lo = f.values().empty() ? 0.0 : f.values()[0];
    double hi = lo;
    for (double v : f.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "# min=%.17g max=%.17g\n", lo, hi);
    os << "P2\n" << buf << g.nx << ' ' << g.ny << "\n255\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int gray = 0;
            if (span > 0.0) {
                gray = static_cast<int>(std::lround(255.0 * (f.at(i, j) - lo) / span));
                gray = std::clamp(gray, 0, 255);
            }
            os << gray << (i + 1 < g.nx ? ' ' : '\n');
        }
    }
}

} // namespace rdsync
