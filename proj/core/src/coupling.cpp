#include "rdsync/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rdsync {

namespace {

constexpr double kSumTolerance = 1e-12;

void validate_structure(int n, const std::vector<double>& c) {
    if (n < 2) {
        throw std::invalid_argument("CouplingMatrix: need at least 2 nodes, got " +
                                    std::to_string(n));
    }
    if (c.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("CouplingMatrix: entry count does not match n*n");
    }
    double max_abs = 0.0;
    for (double v : c) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("assumption violation: non-finite matrix entry");
        }
        max_abs = std::max(max_abs, std::abs(v));
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            if (i != k && c[static_cast<std::size_t>(i) * n + k] < 0.0) {
                throw std::invalid_argument(
                    "assumption violation: negative off-diagonal entry at (" +
                    std::to_string(i) + "," + std::to_string(k) + ")");
            }
        }
    }
    const double tol = kSumTolerance * std::max(max_abs, 1e-300);
    for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int k = 0; k < n; ++k) {
            row += c[static_cast<std::size_t>(i) * n + k];
            col += c[static_cast<std::size_t>(k) * n + i];
        }
        if (std::abs(row) > tol) {
            throw std::invalid_argument("assumption violation: row " + std::to_string(i) +
                                        " sum is " + std::to_string(row));
        }
        if (std::abs(col) > tol) {
            throw std::invalid_argument("assumption violation: column " + std::to_string(i) +
                                        " sum is " + std::to_string(col));
        }
    }
}

} // namespace

CouplingMatrix::CouplingMatrix(int n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
    validate_structure(n_, entries_);
}

CouplingMatrix::CouplingMatrix(int n, std::vector<double> entries, Unchecked)
    : n_(n), entries_(std::move(entries)) {}

CouplingMatrix CouplingMatrix::none(int n) {
    if (n < 1) {
        throw std::invalid_argument("CouplingMatrix::none: need at least 1 node");
    }
    return CouplingMatrix(n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0),
                          Unchecked{});
}

double CouplingMatrix::max_abs_entry() const {
    double m = 0.0;
    for (double v : entries_) m = std::max(m, std::abs(v));
    return m;
}

double CouplingMatrix::max_abs_diagonal() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(at(i, i)));
    return m;
}

CouplingMatrix CouplingMatrix::scaled(double factor) const {
    if (factor == 0.0) return none(n_);
    if (factor < 0.0) {
        throw std::invalid_argument("CouplingMatrix::scaled: factor must be nonnegative");
    }
    std::vector<double> e = entries_;
    for (double& v : e) v *= factor;
    return CouplingMatrix(n_, std::move(e));
}

CouplingMatrix complete_network(int n, double g) {
    if (n < 2) {
        throw std::invalid_argument("complete_network: invalid size n=" + std::to_string(n));
    }
    if (!(g > 0.0)) {
        throw std::invalid_argument("complete_network: coupling strength must be positive");
    }
    std::vector<double> c(static_cast<std::size_t>(n) * n, g);
    for (int i = 0; i < n; ++i) {
        c[static_cast<std::size_t>(i) * n + i] = -(n - 1) * g;
    }
    return CouplingMatrix(n, std::move(c));
}

CouplingMatrix ring_unidirectional(int n, double c) {
    if (n < 3) {
        throw std::invalid_argument("ring_unidirectional: invalid size n=" + std::to_string(n));
    }
    if (!(c > 0.0)) {
        throw std::invalid_argument("ring_unidirectional: coupling strength must be positive");
    }
    std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        e[static_cast<std::size_t>(i) * n + i] = -c;
        e[static_cast<std::size_t>(i) * n + (i + 1) % n] = c;
    }
    return CouplingMatrix(n, std::move(e));
}

SymmetricSplit split_symmetric(const CouplingMatrix& G) {
    const int n = G.n();
    SymmetricSplit s;
    s.n = n;
    s.sym.resize(static_cast<std::size_t>(n) * n);
    s.antisym.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double a = G.at(i, k);
            const double b = G.at(k, i);
            s.sym[static_cast<std::size_t>(i) * n + k] = 0.5 * (a + b);
            s.antisym[static_cast<std::size_t>(i) * n + k] = 0.5 * (a - b);
        }
    }
    return s;
}

std::vector<std::pair<int, int>> symmetric_edges(const CouplingMatrix& G) {
    const SymmetricSplit s = split_symmetric(G);
    std::vector<std::pair<int, int>> edges;
    for (int k = 0; k < G.n(); ++k) {
        for (int l = k + 1; l < G.n(); ++l) {
            if (s.eps(k, l) > 0.0) edges.emplace_back(k, l);
        }
    }
    return edges;
}

bool is_connected(const CouplingMatrix& G) {
    const int n = G.n();
    const SymmetricSplit s = split_symmetric(G);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < n; ++w) {
            if (!seen[w] && s.eps(v, w) > 0.0) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

void validate_connected(const CouplingMatrix& G) {
    if (!is_connected(G)) {
        throw std::invalid_argument(
            "connectivity error: symmetric support of the coupling graph is disconnected");
    }
}

CouplingMatrix load_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& ch : line) {
            if (ch == ',' || ch == '\t') ch = ' ';
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) {
            throw std::invalid_argument("shape error: non-numeric token in matrix file");
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::invalid_argument("shape error: empty matrix file");
    }
    const std::size_t n = rows.size();
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw std::invalid_argument("shape error: matrix is not square (" +
                                        std::to_string(n) + " rows, a row has " +
                                        std::to_string(row.size()) + " columns)");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    CouplingMatrix G(static_cast<int>(n), std::move(entries));
    validate_connected(G);
    return G;
}

void write_matrix(const CouplingMatrix& G, std::ostream& os) {
    char buf[32];
    for (int i = 0; i < G.n(); ++i) {
        for (int k = 0; k < G.n(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", G.at(i, k));
            os << buf << (k + 1 < G.n() ? ' ' : '\n');
        }
    }
}

} // namespace rdsync
