#include "rdsync/sync_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

namespace rdsync {

namespace {

std::vector<std::vector<int>> adjacency_from_edges(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (auto [k, l] : edges) {
        adj[k].push_back(l);
        adj[l].push_back(k);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : adj[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

/// Lexicographically smallest minimal path from i to j: walk from i, always
/// taking the smallest neighbor that still decreases the distance to j.
std::vector<int> lex_min_path(const std::vector<std::vector<int>>& adj,
                              const std::vector<int>& dist_to_j, int i, int j) {
    std::vector<int> path{i};
    int cur = i;
    while (cur != j) {
        int next = -1;
        for (int w : adj[cur]) {  // neighbors sorted ascending
            if (dist_to_j[w] == dist_to_j[cur] - 1) {
                next = w;
                break;
            }
        }
        path.push_back(next);
        cur = next;
    }
    return path;
}

/// True when the symmetric support is exactly the cycle 0-1-...-n-1-0.
bool is_natural_ring(int n, const std::vector<std::vector<int>>& adj) {
    if (n < 3) return false;
    for (int i = 0; i < n; ++i) {
        std::vector<int> expected{(i + 1) % n, (i + n - 1) % n};
        std::sort(expected.begin(), expected.end());
        expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        if (adj[i] != expected) return false;
    }
    return true;
}

/// Half-ring path from a to a+h (mod n), stepping +1 (up) or -1 (down).
std::vector<int> ring_arc(int n, int a, int h, bool up) {
    std::vector<int> path{a};
    int cur = a;
    for (int s = 0; s < h; ++s) {
        cur = up ? (cur + 1) % n : (cur + n - 1) % n;
        path.push_back(cur);
    }
    return path;
}

AlphaTable alpha_ring_alternating(const CouplingMatrix& G,
                                  const std::vector<std::pair<int, int>>& edges) {
    const int n = G.n();
    const int half = n / 2;

    // Representative paths: shorter arc when unique; antipodal pairs (even n)
    // alternate up/down by source parity.
    std::vector<std::vector<int>> paths(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int fwd = j - i;           // steps going up from i
            const int bwd = n - fwd;         // steps going down from i
            std::vector<int> p;
            if (fwd < bwd) {
                p = ring_arc(n, i, fwd, true);
            } else if (bwd < fwd) {
                p = ring_arc(n, i, bwd, false);
            } else {                         // antipodal, n even
                p = (i % 2 == 0) ? ring_arc(n, i, fwd, true) : ring_arc(n, i, bwd, false);
            }
            paths[pair_index(n, i, j)] = std::move(p);
        }
    }

    std::vector<long long> alpha(edges.size(), 0);
    if (n % 2 == 1) {
        // Odd ring: every minimal path is unique; count them per edge.
        for (std::size_t e = 0; e < edges.size(); ++e) {
            auto [k, l] = edges[e];
            long long sum = 0;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    const auto& p = paths[pair_index(n, i, j)];
                    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
                        const int a = std::min(p[s], p[s + 1]);
                        const int b = std::max(p[s], p[s + 1]);
                        if (a == k && b == l) {
                            sum += static_cast<long long>(p.size()) - 1;
                            break;
                        }
                    }
                }
            }
            alpha[e] = sum;
        }
    } else {
        // Even ring, edge-relative alternation: for the edge (l, l+1) the
        // pair sourced m steps behind it routes through the edge with
        // lengths m+1 .. half-1 (unique arcs) plus length half when m is
        // even (its antipodal pair takes this side of the ring).
        long long load = 0;
        for (int m = 0; m < half; ++m) {
            for (int d = m + 1; d <= half - 1; ++d) load += d;
            if (m % 2 == 0) load += half;
        }
        std::fill(alpha.begin(), alpha.end(), load);
    }
    return AlphaTable(n, edges, std::move(alpha), std::move(paths));
}

} // namespace

int pair_index(int n, int i, int j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

AlphaTable::AlphaTable(int n, std::vector<std::pair<int, int>> edges,
                       std::vector<long long> alpha,
                       std::vector<std::vector<int>> pair_paths)
    : n_(n), edges_(std::move(edges)), alpha_(std::move(alpha)),
      pair_paths_(std::move(pair_paths)) {}

long long AlphaTable::alpha_at(int k, int l) const {
    if (k > l) std::swap(k, l);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].first == k && edges_[e].second == l) return alpha_[e];
    }
    return 0;
}

const std::vector<int>& AlphaTable::path(int i, int j) const {
    if (i > j) std::swap(i, j);
    return pair_paths_[static_cast<std::size_t>(pair_index(n_, i, j))];
}

long long AlphaTable::alpha_total() const {
    long long s = 0;
    for (long long a : alpha_) s += a;
    return s;
}

AlphaTable alpha_coefficients(const CouplingMatrix& G, TieBreak tie_break) {
    validate_connected(G);
    const int n = G.n();
    const auto edges = symmetric_edges(G);
    const auto adj = adjacency_from_edges(n, edges);

    if (tie_break == TieBreak::ring_alternating && is_natural_ring(n, adj)) {
        return alpha_ring_alternating(G, edges);
    }

    std::vector<std::vector<int>> paths(static_cast<std::size_t>(n) * (n - 1) / 2);
    std::vector<long long> alpha(edges.size(), 0);
    std::vector<std::vector<std::size_t>> edge_of;  // edge index by (min,max) lookup
    edge_of.assign(static_cast<std::size_t>(n), std::vector<std::size_t>(static_cast<std::size_t>(n), SIZE_MAX));
    for (std::size_t e = 0; e < edges.size(); ++e) {
        edge_of[edges[e].first][edges[e].second] = e;
    }

    for (int j = 1; j < n; ++j) {
        const auto dist = bfs_distances(adj, j);
        for (int i = 0; i < j; ++i) {
            auto p = lex_min_path(adj, dist, i, j);
            const long long len = static_cast<long long>(p.size()) - 1;
            for (std::size_t s = 0; s + 1 < p.size(); ++s) {
                const int a = std::min(p[s], p[s + 1]);
                const int b = std::max(p[s], p[s + 1]);
                alpha[edge_of[a][b]] += len;
            }
            paths[pair_index(n, i, j)] = std::move(p);
        }
    }
    return AlphaTable(n, edges, std::move(alpha), std::move(paths));
}

long long ring_alpha_closed_form(int n) {
    if (n < 3) {
        throw std::invalid_argument("ring_alpha_closed_form: invalid size n=" + std::to_string(n));
    }
    const long long nn = n;
    if (n % 2 == 1) return nn * (nn * nn - 1) / 24;
    if ((n / 2) % 2 == 0) return nn * (nn * nn + 2) / 24;
    return nn * (nn * nn + 8) / 24;
}

double theoretical_threshold_complete(double a_const, int n) {
    if (n < 2) {
        throw std::invalid_argument("theoretical_threshold_complete: need n >= 2");
    }
    if (!(a_const > 0.0)) {
        throw std::invalid_argument("theoretical_threshold_complete: a_const must be positive");
    }
    return a_const / n;
}

double theoretical_threshold_ring(double a_const, int n) {
    if (n < 3) {
        throw std::invalid_argument("theoretical_threshold_ring: need n >= 3");
    }
    const double nn = n;
    if (n % 2 == 1) return a_const * (nn * nn - 1.0) / 12.0;
    if ((n / 2) % 2 == 0) return a_const * (nn * nn + 2.0) / 12.0;
    return a_const * (nn * nn + 8.0) / 12.0;
}

double sufficient_coupling_complete(double a_const, int n, double eps) {
    return eps * theoretical_threshold_complete(a_const, n);
}

double sufficient_coupling_ring(double a_const, int n, double eps) {
    return eps * theoretical_threshold_ring(a_const, n);
}

ThresholdReport check_sync_condition(const CouplingMatrix& G, double a_const,
                                     TieBreak tie_break) {
    const auto table = alpha_coefficients(G, tie_break);
    const auto split = split_symmetric(G);
    ThresholdReport report;
    report.a_const = a_const;
    report.margin = std::numeric_limits<double>::infinity();
    const auto& alphas = table.alpha_values();
    for (std::size_t e = 0; e < table.edges().size(); ++e) {
        auto [k, l] = table.edges()[e];
        EdgeRequirement req;
        req.k = k;
        req.l = l;
        req.eps_kl = split.eps(k, l);
        req.alpha_kl = alphas[e];
        req.required = a_const * static_cast<double>(alphas[e]) / G.n();
        req.margin = req.eps_kl - req.required;
        report.margin = std::min(report.margin, req.margin);
        report.edges.push_back(req);
    }
    report.satisfied = report.margin > 0.0;
    return report;
}

LemmaConstants estimate_constant_a(double eps, double a_param, double b_param, double M) {
    if (!(b_param > 0.0)) {
        throw std::invalid_argument("estimate_constant_a: degenerate damping, b must be positive");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("estimate_constant_a: eps must be positive");
    }
    if (M < 0.0) {
        throw std::invalid_argument("estimate_constant_a: envelope M must be nonnegative");
    }
    // sup over |u| <= M of (1 - u^2) is attained at u = 0 for every M >= 0,
    // so the cubic slope term contributes exactly 3/eps.
    const double cross = a_param - 1.0 / eps;
    LemmaConstants out;
    out.kappa = 0.5 * b_param;
    out.a_const = 3.0 / eps + cross * cross / (2.0 * b_param);
    return out;
}

double lemma_margin_min(double eps, double a_param, double b_param,
                        double a_const, double kappa, double M,
                        int points_per_axis) {
    if (points_per_axis < 2) {
        throw std::invalid_argument("lemma_margin_min: need at least 2 points per axis");
    }
    const int m = points_per_axis;
    double worst = std::numeric_limits<double>::infinity();
    for (int iu = 0; iu < m; ++iu) {
        const double u = -M + 2.0 * M * iu / (m - 1);
        const double fu = (3.0 - 3.0 * u * u) / eps;
        const double fv = -1.0 / eps;
        for (int i1 = 0; i1 < m; ++i1) {
            const double x1 = -1.0 + 2.0 * i1 / (m - 1);
            for (int i2 = 0; i2 < m; ++i2) {
                const double x2 = -1.0 + 2.0 * i2 / (m - 1);
                const double quad = fu * x1 * x1 + fv * x1 * x2 +
                                    x2 * (-b_param * x2 + a_param * x1);
                const double slack = a_const * x1 * x1 - quad - kappa * x2 * x2;
                worst = std::min(worst, slack);
            }
        }
    }
    return worst;
}

} // namespace rdsync
