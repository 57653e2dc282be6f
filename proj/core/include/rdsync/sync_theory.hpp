// Graph-theoretic sufficient synchronization conditions: per-edge path-load
// coefficients, the per-edge threshold test, closed-form thresholds for the
// complete and unidirectional-ring topologies, and the damping constant that
// closes the Lyapunov estimate for the FitzHugh-Nagumo nonlinearity.
#pragma once

#include "rdsync/coupling.hpp"

#include <cstdint>
#include <vector>

namespace rdsync {

/// Rule for choosing among equal-length shortest paths.
///
/// lexicographic: the lexicographically smallest node sequence.  Topology
/// agnostic and deterministic.
///
/// ring_alternating: on an even cycle in natural node order, antipodal pairs
/// alternate between the two half-ring routes.  Each edge counts the
/// alternation relative to itself (pairs sourced an even number of steps
/// behind the edge route through it), which makes every edge carry the same
/// load and reproduces the closed-form ring thresholds.  A globally fixed
/// route assignment cannot balance the antipodal load across edges, so the
/// stored representative paths (global alternation) and the per-edge counts
/// are reported separately.  Falls back to lexicographic on anything that is
/// not a cycle in natural order.
enum class TieBreak { lexicographic, ring_alternating };

/// Per-edge load coefficients: for each edge (k,l) of the symmetric support,
/// the sum of the lengths of the chosen minimal paths that traverse it.
/// Non-edges carry zero.
class AlphaTable {
public:
    AlphaTable(int n, std::vector<std::pair<int, int>> edges,
               std::vector<long long> alpha,
               std::vector<std::vector<int>> pair_paths);

    int n() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<long long>& alpha_values() const { return alpha_; }

    /// alpha_kl for an unordered pair; zero when (k,l) is not an edge.
    long long alpha_at(int k, int l) const;

    /// Chosen minimal path for the unordered pair i<j, as a node sequence
    /// from i to j.
    const std::vector<int>& path(int i, int j) const;

    long long alpha_total() const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<long long> alpha_;
    std::vector<std::vector<int>> pair_paths_;  // indexed by pair_index
};

/// Flat index of the unordered pair (i,j), i<j, among all n*(n-1)/2 pairs.
int pair_index(int n, int i, int j);

/// Computes the per-edge load coefficients of the symmetric support of G.
/// Throws on a disconnected graph.
AlphaTable alpha_coefficients(const CouplingMatrix& G,
                              TieBreak tie_break = TieBreak::lexicographic);

/// Closed-form per-edge load of the unidirectional ring:
///   n odd:              n(n^2-1)/24
///   n even, n/2 even:   n(n^2+2)/24
///   n even, n/2 odd:    n(n^2+8)/24  (worst case of the alternation)
/// Always an integer.  Requires n >= 3.
long long ring_alpha_closed_form(int n);

/// Complete network: every symmetric weight eps_ij must exceed a/n.
double theoretical_threshold_complete(double a_const, int n);

/// Unidirectional ring: the coupling constant c must exceed
/// a(n^2-1)/12, a(n^2+2)/12 or a(n^2+8)/12 by ring parity.
double theoretical_threshold_ring(double a_const, int n);

/// Sufficient coupling strengths converted to the simulator's convention,
/// where the coupling term sits inside the eps-scaled u-equation: a coupling
/// constant g corresponds to the theory weight g/eps, so the theory
/// thresholds are multiplied by eps.
double sufficient_coupling_complete(double a_const, int n, double eps);
double sufficient_coupling_ring(double a_const, int n, double eps);

struct EdgeRequirement {
    int k = 0;
    int l = 0;
    double eps_kl = 0.0;     // symmetric weight of the edge
    long long alpha_kl = 0;  // path load of the edge
    double required = 0.0;   // a_const * alpha_kl / n
    double margin = 0.0;     // eps_kl - required
};

/// Outcome of the per-edge sufficient condition a/n * alpha_kl < eps_kl.
struct ThresholdReport {
    double a_const = 0.0;
    std::vector<EdgeRequirement> edges;
    bool satisfied = false;
    double margin = 0.0;  // min over edges of eps_kl - required
};

ThresholdReport check_sync_condition(const CouplingMatrix& G, double a_const,
                                     TieBreak tie_break = TieBreak::lexicographic);

/// Damping constants for the FitzHugh-Nagumo reaction terms (fast variable
/// slope bounded by 3/eps, recovery feedback closed by a Young split of the
/// cross term against half the recovery damping):
///   kappa = b/2
///   a_const = 3/eps + (a - 1/eps)^2 / (2b)
/// The cubic slope bound 3(1 - u^2) peaks at u = 0, inside every sup-norm
/// envelope, so the result does not grow with the envelope M.
struct LemmaConstants {
    double a_const = 0.0;
    double kappa = 0.0;
};

/// M is the certified sup-norm bound on u over the attractor.  Throws on
/// nonpositive damping b.
LemmaConstants estimate_constant_a(double eps, double a_param, double b_param, double M);

/// Worst-case slack of the damping inequality
///   a_const*x1^2 - [F_u x1^2 + F_v x1 x2 + x2(-b x2 + a x1)] - kappa*x2^2
/// over a uniform grid of (x1, x2, u) in [-1,1]^2 x [-M,M].  Nonnegative up
/// to roundoff when the constants come from estimate_constant_a.
double lemma_margin_min(double eps, double a_param, double b_param,
                        double a_const, double kappa, double M,
                        int points_per_axis);

} // namespace rdsync
