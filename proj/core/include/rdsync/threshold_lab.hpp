// Empirical minimal-coupling search: bisection with a confirmation pass,
// sweeps over node count or initial-condition heterogeneity, and the
// least-squares fits for the scaling laws.
#pragma once

#include "rdsync/simulator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rdsync {

enum class Topology { complete, ring, file };

/// Everything a threshold search holds fixed while it varies the coupling
/// strength.  The same seed (hence the same initial data) is reused for
/// every evaluation.
struct ThresholdScenario {
    Topology topology = Topology::complete;
    int n = 3;
    Grid grid{32, 32, 100.0, 100.0};
    FhnParams params{};
    ForcingProfile forcing{};
    InitialCondition ic{};
    std::uint64_t seed = 1;
    double dt = 0.005;
    double t_end = 300.0;
    int record_every = 250;
    double sync_tol_rel = 1e-3;
    double sync_window_frac = 0.1;

    /// topology == file: unit-strength connectivity pattern, scaled by g.
    std::optional<CouplingMatrix> pattern;

    /// Builds the coupling matrix for strength g (g = 0 gives the uncoupled
    /// baseline).
    CouplingMatrix coupling_for(double g) const;

    SimConfig sim_config(double g) const;
};

struct ThresholdEvaluation {
    double g = 0.0;
    bool synchronized = false;
    double final_error = 0.0;
};

struct ThresholdResult {
    Topology topology = Topology::complete;
    int n = 0;
    double g_star = 0.0;
    double bracket_lo_fail = 0.0;
    double bracket_hi_pass = 0.0;
    std::vector<ThresholdEvaluation> evaluations;
    double wall_time_s = 0.0;
    /// Set when the confirmation pass contradicted bisection (non-monotone
    /// response) and the result came from the exhaustive grid scan instead.
    bool used_exhaustive_scan = false;
};

/// Bisects for the minimal synchronizing coupling.  Preconditions: the run
/// at g_hi synchronizes and the run at g_lo does not, otherwise a bracket
/// error is thrown naming both verdicts.  The final bracket is confirmed
/// with one run at g_star - resolution; a contradiction downgrades to an
/// exhaustive scan of the g-grid at the requested resolution.
ThresholdResult find_threshold(const ThresholdScenario& scenario, double g_lo,
                               double g_hi, double resolution);

/// Exhaustive reference: walks g_lo + k*resolution upward and returns the
/// first synchronizing grid point.
ThresholdResult find_threshold_scan(const ThresholdScenario& scenario, double g_lo,
                                    double g_hi, double resolution);

struct SweepEntry {
    double x = 0.0;  // node count or mixture percentage
    std::optional<ThresholdResult> result;
    std::string error;
};

/// Independent threshold searches per node count; failures are recorded and
/// the sweep continues.
std::vector<SweepEntry> sweep_n(const ThresholdScenario& base, const std::vector<int>& n_list,
                                double g_lo, double g_hi, double resolution);

/// Sweep over the mixture percentage at fixed n (heterogeneity-ratio law).
std::vector<SweepEntry> sweep_p(const ThresholdScenario& base,
                                const std::vector<double>& p_list, double g_lo,
                                double g_hi, double resolution);

enum class FitModel { inverse_n, quadratic };

struct FitResult {
    FitModel model = FitModel::inverse_n;
    std::vector<double> coefficients;  // inverse_n: {alpha, beta} for g = alpha/n + beta
                                       // quadratic: {a, b, c} for g = a x^2 + b x + c
    double rmse = 0.0;
    double r_squared = 0.0;
};

/// Least squares for g = alpha/n + beta on the regressor 1/n (closed-form
/// normal equations).  Needs two points with distinct n.
FitResult fit_inverse_n(const std::vector<std::pair<double, double>>& points);

/// Least squares for g = a x^2 + b x + c.  Needs three distinct x.
FitResult fit_quadratic(const std::vector<std::pair<double, double>>& points);

/// Sweep table: x (n or p), g_star, bracket, evaluation count, wall time.
/// Failed entries become comment lines.
void write_sweep_csv(const std::vector<SweepEntry>& entries, std::ostream& os,
                     const std::string& x_name);

/// Reads back the (x, g_star) columns of a sweep table.
std::vector<std::pair<double, double>> read_sweep_points(std::istream& is);

void write_fit_csv(const FitResult& fit, std::ostream& os);

} // namespace rdsync
