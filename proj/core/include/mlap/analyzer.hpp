#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mlap/grid.hpp"
#include "mlap/problem.hpp"
#include "mlap/solver.hpp"

namespace mlap {

struct FitWindow {
    double delta_min = 0.0;
    double delta_max = 0.0;
};

struct FitResult {
    double exponent = 0.0;
    std::optional<double> log_exponent;
    double r_squared = 0.0;
    FitWindow window;
    /// exp(intercept) of the fitted model (c1/c2 are not asserted on).
    double constant = 0.0;
    /// Additive term B of the offset log model.
    std::optional<double> offset;
    std::size_t samples = 0;
};

/// Window used when none is given: from 10 * smallest cell up to max(delta) / 8,
/// clipped to at most four decades above the lower end.
FitWindow default_fit_window(const Grid1D& grid);

/// Least-squares slope of log u against log delta over nodes with delta in
/// the window. On a symmetric interval grid the two boundary sides are
/// averaged node by node first.
FitResult fit_boundary_exponent(const GridFunction& u, FitWindow window);

/// Fits s in u / delta ~ C log^s(1/delta).
FitResult fit_log_correction(const GridFunction& u, FitWindow window);

/// Fits s in u / delta ~ C log^s(1/delta) + B. The offset absorbs the
/// bounded part of u / delta, which biases the plain log-log slope for many
/// decades when s is small.
FitResult fit_log_correction_offset(const GridFunction& u, FitWindow window);

/// Power fit first; routes to fit_log_correction when the exponent lies in
/// (0.9, 1) and the slope on the inner half of the window exceeds the slope
/// on the outer half by more than 0.005.
FitResult fit_boundary_auto(const GridFunction& u, FitWindow window);

/// (sum_j omega_j h_j |Du_j|^tau)^{1/tau}.
double sobolev_seminorm(const GridFunction& u, double tau);

enum class Verdict { Convergent, Divergent, Marginal };

std::string_view to_string(Verdict verdict);

/// Thresholds of the refinement verdict.
struct VerdictRule {
    /// Convergent when the finest ratio of norms lies in 1 +- this band.
    double convergent_band = 0.02;
    /// Divergent when every ratio of norms is at least this.
    double divergent_ratio = 1.05;
    /// Divergent when the increments of ||Du||^tau stop contracting
    /// (last increment / previous increment >= this).
    double divergent_contraction = 0.95;
};

/// Verdict for norms on successive refinement levels (at least 3 entries).
Verdict classify_sequence(std::span<const double> norms, double tau, const VerdictRule& rule = {});

struct ScanReport {
    std::vector<double> tau_values;
    std::vector<std::size_t> levels;
    /// norms[level][tau]
    std::vector<std::vector<double>> norms;
    std::vector<Verdict> verdicts;
    double predicted_threshold = std::numeric_limits<double>::infinity();
};

using FieldAtLevel = std::function<GridFunction(const GridPtr&)>;

/// Evaluates the seminorm of field(grid) on graded grids with the given node counts.
ScanReport threshold_scan(const FieldAtLevel& field, const std::vector<double>& taus,
                          const std::vector<std::size_t>& levels, double grading, Domain domain,
                          double predicted_threshold, const VerdictRule& rule = {});

/// Solves the singular problem on every level; predicted threshold from classify_regime.
ScanReport threshold_scan(const ProblemSpec& spec, const std::vector<double>& taus,
                          const std::vector<std::size_t>& levels, double grading,
                          const SolverConfig& config = {}, const VerdictRule& rule = {});

/// Solves -Delta_m w = theta(x, delta) on every level.
ScanReport threshold_scan(const std::function<double(double, double)>& theta, double m,
                          Domain domain, const std::vector<double>& taus,
                          const std::vector<std::size_t>& levels, double grading,
                          double predicted_threshold, const SolverConfig& config = {},
                          const VerdictRule& rule = {});

struct DistanceIntegral {
    bool finite = false;
    /// Extrapolated integral when finite, last partial value otherwise.
    double value = 0.0;
    /// Ratio of the last two increments between levels.
    double contraction = 0.0;
    std::vector<double> partial_integrals;
};

/// Integral of delta^{-a} over (0,1) on nested graded grids; Finite when the
/// level increments contract geometrically.
DistanceIntegral distance_integral_classify(double a, const std::vector<std::size_t>& levels,
                                            double grading = 3.0);

/// sup over intervals (skipping `skip_cells` at each boundary) of |Dw| delta^{a-1}.
double gradient_bound_constant(const GridFunction& w, double a, std::size_t skip_cells);

struct GradientBound {
    double bound_constant = 0.0;
    double coarse_constant = 0.0;
    bool pass = false;
};

/// Passes when the constants on the two grids agree within `factor`.
GradientBound gradient_bound_check(const GridFunction& coarse, const GridFunction& fine, double a,
                                   std::size_t skip_cells, double factor = 2.0);

}  // namespace mlap
