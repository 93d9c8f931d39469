#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mlap/errors.hpp"
#include "mlap/grid.hpp"
#include "mlap/problem.hpp"

namespace mlap {

struct SolverConfig {
    /// Tolerance on max_i |W_i (-Delta_m u - theta)_i| relative to the largest
    /// local term |F_{i-1}| + |F_i| + W_i |theta_i| (F the weighted fluxes).
    double newton_tol = 1e-10;
    /// Newton iterations allowed per continuation stage.
    int max_newton_iters = 100;
    std::vector<double> eps_schedule = default_eps_schedule();
    double damping = 0.5;
    /// Sup-norm tolerance on successive outer iterates of the singular solve.
    double picard_tol = 1e-10;
    int max_picard_iters = 400;
    /// Upper end of the power-of-two ladder used to scale the barriers.
    double c_max = 1048576.0;

    static std::vector<double> default_eps_schedule();
    /// Throws Error when a tolerance or schedule is malformed.
    void validate() const;
};

struct SolveReport {
    GridFunction solution;
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    /// Dirichlet solves: energy after every accepted Newton step.
    /// Singular solves: the singular functional after every outer step.
    std::vector<double> energy_history;
    /// Singular solves only: largest max_i (u_k - u_{k+1})_i seen.
    double monotone_defect = 0.0;
    /// Singular solves only: the barrier bracket used.
    std::optional<GridFunction> sub_barrier;
    std::optional<GridFunction> super_barrier;
    double barrier_scale = 0.0;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, SolveReport partial)
        : Error(what), partial_(std::move(partial)) {}
    const SolveReport& partial() const noexcept { return partial_; }

private:
    SolveReport partial_;
};

/// Minimizes the discrete energy of -Delta_m u = theta, u = 0 on the boundary,
/// by damped Newton with eps-continuation. With `initial` given, only the last
/// schedule entry is run, starting from it.
SolveReport solve_dirichlet(const GridFunction& theta, double m, const SolverConfig& config = {},
                            const std::optional<GridFunction>& initial = std::nullopt);

/// Minimizes the energy of -Delta_m u + shift u = theta (shift >= 0).
SolveReport solve_shifted_dirichlet(const GridFunction& theta, const GridFunction& shift, double m,
                                    const SolverConfig& config = {},
                                    const std::optional<GridFunction>& initial = std::nullopt);

/// K sampled from the spec's profile at free nodes.
GridFunction sample_k(const ProblemSpec& spec, const GridPtr& grid);

/// Solves -Delta_m u = K u^{-p} by monotone iteration started at the
/// auto-scaled subsolution of the spec's regime. Each outer step freezes
/// u^{-p} together with its tangent, which keeps iterates ordered.
/// Throws BarrierOrderViolation if an iterate leaves the barrier bracket.
SolveReport solve_singular(const ProblemSpec& spec, const GridPtr& grid,
                           const SolverConfig& config = {});

/// Same, with an explicit sampled K (manufactured problems).
SolveReport solve_singular(const ProblemSpec& spec, const GridFunction& k,
                           const SolverConfig& config = {});

/// max_i |W_i (-Delta_m u - K u^{-p})_i| relative to the largest local term.
double singular_residual(const GridFunction& u, const GridFunction& k, double m, double p,
                         double eps = 0.0);

/// Value of sum h |Du|^m / m - sum W K u^{1-p} / (1-p) (log u at p = 1).
double singular_functional(const GridFunction& u, const GridFunction& k, double m, double p);

}  // namespace mlap
