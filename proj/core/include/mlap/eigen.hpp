#pragma once

#include <optional>

#include "mlap/grid.hpp"
#include "mlap/solver.hpp"

namespace mlap {

/// First Dirichlet eigenpair of -Delta_m phi = lambda |phi|^{m-2} phi,
/// normalized so that max phi = 1.
struct EigenPair {
    GridFunction eigenfunction;
    double eigenvalue = 0.0;
    double m = 2.0;
    /// sup_i |(-Delta_m phi)_i - lambda phi_i^{m-1}| / lambda over free nodes.
    double residual = 0.0;
    int iterations = 0;
};

/// Discrete Rayleigh quotient sum omega h |Dv|^m / sum W |v|^m.
double rayleigh_quotient(const GridFunction& v, double m);

/// Inverse power iteration started from x(1-x) (1 - r^2 on the ball), or
/// from `start` when given. Stops when the relative eigenvalue change is <= tol.
/// Throws SignChange if an iterate loses positivity and NonConvergence when
/// the iteration budget runs out.
EigenPair first_eigenpair(const GridPtr& grid, double m, double tol = 1e-12,
                          const SolverConfig& config = {},
                          const std::optional<GridFunction>& start = std::nullopt,
                          int max_iterations = 500);

}  // namespace mlap
