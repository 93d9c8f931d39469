#pragma once

#include <vector>

#include "mlap/grid.hpp"

namespace mlap {

/// Weighted midpoint fluxes omega_j * (|Du|^2 + eps^2)^{(m-2)/2} Du, one per interval.
struct FluxField {
    GridPtr grid;
    std::vector<double> midpoint_fluxes;
};

/// Regularized flux s -> (s^2 + eps^2)^{(m-2)/2} s and its derivative.
double regularized_flux(double slope, double m, double eps) noexcept;
double regularized_flux_derivative(double slope, double m, double eps) noexcept;

/// Difference quotients (u_{j+1} - u_j) / h_j.
std::vector<double> interval_slopes(const GridFunction& u);

FluxField compute_flux(const GridFunction& u, double m, double eps = 0.0);

/// Conservative discrete -Delta_m u at free nodes. Dirichlet entries are 0.
/// On the ball the flux at r = 0 vanishes by symmetry.
GridFunction apply_mlap(const GridFunction& u, double m, double eps = 0.0);

/// Discrete energy sum_j omega_j h_j F(Du_j) - sum_i W_i theta_i u_i with
/// F(s) = (s^2 + eps^2)^{m/2} / m. Its gradient divided by W is apply_mlap - theta.
double energy(const GridFunction& u, const GridFunction& theta, double m, double eps = 0.0);

/// sum over free nodes of W_i a_i b_i.
double pairing(const GridFunction& a, const GridFunction& b);

}  // namespace mlap
