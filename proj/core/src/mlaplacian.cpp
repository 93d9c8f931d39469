#include "mlap/mlaplacian.hpp"

#include <cmath>

#include "mlap/errors.hpp"

namespace mlap {

double regularized_flux(double slope, double m, double eps) noexcept {
    if (m == 2.0) return slope;
    if (eps == 0.0) {
        if (slope == 0.0) return 0.0;
        return std::copysign(std::pow(std::abs(slope), m - 1.0), slope);
    }
    return std::pow(slope * slope + eps * eps, 0.5 * (m - 2.0)) * slope;
}

double regularized_flux_derivative(double slope, double m, double eps) noexcept {
    if (m == 2.0) return 1.0;
    const double s2 = slope * slope;
    const double e2 = eps * eps;
    if (eps == 0.0) return (m - 1.0) * std::pow(std::abs(slope), m - 2.0);
    return std::pow(s2 + e2, 0.5 * (m - 4.0)) * ((m - 1.0) * s2 + e2);
}

std::vector<double> interval_slopes(const GridFunction& u) {
    const Grid1D& g = *u.grid;
    if (u.values.size() != g.size()) throw GridMismatch("value count does not match grid size");
    std::vector<double> slopes(g.intervals());
    for (std::size_t j = 0; j < slopes.size(); ++j) {
        slopes[j] = (u.values[j + 1] - u.values[j]) / g.width(j);
    }
    return slopes;
}

FluxField compute_flux(const GridFunction& u, double m, double eps) {
    const Grid1D& g = *u.grid;
    FluxField flux{u.grid, interval_slopes(u)};
    for (std::size_t j = 0; j < flux.midpoint_fluxes.size(); ++j) {
        flux.midpoint_fluxes[j] = g.flux_weight(j) * regularized_flux(flux.midpoint_fluxes[j], m, eps);
    }
    return flux;
}

GridFunction apply_mlap(const GridFunction& u, double m, double eps) {
    const Grid1D& g = *u.grid;
    const FluxField flux = compute_flux(u, m, eps);
    GridFunction out(u.grid);
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        const double left = i == 0 ? 0.0 : flux.midpoint_fluxes[i - 1];
        out.values[i] = -(flux.midpoint_fluxes[i] - left) / g.cell_weight(i);
    }
    return out;
}

double energy(const GridFunction& u, const GridFunction& theta, double m, double eps) {
    require_same_grid(u, theta);
    const Grid1D& g = *u.grid;
    const std::vector<double> slopes = interval_slopes(u);
    double stored = 0.0;
    for (std::size_t j = 0; j < slopes.size(); ++j) {
        const double s = slopes[j];
        const double density = eps == 0.0 ? std::pow(std::abs(s), m)
                                          : std::pow(s * s + eps * eps, 0.5 * m);
        stored += g.flux_weight(j) * g.width(j) * density / m;
    }
    double work = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        work += g.cell_weight(i) * theta.values[i] * u.values[i];
    }
    return stored - work;
}

double pairing(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    const Grid1D& g = *a.grid;
    double sum = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        sum += g.cell_weight(i) * a.values[i] * b.values[i];
    }
    return sum;
}

}  // namespace mlap
