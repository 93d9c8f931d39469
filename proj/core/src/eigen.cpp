#include "mlap/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlap/mlaplacian.hpp"

namespace mlap {

double rayleigh_quotient(const GridFunction& v, double m) {
    const Grid1D& g = *v.grid;
    double numerator = 0.0;
    for (std::size_t j = 0; j < g.intervals(); ++j) {
        const double s = (v[j + 1] - v[j]) / g.width(j);
        numerator += g.flux_weight(j) * g.width(j) * std::pow(std::abs(s), m);
    }
    double denominator = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        denominator += g.cell_weight(i) * std::pow(std::abs(v[i]), m);
    }
    return numerator / denominator;
}

namespace {

void normalize_sup(GridFunction& v) {
    const double top = v.max_abs();
    for (double& x : v.values) x /= top;
}

void require_positive(const GridFunction& v, int iteration) {
    const Grid1D& g = *v.grid;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        if (!(v[i] > 0.0)) {
            std::ostringstream os;
            os << "eigen iterate " << iteration << " is not positive at node " << i
               << " (x = " << g.node(i) << ")";
            throw SignChange(os.str());
        }
    }
}

}  // namespace

EigenPair first_eigenpair(const GridPtr& grid, double m, double tol, const SolverConfig& config,
                          const std::optional<GridFunction>& start, int max_iterations) {
    if (!(m > 1.0)) throw Error("first_eigenpair requires m > 1");
    if (!(tol > 0.0)) throw Error("eigen tolerance must be positive");

    GridFunction phi(grid);
    if (start) {
        require_same_grid(*start, phi);
        phi.values = start->values;
        phi.values.back() = 0.0;
        if (!grid->domain().is_radial()) phi.values.front() = 0.0;
    } else if (grid->domain().is_radial()) {
        phi = GridFunction::sample(grid, [](double r, double) { return 1.0 - r * r; });
    } else {
        phi = GridFunction::sample(grid, [](double x, double) { return x * (1.0 - x); });
    }
    require_positive(phi, 0);
    normalize_sup(phi);

    const Grid1D& g = *grid;
    double lambda = rayleigh_quotient(phi, m);
    GridFunction rhs(grid);
    EigenPair pair;
    pair.m = m;
    bool converged = false;
    int iteration = 0;
    while (iteration < max_iterations) {
        ++iteration;
        for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
            rhs[i] = std::pow(phi[i], m - 1.0);
        }
        std::optional<GridFunction> warm;
        if (iteration > 1) {
            // -Delta_m (c phi) = c^{m-1} lambda phi^{m-1}, so c = lambda^{-1/(m-1)}.
            warm = phi;
            const double c = std::pow(lambda, -1.0 / (m - 1.0));
            for (double& x : warm->values) x *= c;
        }
        SolveReport solved = solve_dirichlet(rhs, m, config, warm);
        require_positive(solved.solution, iteration);
        phi = std::move(solved.solution);
        normalize_sup(phi);
        const double next = rayleigh_quotient(phi, m);
        const double change = std::abs(next - lambda);
        lambda = next;
        if (change <= tol * lambda) {
            converged = true;
            break;
        }
    }

    const GridFunction lap = apply_mlap(phi, m, config.eps_schedule.back());
    double residual = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        residual = std::max(residual, std::abs(lap[i] - lambda * std::pow(phi[i], m - 1.0)));
    }

    pair.eigenfunction = std::move(phi);
    pair.eigenvalue = lambda;
    pair.residual = residual / lambda;
    pair.iterations = iteration;
    if (!converged) {
        SolveReport partial;
        partial.solution = pair.eigenfunction;
        partial.iterations = iteration;
        throw NonConvergence("inverse power iteration did not converge in " +
                                 std::to_string(max_iterations) + " iterations",
                             std::move(partial));
    }
    return pair;
}

}  // namespace mlap
