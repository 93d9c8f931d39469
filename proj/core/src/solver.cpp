#include "mlap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mlap/barriers.hpp"
#include "mlap/eigen.hpp"
#include "mlap/mlaplacian.hpp"

namespace mlap {

std::vector<double> SolverConfig::default_eps_schedule() {
    std::vector<double> eps;
    for (int j = 1; j <= 10; ++j) eps.push_back(std::pow(10.0, -j));
    return eps;
}

void SolverConfig::validate() const {
    if (!(newton_tol > 0.0) || !(picard_tol > 0.0)) throw Error("solver tolerances must be positive");
    if (max_newton_iters <= 0 || max_picard_iters <= 0) throw Error("iteration budgets must be positive");
    if (!(damping > 0.0 && damping < 1.0)) throw Error("damping must lie in (0, 1)");
    if (eps_schedule.empty()) throw Error("eps schedule must not be empty");
    for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
        if (!(eps_schedule[j] > 0.0)) throw Error("eps schedule entries must be positive");
        if (j > 0 && !(eps_schedule[j] < eps_schedule[j - 1])) {
            throw Error("eps schedule must be strictly decreasing");
        }
    }
    if (eps_schedule.back() > 1e-10) throw Error("eps schedule must end at or below 1e-10");
    if (!(c_max > 2.0)) throw Error("c_max must exceed 2");
}

namespace {

// Solves the symmetric tridiagonal system (diag, off) x = rhs in place.
// off[k] couples unknowns k and k+1.
void solve_tridiagonal(std::vector<double>& diag, const std::vector<double>& off,
                       std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            const double factor = off[k - 1] / diag[k - 1];
            diag[k] -= factor * off[k - 1];
            rhs[k] -= factor * rhs[k - 1];
        }
        if (!(diag[k] > 0.0) || !std::isfinite(diag[k])) {
            std::ostringstream os;
            os << "Jacobian pivot " << k << " is " << diag[k];
            throw IndefiniteJacobian(os.str());
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        if (k + 1 < n) rhs[k] -= off[k] * rhs[k + 1];
        rhs[k] /= diag[k];
    }
}

// -Delta_m u + shift * u = theta at one regularization level.
struct Stage {
    const Grid1D& grid;
    const std::vector<double>& theta;
    const std::vector<double>* shift;
    double m;
    double eps;

    double reaction(std::size_t i) const { return shift ? (*shift)[i] : 0.0; }
};

double stage_energy(const Stage& s, const std::vector<double>& u) {
    const Grid1D& g = s.grid;
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        const double slope = (u[j + 1] - u[j]) / g.width(j);
        const double base = slope * slope + s.eps * s.eps;
        const double density = s.m == 2.0 ? base : std::pow(base, 0.5 * s.m);
        total += g.flux_weight(j) * g.width(j) * density / s.m;
    }
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        total += g.cell_weight(i) * (0.5 * s.reaction(i) * u[i] - s.theta[i]) * u[i];
    }
    return total;
}

// E(u + t d) - E(u) summed term by term, so that the change stays accurate
// long after it drops below the rounding level of E itself.
double energy_change(const Stage& s, const std::vector<double>& u, const std::vector<double>& step,
                     double t) {
    const Grid1D& g = s.grid;
    const std::size_t lo = g.first_free();
    auto direction = [&](std::size_t i) {
        return (i >= lo && i - lo < step.size()) ? step[i - lo] : 0.0;
    };
    double change = 0.0;
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        const double h = g.width(j);
        const double slope = (u[j + 1] - u[j]) / h;
        const double ds = t * (direction(j + 1) - direction(j)) / h;
        const double base = slope * slope + s.eps * s.eps;
        const double grow = ds * (2.0 * slope + ds);
        double term;
        if (s.m == 2.0) {
            term = 0.5 * grow;
        } else if (base > 0.0) {
            term = std::pow(base, 0.5 * s.m) * std::expm1(0.5 * s.m * std::log1p(grow / base)) / s.m;
        } else {
            term = std::pow(std::abs(ds), s.m) / s.m;
        }
        change += g.flux_weight(j) * h * term;
    }
    for (std::size_t k = 0; k < step.size(); ++k) {
        const std::size_t i = lo + k;
        const double du = t * step[k];
        change += g.cell_weight(i) * ((s.reaction(i) * (u[i] + 0.5 * du)) - s.theta[i]) * du;
    }
    return change;
}

// Energy gradient at free nodes, plus the tridiagonal Hessian when requested.
// Returns the largest gradient entry relative to the largest local term
// |F_{i-1}| + |F_i| + W_i |theta_i| (F the weighted fluxes).
double gradient(const Stage& s, const std::vector<double>& u, std::vector<double>& grad,
                std::vector<double>* diag, std::vector<double>* off) {
    const Grid1D& g = s.grid;
    const std::size_t lo = g.first_free();
    const std::size_t hi = g.last_free();
    const std::size_t nf = hi - lo + 1;
    grad.assign(nf, 0.0);
    if (diag) diag->assign(nf, 0.0);
    if (off) off->assign(nf - 1, 0.0);

    double worst = 0.0;
    double size = 0.0;
    double left_flux = 0.0;
    double left_stiff = 0.0;
    if (lo == 1) {
        const double slope = (u[1] - u[0]) / g.width(0);
        left_flux = g.flux_weight(0) * regularized_flux(slope, s.m, s.eps);
        left_stiff = g.flux_weight(0) * regularized_flux_derivative(slope, s.m, s.eps) / g.width(0);
    }
    for (std::size_t i = lo; i <= hi; ++i) {
        const double slope = (u[i + 1] - u[i]) / g.width(i);
        const double flux = g.flux_weight(i) * regularized_flux(slope, s.m, s.eps);
        const double stiff = g.flux_weight(i) * regularized_flux_derivative(slope, s.m, s.eps) / g.width(i);
        const double w = g.cell_weight(i);
        const std::size_t k = i - lo;
        grad[k] = -(flux - left_flux) + w * (s.reaction(i) * u[i] - s.theta[i]);
        worst = std::max(worst, std::abs(grad[k]));
        size = std::max(size, std::abs(flux) + std::abs(left_flux) + w * std::abs(s.theta[i]));
        if (diag) (*diag)[k] = left_stiff + stiff + w * s.reaction(i);
        if (off && k + 1 < nf) (*off)[k] = -stiff;
        left_flux = flux;
        left_stiff = stiff;
    }
    return size > 0.0 ? worst / size : worst;
}

SolveReport minimize(const GridFunction& theta, const std::vector<double>* shift, double m,
                     const SolverConfig& config, const std::optional<GridFunction>& initial) {
    config.validate();
    if (!(m > 1.0) || !std::isfinite(m)) throw Error("solve_dirichlet requires m > 1");
    if (!theta.grid || theta.values.size() != theta.grid->size()) {
        throw GridMismatch("theta does not match its grid");
    }
    const Grid1D& g = *theta.grid;
    const std::size_t lo = g.first_free();
    const std::size_t hi = g.last_free();

    bool zero_forcing = true;
    for (std::size_t i = lo; i <= hi; ++i) {
        if (!std::isfinite(theta.values[i])) {
            throw Error("theta is not finite at node " + std::to_string(i));
        }
        zero_forcing = zero_forcing && theta.values[i] == 0.0;
    }

    SolveReport report;
    report.solution = GridFunction(theta.grid);
    std::vector<double>& u = report.solution.values;
    if (initial) {
        require_same_grid(*initial, theta);
        u = initial->values;
    }
    u.back() = 0.0;
    if (lo == 1) u.front() = 0.0;
    if (zero_forcing && std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) {
        report.converged = true;
        return report;
    }

    std::vector<double> grad;
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> step;
    std::vector<double> trial;
    std::vector<double> trial_grad;

    std::vector<double> stages = config.eps_schedule;
    if (initial) stages = {config.eps_schedule.back()};

    double residual = std::numeric_limits<double>::infinity();
    for (double eps : stages) {
        const Stage stage{g, theta.values, shift, m, eps};
        double energy_now = stage_energy(stage, u);
        if (report.energy_history.empty()) report.energy_history.push_back(energy_now);

        for (int it = 0;; ++it) {
            residual = gradient(stage, u, grad, &diag, &off);
            if (residual <= config.newton_tol || it >= config.max_newton_iters) break;

            step = grad;
            for (double& v : step) v = -v;
            solve_tridiagonal(diag, off, step);
            double directional = 0.0;
            for (std::size_t k = 0; k < step.size(); ++k) directional += grad[k] * step[k];

            double t = 1.0;
            double change = 0.0;
            bool accepted = false;
            while (t > 1e-14) {
                change = energy_change(stage, u, step, t);
                if (std::isfinite(change) && change <= 1e-4 * t * directional) {
                    accepted = true;
                    break;
                }
                // Both sides at rounding level: accept on a residual decrease.
                if (std::isfinite(change) && std::abs(change) <= 1e-12 * std::abs(directional) + 1e-300) {
                    trial = u;
                    for (std::size_t k = 0; k < step.size(); ++k) trial[lo + k] += t * step[k];
                    if (gradient(stage, trial, trial_grad, nullptr, nullptr) < residual) {
                        accepted = true;
                        break;
                    }
                }
                t *= config.damping;
            }
            if (!accepted) break;
            for (std::size_t k = 0; k < step.size(); ++k) u[lo + k] += t * step[k];
            energy_now += std::min(change, 0.0);
            report.energy_history.push_back(energy_now);
            ++report.iterations;
        }
    }

    report.final_residual = residual;
    report.converged = residual <= config.newton_tol;
    if (!report.converged) {
        std::ostringstream os;
        os << "Newton iteration stalled at relative residual " << residual << " (tolerance "
           << config.newton_tol << ") after " << report.iterations << " steps";
        throw NonConvergence(os.str(), std::move(report));
    }
    return report;
}

}  // namespace

SolveReport solve_dirichlet(const GridFunction& theta, double m, const SolverConfig& config,
                            const std::optional<GridFunction>& initial) {
    return minimize(theta, nullptr, m, config, initial);
}

SolveReport solve_shifted_dirichlet(const GridFunction& theta, const GridFunction& shift, double m,
                                    const SolverConfig& config,
                                    const std::optional<GridFunction>& initial) {
    require_same_grid(theta, shift);
    for (std::size_t i = shift.grid->first_free(); i <= shift.grid->last_free(); ++i) {
        if (!(shift[i] >= 0.0) || !std::isfinite(shift[i])) {
            throw Error("reaction shift must be finite and non-negative");
        }
    }
    return minimize(theta, &shift.values, m, config, initial);
}

GridFunction sample_k(const ProblemSpec& spec, const GridPtr& grid) {
    return GridFunction::sample(grid, [&](double x, double delta) { return spec.k_value(x, delta); });
}

SolveReport solve_singular(const ProblemSpec& spec, const GridPtr& grid, const SolverConfig& config) {
    if (grid->domain() != spec.domain) throw GridMismatch("grid domain differs from the spec domain");
    return solve_singular(spec, sample_k(spec, grid), config);
}

double singular_functional(const GridFunction& u, const GridFunction& k, double m, double p) {
    require_same_grid(u, k);
    const Grid1D& g = *u.grid;
    double stored = 0.0;
    for (std::size_t j = 0; j < g.intervals(); ++j) {
        const double s = (u[j + 1] - u[j]) / g.width(j);
        stored += g.flux_weight(j) * g.width(j) * std::pow(std::abs(s), m) / m;
    }
    double work = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        const double primitive = p == 1.0 ? std::log(u[i]) : std::pow(u[i], 1.0 - p) / (1.0 - p);
        work += g.cell_weight(i) * k[i] * primitive;
    }
    return stored - work;
}

double singular_residual(const GridFunction& u, const GridFunction& k, double m, double p, double eps) {
    require_same_grid(u, k);
    const Grid1D& g = *u.grid;
    const FluxField flux = compute_flux(u, m, eps);
    double worst = 0.0;
    double size = 0.0;
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        const double left = i == 0 ? 0.0 : flux.midpoint_fluxes[i - 1];
        const double right = flux.midpoint_fluxes[i];
        const double source = g.cell_weight(i) * k[i] * std::pow(u[i], -p);
        worst = std::max(worst, std::abs(left - right - source));
        size = std::max(size, std::abs(left) + std::abs(right) + source);
    }
    return worst / size;
}

SolveReport solve_singular(const ProblemSpec& raw_spec, const GridFunction& k,
                           const SolverConfig& config) {
    const ProblemSpec spec = validate_spec(raw_spec);
    config.validate();
    const GridPtr& grid = k.grid;
    const Grid1D& g = *grid;
    if (g.domain() != spec.domain) throw GridMismatch("grid domain differs from the spec domain");
    for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
        if (!(k[i] > 0.0) || !std::isfinite(k[i])) {
            throw NonPositiveK("K must be positive and finite at node " + std::to_string(i));
        }
    }

    if (spec.p == 0.0) return solve_dirichlet(k, spec.m, config);

    const double m = spec.m;
    const double p = spec.p;
    const EigenPair base = first_eigenpair(grid, m, 1e-12, config);
    const BarrierPair pair = certify_pair(regime_barrier_family(spec), SingularRhs{k, p}, base,
                                          config.c_max);

    SolveReport report;
    report.sub_barrier = pair.sub;
    report.super_barrier = pair.super;
    report.barrier_scale = pair.c;

    const std::size_t lo = g.first_free();
    const std::size_t hi = g.last_free();

    // Tangent-shifted iteration
    //   -Delta_m u_{k+1} + L_k u_{k+1} = K u_k^{-p} + L_k u_k,  L_k = p K u_k^{-p-1}.
    // u^{-p} is convex and decreasing, so from a subsolution every iterate is
    // again a subsolution and u_k <= u_{k+1} <= any supersolution.
    GridFunction u = pair.sub;
    GridFunction theta(grid);
    GridFunction shift(grid);
    bool converged = false;
    double diff = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < config.max_picard_iters; ++iter) {
        for (std::size_t i = lo; i <= hi; ++i) {
            const double v = std::max(u[i], pair.sub[i]);
            const double source = k[i] * std::pow(v, -p);
            shift[i] = p * source / v;
            theta[i] = source + shift[i] * v;
        }
        SolveReport inner = iter == 0 ? solve_shifted_dirichlet(theta, shift, m, config)
                                      : solve_shifted_dirichlet(theta, shift, m, config, u);
        GridFunction& next = inner.solution;

        diff = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            diff = std::max(diff, std::abs(next[i] - u[i]));
            report.monotone_defect = std::max(report.monotone_defect, u[i] - next[i]);
            if (next[i] < pair.sub[i] - config.picard_tol ||
                next[i] > pair.super[i] + config.picard_tol) {
                std::ostringstream os;
                os << "iterate " << iter + 1 << " leaves the barrier bracket at node " << i
                   << " (x = " << g.node(i) << "): value " << next[i] << ", bracket ["
                   << pair.sub[i] << ", " << pair.super[i] << "]";
                throw BarrierOrderViolation(os.str());
            }
        }
        u = std::move(next);
        report.energy_history.push_back(singular_functional(u, k, m, p));
        report.iterations = iter + 1;
        if (diff <= config.picard_tol) {
            converged = true;
            break;
        }
    }

    report.final_residual = singular_residual(u, k, m, p, config.eps_schedule.back());
    report.solution = std::move(u);
    report.converged = converged;
    if (!converged) {
        std::ostringstream os;
        os << "singular iteration did not settle: last sup-norm change " << diff << " after "
           << report.iterations << " iterations";
        throw NonConvergence(os.str(), std::move(report));
    }
    return report;
}

}  // namespace mlap
