#include "mlap/analyzer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mlap/mlaplacian.hpp"

namespace mlap {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double count = static_cast<double>(xs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mean_x += xs[k];
        mean_y += ys[k];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mean_x;
        const double dy = ys[k] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double r = ys[k] - (fit.intercept + fit.slope * xs[k]);
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

struct Samples {
    std::vector<double> deltas;
    std::vector<double> values;
};

Samples window_samples(const GridFunction& u, FitWindow window) {
    if (!(window.delta_min > 0.0) || !(window.delta_max > window.delta_min)) {
        throw InsufficientWindow("fit window must satisfy 0 < delta_min < delta_max");
    }
    const Grid1D& g = *u.grid;
    Samples s;
    auto inside = [&](double d) { return d >= window.delta_min && d <= window.delta_max; };
    if (g.symmetric()) {
        const std::size_t n = g.size();
        for (std::size_t i = 1; 2 * i < n - 1; ++i) {
            if (!inside(g.delta(i))) continue;
            s.deltas.push_back(g.delta(i));
            s.values.push_back(0.5 * (u[i] + u[n - 1 - i]));
        }
    } else {
        for (std::size_t i = g.first_free(); i <= g.last_free(); ++i) {
            if (!inside(g.delta(i))) continue;
            s.deltas.push_back(g.delta(i));
            s.values.push_back(u[i]);
        }
    }
    if (s.deltas.size() < 10) {
        std::ostringstream os;
        os << "fit window [" << window.delta_min << ", " << window.delta_max << "] holds "
           << s.deltas.size() << " nodes, need at least 10";
        throw InsufficientWindow(os.str());
    }
    for (double v : s.values) {
        if (!(v > 0.0)) throw NonPositiveValues("field is not positive inside the fit window");
    }
    return s;
}

}  // namespace

FitWindow default_fit_window(const Grid1D& grid) {
    double max_delta = 0.0;
    for (double d : grid.deltas()) max_delta = std::max(max_delta, d);
    const double lower = 10.0 * grid.min_width();
    const double upper = std::min(max_delta / 8.0, lower * 1e4);
    return {lower, upper};
}

FitResult fit_boundary_exponent(const GridFunction& u, FitWindow window) {
    const Samples s = window_samples(u, window);
    std::vector<double> xs(s.deltas.size());
    std::vector<double> ys(s.deltas.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xs[k] = std::log(s.deltas[k]);
        ys[k] = std::log(s.values[k]);
    }
    const LineFit line = least_squares(xs, ys);
    FitResult out;
    out.exponent = line.slope;
    out.r_squared = line.r_squared;
    out.window = window;
    out.constant = std::exp(line.intercept);
    out.samples = xs.size();
    return out;
}

FitResult fit_log_correction(const GridFunction& u, FitWindow window) {
    if (!(window.delta_max < 1.0)) throw InsufficientWindow("log fit needs delta_max < 1");
    const Samples s = window_samples(u, window);
    std::vector<double> xs(s.deltas.size());
    std::vector<double> ys(s.deltas.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        xs[k] = std::log(std::log(1.0 / s.deltas[k]));
        ys[k] = std::log(s.values[k] / s.deltas[k]);
    }
    const LineFit line = least_squares(xs, ys);
    FitResult out;
    out.exponent = 1.0;
    out.log_exponent = line.slope;
    out.r_squared = line.r_squared;
    out.window = window;
    out.constant = std::exp(line.intercept);
    out.samples = xs.size();
    return out;
}

namespace {

struct OffsetFit {
    double scale = 0.0;
    double offset = 0.0;
    double sse = 0.0;
};

// Linear least squares of y = scale * x^s + offset for fixed s.
OffsetFit offset_fit(const std::vector<double>& logs, const std::vector<double>& ys, double s) {
    std::vector<double> xs(logs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = std::pow(logs[k], s);
    const LineFit line = least_squares(xs, ys);
    OffsetFit fit{line.slope, line.intercept, 0.0};
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double r = ys[k] - (fit.offset + fit.scale * xs[k]);
        fit.sse += r * r;
    }
    return fit;
}

}  // namespace

FitResult fit_log_correction_offset(const GridFunction& u, FitWindow window) {
    if (!(window.delta_max < 1.0)) throw InsufficientWindow("log fit needs delta_max < 1");
    const Samples samples = window_samples(u, window);
    std::vector<double> logs(samples.deltas.size());
    std::vector<double> ys(samples.deltas.size());
    double mean = 0.0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
        logs[k] = std::log(1.0 / samples.deltas[k]);
        ys[k] = samples.values[k] / samples.deltas[k];
        mean += ys[k];
    }
    mean /= static_cast<double>(ys.size());

    constexpr double kLow = 0.02;
    constexpr double kHigh = 3.0;
    constexpr int kCoarse = 300;
    auto sse = [&](double s) { return offset_fit(logs, ys, s).sse; };
    int best = 0;
    double best_sse = sse(kLow);
    for (int j = 1; j <= kCoarse; ++j) {
        const double value = sse(kLow + (kHigh - kLow) * j / kCoarse);
        if (value < best_sse) {
            best_sse = value;
            best = j;
        }
    }
    const double step = (kHigh - kLow) / kCoarse;
    double a = std::max(kLow, kLow + (best - 1) * step);
    double b = std::min(kHigh, kLow + (best + 1) * step);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    while (b - a > 1e-10) {
        if (sse(c) < sse(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - ratio * (b - a);
        d = a + ratio * (b - a);
    }
    const double s = 0.5 * (a + b);
    const OffsetFit fit = offset_fit(logs, ys, s);

    double sst = 0.0;
    for (double y : ys) sst += (y - mean) * (y - mean);
    FitResult out;
    out.exponent = 1.0;
    out.log_exponent = s;
    out.r_squared = sst > 0.0 ? std::clamp(1.0 - fit.sse / sst, 0.0, 1.0) : 1.0;
    out.window = window;
    out.constant = fit.scale;
    out.offset = fit.offset;
    out.samples = ys.size();
    return out;
}

FitResult fit_boundary_auto(const GridFunction& u, FitWindow window) {
    FitResult power = fit_boundary_exponent(u, window);
    if (std::abs(power.exponent - 1.0) >= 0.1) return power;
    // Split at the median sample; a geometric split leaves graded grids with
    // too few nodes in the inner half.
    const Samples s = window_samples(u, window);
    const double split = s.deltas[s.deltas.size() / 2];
    double lower_slope = 0.0;
    double upper_slope = 0.0;
    try {
        lower_slope = fit_boundary_exponent(u, {window.delta_min, split}).exponent;
        upper_slope = fit_boundary_exponent(u, {split, window.delta_max}).exponent;
    } catch (const InsufficientWindow&) {
        return power;
    }
    // A log factor makes the local slope 1 - s / log(1/delta) creep toward 1
    // as the window moves to the boundary.
    if (lower_slope - upper_slope > 0.005 && power.exponent < 1.0) return fit_log_correction(u, window);
    return power;
}

double sobolev_seminorm(const GridFunction& u, double tau) {
    if (!(tau >= 1.0)) throw Error("Sobolev index tau must be >= 1");
    const Grid1D& g = *u.grid;
    double sum = 0.0;
    for (std::size_t j = 0; j < g.intervals(); ++j) {
        const double s = std::abs((u[j + 1] - u[j]) / g.width(j));
        sum += g.flux_weight(j) * g.width(j) * std::pow(s, tau);
    }
    return std::pow(sum, 1.0 / tau);
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Convergent: return "Convergent";
        case Verdict::Divergent: return "Divergent";
        case Verdict::Marginal: return "Marginal";
    }
    return "?";
}

Verdict classify_sequence(std::span<const double> norms, double tau, const VerdictRule& rule) {
    if (norms.size() < 3) throw Error("a refinement verdict needs at least 3 levels");
    if (std::all_of(norms.begin(), norms.end(), [](double v) { return v == 0.0; })) {
        return Verdict::Convergent;
    }
    std::vector<double> ratios;
    for (std::size_t k = 0; k + 1 < norms.size(); ++k) ratios.push_back(norms[k + 1] / norms[k]);

    const double finest = ratios.back();
    if (std::abs(finest - 1.0) <= rule.convergent_band) return Verdict::Convergent;

    const bool all_large = std::all_of(ratios.begin(), ratios.end(),
                                       [&](double r) { return r >= rule.divergent_ratio; });
    bool growing = true;
    for (std::size_t k = 0; k + 1 < ratios.size(); ++k) growing = growing && ratios[k + 1] > ratios[k];
    if (all_large || (growing && finest > 1.0)) return Verdict::Divergent;

    // ||Du||^tau is additive over cells: a convergent sequence has increments
    // that shrink geometrically; a log divergence keeps them constant.
    const std::size_t last = norms.size() - 1;
    const double d_last = std::pow(norms[last], tau) - std::pow(norms[last - 1], tau);
    const double d_prev = std::pow(norms[last - 1], tau) - std::pow(norms[last - 2], tau);
    if (finest > 1.0 && d_prev > 0.0 && d_last / d_prev >= rule.divergent_contraction) {
        return Verdict::Divergent;
    }
    return Verdict::Marginal;
}

ScanReport threshold_scan(const FieldAtLevel& field, const std::vector<double>& taus,
                          const std::vector<std::size_t>& levels, double grading, Domain domain,
                          double predicted_threshold, const VerdictRule& rule) {
    if (levels.size() < 4) throw Error("threshold_scan needs at least 4 refinement levels");
    if (taus.empty()) throw Error("threshold_scan needs at least one tau");
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (!(levels[k] > levels[k - 1])) throw Error("refinement levels must increase");
    }
    ScanReport report;
    report.tau_values = taus;
    report.levels = levels;
    report.predicted_threshold = predicted_threshold;
    for (std::size_t n : levels) {
        const GridPtr grid = make_graded_grid(n, grading, domain);
        GridFunction u;
        try {
            u = field(grid);
        } catch (const Error& e) {
            throw SolveFailed("solve failed at n = " + std::to_string(n) + ": " + e.what());
        }
        std::vector<double> row;
        for (double tau : taus) row.push_back(sobolev_seminorm(u, tau));
        report.norms.push_back(std::move(row));
    }
    for (std::size_t t = 0; t < taus.size(); ++t) {
        std::vector<double> column;
        for (const auto& row : report.norms) column.push_back(row[t]);
        report.verdicts.push_back(classify_sequence(column, taus[t], rule));
    }
    return report;
}

ScanReport threshold_scan(const ProblemSpec& spec, const std::vector<double>& taus,
                          const std::vector<std::size_t>& levels, double grading,
                          const SolverConfig& config, const VerdictRule& rule) {
    const RegimeReport regime = classify_regime(spec);
    auto field = [&](const GridPtr& grid) { return solve_singular(spec, grid, config).solution; };
    return threshold_scan(field, taus, levels, grading, spec.domain, regime.tau_sup, rule);
}

ScanReport threshold_scan(const std::function<double(double, double)>& theta, double m,
                          Domain domain, const std::vector<double>& taus,
                          const std::vector<std::size_t>& levels, double grading,
                          double predicted_threshold, const SolverConfig& config,
                          const VerdictRule& rule) {
    auto field = [&](const GridPtr& grid) {
        return solve_dirichlet(GridFunction::sample(grid, theta), m, config).solution;
    };
    return threshold_scan(field, taus, levels, grading, domain, predicted_threshold, rule);
}

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290,
                                               0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

double gauss_power(double lo, double hi, double a) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
        sum += kGaussWeights[k] * (std::pow(mid - half * kGaussNodes[k], -a) +
                                   std::pow(mid + half * kGaussNodes[k], -a));
    }
    return half * sum;
}

// Integral of delta^{-a} over the interval grid, cell by cell in the
// distance coordinate (cells crossing x = 1/2 are split there).
double distance_integral(const Grid1D& g, double a) {
    double total = 0.0;
    for (std::size_t j = 0; j < g.intervals(); ++j) {
        const double x0 = g.node(j);
        const double x1 = g.node(j + 1);
        if (x1 <= 0.5 || x0 >= 0.5) {
            const double lo = std::min(g.delta(j), g.delta(j + 1));
            const double hi = std::max(g.delta(j), g.delta(j + 1));
            total += gauss_power(lo, hi, a);
        } else {
            total += gauss_power(g.delta(j), 0.5, a) + gauss_power(g.delta(j + 1), 0.5, a);
        }
    }
    return total;
}

}  // namespace

DistanceIntegral distance_integral_classify(double a, const std::vector<std::size_t>& levels,
                                            double grading) {
    if (levels.size() < 4) throw Error("distance_integral_classify needs at least 4 levels");
    DistanceIntegral out;
    for (std::size_t n : levels) {
        const GridPtr grid = make_graded_grid(n, grading, Domain::interval());
        out.partial_integrals.push_back(distance_integral(*grid, a));
    }
    const auto& s = out.partial_integrals;
    const std::size_t last = s.size() - 1;
    const double d_last = s[last] - s[last - 1];
    const double d_prev = s[last - 1] - s[last - 2];
    if (std::abs(d_last) <= 1e-13 * std::abs(s[last])) {
        out.finite = true;
        out.value = s[last];
        out.contraction = 0.0;
        return out;
    }
    out.contraction = d_last / d_prev;
    // Increments of a convergent integral shrink by 2^{-grading (1 - a)} per level.
    out.finite = d_prev > 0.0 && out.contraction < 0.995;
    if (out.finite) {
        out.value = s[last] + d_last * out.contraction / (1.0 - out.contraction);
    } else {
        out.value = s[last];
    }
    return out;
}

double gradient_bound_constant(const GridFunction& w, double a, std::size_t skip_cells) {
    const Grid1D& g = *w.grid;
    const std::size_t first = g.domain().is_radial() ? 0 : skip_cells;
    if (g.intervals() <= first + skip_cells) throw Error("skip zone covers the whole grid");
    const std::size_t last = g.intervals() - 1 - skip_cells;
    double best = 0.0;
    for (std::size_t j = first; j <= last; ++j) {
        const double slope = std::abs((w[j + 1] - w[j]) / g.width(j));
        best = std::max(best, slope * std::pow(g.midpoint_delta(j), a - 1.0));
    }
    return best;
}

GradientBound gradient_bound_check(const GridFunction& coarse, const GridFunction& fine, double a,
                                   std::size_t skip_cells, double factor) {
    GradientBound out;
    out.coarse_constant = gradient_bound_constant(coarse, a, skip_cells);
    out.bound_constant = gradient_bound_constant(fine, a, skip_cells);
    const double hi = std::max(out.coarse_constant, out.bound_constant);
    const double lo = std::min(out.coarse_constant, out.bound_constant);
    out.pass = std::isfinite(hi) && lo > 0.0 && hi <= factor * lo;
    return out;
}

}  // namespace mlap
