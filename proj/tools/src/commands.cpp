#include "mlap/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "mlap/analyzer.hpp"
#include "mlap/barriers.hpp"
#include "mlap/eigen.hpp"
#include "mlap/mlaplacian.hpp"
#include "mlap/solver.hpp"

namespace mlap::cli {

namespace {

std::string format_tau(double tau) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%g", tau);
    return buffer;
}

GridPtr grid_from(const RunConfig& config, const ProblemSpec& spec) {
    return make_graded_grid(config.n, config.grading, spec.domain);
}

FitWindow window_for(const RunConfig& config, const Grid1D& grid) {
    FitWindow window = default_fit_window(grid);
    if (config.fit_min > 0.0) window.delta_min = config.fit_min;
    if (config.fit_max > 0.0) window.delta_max = config.fit_max;
    return window;
}

Block spec_block(const std::string& command, const ProblemSpec& spec) {
    return {{"command", command},
            {"domain", to_string(spec.domain)},
            {"m", format_real(spec.m)},
            {"p", format_real(spec.p)},
            {"q", format_real(spec.q)},
            {"regime", std::string(to_string(classify_regime(spec).regime))}};
}

double pi_m(double m) { return 2.0 * std::numbers::pi / (m * std::sin(std::numbers::pi / m)); }

// Rebuilds a grid and field from a CSV dump, keeping the stored distances.
GridFunction field_from_csv(const std::string& path, Domain domain) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open input CSV '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::vector<FieldRow> rows = parse_field_csv(buffer.str());
    const std::size_t n = rows.size();
    if (n < 3) throw InvalidConfig("input CSV '" + path + "' holds fewer than 3 rows");
    std::vector<double> nodes(n);
    std::vector<double> deltas(n);
    std::vector<double> values(n);
    std::vector<double> widths(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = rows[i].x;
        deltas[i] = rows[i].delta;
        values[i] = rows[i].u;
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const bool right_half = domain.is_radial() || nodes[j] >= 0.5;
        widths[j] = right_half ? deltas[j] - deltas[j + 1] : nodes[j + 1] - nodes[j];
    }
    try {
        auto grid = std::make_shared<const Grid1D>(std::move(nodes), std::move(deltas), std::move(widths),
                                                   1.0, domain);
        return GridFunction(grid, std::move(values));
    } catch (const InvalidGrid& e) {
        throw InvalidConfig("input CSV '" + path + "': " + e.what());
    }
}

FitResult run_fit(const std::string& model, const GridFunction& u, FitWindow window) {
    if (model == "power") return fit_boundary_exponent(u, window);
    if (model == "log") return fit_log_correction(u, window);
    if (model == "log-offset") return fit_log_correction_offset(u, window);
    return fit_boundary_auto(u, window);
}

std::string fit_csv(const std::string& model, const FitResult& fit) {
    std::string out = "model,exponent,log_exponent,r_squared,delta_min,delta_max,samples\n";
    out += model + "," + format_real(fit.exponent) + "," +
           (fit.log_exponent ? format_real(*fit.log_exponent) : std::string()) + "," +
           format_real(fit.r_squared) + "," + format_real(fit.window.delta_min) + "," +
           format_real(fit.window.delta_max) + "," + std::to_string(fit.samples) + "\n";
    return out;
}

// Verdict expected at tau; at the threshold itself either Marginal or Divergent is accepted.
std::string expected_verdict(double tau, double tau_star) {
    if (tau < tau_star) return "Convergent";
    if (tau > tau_star) return "Divergent";
    return "Marginal|Divergent";
}

bool verdict_matches(const std::string& expected, Verdict verdict) {
    const std::string v(to_string(verdict));
    if (expected == "Marginal|Divergent") return verdict != Verdict::Convergent;
    return expected == v;
}

}  // namespace

CommandResult cmd_classify(const RunConfig& config) {
    const ProblemSpec spec = problem_from(config);
    const RegimeReport r = classify_regime(spec);
    Block block = spec_block("classify", spec);
    block.push_back({"boundary_exponent", format_real(r.boundary_exponent)});
    if (r.log_exponent) block.push_back({"log_exponent", format_real(*r.log_exponent)});
    block.push_back({"tau_sup", format_real(r.tau_sup)});
    block.push_back({"theta_exponent", format_real(r.theta_exponent)});
    block.push_back({"c1_alpha", r.c1_alpha_regular ? "exists (unquantified)" : "not asserted"});
    block.push_back({"c0_beta", r.c0_beta_regular ? "exists (unquantified)" : "not asserted"});
    CommandResult result;
    result.report.blocks.push_back(std::move(block));
    return result;
}

CommandResult cmd_solve(const RunConfig& config) {
    const ProblemSpec spec = problem_from(config);
    const GridPtr grid = grid_from(config, spec);
    const SolveReport solved = solve_singular(spec, grid, config.solver);

    Block block = spec_block("solve", spec);
    block.push_back({"n", std::to_string(config.n)});
    block.push_back({"grading", format_real(config.grading)});
    block.push_back({"converged", format_bool(solved.converged)});
    block.push_back({"iterations", std::to_string(solved.iterations)});
    block.push_back({"final_residual", format_real(solved.final_residual)});
    block.push_back({"u_max", format_real(solved.solution.max_abs())});
    if (solved.sub_barrier) {
        block.push_back({"barrier_scale", format_real(solved.barrier_scale)});
        block.push_back({"monotone_defect", format_real(solved.monotone_defect)});
    }
    CommandResult result;
    result.report.blocks.push_back(std::move(block));
    result.files.push_back({"solution.csv", field_csv(solved.solution)});
    return result;
}

CommandResult cmd_eigen(const RunConfig& config) {
    if (!(config.m > 1.0)) throw InvalidConfig("m must exceed 1");
    const Domain domain = parse_domain(config.domain);
    const GridPtr grid = make_graded_grid(config.n, config.grading, domain);
    const EigenPair pair = first_eigenpair(grid, config.m, 1e-12, config.solver);

    Block block{{"command", "eigen"},
                {"domain", to_string(domain)},
                {"m", format_real(config.m)},
                {"n", std::to_string(config.n)},
                {"lambda", format_real(pair.eigenvalue)},
                {"residual", format_real(pair.residual)},
                {"iterations", std::to_string(pair.iterations)}};
    if (!domain.is_radial()) {
        const double reference = (config.m - 1.0) * std::pow(pi_m(config.m), config.m);
        block.push_back({"lambda_reference", format_real(reference)});
        block.push_back({"relative_error", format_real(pair.eigenvalue / reference - 1.0)});
    }
    CommandResult result;
    result.report.blocks.push_back(std::move(block));
    result.files.push_back({"eigenfunction.csv", field_csv(pair.eigenfunction)});
    return result;
}

CommandResult cmd_barrier_check(const RunConfig& config) {
    const ProblemSpec spec = problem_from(config);
    const GridPtr grid = grid_from(config, spec);
    const EigenPair base = first_eigenpair(grid, spec.m, 1e-12, config.solver);
    const BarrierFamily family = config.gamma ? BarrierFamily{PowerOfEigen{*config.gamma}}
                                              : regime_barrier_family(spec);
    const BarrierRhs rhs = SingularRhs{sample_k(spec, grid), spec.p};

    CommandResult result;
    Block head = spec_block("barrier-check", spec);
    head.push_back({"family", describe(family)});
    head.push_back({"n", std::to_string(config.n)});
    head.push_back({"c_max", format_real(config.solver.c_max)});
    result.report.blocks.push_back(std::move(head));

    bool all = true;
    for (BarrierSide side : {BarrierSide::Sub, BarrierSide::Super}) {
        const std::string name(to_string(side));
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        if (config.side != "both" && config.side != lower) continue;
        Block block{{"side", name}};
        try {
            const ScaleResult scale = auto_scale(family, side, rhs, base, config.solver.c_max);
            const BarrierCertificate& cert = scale.certificate;
            block.push_back({"certified", "true"});
            block.push_back({"c", format_real(scale.c)});
            block.push_back({"worst_x", format_real(grid->node(cert.worst_node))});
            block.push_back({"worst_margin", format_real(cert.worst_margin)});
            block.push_back({"nodes_checked", std::to_string(cert.nodes_checked)});
            result.files.push_back({"barrier_" + lower + ".csv",
                                    field_csv(build_barrier({family, scale.c, side, base}, grid))});
        } catch (const NoCertifiableScale& e) {
            all = false;
            block.push_back({"certified", "false"});
            block.push_back({"reason", e.what()});
        }
        result.report.blocks.push_back(std::move(block));
    }
    result.exit_code = all ? kExitOk : kExitVerificationFailed;
    return result;
}

CommandResult cmd_fit_exponent(const RunConfig& config) {
    CommandResult result;
    Block block;
    GridFunction u;
    std::optional<RegimeReport> predicted;
    if (!config.input.empty()) {
        u = field_from_csv(config.input, parse_domain(config.domain));
        block = {{"command", "fit-exponent"}, {"input", config.input}};
    } else {
        const ProblemSpec spec = problem_from(config);
        u = solve_singular(spec, grid_from(config, spec), config.solver).solution;
        block = spec_block("fit-exponent", spec);
        block.push_back({"n", std::to_string(config.n)});
        predicted = classify_regime(spec);
    }
    const FitResult fit = run_fit(config.fit, u, window_for(config, *u.grid));
    const double measured = fit.log_exponent ? *fit.log_exponent : fit.exponent;

    block.push_back({"model", fit.log_exponent ? "log" : "power"});
    block.push_back({"exponent", format_real(fit.exponent)});
    if (fit.log_exponent) block.push_back({"log_exponent", format_real(*fit.log_exponent)});
    if (fit.offset) block.push_back({"offset", format_real(*fit.offset)});
    block.push_back({"r_squared", format_real(fit.r_squared)});
    block.push_back({"delta_min", format_real(fit.window.delta_min)});
    block.push_back({"delta_max", format_real(fit.window.delta_max)});
    block.push_back({"samples", std::to_string(fit.samples)});
    if (predicted) {
        block.push_back({"predicted_exponent", format_real(predicted->boundary_exponent)});
        if (predicted->log_exponent) block.push_back({"predicted_log_exponent", format_real(*predicted->log_exponent)});
    }
    if (config.expect) {
        const bool pass = std::abs(measured - *config.expect) <= config.tolerance;
        block.push_back({"expect", format_real(*config.expect)});
        block.push_back({"tolerance", format_real(config.tolerance)});
        block.push_back({"pass", format_bool(pass)});
        if (!pass) result.exit_code = kExitVerificationFailed;
    }
    result.report.blocks.push_back(std::move(block));
    result.files.push_back({"fit.csv", fit_csv(config.fit, fit)});
    return result;
}

CommandResult cmd_scan_threshold(const RunConfig& config) {
    const ProblemSpec spec = problem_from(config);
    const ScanReport scan = threshold_scan(spec, config.taus, config.levels, config.grading, config.solver);

    CommandResult result;
    Block head = spec_block("scan-threshold", spec);
    head.push_back({"predicted_threshold", format_real(scan.predicted_threshold)});
    bool consistent = true;
    std::vector<Block> rows;
    std::string csv = "tau,n,norm,verdict\n";
    for (std::size_t t = 0; t < scan.tau_values.size(); ++t) {
        const double tau = scan.tau_values[t];
        const std::string expected = expected_verdict(tau, scan.predicted_threshold);
        const bool ok = verdict_matches(expected, scan.verdicts[t]);
        consistent = consistent && ok;
        Block row{{"tau", format_real(tau)},
                  {"verdict", std::string(to_string(scan.verdicts[t]))},
                  {"expected", expected}};
        for (std::size_t l = 0; l < scan.levels.size(); ++l) {
            row.push_back({"norm_n" + std::to_string(scan.levels[l]), format_real(scan.norms[l][t])});
            csv += format_real(tau) + "," + std::to_string(scan.levels[l]) + "," +
                   format_real(scan.norms[l][t]) + "," + std::string(to_string(scan.verdicts[t])) + "\n";
        }
        rows.push_back(std::move(row));
    }
    head.push_back({"consistent", format_bool(consistent)});
    result.report.blocks.push_back(std::move(head));
    for (Block& row : rows) result.report.blocks.push_back(std::move(row));
    result.files.push_back({"scan.csv", std::move(csv)});
    result.exit_code = consistent ? kExitOk : kExitVerificationFailed;
    return result;
}

CommandResult cmd_lemma_integral(const RunConfig& config) {
    if (!std::isfinite(config.a)) throw InvalidConfig("a must be finite");
    const DistanceIntegral d = distance_integral_classify(config.a, config.levels, config.grading);
    Block block{{"command", "lemma-integral"},
                {"a", format_real(config.a)},
                {"verdict", d.finite ? "Finite" : "Infinite"},
                {"value", format_real(d.value)},
                {"contraction", format_real(d.contraction)}};
    if (config.a < 1.0) {
        block.push_back({"exact", format_real(2.0 * std::pow(0.5, 1.0 - config.a) / (1.0 - config.a))});
    }
    CommandResult result;
    result.report.blocks.push_back(std::move(block));
    return result;
}

MatrixEntry parse_matrix_entry(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() < 4 || parts.size() > 5 || parts[0].empty()) {
        throw InvalidConfig("matrix entry '" + text + "' must read name:m:p:q[:gamma]");
    }
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw InvalidConfig("matrix entry '" + text + "': bad number '" + s + "'");
        return v;
    };
    MatrixEntry entry{parts[0], number(parts[1]), number(parts[2]), number(parts[3]), std::nullopt};
    if (parts.size() == 5) entry.gamma = number(parts[4]);
    return entry;
}

namespace {

void reproduce_entry(const MatrixEntry& entry, const RunConfig& config, ReproReport& out) {
    const std::string prefix = entry.name + "/";
    auto fail = [&](const std::string& id, const std::string& predicted, const std::string& why) {
        out.add({prefix + id, predicted, "error: " + why, 0.0, false});
    };

    ProblemSpec spec;
    spec.m = entry.m;
    spec.p = entry.p;
    spec.q = entry.q;
    spec.k_low = config.k_low;
    spec.k_high = config.k_high;
    try {
        spec.domain = parse_domain(config.domain);
        spec = validate_spec(spec);
    } catch (const Error& e) {
        fail("spec", "admissible", e.what());
        return;
    }
    const RegimeReport regime = classify_regime(spec);
    const std::string tag = regime.regime == Regime::Supercritical ? "Thm1.iii"
                            : regime.regime == Regime::Critical    ? "Thm1.ii"
                                                                   : "Thm1.i";

    std::map<std::size_t, SolveReport> solved;
    auto solve_at = [&](const GridPtr& grid) -> const SolveReport& {
        auto it = solved.find(grid->size());
        if (it == solved.end()) it = solved.emplace(grid->size(), solve_singular(spec, grid, config.solver)).first;
        return it->second;
    };
    std::vector<GridPtr> grids;
    try {
        for (std::size_t n : config.levels) {
            grids.push_back(make_graded_grid(n, config.grading, spec.domain));
            solve_at(grids.back());
        }
    } catch (const Error& e) {
        fail(tag + ".solve", "converged", e.what());
        return;
    }
    const SolveReport& finest = solved.at(grids.back()->size());
    const GridFunction& u = finest.solution;

    // Boundary behaviour.
    try {
        if (regime.regime == Regime::Critical) {
            const double predicted = entry.gamma.value_or(*regime.log_exponent);
            const FitResult fit = fit_log_correction(u, {1e-5, 1e-2});
            const double tol = 0.1;
            out.add({prefix + tag + ".log_exponent", format_real(predicted), format_real(*fit.log_exponent), tol,
                     std::abs(*fit.log_exponent - predicted) <= tol});
        } else {
            const double predicted = entry.gamma.value_or(regime.boundary_exponent);
            const FitResult fit = fit_boundary_exponent(u, window_for(config, *u.grid));
            const double tol = 0.03;
            out.add({prefix + tag + ".exponent", format_real(predicted), format_real(fit.exponent), tol,
                     std::abs(fit.exponent - predicted) <= tol});
        }
    } catch (const Error& e) {
        fail(tag + ".exponent", "fit", e.what());
    }

    // Gradient behaviour across the last refinement.
    const GridFunction& coarse = solved.at(grids[grids.size() - 2]->size()).solution;
    if (regime.regime == Regime::Subcritical) {
        auto sup_slope = [](const GridFunction& v) {
            double s = 0.0;
            for (double d : interval_slopes(v)) s = std::max(s, std::abs(d));
            return s;
        };
        const double ratio = sup_slope(u) / sup_slope(coarse);
        const double factor = 1.5;
        out.add({prefix + tag + ".gradient", "1", format_real(ratio), factor,
                 ratio <= factor && ratio >= 1.0 / factor});
    } else if (regime.regime == Regime::Supercritical) {
        const GradientBound bound = gradient_bound_check(coarse, u, regime.theta_exponent, 2, 2.0);
        out.add({prefix + tag + ".gradient", "1", format_real(bound.bound_constant / bound.coarse_constant), 2.0,
                 bound.pass});
    }

    // Sobolev threshold.
    std::vector<double> taus;
    if (std::isfinite(regime.tau_sup)) {
        for (double offset : {-1.0, -0.5, -0.1, 0.0, 0.5, 1.0}) {
            if (regime.tau_sup + offset >= 1.0) taus.push_back(regime.tau_sup + offset);
        }
    } else {
        taus = {spec.m, 2.0 * spec.m, 4.0 * spec.m};
    }
    try {
        const FieldAtLevel field = [&](const GridPtr& grid) { return solve_at(grid).solution; };
        const ScanReport scan = threshold_scan(field, taus, config.levels, config.grading, spec.domain,
                                               regime.tau_sup);
        for (std::size_t t = 0; t < taus.size(); ++t) {
            const std::string expected = expected_verdict(taus[t], regime.tau_sup);
            out.add({prefix + tag + ".threshold.tau=" + format_tau(taus[t]), expected,
                     std::string(to_string(scan.verdicts[t])), 0.0, verdict_matches(expected, scan.verdicts[t])});
        }
    } catch (const Error& e) {
        fail(tag + ".threshold", "scan", e.what());
    }

    // Barrier bracket on the finest level.
    try {
        std::optional<GridFunction> sub = finest.sub_barrier;
        std::optional<GridFunction> super = finest.super_barrier;
        double c = finest.barrier_scale;
        if (!sub) {
            const EigenPair base = first_eigenpair(u.grid, spec.m, 1e-12, config.solver);
            const BarrierPair pair = certify_pair(regime_barrier_family(spec),
                                                  SingularRhs{sample_k(spec, u.grid), spec.p}, base,
                                                  config.solver.c_max);
            sub = pair.sub;
            super = pair.super;
            c = pair.c;
        }
        double violation = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            violation = std::max({violation, (*sub)[i] - u[i], u[i] - (*super)[i]});
        }
        const bool pass = c <= config.solver.c_max && violation <= config.solver.picard_tol;
        out.add({prefix + tag + ".barriers", "certified c<=" + format_real(config.solver.c_max) + " bracket",
                 "c=" + format_real(c) + " violation=" + format_real(violation), config.solver.picard_tol, pass});
    } catch (const Error& e) {
        fail(tag + ".barriers", "certified", e.what());
    }
}

}  // namespace

ReproReport reproduce_theorem1(const std::vector<MatrixEntry>& matrix, const RunConfig& config) {
    if (matrix.empty()) throw InvalidConfig("reproduction matrix is empty");
    ReproReport report;
    for (const MatrixEntry& entry : matrix) reproduce_entry(entry, config, report);
    return report;
}

CommandResult cmd_reproduce_theorem1(const RunConfig& config) {
    std::vector<MatrixEntry> matrix;
    for (const std::string& text : config.matrix) {
        if (!text.empty()) matrix.push_back(parse_matrix_entry(text));
    }
    const ReproReport report = reproduce_theorem1(matrix, config);
    CommandResult result;
    result.report = report.to_structured();
    result.exit_code = report.overall() ? kExitOk : kExitVerificationFailed;
    return result;
}

}  // namespace mlap::cli
