#include "mlap/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif

namespace mlap::cli {

namespace {

std::string env_name(const std::string& key) {
    std::string name = "MLAP_";
    for (char ch : key) name += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return name;
}

}  // namespace

void add_run_options(CLI::App& app, RunConfig& config) {
    auto add = [&](const std::string& key, auto& target, const std::string& help) {
        return app.add_option("--" + key, target, help)->envname(env_name(key))->capture_default_str();
    };

    add("m", config.m, "Exponent of the m-Laplacian (m > 1)")->group("Problem");
    add("p", config.p, "Singularity exponent p >= 0")->group("Problem");
    add("q", config.q, "Distance-weight exponent q >= 0")->group("Problem");
    add("k-low", config.k_low, "Lower bound of K delta^q")->group("Problem");
    add("k-high", config.k_high, "Upper bound of K delta^q")->group("Problem");
    add("domain", config.domain, "interval or ballN (N >= 2)")->group("Problem");

    add("n", config.n, "Grid node count")->group("Grid");
    add("grading", config.grading, "Boundary grading exponent (>= 1)")->group("Grid");

    add("newton-tol", config.solver.newton_tol, "Relative Newton residual tolerance")->group("Solver");
    add("max-newton-iters", config.solver.max_newton_iters, "Newton steps per eps stage")->group("Solver");
    add("eps-schedule", config.solver.eps_schedule, "Decreasing regularization schedule")
        ->delimiter(',')
        ->group("Solver");
    add("damping", config.solver.damping, "Line-search backtracking factor")->group("Solver");
    add("picard-tol", config.solver.picard_tol, "Outer iteration sup-norm tolerance")->group("Solver");
    add("max-picard-iters", config.solver.max_picard_iters, "Outer iteration budget")->group("Solver");
    add("c-max", config.solver.c_max, "Largest barrier scale tried")->group("Solver");

    add("fit-min", config.fit_min, "Lower end of the fit window (0: default)")->group("Analyzer");
    add("fit-max", config.fit_max, "Upper end of the fit window (0: default)")->group("Analyzer");
    add("taus", config.taus, "Sobolev indices for scans")->delimiter(',')->group("Analyzer");
    add("levels", config.levels, "Refinement node counts for scans")->delimiter(',')->group("Analyzer");

    add("out-dir", config.out_dir, "Directory for CSV and report files")->group("Output");
    add("formats", config.formats, "Subset of csv,report")->delimiter(',')->group("Output");

    add("a", config.a, "Exponent of the distance integral")->group("Commands");
    add("gamma", config.gamma, "Power barrier exponent override")->group("Commands");
    add("side", config.side, "Barrier side: sub, super or both")->group("Commands");
    add("fit", config.fit, "Fit model: auto, power, log or log-offset")->group("Commands");
    add("input", config.input, "Field CSV to fit instead of solving")->group("Commands");
    add("expect", config.expect, "Expected fitted exponent")->group("Commands");
    add("tolerance", config.tolerance, "Tolerance on --expect")->group("Commands");
    add("matrix", config.matrix, "Reproduction entries name:m:p:q[:gamma]")
        ->delimiter(',')
        ->group("Commands");
}

Domain parse_domain(const std::string& text) {
    if (text == "interval") return Domain::interval();
    if (text.rfind("ball", 0) == 0 && text.size() > 4) {
        int dimension = 0;
        const char* first = text.data() + 4;
        const char* last = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, dimension);
        if (ec == std::errc() && ptr == last && dimension >= 2) return Domain::ball(dimension);
    }
    throw InvalidConfig("domain must be 'interval' or 'ballN' with N >= 2, got '" + text + "'");
}

ProblemSpec problem_from(const RunConfig& config) {
    ProblemSpec spec;
    spec.m = config.m;
    spec.p = config.p;
    spec.q = config.q;
    spec.k_low = config.k_low;
    spec.k_high = config.k_high;
    spec.domain = parse_domain(config.domain);
    return validate_spec(spec);
}

void validate(const RunConfig& config) {
    try {
        config.solver.validate();
    } catch (const Error& e) {
        throw InvalidConfig(e.what());
    }
    if (config.n < 16) throw InvalidConfig("n must be at least 16");
    if (!(config.grading >= 1.0)) throw InvalidConfig("grading must be >= 1");
    if (config.fit_min < 0.0 || config.fit_max < 0.0 ||
        (config.fit_max > 0.0 && !(config.fit_max > config.fit_min))) {
        throw InvalidConfig("fit window must satisfy 0 < fit-min < fit-max");
    }
    for (double tau : config.taus) {
        if (!(tau >= 1.0)) throw InvalidConfig("every tau must be >= 1");
    }
    if (config.levels.size() < 3) throw InvalidConfig("at least 3 refinement levels are required");
    for (std::size_t k = 0; k < config.levels.size(); ++k) {
        if (config.levels[k] < 16) throw InvalidConfig("refinement levels need at least 16 nodes");
        if (k > 0 && config.levels[k] <= config.levels[k - 1]) {
            throw InvalidConfig("refinement levels must increase");
        }
    }
    for (const std::string& f : config.formats) {
        if (f != "csv" && f != "report") throw InvalidConfig("unknown output format '" + f + "'");
    }
    if (config.side != "sub" && config.side != "super" && config.side != "both") {
        throw InvalidConfig("side must be sub, super or both");
    }
    if (config.fit != "auto" && config.fit != "power" && config.fit != "log" &&
        config.fit != "log-offset") {
        throw InvalidConfig("fit must be auto, power, log or log-offset");
    }
    if (!(config.tolerance > 0.0)) throw InvalidConfig("tolerance must be positive");
}

bool wants(const RunConfig& config, const std::string& format) {
    return std::find(config.formats.begin(), config.formats.end(), format) != config.formats.end();
}

}  // namespace mlap::cli
