#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mlap/errors.hpp"
#include "mlap/problem.hpp"
#include "mlap/solver.hpp"

namespace CLI {
class App;
}

namespace mlap::cli {

class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Every key accepted on the command line, in a --config file, or through
/// MLAP_* environment variables. Keys are the long flag names.
struct RunConfig {
    // problem
    double m = 2.0;
    double p = 0.0;
    double q = 0.0;
    double k_low = 1.0;
    double k_high = 1.0;
    std::string domain = "interval";

    // grid
    std::size_t n = 2049;
    double grading = 3.0;

    SolverConfig solver;

    // analyzer; a zero window bound selects the default window
    double fit_min = 0.0;
    double fit_max = 0.0;
    std::vector<double> taus{2.0, 2.5, 3.0, 3.5, 4.0};
    std::vector<std::size_t> levels{1025, 2049, 4097, 8193};

    // output
    std::string out_dir;
    std::vector<std::string> formats{"csv", "report"};

    // command specific
    double a = 0.5;
    std::optional<double> gamma;
    std::string side = "both";
    std::string fit = "auto";
    std::string input;
    std::optional<double> expect;
    double tolerance = 0.03;
    std::vector<std::string> matrix{"E1:2:0.3:0.3", "E2:2:0.5:0.5", "E3:2:0.5:1"};
};

/// Registers the RunConfig flags on `app` with MLAP_<KEY> environment fallbacks.
void add_run_options(CLI::App& app, RunConfig& config);

/// "interval" or "ball<N>".
Domain parse_domain(const std::string& text);

/// Validated problem spec built from the config. Throws AdmissibilityViolation,
/// NonPositiveK or InvalidConfig.
ProblemSpec problem_from(const RunConfig& config);

/// Checks grid, analyzer and output keys. Throws InvalidConfig.
void validate(const RunConfig& config);

bool wants(const RunConfig& config, const std::string& format);

}  // namespace mlap::cli
