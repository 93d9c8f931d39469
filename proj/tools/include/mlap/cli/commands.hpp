#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mlap/cli/config.hpp"
#include "mlap/cli/report.hpp"

namespace mlap::cli {

enum ExitCode : int { kExitOk = 0, kExitVerificationFailed = 1, kExitInvalidInput = 2 };

struct OutputFile {
    std::string name;
    std::string content;
};

struct CommandResult {
    int exit_code = kExitOk;
    StructuredReport report;
    std::vector<OutputFile> files;
};

CommandResult cmd_classify(const RunConfig& config);
CommandResult cmd_solve(const RunConfig& config);
CommandResult cmd_eigen(const RunConfig& config);
CommandResult cmd_barrier_check(const RunConfig& config);
CommandResult cmd_fit_exponent(const RunConfig& config);
CommandResult cmd_scan_threshold(const RunConfig& config);
CommandResult cmd_lemma_integral(const RunConfig& config);
CommandResult cmd_reproduce_theorem1(const RunConfig& config);

/// One row of the reproduction matrix, written name:m:p:q[:gamma].
/// gamma replaces the predicted boundary exponent.
struct MatrixEntry {
    std::string name;
    double m = 2.0;
    double p = 0.0;
    double q = 0.0;
    std::optional<double> gamma;
};

/// Throws InvalidConfig.
MatrixEntry parse_matrix_entry(const std::string& text);

ReproReport reproduce_theorem1(const std::vector<MatrixEntry>& matrix, const RunConfig& config);

/// Parses argv, runs the subcommand, prints the report to `out` and writes
/// files under --out-dir. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlap::cli
