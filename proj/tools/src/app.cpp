#include <filesystem>
#include <fstream>
#include <ostream>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "mlap/cli/commands.hpp"

namespace mlap::cli {

namespace {

using Command = CommandResult (*)(const RunConfig&);

struct Subcommand {
    const char* name;
    const char* help;
    Command run;
};

constexpr Subcommand kSubcommands[] = {
    {"classify", "Regime and predicted exponents of a spec", cmd_classify},
    {"solve", "Solve the singular problem and dump the field", cmd_solve},
    {"eigen", "First m-Laplace eigenpair", cmd_eigen},
    {"barrier-check", "Auto-scale and certify the regime barriers", cmd_barrier_check},
    {"fit-exponent", "Fit the boundary exponent of a solved or loaded field", cmd_fit_exponent},
    {"scan-threshold", "Sobolev norms of the solution under refinement", cmd_scan_threshold},
    {"lemma-integral", "Finiteness of the integral of delta^{-a}", cmd_lemma_integral},
    {"reproduce-theorem1", "Run every claim on a matrix of specs", cmd_reproduce_theorem1},
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    file << content;
    file.close();
    if (!file) throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    CLI::App app{"Solver and verification toolkit for -Delta_m u = K u^{-p}", "mlap"};
    app.set_config("--config", "", "Flat key = value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    add_run_options(app, config);

    std::vector<std::pair<CLI::App*, Command>> commands;
    for (const Subcommand& sub : kSubcommands) {
        CLI::App* handle = app.add_subcommand(sub.name, sub.help);
        handle->fallthrough();
        commands.emplace_back(handle, sub.run);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInvalidInput;
    }

    std::string name;
    CommandResult result;
    try {
        validate(config);
        for (const auto& [handle, command] : commands) {
            if (handle->parsed()) {
                name = handle->get_name();
                result = command(config);
            }
        }
    } catch (const InvalidConfig& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const AdmissibilityViolation& e) {
        err << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const NonPositiveK& e) {
        err << "non-positive K: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const InvalidGrading& e) {
        err << "invalid grading: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const InvalidGrid& e) {
        err << "invalid grid: " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const Error& e) {
        err << name << " failed: " << e.what() << '\n';
        return kExitVerificationFailed;
    }

    const std::string text = result.report.serialize();
    out << text;
    if (!config.out_dir.empty()) {
        const std::filesystem::path dir(config.out_dir);
        try {
            std::filesystem::create_directories(dir);
            if (wants(config, "csv")) {
                for (const OutputFile& file : result.files) write_file(dir / file.name, file.content);
            }
            if (wants(config, "report")) write_file(dir / (name + ".report"), text);
        } catch (const std::filesystem::filesystem_error& e) {
            err << "cannot write output under '" << dir.string() << "': " << e.what() << '\n';
            return kExitInvalidInput;
        }
    }
    return result.exit_code;
}

}  // namespace mlap::cli
