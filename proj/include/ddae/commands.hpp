#pragma once

// Subcommands of the ddae tool. Each writes results to out and diagnostics to
// err, and returns the process exit code (0 success, 1 SingularJ in check,
// 2 on errors).

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace ddae::cli {

/// Applies DDAE_LOG (error, warn, info, debug) to the default logger.
void configure_logging();

int cmd_check(const std::filesystem::path& file, std::ostream& out, std::ostream& err);

/// DOT goes to dot_file, or to out when absent.
int cmd_graph(const std::filesystem::path& file, const std::optional<std::filesystem::path>& dot_file,
              std::ostream& out, std::ostream& err);

struct SimulateOptions {
    std::optional<double> step;  // defaults to the init block's h
    double horizon = 0.0;
    std::optional<std::filesystem::path> out_file;
};

int cmd_simulate(const std::filesystem::path& file, const SimulateOptions& options,
                 std::ostream& out, std::ostream& err);

struct SpectrumOptions {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_max = 50.0;
    int max_roots = 64;
    std::optional<std::filesystem::path> out_file;
};

int cmd_spectrum(const std::filesystem::path& file, const SpectrumOptions& options,
                 std::ostream& out, std::ostream& err);

struct FsaOptions {
    std::string e;  // matrix literal
    std::string f;
    double t = 1.0;
    std::optional<std::string> poles;  // vector literal
    std::optional<std::string> gain;   // 1 x n matrix literal
    std::optional<std::filesystem::path> out_file;
};

int cmd_fsa(const FsaOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ddae::cli
