#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace conespec::cli {

// exit codes: 0 pass, 1 verification failure, 2 usage error, 3 internal error
enum ExitCode { kOk = 0, kVerificationFail = 1, kUsageError = 2, kInternalError = 3 };

struct RunConfig {
    std::string command;
    int dim = 3;
    double cap_angle = 1.5707963267948966;
    double nu = 0.5;
    double p = 0.0;  // 0 = derive from the strip report
    std::uint64_t seed = 42;
    int mesh = 128;
    int levels = 3;
    double m_override = 0.0;  // phi-table: use this M instead of the eigensolve
    std::string out_path;     // empty = stdout
    std::string format = "json";
};

struct RunResult {
    int exit_code = kOk;
    nlohmann::ordered_json report;
    std::string error;
};

/// Parses argv (without the program name); throws nothing, reports usage errors in the result.
RunResult run_cli(const std::vector<std::string>& args);

/// Executes a parsed config (parse step already validated the numeric ranges).
RunResult run_command(const RunConfig& cfg);

}  // namespace conespec::cli
