#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "catqed/cli/config.hpp"

namespace catqed::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kVerificationFailed = 3, kIoFailure = 4 };

struct RunResult {
    int exit_code = kOk;
    std::optional<double> max_deviation;  // set when verify = true
    std::string data;                     // contents written to config.output
};

/// Runs one command, writes config.output (plus the `.config` sidecar and optional JSON/JSONL
/// files) and reports progress to `log`. Data files are written once, after all computation.
RunResult run(const RunConfig& config, std::ostream& log);

/// Full CLI entry point (argument parsing, error-to-exit-code mapping).
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace catqed::cli
