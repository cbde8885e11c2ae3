#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "todacli/checks.hpp"
#include "todacli/config.hpp"
#include "todacli/report.hpp"

namespace todacli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kParseError = 2, kValidationError = 3 };

struct RunOptions {
  std::string subcommand = "all";  // construct | residual | mass | expand | linearize | identities | all
  std::optional<toda::Precision> precision;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  Report report;
  std::vector<OutputFile> files;
};

// Applies option overrides and selects checks. Throws ConfigParseError for an unknown subcommand.
RunConfig resolve(RunConfig cfg, const RunOptions& opt);

// Runs the selected checks (independent checks in parallel) on validated input.
RunResult run_checks(const RunConfig& cfg, const Prepared& prepared);

// Full pipeline: parse, validate, run, write <out>/report.json, metadata.json
// and CSV tables. Nothing is written unless validation succeeds. Messages go to `log`.
int run_command(const std::string& config_path, const std::string& out_dir, const RunOptions& opt,
                std::ostream& log);

}  // namespace todacli
