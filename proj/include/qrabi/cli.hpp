#pragma once

// Batch front end: qudit-rabi <matelem|verify|rabi|simulate|gates> --config <path>
// [--out <dir>] [--tol <x>] [--seed <k>] [--svg]
//
// Exit codes: 0 every check passed, 1 a numerical check failed,
// 2 configuration or domain error.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrabi/run_config.hpp"

namespace qrabi::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2 };

struct RunOptions {
  std::optional<double> tol;  // overrides the command's tolerances
  bool svg = false;
};

struct CommandOutput {
  nlohmann::ordered_json report;
  std::vector<std::pair<std::string, std::string>> files;  // file name, contents
  int status = kPass;
};

const std::vector<std::string>& command_names();

/// Runs one command on a scalar (non-sweep) config. Never throws; errors are
/// folded into the report and status.
CommandOutput run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opts);

/// Expands list-valued fields and runs every point concurrently; outputs are
/// merged in config order, per-point files go to point_NNN/.
CommandOutput run_sweep(const std::string& command, const RunConfig& cfg, const RunOptions& opts);

/// Writes report.json and the files of `out` into `dir`.
void write_outputs(const CommandOutput& out, const std::string& dir);

/// %.17g
std::string format_double(double v);

int run_cli(int argc, char** argv);

}  // namespace qrabi::cli
