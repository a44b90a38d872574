#pragma once

// Command orchestration shared by the C API and the command-line tool.

#include <json.hpp>
#include <string>
#include <vector>

#include "rpf/config.hpp"
#include "rpf/error.hpp"

namespace rpf {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { ExitOk = 0, ExitInvalidConfig = 1, ExitVerificationFailed = 2, ExitStructural = 3, ExitIo = 4 };

int exit_code_for(const Error& e);

const std::vector<std::string>& command_names();

struct CommandResult {
  nlohmann::json report;
  std::string trace_csv;  ///< empty for commands without batch estimates
  int exit_code = ExitOk;
};

/// Runs one command. Library errors are caught and turned into an error
/// report with the matching exit code; unknown commands throw InvalidArgument.
CommandResult run_command(const std::string& command, const Config& cfg);

/// Report for a configuration that could not be loaded.
nlohmann::json error_report(const std::string& command, const Error& e);

/// Finite doubles as numbers, infinities as "inf"/"-inf", NaN as null.
nlohmann::json number_json(double x);

}  // namespace rpf
