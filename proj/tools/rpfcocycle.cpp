// Command-line front end over the C API.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "rpf/rpf.h"

namespace {

constexpr int kExitIo = 4;

void write_error_report(const std::string& path, const std::string& command, int code, const std::string& message) {
  nlohmann::json r;
  r["tool"] = {{"name", "rpfcocycle"}, {"version", rpf_version()}};
  r["command"] = command;
  r["error"] = {{"message", message}};
  r["exit_code"] = code;
  std::ofstream out(path, std::ios::binary);
  out << r.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-operator cocycles over sofic factors"};
  app.set_version_flag("--version", std::string(rpf_version()));
  std::string command;
  std::string config_path;
  std::string output_path;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> steps;
  app.add_option("command", command, "validate | class-degree | lyapunov | pressure | cones | decompose | verify")
      ->required()
      ->check(CLI::IsMember({"validate", "class-degree", "lyapunov", "pressure", "cones", "decompose", "verify"}));
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_option("--output", output_path, "report path (JSON)")->required();
  app.add_option("--trace", trace_path, "batch trace path (CSV)");
  app.add_option("--seed", seed, "override run.seed");
  app.add_option("--steps", steps, "override run.steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitIo;
  }

  rpf_config* cfg = nullptr;
  rpf_status status = rpf_config_load(config_path.c_str(), &cfg);
  if (status == RPF_OK && seed) status = rpf_config_set_seed(cfg, *seed);
  if (status == RPF_OK && steps) status = rpf_config_set_steps(cfg, *steps);
  if (status != RPF_OK) {
    const std::string message = rpf_last_error();
    std::cerr << "error: " << message << "\n";
    rpf_config_free(cfg);
    if (status != RPF_IO_ERROR) write_error_report(output_path, command, static_cast<int>(status), message);
    return status == RPF_IO_ERROR ? kExitIo : static_cast<int>(status);
  }

  rpf_report* report = nullptr;
  status = rpf_run(cfg, command.c_str(), &report);
  rpf_config_free(cfg);
  if (!report) {
    std::cerr << "error: " << rpf_last_error() << "\n";
    return status == RPF_INVALID_ARGUMENT ? kExitIo : static_cast<int>(status);
  }
  const int code = rpf_report_exit_code(report);
  if (code != 0) std::cerr << command << ": " << rpf_last_error() << "\n";
  const rpf_status written = rpf_report_write(report, output_path.c_str(), trace_path.empty() ? nullptr : trace_path.c_str());
  rpf_report_free(report);
  if (written != RPF_OK) {
    std::cerr << "error: " << rpf_last_error() << "\n";
    return kExitIo;
  }
  return code;
}
