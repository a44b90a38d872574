#include "rpf/rpf.h"

#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "rpf/config.hpp"
#include "rpf/driver.hpp"
#include "rpf/error.hpp"

struct rpf_config {
  rpf::Config cfg;
};

struct rpf_report {
  std::string json;
  std::string trace;
  int exit_code = 0;
};

namespace {

thread_local std::string last_error;

rpf_status fail(rpf_status s, const std::string& message) {
  last_error = message;
  return s;
}

rpf_status status_of(int exit_code) {
  switch (exit_code) {
    case rpf::ExitOk: return RPF_OK;
    case rpf::ExitInvalidConfig: return RPF_INVALID_CONFIG;
    case rpf::ExitVerificationFailed: return RPF_VERIFICATION_FAILED;
    case rpf::ExitStructural: return RPF_STRUCTURAL;
    case rpf::ExitIo: return RPF_IO_ERROR;
    default: return RPF_INTERNAL;
  }
}

template <class F>
rpf_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const rpf::Error& e) {
    if (e.kind() == rpf::ErrorKind::InvalidArgument) return fail(RPF_INVALID_ARGUMENT, e.what());
    return fail(status_of(rpf::exit_code_for(e)), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RPF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RPF_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* rpf_version(void) { return rpf::kVersion; }

const char* rpf_last_error(void) { return last_error.c_str(); }

rpf_status rpf_config_parse(const char* text, size_t len, rpf_config** out) {
  if (!text || !out) return fail(RPF_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto* handle = new rpf_config{rpf::parse_config(std::string_view(text, len))};
    *out = handle;
    return RPF_OK;
  });
}

rpf_status rpf_config_load(const char* path, rpf_config** out) {
  if (!path || !out) return fail(RPF_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(RPF_IO_ERROR, std::string("cannot open config '") + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return rpf_config_parse(text.data(), text.size(), out);
}

void rpf_config_free(rpf_config* cfg) { delete cfg; }

rpf_status rpf_config_set_seed(rpf_config* cfg, uint64_t seed) {
  if (!cfg) return fail(RPF_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    cfg->cfg.set_seed(seed);
    return RPF_OK;
  });
}

rpf_status rpf_config_set_steps(rpf_config* cfg, uint64_t steps) {
  if (!cfg) return fail(RPF_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    cfg->cfg.set_steps(static_cast<std::size_t>(steps));
    return RPF_OK;
  });
}

rpf_status rpf_run(const rpf_config* cfg, const char* command, rpf_report** out) {
  if (!cfg || !command || !out) return fail(RPF_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    rpf::CommandResult result = rpf::run_command(command, cfg->cfg);
    auto* report = new rpf_report{result.report.dump(2) + "\n", std::move(result.trace_csv), result.exit_code};
    *out = report;
    const rpf_status s = status_of(report->exit_code);
    if (s != RPF_OK) {
      const auto& r = result.report;
      last_error = r.contains("error") ? r["error"]["message"].get<std::string>() : "verification failed";
    }
    return s;
  });
}

const char* rpf_report_json(const rpf_report* report) { return report ? report->json.c_str() : ""; }

const char* rpf_report_trace_csv(const rpf_report* report) { return report ? report->trace.c_str() : ""; }

int rpf_report_passed(const rpf_report* report) { return report && report->exit_code == rpf::ExitOk ? 1 : 0; }

int rpf_report_exit_code(const rpf_report* report) { return report ? report->exit_code : rpf::ExitIo; }

rpf_status rpf_report_write(const rpf_report* report, const char* json_path, const char* trace_path) {
  if (!report || !json_path) return fail(RPF_INVALID_ARGUMENT, "null argument");
  {
    std::ofstream out(json_path, std::ios::binary);
    if (!out || !(out << report->json) || !out.flush()) {
      return fail(RPF_IO_ERROR, std::string("cannot write report '") + json_path + "'");
    }
  }
  if (trace_path) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out || !(out << report->trace) || !out.flush()) {
      return fail(RPF_IO_ERROR, std::string("cannot write trace '") + trace_path + "'");
    }
  }
  return RPF_OK;
}

void rpf_report_free(rpf_report* report) { delete report; }

}  // extern "C"
