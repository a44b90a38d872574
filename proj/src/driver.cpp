#include "rpf/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "rpf/theorem.hpp"

namespace rpf {

using nlohmann::json;

namespace {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json numbers_json(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number_json(x));
  return out;
}

json symbols_json(const Sft& sft, const std::vector<Symbol>& symbols) {
  json out = json::array();
  for (Symbol s : symbols) out.push_back(sft.name(s));
  return out;
}

json system_json(const Config& cfg, const Experiment& ex) {
  json j;
  j["source_symbols"] = cfg.code.source().size();
  j["target_symbols"] = cfg.code.target_size();
  j["dimension"] = ex.code.source().size();
  j["recoded_block"] = ex.recoded_block > 0 ? json(ex.recoded_block) : json(nullptr);
  j["potential_range"] = cfg.potential.range();
  j["image_states"] = ex.image.num_states();
  j["image_edges"] = ex.image.edges().size();
  j["measure_mode"] = to_string(cfg.measure.mode);
  j["measure_states"] = numbers_json(ex.nu.stationary());
  if (ex.measure_language) {
    json lang;
    lang["subset_of_image"] = ex.measure_language->subset_of_image;
    lang["covers_image"] = ex.measure_language->covers_image;
    lang["witness"] = ex.measure_language->witness ? json(cfg.code.format_target(*ex.measure_language->witness))
                                                   : json(nullptr);
    j["measure_language"] = lang;
  }
  return j;
}

json class_degree_json(const CodeSpec& code, const ClassDegreeResult& cd, const RepresentativeFibers& fibers) {
  const auto& cert = cd.certificate;
  json c;
  c["W"] = code.format_target(cert.W);
  c["l"] = cert.l;
  c["q"] = code.target_names()[static_cast<std::size_t>(cert.q)];
  c["B"] = symbols_json(code.source(), cert.B);
  c["endpoint_pairs"] = cert.routes.size();
  json R = json::object();
  for (std::size_t i = 0; i < cert.B.size(); ++i) {
    R[code.source().name(cert.B[i])] = symbols_json(code.source(), fibers.R[i]);
  }
  json j;
  j["value"] = cd.value;
  j["stabilized"] = cd.stabilized;
  j["best_by_length"] = cd.best_by_length;
  j["certificate"] = c;
  j["representative_fibers"] = R;
  j["uncovered"] = symbols_json(code.source(), fibers.uncovered);
  return j;
}

json lyapunov_json(const LyapunovReport& lyap, const MultiplicityResult& mult) {
  json j;
  j["exponents"] = numbers_json(lyap.exponents);
  j["std_errors"] = numbers_json(lyap.std_errors);
  j["steps"] = lyap.steps;
  j["burn_in"] = lyap.burn_in;
  j["seed"] = lyap.seed;
  j["multiplicity"] = mult.multiplicity;
  j["multiplicity_threshold"] = number_json(mult.threshold);
  j["gap"] = mult.gap ? number_json(*mult.gap) : json(nullptr);
  return j;
}

json pressure_json(const PressureEstimate& p) {
  json j;
  j["value"] = number_json(p.value);
  j["std_error"] = number_json(p.std_error);
  j["n"] = p.n;
  j["method"] = to_string(p.method);
  return j;
}

json cones_json(const ConeParams& params, const std::optional<ConeDiagnostics>& d, const std::string& error,
                std::optional<bool> conetocone) {
  json j;
  j["params"] = {{"beta", params.beta}, {"seminorm_phi", number_json(params.seminorm_phi)}, {"a", number_json(params.a)},
                 {"b", number_json(params.b)}, {"D", number_json(params.D)}};
  if (d) {
    j["diagnostics"] = {{"A_bound", number_json(d->A_bound)},
                        {"t", number_json(d->t)},
                        {"K_bound", number_json(d->K_bound)},
                        {"empirical_diameter", number_json(d->empirical_diameter)},
                        {"contraction_coeff", number_json(d->contraction_coeff)},
                        {"window_length", d->window_length},
                        {"diameter_within_bound", d->empirical_diameter <= d->K_bound}};
  } else {
    j["diagnostics"] = nullptr;
  }
  j["error"] = error.empty() ? json(nullptr) : json(error);
  j["conetocone"] = conetocone ? json(*conetocone) : json(nullptr);
  return j;
}

json decomposition_json(const CodeSpec& code, const DecompositionReport& d) {
  json j;
  j["z_word"] = code.format_target(d.z_word);
  j["windows"] = d.windows;
  j["assignments"] = d.assignments;
  j["nonzero_assignments"] = d.nonzero_assignments;
  j["max_rel_error"] = number_json(d.max_rel_error);
  j["identity_holds"] = d.identity_holds;
  j["uncovered"] = symbols_json(code.source(), d.uncovered);
  return j;
}

void append_trace(std::string& csv, std::size_t index, const std::vector<double>& estimates) {
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    csv += std::to_string(k) + "," + std::to_string(index) + "," + csv_number(estimates[k]) + "\n";
  }
}

std::string trace_csv(const PressureEstimate* pressure, const LyapunovReport* lyap) {
  std::string csv = "batch,exponent_index,estimate\n";
  if (pressure) append_trace(csv, 0, pressure->batch_estimates);
  if (lyap) {
    const std::size_t p = lyap->exponents.size();
    for (std::size_t i = 0; i < p; ++i) {
      std::vector<double> column;
      for (const auto& row : lyap->batch_estimates) column.push_back(row[i]);
      append_trace(csv, i + 1, column);
    }
  }
  return csv;
}

struct Pieces {
  Experiment ex;
  OperatorFamily family;
  ClassDegreeResult cd;
  RepresentativeFibers fibers;
  BarOperatorFamily bar;
};

Pieces block_pieces(const Config& cfg) {
  Pieces p;
  p.ex = prepare_experiment(cfg);
  p.family = build_operators(p.ex.code, p.ex.phi);
  p.cd = class_degree(p.ex.code, cfg.run.max_block_len);
  p.fibers = representative_fibers(p.ex.code, p.cd.certificate);
  p.bar = bar_operators(p.family, p.cd.certificate, p.fibers);
  return p;
}

LyapunovReport run_lyapunov(const Experiment& ex, const OperatorFamily& family, const OrbitSample& orbit) {
  LyapunovOptions options;
  options.p = ex.p;
  options.batches = ex.batches;
  options.burn_in = ex.burn_in;
  options.frame_seed = ex.seed;
  return lyapunov_spectrum(family, orbit.symbols, options);
}

void execute(const std::string& command, const Config& cfg, CommandResult& out) {
  json& r = out.report;
  if (command == "validate") {
    const Experiment ex = prepare_experiment(cfg);
    r["system"] = system_json(cfg, ex);
  } else if (command == "class-degree") {
    const Experiment ex = prepare_experiment(cfg);
    const auto cd = class_degree(ex.code, cfg.run.max_block_len);
    const auto fibers = representative_fibers(ex.code, cd.certificate);
    r["system"] = system_json(cfg, ex);
    r["class_degree"] = class_degree_json(ex.code, cd, fibers);
  } else if (command == "lyapunov") {
    const Experiment ex = prepare_experiment(cfg);
    const auto family = build_operators(ex.code, ex.phi);
    const auto lyap = run_lyapunov(ex, family, experiment_orbit(ex));
    r["system"] = system_json(cfg, ex);
    r["lyapunov"] = lyapunov_json(lyap, top_multiplicity(lyap, cfg.run.tol_abs));
    out.trace_csv = trace_csv(nullptr, &lyap);
  } else if (command == "pressure") {
    const Experiment ex = prepare_experiment(cfg);
    const auto orbit = experiment_orbit(ex);
    const auto pressure =
        pressure_estimate(ex.code, ex.phi, std::span<const Symbol>(orbit.symbols).subspan(ex.burn_in), ex.batches);
    r["system"] = system_json(cfg, ex);
    r["pressure"] = pressure_json(pressure);
    out.trace_csv = trace_csv(&pressure, nullptr);
  } else if (command == "cones") {
    const Pieces p = block_pieces(cfg);
    const auto params = cone_parameter(p.ex.phi);
    const auto diag = lemma_bounds(p.bar, p.cd.certificate, p.ex.phi, params, p.ex.code.source().size());
    Rng functions(p.ex.seed, static_cast<std::uint64_t>(Stream::Functions));
    const bool c2c = conetocone_holds(p.ex.code, p.ex.phi, params, functions, 20);
    r["system"] = system_json(cfg, p.ex);
    r["class_degree"] = class_degree_json(p.ex.code, p.cd, p.fibers);
    r["cones"] = cones_json(params, diag, "", c2c);
  } else if (command == "decompose") {
    const Pieces p = block_pieces(cfg);
    const auto orbit = experiment_orbit(p.ex);
    const Word z = decomposition_word(std::span<const Symbol>(orbit.symbols).subspan(p.ex.burn_in), p.cd.certificate);
    const auto d = verify_decomposition(p.family, p.bar, p.cd.certificate, z);
    r["system"] = system_json(cfg, p.ex);
    r["class_degree"] = class_degree_json(p.ex.code, p.cd, p.fibers);
    r["decomposition"] = decomposition_json(p.ex.code, d);
  } else if (command == "verify") {
    const TheoremReport t = verify_theorem(cfg);
    const Experiment ex = prepare_experiment(cfg);
    r["system"] = system_json(cfg, ex);
    r["class_degree"] = class_degree_json(ex.code, t.class_degree, t.fibers);
    r["lyapunov"] = lyapunov_json(t.lyapunov, t.multiplicity);
    r["multiplicity"] = t.multiplicity.multiplicity;
    r["pressure"] = pressure_json(t.pressure);
    r["decomposition"] = decomposition_json(ex.code, t.decomposition);
    r["cones"] = cones_json(t.cone_params, t.cones, t.cones_error, t.conetocone);
    json clauses = json::array();
    for (const auto& c : t.clauses) clauses.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    r["clauses"] = clauses;
    r["passed"] = t.passed;
    out.trace_csv = trace_csv(&t.pressure, &t.lyapunov);
    if (!t.passed) out.exit_code = ExitVerificationFailed;
  }
}

json tool_json() { return {{"name", "rpfcocycle"}, {"version", kVersion}}; }

}  // namespace

json number_json(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

int exit_code_for(const Error& e) {
  return e.category() == ErrorCategory::Structural ? ExitStructural : ExitInvalidConfig;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "class-degree", "lyapunov", "pressure",
                                              "cones",    "decompose",    "verify"};
  return names;
}

json error_report(const std::string& command, const Error& e) {
  json r;
  r["tool"] = tool_json();
  r["command"] = command;
  r["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  r["exit_code"] = exit_code_for(e);
  return r;
}

CommandResult run_command(const std::string& command, const Config& cfg) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  CommandResult out;
  try {
    execute(command, cfg, out);
  } catch (const Error& e) {
    out = CommandResult{};
    out.report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    out.exit_code = exit_code_for(e);
  }
  out.report["tool"] = tool_json();
  out.report["command"] = command;
  out.report["config_digest"] = cfg.digest();
  out.report["seed"] = cfg.run.seed;
  out.report["steps"] = cfg.run.steps;
  out.report["exit_code"] = out.exit_code;
  out.report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace rpf
