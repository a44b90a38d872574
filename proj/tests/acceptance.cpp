// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rpf/cones.hpp"
#include "rpf/driver.hpp"
#include "rpf/error.hpp"
#include "rpf/theorem.hpp"

using namespace rpf;
using nlohmann::json;

namespace {

const double kLog2 = std::log(2.0);

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json fixture(const std::string& name) { return json::parse(read_file(std::string(RPF_CONFIG_DIR) + "/" + name)); }

Config config_of(const json& j) { return parse_config(j.dump()); }

// Collects failed checks with their values so the summary line says why.
struct Checks {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s: got %.12g, want %.12g +- %.3g", what.c_str(), got, want, tol);
      failures.push_back(buf);
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Checks&)> body;
};

std::vector<CodeSpec> fixture_codes() {
  std::vector<CodeSpec> out;
  for (const char* name : {"golden_point.json", "identity_golden.json", "pairing.json", "run_choice.json", "phase.json",
                           "phase_pairing.json", "golden_range3.json"}) {
    out.push_back(prepare_experiment(config_of(fixture(name))).code);
  }
  return out;
}

CodeSpec random_code(std::mt19937_64& gen) {
  const int size = 2 + static_cast<int>(gen() % 4);
  const int targets = 1 + static_cast<int>(gen() % std::min(3, size));
  std::vector<std::string> names;
  std::vector<std::pair<Symbol, Symbol>> edges;
  for (int i = 0; i < size; ++i) {
    names.push_back("s" + std::to_string(i));
    for (int j = 0; j < size; ++j) {
      if (j == (i + 1) % size || gen() % 2 == 0) edges.emplace_back(i, j);
    }
  }
  std::vector<Symbol> rho(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) rho[static_cast<std::size_t>(i)] = i < targets ? i : static_cast<Symbol>(gen() % targets);
  std::vector<std::string> tnames;
  for (int j = 0; j < targets; ++j) tnames.push_back(std::string(1, static_cast<char>('a' + j)));
  return make_code(make_sft(names, edges, true), tnames, rho);
}

void criterion1(Checks& c) {
  const auto r = verify_theorem(config_of(fixture("golden_point.json")));
  c.near(r.lyapunov.exponents[0], std::log((1.0 + std::sqrt(5.0)) / 2.0), 1e-6, "lambda_1");
  c.expect(r.lyapunov.steps == 10000, "steps");
}

void criterion2(Checks& c) {
  for (double q : {0.3, 0.5}) {
    json j = fixture("pairing.json");
    j["measure"]["weights"] = {{"0", q}, {"1", 1.0 - q}};
    const auto r = verify_theorem(config_of(j));
    const std::string tag = "q=" + std::to_string(q) + " ";
    c.near(r.lyapunov.exponents[0], kLog2, 1e-9, tag + "lambda_1");
    c.near(r.lyapunov.std_errors[0], 0.0, 1e-9, tag + "stderr");
    c.expect(r.multiplicity.multiplicity == 1, tag + "multiplicity");
    c.expect(r.class_degree.value == 1, tag + "class degree");
    c.near(r.pressure.value, kLog2, 1e-9, tag + "pressure");
  }
}

void criterion3(Checks& c) {
  const double target = 0.25 * kLog2;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    json j = fixture("run_choice.json");
    j["run"]["seed"] = seed;
    j["run"]["steps"] = 100000;
    j["measure"] = {{"mode", "label_weights"}, {"weights", {{"a", 0.5}, {"b", 0.5}}}};
    const auto r = verify_theorem(config_of(j));
    const std::string tag = "seed " + std::to_string(seed) + " ";
    c.near(r.lyapunov.exponents[0], target, 5e-3, tag + "lambda_1");
    c.near(r.pressure.value, target, 5e-3, tag + "pressure");
    c.expect(r.class_degree.value == 1, tag + "class degree");
    c.expect(r.multiplicity.multiplicity == 1, tag + "multiplicity");
  }
}

void criterion4(Checks& c) {
  for (auto [alpha, gamma] : {std::pair{0.0, 0.0}, std::pair{0.3, -0.1}}) {
    json j = fixture("phase.json");
    j["potential"]["values"] = {{{"word", {"a"}}, {"value", alpha}}, {{"word", {"b"}}, {"value", gamma}}};
    j.erase("expectations");
    const auto r = verify_theorem(config_of(j));
    const std::string tag = "alpha=" + std::to_string(alpha) + " ";
    c.near(r.lyapunov.exponents[0], (alpha + gamma) / 2, 1e-9, tag + "lambda_1");
    c.near(r.lyapunov.exponents[1], (alpha + gamma) / 2, 1e-9, tag + "lambda_2");
    c.expect(r.multiplicity.multiplicity == 2, tag + "multiplicity");
    c.expect(r.class_degree.value == 2, tag + "class degree");
  }
}

void criterion5(Checks& c) {
  const auto r = verify_theorem(config_of(fixture("phase_pairing.json")));
  c.near(r.lyapunov.exponents[0], kLog2, 1e-6, "lambda_1");
  c.expect(r.multiplicity.multiplicity == 2, "multiplicity");
  c.expect(r.class_degree.value == 2, "class degree");
}

void criterion6(Checks& c) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const CodeSpec code = random_code(gen);
    const int range = 1 + trial % 2;
    WordTable t;
    for (const auto& w : allowed_words(code.source(), range)) t[w] = u(gen);
    const Potential phi = make_potential(code.source(), range, 0.5, t);
    const int n = 1 + static_cast<int>(gen() % 14);
    Word w{static_cast<Symbol>(gen() % code.source().size())};
    while (static_cast<int>(w.size()) < n) {
      const auto& next = code.source().successors(w.back());
      w.push_back(next[gen() % next.size()]);
    }
    const Word z = map_word(code, w);
    const double e = partition_function(code, phi, z, PressureMethod::Enumeration);
    const double d = partition_function(code, phi, z, PressureMethod::PartitionDp);
    const double rel = std::abs(e - d) / std::max({1.0, std::abs(e), std::abs(d)});
    if (!(rel <= 1e-10)) c.near(d, e, 1e-10 * std::max(1.0, std::abs(e)), "trial " + std::to_string(trial));
  }
}

void criterion7(Checks& c) {
  for (const char* name : {"phase.json", "pairing.json", "run_choice.json", "phase_pairing.json"}) {
    const auto r = verify_theorem(config_of(fixture(name)));
    const auto& d = r.decomposition;
    c.expect(d.identity_holds, std::string(name) + " identity");
    c.expect(d.max_rel_error <= 1e-12, std::string(name) + " relative error");
    c.expect(static_cast<int>(d.nonzero_assignments) == r.class_degree.value,
             std::string(name) + " nonzero assignments " + std::to_string(d.nonzero_assignments) + " vs class degree " +
                 std::to_string(r.class_degree.value));
  }
}

void criterion8(Checks& c) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // (i)
  for (int i = 0; i < 1000; ++i) {
    const auto p = cone_parameter(0.01 + 0.98 * unit(gen), 50.0 * unit(gen));
    if (!(p.b < p.a)) c.expect(false, "b < a");
  }
  // (ii)
  Rng rng(88);
  for (const char* name : {"golden_point.json", "identity_golden.json", "pairing.json", "run_choice.json", "phase.json",
                           "phase_pairing.json", "golden_range3.json"}) {
    const Experiment ex = prepare_experiment(config_of(fixture(name)));
    c.expect(conetocone_holds(ex.code, ex.phi, cone_parameter(ex.phi), rng, 20), std::string(name) + " conetocone");
  }
  // (iii)
  const auto codes = fixture_codes();
  for (int trial = 0; trial < 1000; ++trial) {
    const CodeSpec& code = codes[static_cast<std::size_t>(trial) % codes.size()];
    const auto params = cone_parameter(0.2 + 0.6 * unit(gen), 3.0 * unit(gen));
    WordTable f;
    for (const auto& w : allowed_words(code.source(), 1 + trial % 3)) f[w] = 6.0 * unit(gen) - 3.0;
    const auto s = ando_split(f, params);
    bool ok = cone_membership(s.g, params) && cone_membership(s.h, params);
    for (const auto& [w, x] : f) ok = ok && std::abs(s.g.at(w) - s.h.at(w) - x) <= 1e-12 * std::max(1.0, s.h.at(w));
    if (!ok) c.expect(false, "ando trial " + std::to_string(trial));
  }
  // (iv)
  for (const char* name : {"golden_point.json", "identity_golden.json", "pairing.json", "run_choice.json", "phase.json",
                           "phase_pairing.json", "golden_range3.json"}) {
    const auto r = verify_theorem(config_of(fixture(name)));
    if (r.cones) {
      c.expect(r.cones->empirical_diameter <= r.cones->K_bound, std::string(name) + " diameter <= K");
    } else {
      c.expect(r.cones_error.find("InfiniteDiameter") != std::string::npos, std::string(name) + " " + r.cones_error);
    }
  }
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 4;
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd x(n);
    Eigen::VectorXd y(n);
    for (int a = 0; a < n; ++a) {
      x(a) = pos(gen);
      y(a) = pos(gen);
      for (int b = 0; b < n; ++b) M(a, b) = pos(gen);
    }
    const double lhs = hilbert_distance(M * x, M * y);
    const double rhs = contraction_coefficient(M) * hilbert_distance(x, y);
    if (!(lhs <= rhs + 1e-12)) c.near(lhs, rhs, 0.0, "birkhoff pair " + std::to_string(i));
  }
}

void criterion9(Checks& c) {
  for (const auto& entry : std::filesystem::directory_iterator(RPF_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const std::string name = entry.path().filename().string();
    const auto r = verify_theorem(parse_config(read_file(entry.path().string())));
    const double l1 = r.lyapunov.exponents[0];
    const double se = r.lyapunov.std_errors[0] + r.pressure.std_error;
    // both estimators see the same orbit; when they agree to rounding the
    // stderr can be exactly 0, so allow a relative rounding floor
    const double tol = std::max(3.0 * se, 1e-12 * std::max(1.0, std::abs(l1)));
    c.near(l1, r.pressure.value, tol, name + " |lambda_1 - P|");
    c.expect(r.multiplicity.multiplicity <= r.class_degree.value, name + " multiplicity <= class degree");
  }
}

void criterion10(Checks& c) {
  for (const char* name : {"phase_pairing.json", "run_choice.json", "golden_range3.json"}) {
    const Config cfg = config_of(fixture(name));
    auto a = run_command("verify", cfg);
    auto b = run_command("verify", cfg);
    a.report.erase("wall_clock_seconds");
    b.report.erase("wall_clock_seconds");
    c.expect(a.report.dump(2) == b.report.dump(2), std::string(name) + " report bytes");
    c.expect(a.trace_csv == b.trace_csv, std::string(name) + " trace bytes");
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden mean to a point: lambda_1 = log golden ratio", 1.0, criterion1},
      {2, "pairing: lambda_1 = P = log 2, multiplicity 1, class degree 1", 5.0, criterion2},
      {3, "run choice: lambda_1 and P near log(2)/4 over 5 seeds", 30.0, criterion3},
      {4, "phase: lambda_1 = lambda_2 = (alpha+gamma)/2, multiplicity 2", 1.0, criterion4},
      {5, "phase x pairing: lambda_1 = log 2, multiplicity 2, class degree 2", 30.0, criterion5},
      {6, "partition function: enumeration = dynamic programming", 60.0, criterion6},
      {7, "decomposition identity with class-degree many nonzero terms", 10.0, criterion7},
      {8, "cone suite", 30.0, criterion8},
      {9, "estimator consistency on every fixture", 120.0, criterion9},
      {10, "verify reports are byte-identical", 60.0, criterion10},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > cr.budget_seconds) {
      checks.failures.push_back("runtime " + std::to_string(seconds) + " s over budget " +
                                std::to_string(cr.budget_seconds) + " s");
    }
    const bool ok = checks.failures.empty();
    failed += !ok;
    std::printf("%s criterion %d: %s (%.3f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.title.c_str(), seconds);
    for (const auto& f : checks.failures) std::printf("    %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
