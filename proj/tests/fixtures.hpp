#pragma once

// Small systems with closed-form answers, built directly (not through JSON).

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "rpf/config.hpp"
#include "rpf/potential.hpp"
#include "rpf/symbolic.hpp"

namespace fx {

using namespace rpf;

inline const double kLog2 = std::log(2.0);
inline const double kGoldenLog = std::log((1.0 + std::sqrt(5.0)) / 2.0);

inline Sft golden_sft() { return validate_sft({"g0", "g1"}, {{"g0", "g0"}, {"g0", "g1"}, {"g1", "g0"}}, true); }

inline Sft full_shift(const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, std::string>> t;
  for (const auto& a : names) {
    for (const auto& b : names) t.emplace_back(a, b);
  }
  return validate_sft(names, t, true);
}

inline CodeSpec golden_point() { return make_code(golden_sft(), {"p"}, std::vector<Symbol>{0, 0}); }
inline CodeSpec golden_identity() { return make_code(golden_sft(), {"0", "1"}, std::vector<Symbol>{0, 1}); }

inline CodeSpec pairing() { return make_code(full_shift({"p0", "p1", "p2", "p3"}), {"0", "1"}, std::vector<Symbol>{0, 0, 1, 1}); }

inline CodeSpec run_choice() {
  Sft sft = validate_sft({"r0", "r1", "r2"},
                         {{"r0", "r0"}, {"r0", "r2"}, {"r1", "r1"}, {"r1", "r2"}, {"r2", "r0"}, {"r2", "r1"}, {"r2", "r2"}},
                         true);
  return make_code(std::move(sft), {"a", "b"}, std::vector<Symbol>{0, 0, 1});
}

inline CodeSpec phase() {
  return make_code(validate_sft({"a", "b"}, {{"a", "b"}, {"b", "a"}}, true), {"z"}, std::vector<Symbol>{0, 0});
}

/// (phase, p) with phase alternating and p free; code = pairing of p.
inline CodeSpec phase_pairing() {
  std::vector<std::string> names;
  for (char x : std::string("ab")) {
    for (int i = 0; i < 4; ++i) names.push_back(std::string(1, x) + std::to_string(i));
  }
  std::vector<std::pair<std::string, std::string>> t;
  for (const auto& s : names) {
    for (const auto& r : names) {
      if (s[0] != r[0]) t.emplace_back(s, r);
    }
  }
  std::vector<Symbol> rho;
  for (const auto& s : names) rho.push_back(s[1] < '2' ? 0 : 1);
  return make_code(validate_sft(names, t, true), {"0", "1"}, rho);
}

inline Potential zero(const CodeSpec& code) { return constant_potential(code.source(), 1, 0.5, 0.0); }

inline Potential phase_potential(const CodeSpec& code, double alpha, double gamma) {
  return make_potential(code.source(), 1, 0.5, {{{0}, alpha}, {{1}, gamma}});
}

inline std::string config_path(const std::string& name) { return std::string(RPF_CONFIG_DIR) + "/" + name; }
inline std::string data_path(const std::string& name) { return std::string(RPF_TEST_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Config load(const std::string& name) { return parse_config(read_file(config_path(name))); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace fx
