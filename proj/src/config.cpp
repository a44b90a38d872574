#include "rpf/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "rpf/error.hpp"

namespace rpf {

using nlohmann::json;

namespace {

class Collector {
 public:
  void add(std::string message) { errors_.push_back(std::move(message)); }
  bool empty() const { return errors_.empty(); }

  [[noreturn]] void raise() const {
    std::string all;
    for (const auto& e : errors_) {
      if (!all.empty()) all += "; ";
      all += e;
    }
    throw Error(ErrorKind::ValidationError, all);
  }

 private:
  std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed, Collector& errors) {
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) errors.add(where + (where.empty() ? "" : ".") + key + ": unknown field");
  }
}

std::optional<std::string> get_string(const json& j, const std::string& where, Collector& errors) {
  if (!j.is_string()) {
    errors.add(where + ": expected a string");
    return std::nullopt;
  }
  return j.get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& where, Collector& errors) {
  std::vector<std::string> out;
  if (!obj.contains(key)) {
    errors.add(where + "." + key + ": missing");
    return out;
  }
  const json& arr = obj.at(key);
  if (!arr.is_array()) {
    errors.add(where + "." + key + ": expected an array of strings");
    return out;
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (auto s = get_string(arr[i], where + "." + key + "[" + std::to_string(i) + "]", errors)) out.push_back(*s);
  }
  return out;
}

std::optional<double> get_number(const json& obj, const char* key, const std::string& where, Collector& errors) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    errors.add(where + "." + key + ": expected a number");
    return std::nullopt;
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    errors.add(where + "." + key + ": must be finite");
    return std::nullopt;
  }
  return x;
}

template <class Int>
std::optional<Int> get_integer(const json& obj, const char* key, const std::string& where, Collector& errors,
                               long long min_value) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) {
    const auto x = v.get<std::uint64_t>();
    if (min_value > 0 && x < static_cast<std::uint64_t>(min_value)) {
      errors.add(where + "." + key + ": must be >= " + std::to_string(min_value));
      return std::nullopt;
    }
    return static_cast<Int>(x);
  }
  if (v.is_number_integer()) {
    const auto x = v.get<long long>();
    if (x < min_value) {
      errors.add(where + "." + key + ": must be >= " + std::to_string(min_value));
      return std::nullopt;
    }
    return static_cast<Int>(x);
  }
  errors.add(where + "." + key + ": expected an integer");
  return std::nullopt;
}

// words in the potential table may be arrays of symbol names or strings
std::optional<Word> parse_source_word(const Sft& sft, const json& j, const std::string& where, Collector& errors) {
  std::vector<std::string> names;
  if (j.is_array()) {
    for (const auto& s : j) {
      if (!s.is_string()) {
        errors.add(where + ": word entries must be symbol names");
        return std::nullopt;
      }
      names.push_back(s.get<std::string>());
    }
  } else if (j.is_string()) {
    const std::string text = j.get<std::string>();
    bool single = true;
    for (const auto& n : sft.names()) single = single && n.size() == 1;
    if (text.find(' ') != std::string::npos || !single) {
      std::string token;
      for (char c : text + " ") {
        if (c == ' ') {
          if (!token.empty()) names.push_back(token);
          token.clear();
        } else {
          token += c;
        }
      }
    } else {
      for (char c : text) names.emplace_back(1, c);
    }
  } else {
    errors.add(where + ": expected a word (array of symbol names or string)");
    return std::nullopt;
  }
  Word w;
  for (const auto& n : names) {
    try {
      w.push_back(sft.index_of(n));
    } catch (const Error&) {
      errors.add(where + ": unknown symbol '" + n + "'");
      return std::nullopt;
    }
  }
  return w;
}

CodeSpec parse_system(const json& root, Collector& errors) {
  if (!root.contains("system") || !root.at("system").is_object()) {
    errors.add("system: missing or not an object");
    errors.raise();
  }
  const json& sys = root.at("system");
  check_keys(sys, "system", {"alphabet_x", "transitions", "code"}, errors);
  auto alphabet = string_list(sys, "alphabet_x", "system", errors);
  std::vector<std::pair<std::string, std::string>> transitions;
  if (!sys.contains("transitions") || !sys.at("transitions").is_array()) {
    errors.add("system.transitions: expected an array of [from, to] pairs");
  } else {
    const json& arr = sys.at("transitions");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& pair = arr[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        errors.add("system.transitions[" + std::to_string(i) + "]: expected [from, to]");
        continue;
      }
      transitions.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }
  std::vector<std::string> targets;
  std::vector<std::pair<std::string, std::string>> rho;
  if (!sys.contains("code") || !sys.at("code").is_object()) {
    errors.add("system.code: missing or not an object");
  } else {
    const json& code = sys.at("code");
    check_keys(code, "system.code", {"target_alphabet", "rho"}, errors);
    targets = string_list(code, "target_alphabet", "system.code", errors);
    if (!code.contains("rho") || !code.at("rho").is_object()) {
      errors.add("system.code.rho: expected an object mapping source to target symbols");
    } else {
      for (const auto& [src, tgt] : code.at("rho").items()) {
        if (auto t = get_string(tgt, "system.code.rho." + src, errors)) rho.emplace_back(src, *t);
      }
    }
  }
  if (!errors.empty()) errors.raise();
  if (alphabet.empty()) {
    errors.add("system.alphabet_x: must be nonempty");
    errors.raise();
  }
  Sft sft = validate_sft(std::move(alphabet), transitions, true);
  try {
    return make_code(std::move(sft), std::move(targets), rho);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError) {
      errors.add(std::string("system.code: ") + e.what());
      errors.raise();
    }
    throw;
  }
}

Potential parse_potential(const Sft& sft, const json& root, Collector& errors) {
  if (!root.contains("potential")) return constant_potential(sft, 1, 0.5, 0.0);
  const json& pot = root.at("potential");
  if (!pot.is_object()) {
    errors.add("potential: expected an object");
    return {};
  }
  check_keys(pot, "potential", {"range", "beta", "values", "constant"}, errors);
  const double beta = get_number(pot, "beta", "potential", errors).value_or(0.5);
  bool ok = true;
  if (!(beta > 0.0 && beta < 1.0)) {
    errors.add("potential.beta: beta must lie in (0, 1), got " + pot.at("beta").dump());
    ok = false;
  }
  const int range = get_integer<int>(pot, "range", "potential", errors, 1).value_or(1);
  if (range > 12) {
    errors.add("potential.range: at most 12 supported");
    ok = false;
  }
  const bool has_values = pot.contains("values");
  const bool has_constant = pot.contains("constant");
  if (has_values == has_constant) {
    errors.add("potential: give exactly one of 'values' or 'constant'");
    return {};
  }
  if (!ok) return {};
  if (has_constant) {
    if (auto c = get_number(pot, "constant", "potential", errors)) return constant_potential(sft, range, beta, *c);
    return {};
  }
  WordTable table;
  const json& values = pot.at("values");
  if (!values.is_array()) {
    errors.add("potential.values: expected an array of {word, value}");
    return {};
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::string where = "potential.values[" + std::to_string(i) + "]";
    const json& entry = values[i];
    if (!entry.is_object() || !entry.contains("word") || !entry.contains("value")) {
      errors.add(where + ": expected {word, value}");
      continue;
    }
    auto word = parse_source_word(sft, entry.at("word"), where + ".word", errors);
    auto value = get_number(entry, "value", where, errors);
    if (!word || !value) continue;
    if (static_cast<int>(word->size()) != range) {
      errors.add(where + ".word: length " + std::to_string(word->size()) + " != range " + std::to_string(range));
      continue;
    }
    if (!table.emplace(*word, *value).second) errors.add(where + ".word: duplicate entry '" + sft.format(*word) + "'");
  }
  if (!errors.empty()) return {};
  try {
    return make_potential(sft, range, beta, std::move(table));
  } catch (const Error& e) {
    errors.add(std::string("potential: ") + e.what());
    return {};
  }
}

MeasureConfig parse_measure(const CodeSpec& code, const json& root, Collector& errors) {
  MeasureConfig m;
  if (!root.contains("measure")) return m;
  const json& meas = root.at("measure");
  if (!meas.is_object()) {
    errors.add("measure: expected an object");
    return m;
  }
  check_keys(meas, "measure", {"mode", "weights", "states", "edges"}, errors);
  const std::string mode = meas.value("mode", std::string("uniform"));
  auto label_of = [&](const std::string& name, const std::string& where) -> std::optional<Symbol> {
    try {
      return code.target_index(name);
    } catch (const Error&) {
      errors.add(where + ": unknown target symbol '" + name + "'");
      return std::nullopt;
    }
  };
  if (mode == "uniform") {
    m.mode = MeasureMode::Uniform;
  } else if (mode == "label_weights") {
    m.mode = MeasureMode::LabelWeights;
    m.label_weights.assign(code.target_size(), std::numeric_limits<double>::quiet_NaN());
    if (!meas.contains("weights") || !meas.at("weights").is_object()) {
      errors.add("measure.weights: expected an object mapping target symbols to weights");
      return m;
    }
    for (const auto& [name, w] : meas.at("weights").items()) {
      auto j = label_of(name, "measure.weights");
      if (!j) continue;
      if (!w.is_number() || !(w.get<double>() > 0.0)) {
        errors.add("measure.weights." + name + ": weights must be positive numbers");
        continue;
      }
      m.label_weights[static_cast<std::size_t>(*j)] = w.get<double>();
    }
    for (std::size_t j = 0; j < m.label_weights.size(); ++j) {
      if (std::isnan(m.label_weights[j])) {
        errors.add("measure.weights: missing weight for '" + code.target_names()[j] + "'");
      }
    }
  } else if (mode == "presentation") {
    m.mode = MeasureMode::Presentation;
    m.states = string_list(meas, "states", "measure", errors);
    auto state_of = [&](const json& j, const std::string& where) -> std::optional<int> {
      if (!j.is_string()) {
        errors.add(where + ": expected a state name");
        return std::nullopt;
      }
      for (std::size_t s = 0; s < m.states.size(); ++s) {
        if (m.states[s] == j.get<std::string>()) return static_cast<int>(s);
      }
      errors.add(where + ": unknown state '" + j.get<std::string>() + "'");
      return std::nullopt;
    };
    if (!meas.contains("edges") || !meas.at("edges").is_array()) {
      errors.add("measure.edges: expected an array of {from, to, label, prob}");
      return m;
    }
    const json& edges = meas.at("edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string where = "measure.edges[" + std::to_string(i) + "]";
      const json& e = edges[i];
      if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("label") || !e.contains("prob")) {
        errors.add(where + ": expected {from, to, label, prob}");
        continue;
      }
      auto from = state_of(e.at("from"), where + ".from");
      auto to = state_of(e.at("to"), where + ".to");
      auto label = get_string(e.at("label"), where + ".label", errors);
      std::optional<Symbol> j;
      if (label) j = label_of(*label, where + ".label");
      auto prob = get_number(e, "prob", where, errors);
      if (!from || !to || !j || !prob) continue;
      m.edges.push_back({*from, *to, *j});
      m.edge_prob.push_back(*prob);
    }
  } else {
    errors.add("measure.mode: expected uniform, label_weights or presentation, got '" + mode + "'");
  }
  return m;
}

RunParams parse_run(const json& root, Collector& errors) {
  RunParams run;
  if (!root.contains("run")) return run;
  const json& r = root.at("run");
  if (!r.is_object()) {
    errors.add("run: expected an object");
    return run;
  }
  check_keys(r, "run",
             {"steps", "seed", "num_exponents", "batches", "tol_abs", "max_block_len", "l_check", "burn_in"}, errors);
  if (auto v = get_integer<std::size_t>(r, "steps", "run", errors, 100)) run.steps = *v;
  if (auto v = get_integer<std::uint64_t>(r, "seed", "run", errors, 0)) run.seed = *v;
  if (auto v = get_integer<std::size_t>(r, "num_exponents", "run", errors, 1)) run.num_exponents = *v;
  if (auto v = get_integer<std::size_t>(r, "batches", "run", errors, 2)) run.batches = *v;
  if (auto v = get_number(r, "tol_abs", "run", errors)) {
    if (*v > 0.0) {
      run.tol_abs = *v;
    } else {
      errors.add("run.tol_abs: must be positive");
    }
  }
  if (auto v = get_integer<int>(r, "max_block_len", "run", errors, 1)) run.max_block_len = *v;
  if (auto v = get_integer<int>(r, "l_check", "run", errors, 1)) run.l_check = *v;
  if (auto v = get_integer<std::size_t>(r, "burn_in", "run", errors, 0)) run.burn_in = *v;
  if (run.steps < 10 * run.batches) errors.add("run.steps: must be at least 10 * run.batches");
  return run;
}

Expectations parse_expectations(const json& root, Collector& errors) {
  Expectations x;
  if (!root.contains("expectations")) return x;
  const json& e = root.at("expectations");
  if (!e.is_object()) {
    errors.add("expectations: expected an object");
    return x;
  }
  check_keys(e, "expectations", {"exponent", "multiplicity", "class_degree", "pressure"}, errors);
  x.exponent = get_number(e, "exponent", "expectations", errors);
  x.multiplicity = get_integer<int>(e, "multiplicity", "expectations", errors, 1);
  x.class_degree = get_integer<int>(e, "class_degree", "expectations", errors, 1);
  x.pressure = get_number(e, "pressure", "expectations", errors);
  return x;
}

json run_json(const RunParams& run) {
  json r;
  r["steps"] = run.steps;
  r["seed"] = run.seed;
  r["num_exponents"] = run.num_exponents ? json(*run.num_exponents) : json(nullptr);
  r["batches"] = run.batches;
  r["tol_abs"] = run.tol_abs;
  r["max_block_len"] = run.max_block_len;
  r["l_check"] = run.l_check;
  r["burn_in"] = run.burn_in ? json(*run.burn_in) : json(nullptr);
  return r;
}

}  // namespace

std::string to_string(MeasureMode mode) {
  switch (mode) {
    case MeasureMode::Uniform: return "uniform";
    case MeasureMode::LabelWeights: return "label_weights";
    case MeasureMode::Presentation: return "presentation";
  }
  return "unknown";
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Config::set_seed(std::uint64_t seed) {
  run.seed = seed;
  effective["run"] = run_json(run);
}

void Config::set_steps(std::size_t steps) {
  if (steps < 100 || steps < 10 * run.batches) {
    throw Error(ErrorKind::ValidationError, "run.steps: must be >= 100 and >= 10 * run.batches");
  }
  run.steps = steps;
  effective["run"] = run_json(run);
}

std::string Config::digest() const { return fnv1a_hex(effective.dump()); }

Config parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                           e.what());
  }
  Collector errors;
  if (!root.is_object()) {
    errors.add("top level must be a JSON object");
    errors.raise();
  }
  check_keys(root, "", {"system", "potential", "measure", "run", "expectations"}, errors);

  Config cfg;
  cfg.code = parse_system(root, errors);
  cfg.potential = parse_potential(cfg.code.source(), root, errors);
  cfg.measure = parse_measure(cfg.code, root, errors);
  cfg.run = parse_run(root, errors);
  cfg.expectations = parse_expectations(root, errors);
  if (!errors.empty()) errors.raise();

  cfg.effective["system"] = root.at("system");
  cfg.effective["potential"] = root.contains("potential") ? root.at("potential") : json{{"constant", 0.0}};
  cfg.effective["potential"]["beta"] = cfg.potential.beta();
  cfg.effective["potential"]["range"] = cfg.potential.range();
  cfg.effective["measure"] = root.contains("measure") ? root.at("measure") : json{{"mode", "uniform"}};
  cfg.effective["run"] = run_json(cfg.run);
  cfg.effective["expectations"] = root.contains("expectations") ? root.at("expectations") : json::object();
  return cfg;
}

}  // namespace rpf
