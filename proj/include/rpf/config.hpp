#pragma once

// Experiment configuration: JSON ingestion, validation and the canonical
// effective form used for the report digest.

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rpf/potential.hpp"
#include "rpf/symbolic.hpp"

namespace rpf {

enum class MeasureMode { Uniform, LabelWeights, Presentation };
std::string to_string(MeasureMode mode);

struct MeasureConfig {
  MeasureMode mode = MeasureMode::Uniform;
  std::vector<double> label_weights;  ///< per target symbol (LabelWeights)
  std::vector<std::string> states;    ///< Presentation
  std::vector<LabelledEdge> edges;
  std::vector<double> edge_prob;
};

struct RunParams {
  std::size_t steps = 100000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> num_exponents;  ///< default min(4, dimension)
  std::size_t batches = 20;
  double tol_abs = 1e-3;
  int max_block_len = 6;
  int l_check = 8;
  std::optional<std::size_t> burn_in;  ///< default min(1000, steps / 10)

  std::size_t effective_burn_in() const { return burn_in.value_or(std::min<std::size_t>(1000, steps / 10)); }
};

struct Expectations {
  std::optional<double> exponent;
  std::optional<int> multiplicity;
  std::optional<int> class_degree;
  std::optional<double> pressure;
};

struct Config {
  CodeSpec code;
  Potential potential;
  MeasureConfig measure;
  RunParams run;
  Expectations expectations;
  /// All sections with defaults filled in; hashed into the report digest.
  nlohmann::json effective;

  void set_seed(std::uint64_t seed);
  void set_steps(std::size_t steps);
  std::string digest() const;
};

/// Throws ParseError (with line and column) for malformed JSON and
/// ValidationError listing every violated constraint; symbol-level errors
/// (DuplicateSymbol, UnknownSymbol, NotEssential, NotIrreducible) pass through.
Config parse_config(std::string_view text);

/// FNV-1a 64-bit, lowercase hex.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace rpf
