#pragma once

// End-to-end check that the top Lyapunov exponent of the operator cocycle
// matches the relative pressure and that its multiplicity is bounded by the
// class degree.

#include <optional>
#include <string>
#include <vector>

#include "rpf/classdeg.hpp"
#include "rpf/cocycle.hpp"
#include "rpf/config.hpp"
#include "rpf/cones.hpp"
#include "rpf/measure.hpp"

namespace rpf {

/// Config resolved into the objects the estimators work with.
struct Experiment {
  CodeSpec code;  ///< recoded when the potential has range > 2
  Potential phi;  ///< range <= 2
  int recoded_block = 0;
  LabelledGraph image;
  MeasurePresentation nu;
  /// language check of a user supplied presentation against L(Z)
  std::optional<LanguageComparison> measure_language;
  std::size_t p = 1;
  std::size_t steps = 0;
  std::size_t burn_in = 0;
  std::size_t batches = 20;
  std::uint64_t seed = 0;
};

/// Throws DimensionTooSmall when num_exponents exceeds the dimension.
Experiment prepare_experiment(const Config& cfg);

/// Orbit of length burn_in + steps from the orbit substream.
OrbitSample experiment_orbit(const Experiment& ex);

/// Orbit segment starting at the first full copy of W, as long as possible up
/// to 3|W| + 4 while |B|^windows <= max_assignments; W itself if the orbit
/// never passes through W.
Word decomposition_word(std::span<const Symbol> orbit, const TransitionBlockCertificate& cert,
                        std::size_t max_assignments = 4096);

struct Clause {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TheoremReport {
  ClassDegreeResult class_degree;
  RepresentativeFibers fibers;
  LyapunovReport lyapunov;
  MultiplicityResult multiplicity;
  PressureEstimate pressure;
  DecompositionReport decomposition;
  ConeParams cone_params;
  std::optional<ConeDiagnostics> cones;
  std::string cones_error;
  std::optional<bool> conetocone;
  std::vector<Clause> clauses;
  bool passed = false;
};

/// Clauses: exponent_matches_pressure, multiplicity_le_class_degree,
/// decomposition_identity, then one per expectation given. Structural errors
/// in the class degree or decomposition propagate; cone diagnostics failures
/// are recorded.
TheoremReport verify_theorem(const Config& cfg);

}  // namespace rpf
