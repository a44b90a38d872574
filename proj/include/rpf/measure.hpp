#pragma once

// Stationary Markov measures on right-resolving presentations of Z, and
// reproducible sampling of generic orbits.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rpf/symbolic.hpp"

namespace rpf {

/// Seedable generator with per-stream substreams: the stream seed is
/// splitmix64(seed ^ splitmix64(stream)) and drives a std::mt19937_64, whose
/// output sequence is fixed by the standard. Floating draws use the top 53
/// bits, so results do not depend on the standard library's distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Substream ids used by the experiment driver.
enum class Stream : std::uint64_t { Orbit = 0, Frame = 1, Functions = 2, Words = 3 };

/// nu as a stationary chain on an irreducible right-resolving presentation
/// with strictly positive edge probabilities.
class MeasurePresentation {
 public:
  MeasurePresentation() = default;

  const LabelledGraph& graph() const noexcept { return graph_; }
  const std::vector<double>& edge_prob() const noexcept { return edge_prob_; }
  const std::vector<double>& stationary() const noexcept { return stationary_; }

  friend MeasurePresentation make_measure(LabelledGraph graph, std::vector<double> edge_prob);

 private:
  LabelledGraph graph_;
  std::vector<double> edge_prob_;
  std::vector<double> stationary_;
};

/// Validates probabilities (positive, rows sum to 1 within 1e-12), right
/// resolution and irreducibility, then solves for the stationary vector.
MeasurePresentation make_measure(LabelledGraph graph, std::vector<double> edge_prob);

/// Probabilities proportional to per-label weights at every state.
MeasurePresentation measure_from_label_weights(LabelledGraph graph, std::span<const double> label_weights);

/// Unique stationary vector of the state chain. Throws NotIrreducibleChain.
std::vector<double> stationary(const LabelledGraph& graph, std::span<const double> edge_prob);

struct OrbitSample {
  std::uint64_t seed = 0;
  Word symbols;
  std::vector<int> states;  ///< state at which each symbol is emitted
};

OrbitSample sample_orbit(const MeasurePresentation& nu, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream = static_cast<std::uint64_t>(Stream::Orbit));

/// Exact nu-measure of the cylinder [word].
double word_frequency(const MeasurePresentation& nu, std::span<const Symbol> word);

}  // namespace rpf
