#include "rpf/measure.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "rpf/error.hpp"

namespace rpf {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "below(0)");
  // rejection keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

std::vector<double> stationary(const LabelledGraph& graph, std::span<const double> edge_prob) {
  const auto n = static_cast<Eigen::Index>(graph.num_states());
  if (n == 0) throw Error(ErrorKind::NotIrreducibleChain, "presentation has no states");
  if (!graph.strongly_connected()) throw Error(ErrorKind::NotIrreducibleChain, "state chain is reducible");

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const auto& edge = graph.edges()[e];
    P(edge.from, edge.to) += edge_prob[e];
  }
  // pi (P - I) = 0 with one balance row replaced by normalization
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = A.fullPivLu().solve(b);

  const Eigen::VectorXd residual = P.transpose() * pi - pi;
  if (residual.cwiseAbs().maxCoeff() > 1e-12 || pi.minCoeff() <= 0.0) {
    throw Error(ErrorKind::NotIrreducibleChain, "stationary vector is not unique and positive");
  }
  return {pi.data(), pi.data() + n};
}

MeasurePresentation make_measure(LabelledGraph graph, std::vector<double> edge_prob) {
  if (edge_prob.size() != graph.edges().size()) {
    throw Error(ErrorKind::ValidationError, "one probability per presentation edge is required");
  }
  if (!graph.right_resolving()) throw Error(ErrorKind::ValidationError, "measure presentation is not right-resolving");
  for (double p : edge_prob) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::ValidationError, "edge probabilities must be strictly positive (full support)");
    }
  }
  for (std::size_t s = 0; s < graph.num_states(); ++s) {
    double total = 0.0;
    for (int e : graph.out_edges(static_cast<int>(s))) total += edge_prob[static_cast<std::size_t>(e)];
    if (std::abs(total - 1.0) > 1e-12) {
      throw Error(ErrorKind::ValidationError, "outgoing probabilities of state '" + graph.states()[s] +
                                                  "' sum to " + std::to_string(total));
    }
  }
  MeasurePresentation nu;
  nu.stationary_ = stationary(graph, edge_prob);
  nu.graph_ = std::move(graph);
  nu.edge_prob_ = std::move(edge_prob);
  return nu;
}

MeasurePresentation measure_from_label_weights(LabelledGraph graph, std::span<const double> label_weights) {
  if (label_weights.size() != graph.num_labels()) {
    throw Error(ErrorKind::ValidationError, "one weight per target symbol is required");
  }
  for (double w : label_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::ValidationError, "label weights must be positive");
  }
  std::vector<double> prob(graph.edges().size(), 0.0);
  for (std::size_t s = 0; s < graph.num_states(); ++s) {
    double total = 0.0;
    for (int e : graph.out_edges(static_cast<int>(s))) {
      total += label_weights[static_cast<std::size_t>(graph.edges()[static_cast<std::size_t>(e)].label)];
    }
    for (int e : graph.out_edges(static_cast<int>(s))) {
      const auto label = static_cast<std::size_t>(graph.edges()[static_cast<std::size_t>(e)].label);
      prob[static_cast<std::size_t>(e)] = label_weights[label] / total;
    }
  }
  return make_measure(std::move(graph), std::move(prob));
}

OrbitSample sample_orbit(const MeasurePresentation& nu, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample_orbit needs n >= 1");
  Rng rng(seed, stream);
  const auto& graph = nu.graph();

  auto draw_state = [&]() {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t s = 0; s < nu.stationary().size(); ++s) {
      acc += nu.stationary()[s];
      if (u < acc) return static_cast<int>(s);
    }
    return static_cast<int>(nu.stationary().size() - 1);
  };

  OrbitSample sample;
  sample.seed = seed;
  sample.symbols.reserve(n);
  sample.states.reserve(n);
  int state = draw_state();
  for (std::size_t t = 0; t < n; ++t) {
    const auto& outs = graph.out_edges(state);
    const double u = rng.uniform();
    double acc = 0.0;
    int chosen = outs.back();
    for (int e : outs) {
      acc += nu.edge_prob()[static_cast<std::size_t>(e)];
      if (u < acc) {
        chosen = e;
        break;
      }
    }
    const auto& edge = graph.edges()[static_cast<std::size_t>(chosen)];
    sample.states.push_back(state);
    sample.symbols.push_back(edge.label);
    state = edge.to;
  }
  return sample;
}

double word_frequency(const MeasurePresentation& nu, std::span<const Symbol> word) {
  const auto& graph = nu.graph();
  double total = 0.0;
  for (std::size_t s = 0; s < graph.num_states(); ++s) {
    double p = nu.stationary()[s];
    int state = static_cast<int>(s);
    for (Symbol label : word) {
      auto e = graph.follow(state, label);
      if (!e) {
        p = 0.0;
        break;
      }
      p *= nu.edge_prob()[static_cast<std::size_t>(*e)];
      state = graph.edges()[static_cast<std::size_t>(*e)].to;
    }
    total += p;
  }
  return total;
}

}  // namespace rpf
