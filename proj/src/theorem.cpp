#include "rpf/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpf/error.hpp"

namespace rpf {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double finite_or_zero(double x) { return std::isfinite(x) ? x : 0.0; }

}  // namespace

Experiment prepare_experiment(const Config& cfg) {
  Experiment ex;
  if (cfg.potential.range() > 2) {
    Recoded r = higher_block(cfg.code, cfg.potential, cfg.potential.range());
    ex.code = std::move(r.code);
    ex.phi = std::move(r.potential);
    ex.recoded_block = cfg.potential.range();
  } else {
    ex.code = cfg.code;
    ex.phi = cfg.potential;
  }
  ex.image = image_presentation(cfg.code, cfg.run.l_check);
  switch (cfg.measure.mode) {
    case MeasureMode::Uniform: {
      const std::vector<double> ones(cfg.code.target_size(), 1.0);
      ex.nu = measure_from_label_weights(ex.image, ones);
      break;
    }
    case MeasureMode::LabelWeights:
      ex.nu = measure_from_label_weights(ex.image, cfg.measure.label_weights);
      break;
    case MeasureMode::Presentation: {
      LabelledGraph graph(cfg.measure.states, cfg.measure.edges, cfg.code.target_size());
      ex.measure_language = compare_language(graph, cfg.code, cfg.run.l_check);
      // a proper subshift of L(Z) still carries invariant measures on Z; words outside it do not
      if (!ex.measure_language->subset_of_image) {
        throw Error(ErrorKind::LanguageMismatch, "measure presentation generates words outside the image language "
                                                 "(first disagreement on '" +
                                                     cfg.code.format_target(*ex.measure_language->witness) + "')");
      }
      ex.nu = make_measure(std::move(graph), cfg.measure.edge_prob);
      break;
    }
  }
  const std::size_t dim = ex.code.source().size();
  ex.p = cfg.run.num_exponents.value_or(std::min<std::size_t>(4, dim));
  if (ex.p > dim) {
    throw Error(ErrorKind::DimensionTooSmall, "run.num_exponents = " + std::to_string(ex.p) +
                                                  " exceeds the dimension " + std::to_string(dim));
  }
  ex.steps = cfg.run.steps;
  ex.burn_in = cfg.run.effective_burn_in();
  ex.batches = cfg.run.batches;
  ex.seed = cfg.run.seed;
  return ex;
}

OrbitSample experiment_orbit(const Experiment& ex) { return sample_orbit(ex.nu, ex.burn_in + ex.steps, ex.seed); }

Word decomposition_word(std::span<const Symbol> orbit, const TransitionBlockCertificate& cert,
                        std::size_t max_assignments) {
  const std::size_t w = cert.W.size();
  auto it = std::search(orbit.begin(), orbit.end(), cert.W.begin(), cert.W.end());
  if (it == orbit.end()) return cert.W;
  const auto start = static_cast<std::size_t>(it - orbit.begin());
  const std::size_t longest = std::min(3 * w + 4, orbit.size() - start);
  Word best(cert.W);
  for (std::size_t len = w; len <= longest; ++len) {
    const auto z = orbit.subspan(start, len);
    const auto windows = window_positions(z, cert);
    double assignments = std::pow(static_cast<double>(cert.B.size()), static_cast<double>(windows.size()));
    if (assignments > static_cast<double>(max_assignments)) break;
    best.assign(z.begin(), z.end());
  }
  return best;
}

TheoremReport verify_theorem(const Config& cfg) {
  const Experiment ex = prepare_experiment(cfg);
  TheoremReport rep;
  const OperatorFamily family = build_operators(ex.code, ex.phi);
  rep.class_degree = class_degree(ex.code, cfg.run.max_block_len);
  const auto& cert = rep.class_degree.certificate;
  rep.fibers = representative_fibers(ex.code, cert);
  const BarOperatorFamily bar = bar_operators(family, cert, rep.fibers);

  const OrbitSample orbit = experiment_orbit(ex);
  const auto segment = std::span<const Symbol>(orbit.symbols).subspan(ex.burn_in);

  LyapunovOptions options;
  options.p = ex.p;
  options.batches = ex.batches;
  options.burn_in = ex.burn_in;
  options.frame_seed = ex.seed;
  rep.lyapunov = lyapunov_spectrum(family, orbit.symbols, options);
  rep.multiplicity = top_multiplicity(rep.lyapunov, cfg.run.tol_abs);
  rep.pressure = pressure_estimate(ex.code, ex.phi, segment, ex.batches);

  const Word z = decomposition_word(segment, cert);
  rep.decomposition = verify_decomposition(family, bar, cert, z);

  rep.cone_params = cone_parameter(ex.phi);
  try {
    rep.cones = lemma_bounds(bar, cert, ex.phi, rep.cone_params, ex.code.source().size());
  } catch (const Error& e) {
    rep.cones_error = e.what();
  }
  Rng functions(ex.seed, static_cast<std::uint64_t>(Stream::Functions));
  rep.conetocone = conetocone_holds(ex.code, ex.phi, rep.cone_params, functions, 20);

  const double lambda1 = rep.lyapunov.exponents.front();
  const double se1 = finite_or_zero(rep.lyapunov.std_errors.front());
  {
    const double tol = std::max(cfg.run.tol_abs, 3.0 * (se1 + rep.pressure.std_error));
    const double diff = std::abs(lambda1 - rep.pressure.value);
    rep.clauses.push_back({"exponent_matches_pressure", std::isfinite(lambda1) && diff <= tol,
                           "|" + fmt(lambda1) + " - " + fmt(rep.pressure.value) + "| = " + fmt(diff) + ", tolerance " +
                               fmt(tol)});
  }
  rep.clauses.push_back({"multiplicity_le_class_degree", rep.multiplicity.multiplicity <= rep.class_degree.value,
                         std::to_string(rep.multiplicity.multiplicity) +
                             " <= " + std::to_string(rep.class_degree.value)});
  rep.clauses.push_back({"decomposition_identity", rep.decomposition.identity_holds,
                         "max relative error " + fmt(rep.decomposition.max_rel_error) + " over " +
                             std::to_string(rep.decomposition.assignments) + " assignments"});

  const auto& x = cfg.expectations;
  if (x.exponent) {
    const double tol = std::max(cfg.run.tol_abs, 3.0 * se1);
    rep.clauses.push_back({"expected_exponent", std::abs(lambda1 - *x.exponent) <= tol,
                           "got " + fmt(lambda1) + ", expected " + fmt(*x.exponent) + ", tolerance " + fmt(tol)});
  }
  if (x.multiplicity) {
    rep.clauses.push_back({"expected_multiplicity", rep.multiplicity.multiplicity == *x.multiplicity,
                           "got " + std::to_string(rep.multiplicity.multiplicity) + ", expected " +
                               std::to_string(*x.multiplicity)});
  }
  if (x.class_degree) {
    rep.clauses.push_back({"expected_class_degree", rep.class_degree.value == *x.class_degree,
                           "got " + std::to_string(rep.class_degree.value) + ", expected " +
                               std::to_string(*x.class_degree)});
  }
  if (x.pressure) {
    const double tol = std::max(cfg.run.tol_abs, 3.0 * rep.pressure.std_error);
    rep.clauses.push_back({"expected_pressure", std::abs(rep.pressure.value - *x.pressure) <= tol,
                           "got " + fmt(rep.pressure.value) + ", expected " + fmt(*x.pressure) + ", tolerance " +
                               fmt(tol)});
  }
  rep.passed = std::all_of(rep.clauses.begin(), rep.clauses.end(), [](const Clause& c) { return c.passed; });
  return rep;
}

}  // namespace rpf
