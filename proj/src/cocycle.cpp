#include "rpf/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "rpf/error.hpp"

namespace rpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kUpper = std::ldexp(1.0, 512);
const double kLower = std::ldexp(1.0, -512);

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double batch_std_error(const std::vector<double>& estimates) {
  const auto b = static_cast<double>(estimates.size());
  if (estimates.size() < 2) return 0.0;
  for (double e : estimates) {
    if (!std::isfinite(e)) return std::numeric_limits<double>::quiet_NaN();
  }
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / b;
  double ss = 0.0;
  for (double e : estimates) ss += (e - mean) * (e - mean);
  return std::sqrt(ss / (b - 1.0)) / std::sqrt(b);
}

std::vector<std::size_t> batch_boundaries(std::size_t n, std::size_t batches) {
  std::vector<std::size_t> bounds(batches + 1);
  for (std::size_t k = 0; k <= batches; ++k) bounds[k] = k * n / batches;
  return bounds;
}

void check_word(const OperatorFamily& family, std::span<const Symbol> z_word) {
  for (Symbol j : z_word) {
    if (j < 0 || static_cast<std::size_t>(j) >= family.matrices.size()) {
      throw Error(ErrorKind::UnknownSymbol, "target symbol id out of range");
    }
  }
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::string to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::Enumeration: return "enumeration";
    case PressureMethod::PartitionDp: return "partition-dp";
    case PressureMethod::MatrixGrowth: return "matrix-growth";
  }
  return "unknown";
}

// ---------------------------------------------------------------- operators

OperatorFamily build_operators(const CodeSpec& code, const Potential& phi) {
  if (phi.range() > 2) throw Error(ErrorKind::RangeTooLarge, "operators need a potential of range <= 2");
  const Sft& sft = code.source();
  const PairPotential pair(sft, phi);
  OperatorFamily family;
  family.dimension = sft.size();
  const auto d = static_cast<Eigen::Index>(sft.size());
  family.matrices.assign(code.target_size(), Eigen::MatrixXd::Zero(d, d));
  for (std::size_t c = 0; c < sft.size(); ++c) {
    const auto col = static_cast<Symbol>(c);
    auto& M = family.matrices[static_cast<std::size_t>(code.rho(col))];
    for (Symbol r : sft.successors(col)) M(r, col) = std::exp(pair(col, r));
  }
  return family;
}

const Eigen::MatrixXd& BarOperatorFamily::matrix(const YSymbol& y) const {
  if (!y.representative) return base[y.target];
  if (y.target != q) throw Error(ErrorKind::InvalidArgument, "windowed operators only exist over q");
  auto it = std::find(B.begin(), B.end(), *y.representative);
  if (it == B.end()) throw Error(ErrorKind::InvalidArgument, "symbol is not a representative");
  return windowed[static_cast<std::size_t>(it - B.begin())];
}

BarOperatorFamily bar_operators(const OperatorFamily& family, const TransitionBlockCertificate& cert,
                                const RepresentativeFibers& fibers) {
  if (fibers.R.size() != cert.B.size()) throw Error(ErrorKind::InvalidArgument, "fibers do not match certificate");
  BarOperatorFamily bar;
  bar.base = family;
  bar.q = cert.q;
  bar.B = cert.B;
  bar.uncovered = fibers.uncovered;
  for (const auto& R : fibers.R) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(family[cert.q].rows(), family[cert.q].cols());
    for (Symbol c : R) M.col(c) = family[cert.q].col(c);
    bar.windowed.push_back(std::move(M));
  }
  return bar;
}

// ---------------------------------------------------------------- products

Eigen::MatrixXd ScaledMatrix::exact() const {
  if (zero) return Eigen::MatrixXd::Zero(matrix.rows(), matrix.cols());
  return matrix * std::exp(log_scale);
}

ScaledMatrix cocycle_product(const OperatorFamily& family, std::span<const Symbol> z_word) {
  check_word(family, z_word);
  const auto d = static_cast<Eigen::Index>(family.dimension);
  ScaledMatrix out{Eigen::MatrixXd::Identity(d, d), 0.0, false};
  for (Symbol j : z_word) {
    out.matrix = family[j] * out.matrix;
    const double sup = out.matrix.cwiseAbs().maxCoeff();
    if (sup == 0.0) {
      out.zero = true;
      out.log_scale = -kInf;
      out.matrix.setZero();
      return out;
    }
    if (sup > kUpper || sup < kLower) {
      out.matrix /= sup;
      out.log_scale += std::log(sup);
    }
  }
  return out;
}

Eigen::MatrixXd naive_product(const std::vector<const Eigen::MatrixXd*>& factors, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(d, d);
  for (const auto* M : factors) out = (*M) * out;
  return out;
}

// ---------------------------------------------------------------- pressure

double partition_function(const CodeSpec& code, const Potential& phi, std::span<const Symbol> z_word,
                          PressureMethod method) {
  if (z_word.empty()) throw Error(ErrorKind::InvalidArgument, "partition function needs a nonempty word");
  for (Symbol j : z_word) {
    if (j < 0 || static_cast<std::size_t>(j) >= code.target_size()) {
      throw Error(ErrorKind::UnknownSymbol, "target symbol id out of range");
    }
  }
  const Sft& sft = code.source();
  const PairPotential pair(sft, phi);
  const std::size_t n = z_word.size();

  if (method == PressureMethod::Enumeration) {
    double total = -kInf;
    Word w;
    std::function<void(double)> extend = [&](double sum) {
      if (w.size() == n) {
        total = log_sum_exp(total, sum + pair.best_continuation(w.back()));
        return;
      }
      const auto& candidates = w.empty() ? code.fiber(z_word[0]) : sft.successors(w.back());
      for (Symbol c : candidates) {
        if (code.rho(c) != z_word[w.size()]) continue;
        const double step = w.empty() ? 0.0 : pair(w.back(), c);
        w.push_back(c);
        extend(sum + step);
        w.pop_back();
      }
    };
    extend(0.0);
    if (total == -kInf) throw Error(ErrorKind::WordNotInImage, "'" + code.format_target(z_word) + "' has no preimage");
    return total;
  }
  if (method != PressureMethod::PartitionDp) {
    throw Error(ErrorKind::InvalidArgument, "partition_function supports enumeration and partition-dp");
  }

  std::vector<double> v(sft.size(), -kInf);
  for (Symbol c : code.fiber(z_word[0])) v[static_cast<std::size_t>(c)] = 0.0;
  CompensatedSum offset;
  for (std::size_t t = 1; t < n; ++t) {
    std::vector<double> next(sft.size(), -kInf);
    double top = -kInf;
    for (Symbol r : code.fiber(z_word[t])) {
      double acc = -kInf;
      for (Symbol c : sft.predecessors(r)) {
        if (v[static_cast<std::size_t>(c)] == -kInf) continue;
        acc = log_sum_exp(acc, v[static_cast<std::size_t>(c)] + pair(c, r));
      }
      next[static_cast<std::size_t>(r)] = acc;
      top = std::max(top, acc);
    }
    if (top == -kInf) throw Error(ErrorKind::WordNotInImage, "'" + code.format_target(z_word) + "' has no preimage");
    for (double& x : next) {
      if (x != -kInf) x -= top;
    }
    offset.add(top);
    v = std::move(next);
  }
  double tail = -kInf;
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c] != -kInf) tail = log_sum_exp(tail, v[c] + pair.best_continuation(static_cast<Symbol>(c)));
  }
  if (tail == -kInf) throw Error(ErrorKind::WordNotInImage, "'" + code.format_target(z_word) + "' has no preimage");
  offset.add(tail);
  return offset.value();
}

PressureEstimate pressure_estimate(const CodeSpec& code, const Potential& phi, std::span<const Symbol> orbit,
                                   std::size_t batches) {
  const std::size_t n = orbit.size();
  if (batches < 2 || n < batches) throw Error(ErrorKind::InvalidArgument, "pressure estimate needs n >= batches >= 2");
  const Sft& sft = code.source();
  const PairPotential pair(sft, phi);
  const auto bounds = batch_boundaries(n, batches);

  std::vector<double> v(sft.size(), -kInf);
  CompensatedSum offset;
  auto log_z = [&]() {
    double tail = -kInf;
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (v[c] != -kInf) tail = log_sum_exp(tail, v[c] + pair.best_continuation(static_cast<Symbol>(c)));
    }
    CompensatedSum total = offset;
    total.add(tail);
    return total.value();
  };

  PressureEstimate est;
  est.n = n;
  est.method = PressureMethod::PartitionDp;
  double previous = 0.0;
  std::size_t next_bound = 1;
  for (std::size_t t = 0; t < n; ++t) {
    const Symbol j = orbit[t];
    std::vector<double> next(sft.size(), -kInf);
    double top = -kInf;
    for (Symbol r : code.fiber(j)) {
      double acc = -kInf;
      if (t == 0) {
        acc = 0.0;
      } else {
        for (Symbol c : sft.predecessors(r)) {
          if (v[static_cast<std::size_t>(c)] == -kInf) continue;
          acc = log_sum_exp(acc, v[static_cast<std::size_t>(c)] + pair(c, r));
        }
      }
      next[static_cast<std::size_t>(r)] = acc;
      top = std::max(top, acc);
    }
    if (top == -kInf) throw Error(ErrorKind::WordNotInImage, "orbit leaves the image language at step " + std::to_string(t));
    for (double& x : next) {
      if (x != -kInf) x -= top;
    }
    offset.add(top);
    v = std::move(next);
    if (t + 1 == bounds[next_bound]) {
      const double current = log_z();
      est.batch_estimates.push_back((current - previous) / static_cast<double>(bounds[next_bound] - bounds[next_bound - 1]));
      previous = current;
      ++next_bound;
    }
  }
  est.value = previous / static_cast<double>(n);
  est.std_error = batch_std_error(est.batch_estimates);
  return est;
}

PressureEstimate pressure_estimate(const CodeSpec& code, const Potential& phi, const MeasurePresentation& nu,
                                   std::size_t n, std::uint64_t seed, std::size_t batches, std::size_t burn_in) {
  const auto orbit = sample_orbit(nu, burn_in + n, seed);
  return pressure_estimate(code, phi, std::span<const Symbol>(orbit.symbols).subspan(burn_in), batches);
}

// ---------------------------------------------------------------- Lyapunov

LyapunovReport lyapunov_spectrum(const OperatorFamily& family, std::span<const Symbol> orbit,
                                 const LyapunovOptions& options) {
  check_word(family, orbit);
  const std::size_t dim = family.dimension;
  if (options.p < 1 || options.p > dim) {
    throw Error(ErrorKind::DimensionTooSmall, "number of exponents must lie in [1, " + std::to_string(dim) + "]");
  }
  if (orbit.size() <= options.burn_in) throw Error(ErrorKind::InvalidArgument, "orbit shorter than burn-in");
  const std::size_t n = orbit.size() - options.burn_in;
  const std::size_t batches = options.batches;
  if (batches < 2 || n < 10 * batches) throw Error(ErrorKind::InvalidArgument, "lyapunov needs n >= 10 * batches");

  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd frame(d, static_cast<Eigen::Index>(options.p));
  frame.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
  Rng rng(options.frame_seed, static_cast<std::uint64_t>(Stream::Frame));
  for (Eigen::Index i = 1; i < frame.cols(); ++i) {
    for (Eigen::Index r = 0; r < d; ++r) frame(r, i) = rng.uniform(-1.0, 1.0);
  }

  const std::size_t p = options.p;
  std::vector<int> slot_of_column(p);
  std::iota(slot_of_column.begin(), slot_of_column.end(), 0);
  std::vector<char> collapsed(p, 0);
  std::vector<CompensatedSum> totals(p);
  std::vector<CompensatedSum> batch_sums(p);
  std::vector<std::vector<double>> batch_estimates;
  const auto bounds = batch_boundaries(n, batches);
  std::size_t next_bound = 1;

  // Gram-Schmidt with one reorthogonalization pass; a column whose residual
  // falls below collapse_tol of its own norm lies in the span of the others.
  auto orthonormalize = [&](const Eigen::MatrixXd& image, bool accumulate) {
    Eigen::MatrixXd kept(d, image.cols());
    std::vector<int> kept_slots;
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < image.cols(); ++i) {
      Eigen::VectorXd v = image.col(i);
      const double before = v.norm();
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < k; ++j) v -= kept.col(j).dot(v) * kept.col(j);
      }
      const double r = v.norm();
      const int slot = slot_of_column[static_cast<std::size_t>(i)];
      if (before == 0.0 || !(r > options.collapse_tol * before)) {
        collapsed[static_cast<std::size_t>(slot)] = 1;
        continue;
      }
      kept.col(k++) = v / r;
      kept_slots.push_back(slot);
      if (accumulate) {
        totals[static_cast<std::size_t>(slot)].add(std::log(r));
        batch_sums[static_cast<std::size_t>(slot)].add(std::log(r));
      }
    }
    slot_of_column = std::move(kept_slots);
    return Eigen::MatrixXd(kept.leftCols(k));
  };

  frame = orthonormalize(frame, false);
  for (std::size_t t = 0; t < orbit.size(); ++t) {
    const bool accumulate = t >= options.burn_in;
    if (frame.cols() > 0) frame = orthonormalize(family[orbit[t]] * frame, accumulate);
    if (!accumulate) continue;
    const std::size_t done = t + 1 - options.burn_in;
    if (done == bounds[next_bound]) {
      const double len = static_cast<double>(bounds[next_bound] - bounds[next_bound - 1]);
      std::vector<double> row(p);
      for (std::size_t s = 0; s < p; ++s) {
        row[s] = collapsed[s] ? -kInf : batch_sums[s].value() / len;
        batch_sums[s] = CompensatedSum{};
      }
      batch_estimates.push_back(std::move(row));
      ++next_bound;
    }
  }

  std::vector<double> exponents(p);
  std::vector<double> errors(p);
  for (std::size_t s = 0; s < p; ++s) {
    exponents[s] = collapsed[s] ? -kInf : totals[s].value() / static_cast<double>(n);
    std::vector<double> column;
    for (const auto& row : batch_estimates) column.push_back(row[s]);
    errors[s] = collapsed[s] ? std::numeric_limits<double>::quiet_NaN() : batch_std_error(column);
  }
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return exponents[a] > exponents[b]; });

  LyapunovReport report;
  report.steps = n;
  report.burn_in = options.burn_in;
  report.seed = options.frame_seed;
  for (std::size_t s : order) {
    report.exponents.push_back(exponents[s]);
    report.std_errors.push_back(errors[s]);
  }
  for (const auto& row : batch_estimates) {
    std::vector<double> sorted;
    for (std::size_t s : order) sorted.push_back(row[s]);
    report.batch_estimates.push_back(std::move(sorted));
  }
  return report;
}

LyapunovReport lyapunov_spectrum(const OperatorFamily& family, const MeasurePresentation& nu, std::size_t p,
                                 std::size_t n, std::uint64_t seed, std::size_t batches, std::size_t burn_in) {
  const auto orbit = sample_orbit(nu, burn_in + n, seed);
  LyapunovOptions options;
  options.p = p;
  options.batches = batches;
  options.burn_in = burn_in;
  options.frame_seed = seed;
  return lyapunov_spectrum(family, orbit.symbols, options);
}

MultiplicityResult top_multiplicity(const LyapunovReport& report, double tol) {
  MultiplicityResult out;
  const auto& lam = report.exponents;
  if (lam.empty() || !std::isfinite(lam[0])) return out;
  const auto se = [&](std::size_t i) {
    const double s = report.std_errors[i];
    return std::isfinite(s) ? s : 0.0;
  };
  out.threshold = tol;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (!std::isfinite(lam[i])) break;
    const double threshold = std::max(tol, 3.0 * (se(0) + se(i)));
    if (lam[0] - lam[i] <= threshold) {
      out.multiplicity = static_cast<int>(i) + 1;
      out.threshold = threshold;
    } else {
      break;
    }
  }
  const auto m = static_cast<std::size_t>(out.multiplicity);
  if (m < lam.size()) out.gap = std::isfinite(lam[m]) ? lam[m - 1] - lam[m] : kInf;
  return out;
}

// ---------------------------------------------------------------- decomposition

DecompositionReport verify_decomposition(const OperatorFamily& family, const BarOperatorFamily& bar,
                                         const TransitionBlockCertificate& cert, std::span<const Symbol> z_word,
                                         std::size_t max_assignments) {
  check_word(family, z_word);
  DecompositionReport report;
  report.z_word.assign(z_word.begin(), z_word.end());
  report.windows = window_positions(z_word, cert);
  report.uncovered = bar.uncovered;
  if (report.windows.empty()) {
    throw Error(ErrorKind::NoWindow, "word contains no full copy of the transition block");
  }
  const std::size_t k = report.windows.size();
  const std::size_t radix = cert.B.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > max_assignments / std::max<std::size_t>(radix, 1)) {
      throw Error(ErrorKind::TooManyAssignments, "more than " + std::to_string(max_assignments) + " assignments");
    }
    total *= radix;
  }
  report.assignments = total;

  std::vector<const Eigen::MatrixXd*> plain;
  for (Symbol j : z_word) plain.push_back(&family[j]);
  const Eigen::MatrixXd full = naive_product(plain, family.dimension);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(full.rows(), full.cols());
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t a = 0; a < total; ++a) {
    std::vector<const Eigen::MatrixXd*> factors = plain;
    for (std::size_t w = 0; w < k; ++w) {
      factors[static_cast<std::size_t>(report.windows[w])] = &bar.windowed[digits[w]];
    }
    const Eigen::MatrixXd product = naive_product(factors, family.dimension);
    if (product.cwiseAbs().maxCoeff() > 0.0) ++report.nonzero_assignments;
    sum += product;
    for (std::size_t w = k; w-- > 0;) {
      if (++digits[w] < radix) break;
      digits[w] = 0;
    }
  }
  const double scale = full.cwiseAbs().maxCoeff();
  report.max_rel_error = scale > 0.0 ? (sum - full).cwiseAbs().maxCoeff() / scale : (sum - full).cwiseAbs().maxCoeff();
  report.identity_holds = report.max_rel_error <= 1e-12;
  return report;
}

}  // namespace rpf
