#include "rpf/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpf/error.hpp"

namespace rpf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int first_difference(const Word& u, const Word& v) {
  const std::size_t n = std::min(u.size(), v.size());
  for (std::size_t t = 0; t < n; ++t) {
    if (u[t] != v[t]) return static_cast<int>(t);
  }
  return static_cast<int>(n);
}

}  // namespace

ConeParams cone_parameter(double beta, double seminorm_phi) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::InvalidArgument, "beta must lie in (0, 1)");
  ConeParams p;
  p.beta = beta;
  p.seminorm_phi = seminorm_phi;
  p.a = beta * (seminorm_phi + 1.0) / (1.0 - beta);
  p.b = beta * (p.a + seminorm_phi);
  p.D = std::max(6.0, 2.0 + 2.0 * p.a * std::exp(p.a));
  return p;
}

ConeParams cone_parameter(const Potential& phi) { return cone_parameter(phi.beta(), seminorm(phi).seminorm); }

bool cone_membership(const WordTable& f, double beta, double a, double rel_tol) {
  for (const auto& [w, x] : f) {
    if (!(x >= 0.0)) return false;
  }
  for (auto i = f.begin(); i != f.end(); ++i) {
    for (auto j = std::next(i); j != f.end(); ++j) {
      // map order groups words by first symbol
      if (i->first.front() != j->first.front()) break;
      const double bound = std::exp(a * std::pow(beta, first_difference(i->first, j->first))) * (1.0 + rel_tol);
      if (i->second > bound * j->second || j->second > bound * i->second) return false;
    }
  }
  return true;
}

bool cone_membership(const WordTable& f, const ConeParams& params, double rel_tol) {
  return cone_membership(f, params.beta, params.a, rel_tol);
}

AndoSplit ando_split(const WordTable& f, const ConeParams& params) {
  const double shift = (1.0 + 1.0 / params.a) * beta_norm(f, params.beta);
  AndoSplit out;
  for (const auto& [w, x] : f) {
    out.g[w] = x + shift;
    out.h[w] = shift;
  }
  return out;
}

double hilbert_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) throw Error(ErrorKind::InvalidArgument, "vectors differ in length");
  if ((u.array() < 0.0).any() || (v.array() < 0.0).any()) {
    throw Error(ErrorKind::InvalidArgument, "hilbert distance needs nonnegative vectors");
  }
  if (u.cwiseAbs().maxCoeff() == 0.0 || v.cwiseAbs().maxCoeff() == 0.0) {
    throw Error(ErrorKind::ZeroVector, "hilbert distance of the zero vector");
  }
  double up = 0.0;
  double down = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if ((u(i) > 0.0) != (v(i) > 0.0)) return kInf;
    if (u(i) == 0.0) continue;
    up = std::max(up, u(i) / v(i));
    down = std::max(down, v(i) / u(i));
  }
  return std::max(0.0, std::log(up * down));
}

double matrix_diameter(const Eigen::MatrixXd& M) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    if (M.col(c).cwiseAbs().maxCoeff() > 0.0) cols.push_back(c);
  }
  if (cols.empty()) throw Error(ErrorKind::AllZero, "matrix has no nonzero column");
  double diameter = 0.0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      diameter = std::max(diameter, hilbert_distance(M.col(cols[i]), M.col(cols[j])));
    }
  }
  return diameter;
}

double contraction_coefficient(const Eigen::MatrixXd& M) {
  const double d = matrix_diameter(M);
  if (!std::isfinite(d)) throw Error(ErrorKind::InfiniteDiameter, "columns have different supports");
  return std::tanh(d / 4.0);
}

LemmaConstants lemma_constants(const ConeParams& params, const Potential& phi, std::size_t alphabet_size,
                               int window_length) {
  if (window_length < 1) throw Error(ErrorKind::InvalidArgument, "window length must be positive");
  const double n = window_length;
  LemmaConstants k;
  const double log_a = params.a + n * (phi.max_value() - phi.min_value()) + n * std::log(static_cast<double>(alphabet_size));
  k.A_bound = std::exp(log_a);
  k.t = (params.a - params.b) / (k.A_bound * (params.a + params.b));
  k.K_bound = 2.0 * (log_a + std::log((params.a + params.b) / (params.a - params.b)));
  return k;
}

ConeDiagnostics lemma_bounds(const BarOperatorFamily& bar, const TransitionBlockCertificate& cert,
                             const Potential& phi, const ConeParams& params, std::size_t alphabet_size) {
  if (cert.B.empty()) throw Error(ErrorKind::InvalidArgument, "certificate has no representatives");
  const auto k = lemma_constants(params, phi, alphabet_size, cert.window_length());
  ConeDiagnostics d;
  d.A_bound = k.A_bound;
  d.t = k.t;
  d.K_bound = k.K_bound;
  d.window_length = cert.window_length();

  std::vector<const Eigen::MatrixXd*> factors;
  for (std::size_t i = 0; i < cert.W.size(); ++i) {
    if (static_cast<int>(i) == cert.l) {
      factors.push_back(&bar.windowed.front());
    } else {
      factors.push_back(&bar.base[cert.W[i]]);
    }
  }
  const Eigen::MatrixXd block = naive_product(factors, bar.base.dimension);
  d.empirical_diameter = matrix_diameter(block);
  if (!std::isfinite(d.empirical_diameter)) {
    throw Error(ErrorKind::InfiniteDiameter, "block product over the window has columns with different supports");
  }
  d.contraction_coeff = std::tanh(d.empirical_diameter / 4.0);
  return d;
}

WordTable transfer_on_table(const CodeSpec& code, const Potential& phi, Symbol j, const WordTable& f) {
  const Sft& sft = code.source();
  const PairPotential pair(sft, phi);
  const int r = table_range(f);
  const int out_range = std::max(1, r - 1);
  WordTable out;
  for (const Word& u : allowed_words(sft, out_range)) {
    double acc = 0.0;
    for (Symbol i : sft.predecessors(u.front())) {
      if (code.rho(i) != j) continue;
      Word iu;
      iu.push_back(i);
      iu.insert(iu.end(), u.begin(), u.begin() + (r - 1));
      auto it = f.find(iu);
      if (it == f.end()) throw Error(ErrorKind::InvalidArgument, "function table is missing an allowed word");
      acc += std::exp(pair(i, u.front())) * it->second;
    }
    out[u] = acc;
  }
  return out;
}

WordTable random_cone_element(const Sft& sft, int range, double beta, double a, Rng& rng) {
  const double half_width = a * (1.0 - beta) / 2.0;
  std::map<Word, double> log_prefix;  // log c(u_0) + partial sums, keyed by prefix
  WordTable f;
  for (const Word& u : allowed_words(sft, range)) {
    Word prefix;
    double acc = 0.0;
    for (int t = 0; t < range; ++t) {
      prefix.push_back(u[static_cast<std::size_t>(t)]);
      auto it = log_prefix.find(prefix);
      if (it == log_prefix.end()) {
        const double step = t == 0 ? rng.uniform(std::log(0.5), std::log(2.0))
                                   : std::pow(beta, t) * rng.uniform(-half_width, half_width);
        it = log_prefix.emplace(prefix, acc + step).first;
      }
      acc = it->second;
    }
    f[u] = std::exp(acc);
  }
  return f;
}

bool conetocone_holds(const CodeSpec& code, const Potential& phi, const ConeParams& params, Rng& rng, int trials) {
  const Sft& sft = code.source();
  const int range = count_words(sft, 3) <= 4096 ? 3 : 2;
  for (int trial = 0; trial < trials; ++trial) {
    const WordTable f = random_cone_element(sft, range, params.beta, params.a, rng);
    if (!cone_membership(f, params)) return false;
    for (std::size_t j = 0; j < code.target_size(); ++j) {
      if (!cone_membership(transfer_on_table(code, phi, static_cast<Symbol>(j), f), params.beta, params.b)) return false;
    }
  }
  return true;
}

}  // namespace rpf
