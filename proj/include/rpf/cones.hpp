#pragma once

// Cones C_a of locally constant functions, exact beta norms on word tables,
// Hilbert projective distances for nonnegative vectors and matrices, and the
// constants of the block-diameter lemmas.

#include <Eigen/Dense>

#include "rpf/classdeg.hpp"
#include "rpf/cocycle.hpp"
#include "rpf/measure.hpp"
#include "rpf/potential.hpp"

namespace rpf {

struct ConeParams {
  double beta = 0.5;
  double seminorm_phi = 0.0;
  double a = 0.0;
  double b = 0.0;  ///< beta (a + |phi|_beta)
  double D = 0.0;  ///< max(6, 2 + 2 a e^a)
};

/// a = beta (|phi|_beta + 1) / (1 - beta), which makes b < a.
ConeParams cone_parameter(const Potential& phi);
ConeParams cone_parameter(double beta, double seminorm_phi);

/// f >= 0 and f(u) <= e^{a beta^t} f(v) for every pair of words with the same
/// first symbol, t the first index where they differ. `a` overrides params.a
/// (the image cone uses params.b). Ratios are compared with a relative slack
/// of rel_tol to absorb rounding in the exponentials.
bool cone_membership(const WordTable& f, double beta, double a, double rel_tol = 1e-12);
bool cone_membership(const WordTable& f, const ConeParams& params, double rel_tol = 1e-12);

struct AndoSplit {
  WordTable g;
  WordTable h;  ///< constant (1 + 1/a) |f|_beta
};
AndoSplit ando_split(const WordTable& f, const ConeParams& params);

/// log(max u_i/v_i * max v_i/u_i) over the common support; +inf when the
/// supports differ. Throws ZeroVector.
double hilbert_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);
/// Largest distance between nonzero columns. Throws AllZero.
double matrix_diameter(const Eigen::MatrixXd& M);
/// tanh(diameter / 4). Throws InfiniteDiameter.
double contraction_coefficient(const Eigen::MatrixXd& M);

struct LemmaConstants {
  double A_bound = 0.0;  ///< e^{a + n (max phi - min phi)} |A(X)|^n
  double t = 0.0;        ///< (a - b) / (A (a + b))
  double K_bound = 0.0;  ///< 2 log(1/t)
};
LemmaConstants lemma_constants(const ConeParams& params, const Potential& phi, std::size_t alphabet_size,
                               int window_length);

struct ConeDiagnostics {
  double A_bound = 0.0;
  double t = 0.0;
  double K_bound = 0.0;
  double empirical_diameter = 0.0;
  double contraction_coeff = 0.0;
  int window_length = 0;
};

/// Constants for n = |W| and the diameter of the block product over W, with
/// the windowed matrix of the first representative at position l.
/// Throws InfiniteDiameter when the block product has unequal column supports.
ConeDiagnostics lemma_bounds(const BarOperatorFamily& bar, const TransitionBlockCertificate& cert,
                             const Potential& phi, const ConeParams& params, std::size_t alphabet_size);

/// L_j applied to a function given on allowed r-words; the result lives on
/// allowed max(1, r-1)-words. phi must have range <= 2.
WordTable transfer_on_table(const CodeSpec& code, const Potential& phi, Symbol j, const WordTable& f);

/// Random element of C_a on allowed words of the given length:
/// log f(u) = log c(u_0) + sum_{t>=1} beta^t theta_t(u_0..u_t) with
/// |theta_t| <= a (1 - beta) / 2.
WordTable random_cone_element(const Sft& sft, int range, double beta, double a, Rng& rng);

/// L_j C_a within C_b for every target symbol j, checked exactly on `trials`
/// random elements of C_a on allowed 3-words (2-words for large alphabets).
bool conetocone_holds(const CodeSpec& code, const Potential& phi, const ConeParams& params, Rng& rng, int trials);

}  // namespace rpf
