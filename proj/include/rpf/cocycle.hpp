#pragma once

// Matrix realization of the transfer-operator cocycle over Z on functions of
// the first coordinate, the windowed (bar) cocycle over Y, Lyapunov spectrum
// and relative pressure estimators.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpf/classdeg.hpp"
#include "rpf/measure.hpp"
#include "rpf/potential.hpp"

namespace rpf {

/// M[j](r, c) = exp(phi(c, r)) when rho(c) = j and c -> r, else 0, so that
/// (M[j] f)(r) is L_j f at points with x_0 = r.
struct OperatorFamily {
  std::size_t dimension = 0;
  std::vector<Eigen::MatrixXd> matrices;  ///< indexed by target symbol

  const Eigen::MatrixXd& operator[](Symbol j) const { return matrices.at(static_cast<std::size_t>(j)); }
};

/// Throws RangeTooLarge when phi.range() > 2.
OperatorFamily build_operators(const CodeSpec& code, const Potential& phi);

/// Windowed matrices M[(q, s)] = M[q] with columns outside R_s zeroed;
/// (j, star) uses the base matrix.
struct BarOperatorFamily {
  OperatorFamily base;
  Symbol q = 0;
  std::vector<Symbol> B;
  std::vector<Eigen::MatrixXd> windowed;  ///< windowed[i] for representative B[i]
  std::vector<Symbol> uncovered;          ///< copied from RepresentativeFibers

  const Eigen::MatrixXd& matrix(const YSymbol& y) const;
};

BarOperatorFamily bar_operators(const OperatorFamily& family, const TransitionBlockCertificate& cert,
                                const RepresentativeFibers& fibers);

/// Product kept as matrix * exp(log_scale) with the sup norm of `matrix`
/// held inside [2^-512, 2^512].
struct ScaledMatrix {
  Eigen::MatrixXd matrix;
  double log_scale = 0.0;
  bool zero = false;  ///< exact zero product; log_scale is -inf

  Eigen::MatrixXd exact() const;
};

/// M[z_{n-1}] ... M[z_0].
ScaledMatrix cocycle_product(const OperatorFamily& family, std::span<const Symbol> z_word);
/// Plain product of an explicit sequence of matrices, first factor applied first.
Eigen::MatrixXd naive_product(const std::vector<const Eigen::MatrixXd*>& factors, std::size_t dim);

enum class PressureMethod { Enumeration, PartitionDp, MatrixGrowth };
std::string to_string(PressureMethod m);

/// log sum over w in pi^-1(z) of exp(sum_{t<n-1} phi(w_t, w_{t+1}) + max_r phi(w_{n-1}, r)).
/// Enumeration is the word-by-word oracle; PartitionDp the log-sum-exp recursion.
/// Throws WordNotInImage.
double partition_function(const CodeSpec& code, const Potential& phi, std::span<const Symbol> z_word,
                          PressureMethod method);

struct PressureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  PressureMethod method = PressureMethod::PartitionDp;
  std::vector<double> batch_estimates;
};

/// (1/n) log partition function along the orbit, batch-mean standard error
/// from the increments across batch boundaries.
PressureEstimate pressure_estimate(const CodeSpec& code, const Potential& phi, std::span<const Symbol> orbit,
                                   std::size_t batches);
/// Samples the orbit from nu (orbit substream) and discards `burn_in` symbols.
PressureEstimate pressure_estimate(const CodeSpec& code, const Potential& phi, const MeasurePresentation& nu,
                                   std::size_t n, std::uint64_t seed, std::size_t batches, std::size_t burn_in = 0);

struct LyapunovReport {
  std::vector<double> exponents;  ///< non-increasing; -inf for collapsed directions
  std::vector<double> std_errors;
  /// batch_estimates[k][i]: estimate of exponent i over batch k
  std::vector<std::vector<double>> batch_estimates;
  std::size_t steps = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
};

struct LyapunovOptions {
  std::size_t p = 1;
  std::size_t batches = 20;
  std::size_t burn_in = 0;
  /// a direction is dropped when QR leaves less than this fraction of its norm
  double collapse_tol = 1e-10;
  std::uint64_t frame_seed = 0;
};

/// Discrete QR along the orbit: the first `burn_in` symbols align the frame,
/// the remaining ones are accumulated. The initial frame starts from the
/// constant function; the other columns come from the frame substream.
LyapunovReport lyapunov_spectrum(const OperatorFamily& family, std::span<const Symbol> orbit,
                                 const LyapunovOptions& options);
LyapunovReport lyapunov_spectrum(const OperatorFamily& family, const MeasurePresentation& nu, std::size_t p,
                                 std::size_t n, std::uint64_t seed, std::size_t batches, std::size_t burn_in = 0);

struct MultiplicityResult {
  int multiplicity = 0;
  /// lambda_m - lambda_{m+1}; +inf when the next exponent is -inf, empty when m = p
  std::optional<double> gap;
  double threshold = 0.0;
};

/// Counts i with lambda_1 - lambda_i <= max(tol, 3 (se_1 + se_i)).
MultiplicityResult top_multiplicity(const LyapunovReport& report, double tol = 1e-3);

struct DecompositionReport {
  Word z_word;
  std::vector<int> windows;
  std::size_t assignments = 0;
  std::size_t nonzero_assignments = 0;
  double max_rel_error = 0.0;
  bool identity_holds = false;
  /// rho^-1(q) minus the union of the R_s (per-symbol identity diagnostic)
  std::vector<Symbol> uncovered;
};

/// Sums the bar products over every assignment of a representative to each
/// window and compares with the plain cocycle product (1e-12 relative).
/// Throws NoWindow, or TooManyAssignments past max_assignments.
DecompositionReport verify_decomposition(const OperatorFamily& family, const BarOperatorFamily& bar,
                                         const TransitionBlockCertificate& cert, std::span<const Symbol> z_word,
                                         std::size_t max_assignments = 1u << 16);

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

}  // namespace rpf
