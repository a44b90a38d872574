#pragma once

// Locally constant potentials and functions on X^+, stored as tables over
// allowed words of a fixed length.

#include <map>
#include <span>
#include <vector>

#include "rpf/symbolic.hpp"

namespace rpf {

/// Table indexed by allowed words of one common length (the range).
using WordTable = std::map<Word, double>;

int table_range(const WordTable& table);

/// Exact Lipschitz constant with respect to d_beta for a locally constant
/// function: max over word pairs first differing at index t of
/// |f(u) - f(v)| / beta^t.
double lipschitz_seminorm(const WordTable& table, double beta);
double sup_norm(const WordTable& table);
/// max(sup norm, seminorm).
double beta_norm(const WordTable& table, double beta);

/// Locally constant potential phi of range k: phi(x) depends on x_0..x_{k-1}.
class Potential {
 public:
  Potential() = default;

  int range() const noexcept { return range_; }
  double beta() const noexcept { return beta_; }
  const WordTable& values() const noexcept { return values_; }
  double value(std::span<const Symbol> word) const;
  double max_value() const;
  double min_value() const;

  friend Potential make_potential(const Sft& sft, int range, double beta, WordTable values);

 private:
  int range_ = 1;
  double beta_ = 0.5;
  WordTable values_;
};

/// Rejects: beta outside (0,1), range < 1, missing or extra words, non-finite values.
Potential make_potential(const Sft& sft, int range, double beta, WordTable values);
Potential constant_potential(const Sft& sft, int range, double beta, double c);
/// Adds c to every value.
Potential shifted(const Sft& sft, const Potential& phi, double c);

struct PotentialNorms {
  double seminorm = 0.0;
  double sup_norm = 0.0;
};
PotentialNorms seminorm(const Potential& phi);

/// Dense view phi(c, r) of a range <= 2 potential; NaN where c->r is forbidden.
class PairPotential {
 public:
  PairPotential(const Sft& sft, const Potential& phi);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(Symbol c, Symbol r) const noexcept {
    return table_[static_cast<std::size_t>(c) * dim_ + static_cast<std::size_t>(r)];
  }
  /// max over allowed continuations r of phi(c, r).
  double best_continuation(Symbol c) const noexcept { return best_[static_cast<std::size_t>(c)]; }

 private:
  std::size_t dim_;
  std::vector<double> table_;
  std::vector<double> best_;
};

/// Result of recoding to the (k-1)-block presentation.
struct Recoded {
  CodeSpec code;
  Potential potential;
  /// First original symbol of each new symbol.
  std::vector<Symbol> origin;
  /// The (k-1)-word each new symbol stands for.
  std::vector<Word> blocks;
};

/// Higher-block recoding: new symbols are allowed (k-1)-words, transitions are
/// overlaps, rho applies to the first original symbol and the potential has
/// range <= 2 afterwards. Requires k >= max(2, phi.range()).
Recoded higher_block(const CodeSpec& code, const Potential& phi, int k);

}  // namespace rpf
