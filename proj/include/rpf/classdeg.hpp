#pragma once

// Routing sets, minimal transition blocks and the class degree of a one-block
// factor code, plus the data of the intermediate factor Y built from a block.

#include <optional>
#include <span>
#include <vector>

#include "rpf/symbolic.hpp"

namespace rpf {

/// Routing set shared by every preimage of W with the given endpoints.
struct RoutingEntry {
  Symbol first = 0;
  Symbol last = 0;
  std::vector<Symbol> routing;
};

/// Witness (W, l, B) that every preimage of W can be rerouted, with fixed
/// endpoints, through a symbol of B at position l.
struct TransitionBlockCertificate {
  Word W;
  int l = 0;
  std::vector<Symbol> B;
  Symbol q = 0;  ///< W[l]
  /// One entry per endpoint pair realized by a preimage of W. The routing set
  /// of a preimage depends only on its endpoints, so this is the full map
  /// u -> routing(u) in compressed form.
  std::vector<RoutingEntry> routes;

  int window_length() const noexcept { return static_cast<int>(W.size()); }
  int representative_index(Symbol s) const;
};

/// { v_l : v in pi^-1(W), v_0 = u_0, v_{n-1} = u_{n-1} }. Throws NotAPreimage.
std::vector<Symbol> routing_set(const CodeSpec& code, std::span<const Symbol> W, int l, std::span<const Symbol> u);

/// Routing sets of all endpoint pairs of preimages of W, ordered by (first, last).
std::vector<RoutingEntry> routing_table(const CodeSpec& code, std::span<const Symbol> W, int l);

/// Lexicographically smallest minimum-size set meeting every routing set.
std::vector<Symbol> minimum_hitting_set(const std::vector<RoutingEntry>& routes);

/// Best certificate over all W in L(Z) with |W| <= max_len and all l. Order:
/// |B|, then |W|, then W lexicographically, then l, then B lexicographically.
TransitionBlockCertificate minimal_transition_block(const CodeSpec& code, int max_len);

struct ClassDegreeResult {
  int value = 0;
  TransitionBlockCertificate certificate;
  /// true when the best size is unchanged over the last two length increments
  bool stabilized = false;
  /// best |B| over |W| <= L, for L = 1..max_len (non-increasing)
  std::vector<int> best_by_length;
};

/// Upper bound on c_pi, equal to it once max_len suffices. Source must be irreducible.
ClassDegreeResult class_degree(const CodeSpec& code, int max_len);

struct RepresentativeFibers {
  std::vector<std::vector<Symbol>> R;  ///< R[i] for representative cert.B[i]
  /// symbols of rho^-1(q) carried by no R_s (diagnostic)
  std::vector<Symbol> uncovered;
};

/// R_s = { v_l : v in pi^-1(W), s in routing(v) }; throws RoutingOverlap when
/// two of them intersect.
RepresentativeFibers representative_fibers(const CodeSpec& code, const TransitionBlockCertificate& cert);

/// Letter of the intermediate alphabet A(Z) x (B u {star}).
struct YSymbol {
  Symbol target = 0;
  std::optional<Symbol> representative;  ///< nullopt is the star
  bool operator==(const YSymbol&) const = default;
};

/// (q, s) for s in B followed by (q, star) at q; (j, star) elsewhere.
std::vector<YSymbol> intermediate_alphabet(const CodeSpec& code, const TransitionBlockCertificate& cert);

/// Positions m with z[m-l .. m-l+|W|-1] = W, windows fully inside z.
std::vector<int> window_positions(std::span<const Symbol> z_word, const TransitionBlockCertificate& cert);

struct TransitionClassResult {
  int classes = 0;
  int periodic_points = 0;
  int bridge_len = 0;
};

/// Transition classes among the periodic preimages (simple cycles of the fiber
/// graph) of the periodic point z_word^infinity. bridge_len <= 0 selects the
/// default period * |A(X)|^2. Throws NotPeriodicPoint.
TransitionClassResult transition_classes_periodic(const CodeSpec& code, std::span<const Symbol> z_word,
                                                  int bridge_len = 0);

}  // namespace rpf
