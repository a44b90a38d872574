#pragma once

// Shifts of finite type, one-block factor codes and the right-resolving
// presentation of their sofic images.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rpf {

/// Symbols are stable integer ids in declaration order.
using Symbol = int;
using Word = std::vector<Symbol>;

/// Memory-1 shift of finite type presented by its transition relation.
class Sft {
 public:
  Sft() = default;

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Symbol s) const { return names_.at(static_cast<std::size_t>(s)); }

  bool allows(Symbol from, Symbol to) const noexcept {
    return allowed_[static_cast<std::size_t>(from) * size() + static_cast<std::size_t>(to)] != 0;
  }
  const std::vector<Symbol>& successors(Symbol s) const { return succ_[static_cast<std::size_t>(s)]; }
  const std::vector<Symbol>& predecessors(Symbol s) const { return pred_[static_cast<std::size_t>(s)]; }
  bool irreducible() const noexcept { return irreducible_; }

  /// Throws UnknownSymbol.
  Symbol index_of(std::string_view name) const;
  std::string format(std::span<const Symbol> word) const;
  bool is_allowed_word(std::span<const Symbol> word) const;

  friend Sft validate_sft(std::vector<std::string> alphabet,
                          const std::vector<std::pair<std::string, std::string>>& transitions,
                          bool require_irreducible);
  friend Sft make_sft(std::vector<std::string> alphabet, const std::vector<std::pair<Symbol, Symbol>>& edges,
                      bool require_irreducible);

 private:
  std::vector<std::string> names_;
  std::vector<char> allowed_;
  std::vector<std::vector<Symbol>> succ_;
  std::vector<std::vector<Symbol>> pred_;
  bool irreducible_ = false;
};

/// Validates names and transition pairs. Essentiality is always enforced;
/// irreducibility is reported, and enforced only when requested.
Sft validate_sft(std::vector<std::string> alphabet,
                 const std::vector<std::pair<std::string, std::string>>& transitions,
                 bool require_irreducible = false);

/// Same as validate_sft, for edges already given as symbol ids.
Sft make_sft(std::vector<std::string> alphabet, const std::vector<std::pair<Symbol, Symbol>>& edges,
             bool require_irreducible = false);

/// Number of allowed words of length n (n >= 1).
std::uint64_t count_words(const Sft& sft, int n);

/// All allowed words of length n in lexicographic (declaration) order.
std::vector<Word> allowed_words(const Sft& sft, int n);

/// One-block code rho: A(X) -> B, extended coordinatewise.
class CodeSpec {
 public:
  CodeSpec() = default;

  const Sft& source() const noexcept { return source_; }
  std::size_t target_size() const noexcept { return target_names_.size(); }
  const std::vector<std::string>& target_names() const noexcept { return target_names_; }
  Symbol rho(Symbol s) const { return rho_.at(static_cast<std::size_t>(s)); }
  const std::vector<Symbol>& rho_table() const noexcept { return rho_; }
  /// Source symbols mapping to target symbol j, ascending.
  const std::vector<Symbol>& fiber(Symbol j) const { return fibers_.at(static_cast<std::size_t>(j)); }

  Symbol target_index(std::string_view name) const;
  std::string format_target(std::span<const Symbol> word) const;
  Word parse_target(std::string_view text) const;

  friend CodeSpec make_code(Sft source, std::vector<std::string> target_alphabet, std::vector<Symbol> rho);

 private:
  Sft source_;
  std::vector<std::string> target_names_;
  std::vector<Symbol> rho_;
  std::vector<std::vector<Symbol>> fibers_;
};

/// Validates totality and surjectivity of rho.
CodeSpec make_code(Sft source, std::vector<std::string> target_alphabet, std::vector<Symbol> rho);
CodeSpec make_code(Sft source, std::vector<std::string> target_alphabet,
                   const std::vector<std::pair<std::string, std::string>>& rho_by_name);

Word map_word(const CodeSpec& code, std::span<const Symbol> source_word);

/// True iff z_word has at least one allowed preimage (z_word in L(Z)).
bool in_image(const CodeSpec& code, std::span<const Symbol> z_word);

/// Number of allowed preimages of z_word, by dynamic programming.
std::uint64_t count_preimages(const CodeSpec& code, std::span<const Symbol> z_word);

/// All allowed source words w with pi(w) = z_word, lexicographic order.
std::vector<Word> preimage_words(const CodeSpec& code, std::span<const Symbol> z_word);

struct LabelledEdge {
  int from = 0;
  int to = 0;
  Symbol label = 0;
};

/// Finite labelled graph over the target alphabet.
class LabelledGraph {
 public:
  LabelledGraph() = default;
  LabelledGraph(std::vector<std::string> states, std::vector<LabelledEdge> edges, std::size_t num_labels);

  std::size_t num_states() const noexcept { return states_.size(); }
  std::size_t num_labels() const noexcept { return num_labels_; }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<LabelledEdge>& edges() const noexcept { return edges_; }
  const std::vector<int>& out_edges(int state) const { return out_.at(static_cast<std::size_t>(state)); }

  bool right_resolving() const;
  bool strongly_connected() const;
  /// Edge index leaving `state` with `label`, for right-resolving graphs.
  std::optional<int> follow(int state, Symbol label) const;
  /// True iff some path in the graph is labelled by `word`.
  bool generates(std::span<const Symbol> word) const;

 private:
  std::vector<std::string> states_;
  std::vector<LabelledEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::size_t num_labels_ = 0;
};

/// Subset construction for Z = pi(X), seeded at the full-alphabet state and
/// trimmed to a terminal strongly connected component. The language is
/// cross-checked against fiber enumeration for all words up to l_check;
/// LanguageMismatch on disagreement.
LabelledGraph image_presentation(const CodeSpec& code, int l_check = 8);

/// Compares the language of `graph` with L(Z) for all words of length <= l_check.
struct LanguageComparison {
  bool subset_of_image = true;   ///< every generated word lies in L(Z)
  bool covers_image = true;      ///< every word of L(Z) is generated
  std::optional<Word> witness;   ///< first disagreeing word, if any
};
LanguageComparison compare_language(const LabelledGraph& graph, const CodeSpec& code, int l_check);

/// Strongly connected components (Tarjan), component id per vertex. Ids are in
/// reverse topological order: an edge u->v implies comp[u] >= comp[v].
std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adjacency, int* count = nullptr);

}  // namespace rpf
