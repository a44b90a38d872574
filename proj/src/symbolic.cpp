#include "rpf/symbolic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rpf/error.hpp"

namespace rpf {

namespace {

void check_symbol(std::size_t alphabet_size, Symbol s, const char* what) {
  if (s < 0 || static_cast<std::size_t>(s) >= alphabet_size) {
    throw Error(ErrorKind::UnknownSymbol, std::string(what) + " id " + std::to_string(s) + " out of range");
  }
}

// Sorted set of symbols reachable in the fiber: the state of a forward scan.
using SymbolSet = std::vector<Symbol>;

SymbolSet step_fiber(const CodeSpec& code, const SymbolSet& current, Symbol label) {
  std::vector<char> mark(code.source().size(), 0);
  for (Symbol c : current) {
    for (Symbol r : code.source().successors(c)) {
      if (code.rho(r) == label) mark[static_cast<std::size_t>(r)] = 1;
    }
  }
  SymbolSet next;
  for (std::size_t r = 0; r < mark.size(); ++r) {
    if (mark[r]) next.push_back(static_cast<Symbol>(r));
  }
  return next;
}

}  // namespace

std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adjacency, int* count) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0;
  int next_comp = 0;

  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : adjacency[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp[w] = next_comp;
      } while (w != v);
      ++next_comp;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  if (count) *count = next_comp;
  return comp;
}

// ---------------------------------------------------------------- Sft

Symbol Sft::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Symbol>(i);
  }
  throw Error(ErrorKind::UnknownSymbol, "symbol '" + std::string(name) + "' is not declared");
}

std::string Sft::format(std::span<const Symbol> word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += name(word[i]);
  }
  return out;
}

bool Sft::is_allowed_word(std::span<const Symbol> word) const {
  for (Symbol s : word) {
    if (s < 0 || static_cast<std::size_t>(s) >= size()) return false;
  }
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (!allows(word[i - 1], word[i])) return false;
  }
  return true;
}

Sft make_sft(std::vector<std::string> alphabet, const std::vector<std::pair<Symbol, Symbol>>& edges,
             bool require_irreducible) {
  if (alphabet.empty()) throw Error(ErrorKind::InvalidArgument, "alphabet is empty");
  std::set<std::string> seen;
  for (const auto& name : alphabet) {
    if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty symbol name");
    if (!seen.insert(name).second) throw Error(ErrorKind::DuplicateSymbol, "symbol '" + name + "' declared twice");
  }

  Sft sft;
  const std::size_t n = alphabet.size();
  sft.names_ = std::move(alphabet);
  sft.allowed_.assign(n * n, 0);
  for (auto [from, to] : edges) {
    check_symbol(n, from, "transition source");
    check_symbol(n, to, "transition target");
    sft.allowed_[static_cast<std::size_t>(from) * n + static_cast<std::size_t>(to)] = 1;
  }
  sft.succ_.assign(n, {});
  sft.pred_.assign(n, {});
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      if (sft.allowed_[c * n + r]) {
        sft.succ_[c].push_back(static_cast<Symbol>(r));
        sft.pred_[r].push_back(static_cast<Symbol>(c));
      }
    }
  }
  std::vector<std::string> dead;
  for (std::size_t s = 0; s < n; ++s) {
    if (sft.succ_[s].empty() || sft.pred_[s].empty()) dead.push_back(sft.names_[s]);
  }
  if (!dead.empty()) {
    std::string list;
    for (const auto& d : dead) list += (list.empty() ? "" : ", ") + d;
    throw Error(ErrorKind::NotEssential, "symbols without successor or predecessor: " + list);
  }

  std::vector<std::vector<int>> adjacency(n);
  for (std::size_t c = 0; c < n; ++c) adjacency[c].assign(sft.succ_[c].begin(), sft.succ_[c].end());
  int components = 0;
  strongly_connected_components(adjacency, &components);
  sft.irreducible_ = (components == 1);
  if (require_irreducible && !sft.irreducible_) {
    throw Error(ErrorKind::NotIrreducible, "transition graph has " + std::to_string(components) +
                                               " strongly connected components");
  }
  return sft;
}

Sft validate_sft(std::vector<std::string> alphabet,
                 const std::vector<std::pair<std::string, std::string>>& transitions, bool require_irreducible) {
  std::map<std::string, Symbol> ids;
  for (std::size_t i = 0; i < alphabet.size(); ++i) ids.emplace(alphabet[i], static_cast<Symbol>(i));
  std::vector<std::pair<Symbol, Symbol>> edges;
  edges.reserve(transitions.size());
  for (const auto& [from, to] : transitions) {
    auto f = ids.find(from);
    auto t = ids.find(to);
    if (f == ids.end()) throw Error(ErrorKind::UnknownSymbol, "transition references undeclared '" + from + "'");
    if (t == ids.end()) throw Error(ErrorKind::UnknownSymbol, "transition references undeclared '" + to + "'");
    edges.emplace_back(f->second, t->second);
  }
  return make_sft(std::move(alphabet), edges, require_irreducible);
}

std::uint64_t count_words(const Sft& sft, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "count_words needs n >= 1");
  std::vector<std::uint64_t> ending(sft.size(), 1);
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(sft.size(), 0);
    for (std::size_t c = 0; c < sft.size(); ++c) {
      for (Symbol r : sft.successors(static_cast<Symbol>(c))) next[static_cast<std::size_t>(r)] += ending[c];
    }
    ending = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto v : ending) total += v;
  return total;
}

std::vector<Word> allowed_words(const Sft& sft, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "allowed_words needs n >= 1");
  std::vector<Word> out;
  Word current;
  std::function<void()> extend = [&]() {
    if (static_cast<int>(current.size()) == n) {
      out.push_back(current);
      return;
    }
    if (current.empty()) {
      for (std::size_t s = 0; s < sft.size(); ++s) {
        current.push_back(static_cast<Symbol>(s));
        extend();
        current.pop_back();
      }
    } else {
      for (Symbol r : sft.successors(current.back())) {
        current.push_back(r);
        extend();
        current.pop_back();
      }
    }
  };
  extend();
  return out;
}

// ---------------------------------------------------------------- CodeSpec

Symbol CodeSpec::target_index(std::string_view name) const {
  for (std::size_t i = 0; i < target_names_.size(); ++i) {
    if (target_names_[i] == name) return static_cast<Symbol>(i);
  }
  throw Error(ErrorKind::UnknownSymbol, "target symbol '" + std::string(name) + "' is not declared");
}

std::string CodeSpec::format_target(std::span<const Symbol> word) const {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += target_names_.at(static_cast<std::size_t>(word[i]));
  }
  return out;
}

Word CodeSpec::parse_target(std::string_view text) const {
  const bool single_char = std::all_of(target_names_.begin(), target_names_.end(),
                                       [](const std::string& s) { return s.size() == 1; });
  Word out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    auto it = std::find(target_names_.begin(), target_names_.end(), token);
    if (it != target_names_.end()) {
      out.push_back(static_cast<Symbol>(it - target_names_.begin()));
    } else if (single_char) {
      for (char ch : token) out.push_back(target_index(std::string(1, ch)));
    } else {
      throw Error(ErrorKind::UnknownSymbol, "target symbol '" + token + "' is not declared");
    }
  }
  return out;
}

CodeSpec make_code(Sft source, std::vector<std::string> target_alphabet, std::vector<Symbol> rho) {
  if (target_alphabet.empty()) throw Error(ErrorKind::InvalidArgument, "target alphabet is empty");
  std::set<std::string> seen;
  for (const auto& name : target_alphabet) {
    if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty target symbol name");
    if (!seen.insert(name).second) {
      throw Error(ErrorKind::DuplicateSymbol, "target symbol '" + name + "' declared twice");
    }
  }
  if (rho.size() != source.size()) {
    throw Error(ErrorKind::ValidationError, "rho must be defined on every source symbol");
  }
  CodeSpec code;
  code.fibers_.assign(target_alphabet.size(), {});
  for (std::size_t c = 0; c < rho.size(); ++c) {
    check_symbol(target_alphabet.size(), rho[c], "rho image");
    code.fibers_[static_cast<std::size_t>(rho[c])].push_back(static_cast<Symbol>(c));
  }
  for (std::size_t j = 0; j < target_alphabet.size(); ++j) {
    if (code.fibers_[j].empty()) {
      throw Error(ErrorKind::ValidationError, "rho is not surjective: target '" + target_alphabet[j] + "' unused");
    }
  }
  code.source_ = std::move(source);
  code.target_names_ = std::move(target_alphabet);
  code.rho_ = std::move(rho);
  return code;
}

CodeSpec make_code(Sft source, std::vector<std::string> target_alphabet,
                   const std::vector<std::pair<std::string, std::string>>& rho_by_name) {
  std::vector<Symbol> rho(source.size(), -1);
  for (const auto& [from, to] : rho_by_name) {
    Symbol c = source.index_of(from);
    auto it = std::find(target_alphabet.begin(), target_alphabet.end(), to);
    if (it == target_alphabet.end()) throw Error(ErrorKind::UnknownSymbol, "rho maps to undeclared '" + to + "'");
    if (rho[static_cast<std::size_t>(c)] >= 0) {
      throw Error(ErrorKind::ValidationError, "rho defines '" + from + "' twice");
    }
    rho[static_cast<std::size_t>(c)] = static_cast<Symbol>(it - target_alphabet.begin());
  }
  for (std::size_t c = 0; c < rho.size(); ++c) {
    if (rho[c] < 0) {
      throw Error(ErrorKind::ValidationError, "rho is not total: '" + source.name(static_cast<Symbol>(c)) + "'");
    }
  }
  return make_code(std::move(source), std::move(target_alphabet), std::move(rho));
}

Word map_word(const CodeSpec& code, std::span<const Symbol> source_word) {
  Word out;
  out.reserve(source_word.size());
  for (Symbol s : source_word) {
    check_symbol(code.source().size(), s, "source symbol");
    out.push_back(code.rho(s));
  }
  return out;
}

bool in_image(const CodeSpec& code, std::span<const Symbol> z_word) {
  if (z_word.empty()) return true;
  for (Symbol j : z_word) check_symbol(code.target_size(), j, "target symbol");
  SymbolSet current = code.fiber(z_word[0]);
  for (std::size_t t = 1; t < z_word.size() && !current.empty(); ++t) current = step_fiber(code, current, z_word[t]);
  return !current.empty();
}

std::uint64_t count_preimages(const CodeSpec& code, std::span<const Symbol> z_word) {
  if (z_word.empty()) return 1;
  for (Symbol j : z_word) check_symbol(code.target_size(), j, "target symbol");
  std::vector<std::uint64_t> ending(code.source().size(), 0);
  for (Symbol c : code.fiber(z_word[0])) ending[static_cast<std::size_t>(c)] = 1;
  for (std::size_t t = 1; t < z_word.size(); ++t) {
    std::vector<std::uint64_t> next(ending.size(), 0);
    for (Symbol r : code.fiber(z_word[t])) {
      for (Symbol c : code.source().predecessors(r)) next[static_cast<std::size_t>(r)] += ending[static_cast<std::size_t>(c)];
    }
    ending = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto v : ending) total += v;
  return total;
}

std::vector<Word> preimage_words(const CodeSpec& code, std::span<const Symbol> z_word) {
  const std::size_t n = z_word.size();
  if (n == 0) return {Word{}};
  for (Symbol j : z_word) check_symbol(code.target_size(), j, "target symbol");
  const Sft& sft = code.source();

  // feasible[t][c]: c can sit at position t of some preimage completing to the end
  std::vector<std::vector<char>> feasible(n, std::vector<char>(sft.size(), 0));
  for (Symbol c : code.fiber(z_word[n - 1])) feasible[n - 1][static_cast<std::size_t>(c)] = 1;
  for (std::size_t t = n - 1; t-- > 0;) {
    for (Symbol c : code.fiber(z_word[t])) {
      for (Symbol r : sft.successors(c)) {
        if (feasible[t + 1][static_cast<std::size_t>(r)]) {
          feasible[t][static_cast<std::size_t>(c)] = 1;
          break;
        }
      }
    }
  }

  std::vector<Word> out;
  Word current;
  std::function<void()> extend = [&]() {
    const std::size_t t = current.size();
    if (t == n) {
      out.push_back(current);
      return;
    }
    auto try_symbol = [&](Symbol c) {
      if (!feasible[t][static_cast<std::size_t>(c)]) return;
      current.push_back(c);
      extend();
      current.pop_back();
    };
    if (t == 0) {
      for (Symbol c : code.fiber(z_word[0])) try_symbol(c);
    } else {
      for (Symbol c : sft.successors(current.back())) {
        if (code.rho(c) == z_word[t]) try_symbol(c);
      }
    }
  };
  extend();
  return out;
}

// ---------------------------------------------------------------- LabelledGraph

LabelledGraph::LabelledGraph(std::vector<std::string> states, std::vector<LabelledEdge> edges, std::size_t num_labels)
    : states_(std::move(states)), edges_(std::move(edges)), num_labels_(num_labels) {
  out_.assign(states_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.from < 0 || static_cast<std::size_t>(edge.from) >= states_.size() || edge.to < 0 ||
        static_cast<std::size_t>(edge.to) >= states_.size()) {
      throw Error(ErrorKind::InvalidArgument, "edge references unknown state");
    }
    check_symbol(num_labels_, edge.label, "edge label");
    out_[static_cast<std::size_t>(edge.from)].push_back(static_cast<int>(e));
  }
}

bool LabelledGraph::right_resolving() const {
  for (const auto& outs : out_) {
    std::set<Symbol> labels;
    for (int e : outs) {
      if (!labels.insert(edges_[static_cast<std::size_t>(e)].label).second) return false;
    }
  }
  return true;
}

bool LabelledGraph::strongly_connected() const {
  if (states_.empty()) return false;
  std::vector<std::vector<int>> adjacency(states_.size());
  for (const auto& e : edges_) adjacency[static_cast<std::size_t>(e.from)].push_back(e.to);
  int count = 0;
  strongly_connected_components(adjacency, &count);
  return count == 1;
}

std::optional<int> LabelledGraph::follow(int state, Symbol label) const {
  for (int e : out_.at(static_cast<std::size_t>(state))) {
    if (edges_[static_cast<std::size_t>(e)].label == label) return e;
  }
  return std::nullopt;
}

bool LabelledGraph::generates(std::span<const Symbol> word) const {
  std::vector<char> current(states_.size(), 1);
  for (Symbol label : word) {
    std::vector<char> next(states_.size(), 0);
    bool any = false;
    for (std::size_t s = 0; s < states_.size(); ++s) {
      if (!current[s]) continue;
      for (int e : out_[s]) {
        const auto& edge = edges_[static_cast<std::size_t>(e)];
        if (edge.label == label) {
          next[static_cast<std::size_t>(edge.to)] = 1;
          any = true;
        }
      }
    }
    if (!any) return false;
    current = std::move(next);
  }
  return true;
}

LanguageComparison compare_language(const LabelledGraph& graph, const CodeSpec& code, int l_check) {
  LanguageComparison result;
  Word word;
  // depth-first over words that lie in either language; both are factorial
  std::function<bool(const std::vector<char>&, const SymbolSet&)> visit =
      [&](const std::vector<char>& states, const SymbolSet& fiber) -> bool {
    if (static_cast<int>(word.size()) >= l_check) return true;
    for (std::size_t j = 0; j < code.target_size(); ++j) {
      const Symbol label = static_cast<Symbol>(j);
      std::vector<char> next_states(graph.num_states(), 0);
      bool generated = false;
      for (std::size_t s = 0; s < graph.num_states(); ++s) {
        if (!states[s]) continue;
        for (int e : graph.out_edges(static_cast<int>(s))) {
          const auto& edge = graph.edges()[static_cast<std::size_t>(e)];
          if (edge.label == label) {
            next_states[static_cast<std::size_t>(edge.to)] = 1;
            generated = true;
          }
        }
      }
      SymbolSet next_fiber = word.empty() ? code.fiber(label) : step_fiber(code, fiber, label);
      const bool in_z = !next_fiber.empty();
      if (!generated && !in_z) continue;
      word.push_back(label);
      if (generated != in_z) {
        if (generated) result.subset_of_image = false;
        if (in_z) result.covers_image = false;
        if (!result.witness || word.size() < result.witness->size()) result.witness = word;
      }
      const bool keep_going = visit(next_states, next_fiber);
      word.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  visit(std::vector<char>(graph.num_states(), 1), {});
  return result;
}

LabelledGraph image_presentation(const CodeSpec& code, int l_check) {
  const Sft& sft = code.source();
  std::map<SymbolSet, int> ids;
  std::vector<SymbolSet> subsets;
  std::vector<LabelledEdge> edges;

  SymbolSet full(sft.size());
  for (std::size_t s = 0; s < sft.size(); ++s) full[s] = static_cast<Symbol>(s);
  ids.emplace(full, 0);
  subsets.push_back(full);

  // a state is the set of source symbols that may come next
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    for (std::size_t j = 0; j < code.target_size(); ++j) {
      std::vector<char> mark(sft.size(), 0);
      bool emits = false;
      for (Symbol c : subsets[k]) {
        if (code.rho(c) != static_cast<Symbol>(j)) continue;
        emits = true;
        for (Symbol r : sft.successors(c)) mark[static_cast<std::size_t>(r)] = 1;
      }
      if (!emits) continue;
      SymbolSet next;
      for (std::size_t r = 0; r < mark.size(); ++r) {
        if (mark[r]) next.push_back(static_cast<Symbol>(r));
      }
      auto [it, inserted] = ids.emplace(next, static_cast<int>(subsets.size()));
      if (inserted) subsets.push_back(next);
      edges.push_back({static_cast<int>(k), it->second, static_cast<Symbol>(j)});
    }
  }

  std::vector<std::vector<int>> adjacency(subsets.size());
  for (const auto& e : edges) adjacency[static_cast<std::size_t>(e.from)].push_back(e.to);
  int count = 0;
  auto comp = strongly_connected_components(adjacency, &count);
  std::vector<char> terminal(static_cast<std::size_t>(count), 1);
  for (const auto& e : edges) {
    if (comp[static_cast<std::size_t>(e.from)] != comp[static_cast<std::size_t>(e.to)]) {
      terminal[static_cast<std::size_t>(comp[static_cast<std::size_t>(e.from)])] = 0;
    }
  }
  int chosen = -1;
  for (std::size_t k = 0; k < subsets.size() && chosen < 0; ++k) {
    if (terminal[static_cast<std::size_t>(comp[k])]) chosen = comp[k];
  }

  std::vector<int> remap(subsets.size(), -1);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    if (comp[k] != chosen) continue;
    remap[k] = static_cast<int>(names.size());
    std::string name = "{";
    for (std::size_t i = 0; i < subsets[k].size(); ++i) name += (i ? "," : "") + sft.name(subsets[k][i]);
    names.push_back(name + "}");
  }
  std::vector<LabelledEdge> kept;
  for (const auto& e : edges) {
    const int from = remap[static_cast<std::size_t>(e.from)];
    const int to = remap[static_cast<std::size_t>(e.to)];
    if (from >= 0 && to >= 0) kept.push_back({from, to, e.label});
  }
  LabelledGraph graph(std::move(names), std::move(kept), code.target_size());

  auto cmp = compare_language(graph, code, l_check);
  if (!cmp.subset_of_image || !cmp.covers_image) {
    throw Error(ErrorKind::LanguageMismatch,
                "presentation disagrees with the image language on '" + code.format_target(*cmp.witness) + "'");
  }
  return graph;
}

}  // namespace rpf
