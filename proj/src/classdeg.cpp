#include "rpf/classdeg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "rpf/error.hpp"

namespace rpf {

namespace {

using Mask = std::vector<char>;

// reach[t][c]: c at position t is reachable from `start` at position 0 inside the fiber of W
std::vector<Mask> forward_reach(const CodeSpec& code, std::span<const Symbol> W, Symbol start) {
  const Sft& sft = code.source();
  std::vector<Mask> reach(W.size(), Mask(sft.size(), 0));
  reach[0][static_cast<std::size_t>(start)] = 1;
  for (std::size_t t = 1; t < W.size(); ++t) {
    for (std::size_t c = 0; c < sft.size(); ++c) {
      if (!reach[t - 1][c]) continue;
      for (Symbol r : sft.successors(static_cast<Symbol>(c))) {
        if (code.rho(r) == W[t]) reach[t][static_cast<std::size_t>(r)] = 1;
      }
    }
  }
  return reach;
}

// coreach[t][c]: from c at position t the fiber walk can end at `finish`
std::vector<Mask> backward_reach(const CodeSpec& code, std::span<const Symbol> W, Symbol finish) {
  const Sft& sft = code.source();
  const std::size_t n = W.size();
  std::vector<Mask> coreach(n, Mask(sft.size(), 0));
  coreach[n - 1][static_cast<std::size_t>(finish)] = 1;
  for (std::size_t t = n - 1; t-- > 0;) {
    for (Symbol c : code.fiber(W[t])) {
      for (Symbol r : sft.successors(c)) {
        if (coreach[t + 1][static_cast<std::size_t>(r)]) {
          coreach[t][static_cast<std::size_t>(c)] = 1;
          break;
        }
      }
    }
  }
  return coreach;
}

void check_target_word(const CodeSpec& code, std::span<const Symbol> W, int l) {
  if (W.empty()) throw Error(ErrorKind::InvalidArgument, "transition block must be nonempty");
  if (l < 0 || l >= static_cast<int>(W.size())) throw Error(ErrorKind::InvalidArgument, "position l outside W");
  for (Symbol j : W) {
    if (j < 0 || static_cast<std::size_t>(j) >= code.target_size()) {
      throw Error(ErrorKind::UnknownSymbol, "target symbol id out of range");
    }
  }
}

struct Candidate {
  TransitionBlockCertificate cert;
  bool valid = false;
};

// Best certificate among all W of exactly `length`, in tie-break order.
Candidate best_of_length(const CodeSpec& code, int length) {
  Candidate best;
  Word W;
  std::function<void()> extend = [&]() {
    if (static_cast<int>(W.size()) == length) {
      for (int l = 0; l < length; ++l) {
        auto routes = routing_table(code, W, l);
        if (routes.empty()) continue;
        auto B = minimum_hitting_set(routes);
        if (!best.valid || B.size() < best.cert.B.size()) {
          best.valid = true;
          best.cert.W = W;
          best.cert.l = l;
          best.cert.q = W[static_cast<std::size_t>(l)];
          best.cert.B = std::move(B);
          best.cert.routes = std::move(routes);
        }
      }
      return;
    }
    for (std::size_t j = 0; j < code.target_size(); ++j) {
      W.push_back(static_cast<Symbol>(j));
      if (in_image(code, W)) extend();
      W.pop_back();
    }
  };
  extend();
  return best;
}

}  // namespace

int TransitionBlockCertificate::representative_index(Symbol s) const {
  auto it = std::find(B.begin(), B.end(), s);
  return it == B.end() ? -1 : static_cast<int>(it - B.begin());
}

std::vector<RoutingEntry> routing_table(const CodeSpec& code, std::span<const Symbol> W, int l) {
  check_target_word(code, W, l);
  const std::size_t n = W.size();
  const auto li = static_cast<std::size_t>(l);
  std::vector<std::vector<Mask>> coreach_by_end(code.source().size());
  for (Symbol b : code.fiber(W[n - 1])) coreach_by_end[static_cast<std::size_t>(b)] = backward_reach(code, W, b);

  std::vector<RoutingEntry> table;
  for (Symbol a : code.fiber(W[0])) {
    const auto reach = forward_reach(code, W, a);
    for (Symbol b : code.fiber(W[n - 1])) {
      if (!reach[n - 1][static_cast<std::size_t>(b)]) continue;
      const auto& coreach = coreach_by_end[static_cast<std::size_t>(b)];
      RoutingEntry entry{a, b, {}};
      for (std::size_t c = 0; c < code.source().size(); ++c) {
        if (reach[li][c] && coreach[li][c]) entry.routing.push_back(static_cast<Symbol>(c));
      }
      table.push_back(std::move(entry));
    }
  }
  return table;
}

std::vector<Symbol> routing_set(const CodeSpec& code, std::span<const Symbol> W, int l, std::span<const Symbol> u) {
  check_target_word(code, W, l);
  if (u.size() != W.size() || !code.source().is_allowed_word(u) || map_word(code, u) != Word(W.begin(), W.end())) {
    throw Error(ErrorKind::NotAPreimage, "word is not an allowed preimage of W");
  }
  for (auto& entry : routing_table(code, W, l)) {
    if (entry.first == u.front() && entry.last == u.back()) return std::move(entry.routing);
  }
  throw Error(ErrorKind::NotAPreimage, "endpoint pair not realized");
}

std::vector<Symbol> minimum_hitting_set(const std::vector<RoutingEntry>& routes) {
  std::set<Symbol> pool;
  for (const auto& r : routes) pool.insert(r.routing.begin(), r.routing.end());
  const std::vector<Symbol> candidates(pool.begin(), pool.end());
  const std::size_t m = candidates.size();

  // routing sets as masks over candidate positions
  std::vector<std::vector<char>> hits;
  for (const auto& r : routes) {
    std::vector<char> mask(m, 0);
    for (Symbol s : r.routing) {
      mask[static_cast<std::size_t>(std::lower_bound(candidates.begin(), candidates.end(), s) - candidates.begin())] = 1;
    }
    hits.push_back(std::move(mask));
  }

  // combinations of each size in lexicographic order; the first cover wins
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      bool covers = true;
      for (const auto& mask : hits) {
        bool hit = false;
        for (std::size_t i : pick) hit = hit || mask[i];
        if (!hit) {
          covers = false;
          break;
        }
      }
      if (covers) {
        std::vector<Symbol> out;
        for (std::size_t i : pick) out.push_back(candidates[i]);
        return out;
      }
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == m - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return {};
}

TransitionBlockCertificate minimal_transition_block(const CodeSpec& code, int max_len) {
  if (max_len < 1) throw Error(ErrorKind::InvalidArgument, "max_len must be >= 1");
  Candidate best;
  for (int length = 1; length <= max_len; ++length) {
    auto c = best_of_length(code, length);
    if (c.valid && (!best.valid || c.cert.B.size() < best.cert.B.size())) best = std::move(c);
  }
  return best.cert;
}

ClassDegreeResult class_degree(const CodeSpec& code, int max_len) {
  if (max_len < 1) throw Error(ErrorKind::InvalidArgument, "max_len must be >= 1");
  if (!code.source().irreducible()) throw Error(ErrorKind::NotIrreducible, "class degree needs an irreducible source");
  ClassDegreeResult result;
  Candidate best;
  for (int length = 1; length <= max_len; ++length) {
    auto c = best_of_length(code, length);
    if (c.valid && (!best.valid || c.cert.B.size() < best.cert.B.size())) best = std::move(c);
    result.best_by_length.push_back(static_cast<int>(best.cert.B.size()));
  }
  result.value = static_cast<int>(best.cert.B.size());
  result.certificate = std::move(best.cert);
  const auto& h = result.best_by_length;
  result.stabilized = h.size() >= 3 && h[h.size() - 1] == h[h.size() - 2] && h[h.size() - 2] == h[h.size() - 3];
  return result;
}

RepresentativeFibers representative_fibers(const CodeSpec& code, const TransitionBlockCertificate& cert) {
  RepresentativeFibers out;
  std::vector<char> covered(code.source().size(), 0);
  for (Symbol s : cert.B) {
    std::set<Symbol> R;
    for (const auto& entry : cert.routes) {
      if (std::binary_search(entry.routing.begin(), entry.routing.end(), s)) {
        R.insert(entry.routing.begin(), entry.routing.end());
      }
    }
    for (Symbol c : R) {
      if (covered[static_cast<std::size_t>(c)]) {
        throw Error(ErrorKind::RoutingOverlap, "symbol '" + code.source().name(c) +
                                                   "' is routable through two representatives; try a longer block");
      }
      covered[static_cast<std::size_t>(c)] = 1;
    }
    out.R.emplace_back(R.begin(), R.end());
  }
  for (Symbol c : code.fiber(cert.q)) {
    if (!covered[static_cast<std::size_t>(c)]) out.uncovered.push_back(c);
  }
  return out;
}

std::vector<YSymbol> intermediate_alphabet(const CodeSpec& code, const TransitionBlockCertificate& cert) {
  std::vector<YSymbol> out;
  for (std::size_t j = 0; j < code.target_size(); ++j) {
    const auto target = static_cast<Symbol>(j);
    if (target == cert.q) {
      for (Symbol s : cert.B) out.push_back({target, s});
    }
    out.push_back({target, std::nullopt});
  }
  return out;
}

std::vector<int> window_positions(std::span<const Symbol> z_word, const TransitionBlockCertificate& cert) {
  std::vector<int> out;
  const std::size_t n = cert.W.size();
  if (n == 0 || z_word.size() < n) return out;
  for (std::size_t start = 0; start + n <= z_word.size(); ++start) {
    if (std::equal(cert.W.begin(), cert.W.end(), z_word.begin() + static_cast<std::ptrdiff_t>(start))) {
      out.push_back(static_cast<int>(start) + cert.l);
    }
  }
  return out;
}

TransitionClassResult transition_classes_periodic(const CodeSpec& code, std::span<const Symbol> z_word, int bridge_len) {
  const int p = static_cast<int>(z_word.size());
  if (p == 0) throw Error(ErrorKind::NotPeriodicPoint, "empty period");
  for (Symbol j : z_word) {
    if (j < 0 || static_cast<std::size_t>(j) >= code.target_size()) {
      throw Error(ErrorKind::UnknownSymbol, "target symbol id out of range");
    }
  }
  const Sft& sft = code.source();
  const int A = static_cast<int>(sft.size());
  if (bridge_len <= 0) bridge_len = p * A * A;
  if (bridge_len < p) throw Error(ErrorKind::InvalidArgument, "bridge_len must be at least the period");
  auto zt = [&](long t) { return z_word[static_cast<std::size_t>(((t % p) + p) % p)]; };

  // fiber graph: node (t mod p, c) with rho(c) = z_t
  auto node = [&](int t, Symbol c) { return t * A + c; };
  const int N = p * A;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(N));
  std::vector<char> present(static_cast<std::size_t>(N), 0);
  for (int t = 0; t < p; ++t) {
    for (Symbol c : code.fiber(zt(t))) {
      present[static_cast<std::size_t>(node(t, c))] = 1;
      for (Symbol r : sft.successors(c)) {
        if (code.rho(r) == zt(t + 1)) adj[static_cast<std::size_t>(node(t, c))].push_back(node((t + 1) % p, r));
      }
    }
  }

  // simple cycles, each listed once from its smallest node
  constexpr std::size_t kMaxPoints = 20000;
  std::set<Word> points;
  std::vector<int> path;
  std::vector<char> on_path(static_cast<std::size_t>(N), 0);
  std::function<void(int, int)> dfs = [&](int root, int v) {
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (w == root) {
        // rotate so that the point is read from each phase-0 node on the cycle
        for (std::size_t k = 0; k < path.size(); ++k) {
          if (path[k] / A != 0) continue;
          Word x;
          for (std::size_t i = 0; i < path.size(); ++i) x.push_back(path[(k + i) % path.size()] % A);
          points.insert(std::move(x));
        }
        if (points.size() > kMaxPoints) {
          throw Error(ErrorKind::InvalidArgument, "too many periodic preimages to enumerate");
        }
      } else if (w > root && !on_path[static_cast<std::size_t>(w)]) {
        on_path[static_cast<std::size_t>(w)] = 1;
        path.push_back(w);
        dfs(root, w);
        path.pop_back();
        on_path[static_cast<std::size_t>(w)] = 0;
      }
    }
  };
  for (int root = 0; root < N; ++root) {
    if (!present[static_cast<std::size_t>(root)]) continue;
    path = {root};
    on_path[static_cast<std::size_t>(root)] = 1;
    dfs(root, root);
    on_path[static_cast<std::size_t>(root)] = 0;
  }
  if (points.empty()) {
    throw Error(ErrorKind::NotPeriodicPoint, "'" + code.format_target(z_word) + "' repeated is not a point of Z");
  }

  const std::vector<Word> pts(points.begin(), points.end());
  auto sym = [](const Word& x, long t) { return x[static_cast<std::size_t>(t % static_cast<long>(x.size()))]; };
  auto transitions_to = [&](const Word& x, const Word& y) {
    const long period = std::lcm(static_cast<long>(x.size()), static_cast<long>(y.size()));
    for (long t = 0; t < period; ++t) {
      std::vector<char> current(static_cast<std::size_t>(A), 0);
      current[static_cast<std::size_t>(sym(x, t))] = 1;
      for (int d = 0; d <= bridge_len; ++d) {
        if (current[static_cast<std::size_t>(sym(y, t + d))]) return true;
        std::vector<char> next(static_cast<std::size_t>(A), 0);
        for (Symbol c = 0; c < A; ++c) {
          if (!current[static_cast<std::size_t>(c)]) continue;
          for (Symbol r : sft.successors(c)) {
            if (code.rho(r) == zt(t + d + 1)) next[static_cast<std::size_t>(r)] = 1;
          }
        }
        current = std::move(next);
      }
    }
    return false;
  };

  std::vector<std::vector<int>> relation(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i != j && transitions_to(pts[i], pts[j])) relation[i].push_back(static_cast<int>(j));
    }
  }
  int classes = 0;
  strongly_connected_components(relation, &classes);
  return {classes, static_cast<int>(pts.size()), bridge_len};
}

}  // namespace rpf
