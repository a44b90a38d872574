#include "rpf/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rpf/error.hpp"

namespace rpf {

int table_range(const WordTable& table) {
  if (table.empty()) throw Error(ErrorKind::InvalidArgument, "empty function table");
  const std::size_t r = table.begin()->first.size();
  for (const auto& [word, value] : table) {
    if (word.size() != r) throw Error(ErrorKind::InvalidArgument, "function table mixes word lengths");
  }
  return static_cast<int>(r);
}

double lipschitz_seminorm(const WordTable& table, double beta) {
  table_range(table);
  double best = 0.0;
  for (auto u = table.begin(); u != table.end(); ++u) {
    for (auto v = std::next(u); v != table.end(); ++v) {
      std::size_t t = 0;
      while (u->first[t] == v->first[t]) ++t;
      best = std::max(best, std::abs(u->second - v->second) / std::pow(beta, static_cast<double>(t)));
    }
  }
  return best;
}

double sup_norm(const WordTable& table) {
  double best = 0.0;
  for (const auto& [word, value] : table) best = std::max(best, std::abs(value));
  return best;
}

double beta_norm(const WordTable& table, double beta) {
  return std::max(sup_norm(table), lipschitz_seminorm(table, beta));
}

// ---------------------------------------------------------------- Potential

double Potential::value(std::span<const Symbol> word) const {
  if (static_cast<int>(word.size()) < range_) {
    throw Error(ErrorKind::InvalidArgument, "potential needs a word of length >= range");
  }
  Word key(word.begin(), word.begin() + range_);
  auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorKind::InvalidArgument, "word is not allowed");
  return it->second;
}

double Potential::max_value() const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [w, v] : values_) best = std::max(best, v);
  return best;
}

double Potential::min_value() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [w, v] : values_) best = std::min(best, v);
  return best;
}

Potential make_potential(const Sft& sft, int range, double beta, WordTable values) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorKind::ValidationError, "beta must lie in (0,1)");
  if (range < 1) throw Error(ErrorKind::ValidationError, "potential range must be >= 1");
  const auto words = allowed_words(sft, range);
  const std::set<Word> expected(words.begin(), words.end());
  for (const auto& [word, value] : values) {
    if (!expected.count(word)) {
      throw Error(ErrorKind::ValidationError, "potential.values has an entry for a word that is not allowed: " +
                                                  sft.format(word));
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorKind::ValidationError, "potential.values must be finite (" + sft.format(word) + ")");
    }
  }
  for (const auto& word : words) {
    if (!values.count(word)) {
      throw Error(ErrorKind::ValidationError, "potential.values incomplete: missing " + sft.format(word));
    }
  }
  Potential phi;
  phi.range_ = range;
  phi.beta_ = beta;
  phi.values_ = std::move(values);
  return phi;
}

Potential constant_potential(const Sft& sft, int range, double beta, double c) {
  WordTable values;
  for (auto& w : allowed_words(sft, range)) values.emplace(std::move(w), c);
  return make_potential(sft, range, beta, std::move(values));
}

Potential shifted(const Sft& sft, const Potential& phi, double c) {
  WordTable values = phi.values();
  for (auto& [w, v] : values) v += c;
  return make_potential(sft, phi.range(), phi.beta(), std::move(values));
}

PotentialNorms seminorm(const Potential& phi) {
  return {lipschitz_seminorm(phi.values(), phi.beta()), sup_norm(phi.values())};
}

PairPotential::PairPotential(const Sft& sft, const Potential& phi)
    : dim_(sft.size()),
      table_(dim_ * dim_, std::numeric_limits<double>::quiet_NaN()),
      best_(dim_, -std::numeric_limits<double>::infinity()) {
  if (phi.range() > 2) throw Error(ErrorKind::RangeTooLarge, "pairwise view needs range <= 2; recode first");
  for (std::size_t c = 0; c < dim_; ++c) {
    for (Symbol r : sft.successors(static_cast<Symbol>(c))) {
      const Word pair{static_cast<Symbol>(c), r};
      const double v = phi.value(pair);
      table_[c * dim_ + static_cast<std::size_t>(r)] = v;
      best_[c] = std::max(best_[c], v);
    }
  }
}

// ---------------------------------------------------------------- recoding

Recoded higher_block(const CodeSpec& code, const Potential& phi, int k) {
  if (k < 2 || k < phi.range()) throw Error(ErrorKind::InvalidArgument, "higher_block needs k >= max(2, range)");
  const Sft& sft = code.source();
  auto blocks = allowed_words(sft, k - 1);

  std::vector<std::string> names;
  for (const auto& b : blocks) {
    std::string name;
    for (Symbol s : b) name += sft.name(s);
    names.push_back(std::move(name));
  }
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    names.clear();
    for (const auto& b : blocks) {
      std::string name;
      for (std::size_t i = 0; i < b.size(); ++i) name += (i ? "." : "") + sft.name(b[i]);
      names.push_back(std::move(name));
    }
  }

  std::vector<std::pair<Symbol, Symbol>> edges;
  for (std::size_t u = 0; u < blocks.size(); ++u) {
    for (std::size_t v = 0; v < blocks.size(); ++v) {
      const auto& bu = blocks[u];
      const auto& bv = blocks[v];
      if (!std::equal(bu.begin() + 1, bu.end(), bv.begin())) continue;
      if (!sft.allows(bu.back(), bv.back())) continue;
      edges.emplace_back(static_cast<Symbol>(u), static_cast<Symbol>(v));
    }
  }
  Sft recoded = make_sft(names, edges, false);

  std::vector<Symbol> rho;
  std::vector<Symbol> origin;
  for (const auto& b : blocks) {
    rho.push_back(code.rho(b.front()));
    origin.push_back(b.front());
  }

  WordTable values;
  int new_range = 1;
  if (k == 2) {
    new_range = phi.range();
    for (const auto& [w, v] : phi.values()) values.emplace(w, v);
  } else if (phi.range() <= k - 1) {
    for (std::size_t u = 0; u < blocks.size(); ++u) values.emplace(Word{static_cast<Symbol>(u)}, phi.value(blocks[u]));
  } else {
    new_range = 2;
    for (auto [u, v] : edges) {
      Word joined = blocks[static_cast<std::size_t>(u)];
      joined.push_back(blocks[static_cast<std::size_t>(v)].back());
      values.emplace(Word{u, v}, phi.value(joined));
    }
  }
  Potential new_phi = make_potential(recoded, new_range, phi.beta(), std::move(values));
  CodeSpec new_code = make_code(std::move(recoded), code.target_names(), std::move(rho));
  return Recoded{std::move(new_code), std::move(new_phi), std::move(origin), std::move(blocks)};
}

}  // namespace rpf
