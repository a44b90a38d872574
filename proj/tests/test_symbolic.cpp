#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "rpf/error.hpp"
#include "rpf/measure.hpp"

using namespace rpf;

namespace {

// Counts words by brute force over all symbol sequences.
std::uint64_t brute_count(const Sft& sft, int n) {
  std::uint64_t count = 0;
  Word w(static_cast<std::size_t>(n), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      bool ok = true;
      for (int t = 0; t + 1 < n; ++t) ok = ok && sft.allows(w[t], w[t + 1]);
      count += ok;
      return;
    }
    for (std::size_t s = 0; s < sft.size(); ++s) {
      w[static_cast<std::size_t>(i)] = static_cast<Symbol>(s);
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

// Random irreducible SFT: a Hamiltonian cycle plus random extra edges.
Sft random_sft(std::mt19937_64& gen, int size) {
  std::vector<std::string> names;
  for (int i = 0; i < size; ++i) names.push_back("s" + std::to_string(i));
  std::vector<std::pair<Symbol, Symbol>> edges;
  std::bernoulli_distribution extra(0.35);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      if (j == (i + 1) % size || extra(gen)) edges.emplace_back(i, j);
    }
  }
  return make_sft(names, edges, true);
}

CodeSpec random_code(std::mt19937_64& gen, int size, int targets) {
  Sft sft = random_sft(gen, size);
  std::vector<Symbol> rho(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) rho[static_cast<std::size_t>(i)] = i < targets ? i : static_cast<Symbol>(gen() % targets);
  std::vector<std::string> tnames;
  for (int j = 0; j < targets; ++j) tnames.push_back(std::string(1, static_cast<char>('a' + j)));
  return make_code(std::move(sft), tnames, rho);
}

void all_target_words(std::size_t k, int n, const std::function<void(const Word&)>& f) {
  Word w(static_cast<std::size_t>(n), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      f(w);
      return;
    }
    for (std::size_t j = 0; j < k; ++j) {
      w[static_cast<std::size_t>(i)] = static_cast<Symbol>(j);
      rec(i + 1);
    }
  };
  rec(0);
}

}  // namespace

TEST_CASE("validate_sft examples") {
  const Sft g = fx::golden_sft();
  CHECK(g.irreducible());
  CHECK(validate_sft({"a", "b"}, {{"a", "b"}, {"b", "a"}}).irreducible());
  try {
    validate_sft({"a", "b"}, {{"a", "a"}});
    FAIL("expected NotEssential");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotEssential);
  }
  try {
    validate_sft({"a", "a"}, {{"a", "a"}});
    FAIL("expected DuplicateSymbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicateSymbol);
  }
  try {
    validate_sft({"a"}, {{"a", "c"}});
    FAIL("expected UnknownSymbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownSymbol);
  }
  // a -> a, b -> b, a -> b: essential but not strongly connected
  const Sft split = validate_sft({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}});
  CHECK_FALSE(split.irreducible());
  CHECK_THROWS_AS(validate_sft({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}}, true), Error);
}

TEST_CASE("count_words examples and enumeration oracle") {
  CHECK(count_words(fx::golden_sft(), 5) == 13);
  CHECK(count_words(fx::full_shift({"0", "1"}), 3) == 8);
  CHECK(count_words(validate_sft({"a", "b"}, {{"a", "b"}, {"b", "a"}}), 4) == 2);
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Sft sft = random_sft(gen, 2 + trial % 3);
    for (int n = 1; n <= 8; ++n) {
      CHECK(count_words(sft, n) == brute_count(sft, n));
      CHECK(allowed_words(sft, n).size() == count_words(sft, n));
    }
  }
}

TEST_CASE("preimage_words examples") {
  const CodeSpec pair = fx::pairing();
  const auto w = preimage_words(pair, pair.parse_target("01"));
  REQUIRE(w.size() == 4);
  std::set<std::string> got;
  for (const auto& x : w) got.insert(pair.source().format(x));
  CHECK(got == std::set<std::string>{"p0 p2", "p0 p3", "p1 p2", "p1 p3"});

  const CodeSpec id = fx::golden_identity();
  CHECK(preimage_words(id, id.parse_target("11")).empty());
  CHECK_FALSE(in_image(id, id.parse_target("11")));

  const CodeSpec rc = fx::run_choice();
  const auto r = preimage_words(rc, rc.parse_target("aab"));
  REQUIRE(r.size() == 2);
  CHECK(rc.source().format(r[0]) == "r0 r0 r2");
  CHECK(rc.source().format(r[1]) == "r1 r1 r2");
  CHECK_THROWS_AS(rc.parse_target("ax"), Error);
}

TEST_CASE("fibers partition the language") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const CodeSpec code = random_code(gen, 3 + trial % 3, 2);
    for (int n = 1; n <= 6; ++n) {
      std::uint64_t total = 0;
      all_target_words(code.target_size(), n, [&](const Word& z) {
        const auto pre = preimage_words(code, z);
        CHECK(pre.size() == count_preimages(code, z));
        for (const auto& w : pre) CHECK(map_word(code, w) == z);
        total += pre.size();
      });
      CHECK(total == count_words(code.source(), n));
    }
  }
}

TEST_CASE("higher_block recoding") {
  const CodeSpec id = fx::golden_identity();
  const Potential phi = fx::zero(id);
  const Recoded r3 = higher_block(id, phi, 3);
  CHECK(r3.code.source().size() == 3);
  for (int n = 1; n <= 8; ++n) CHECK(count_words(r3.code.source(), n) == count_words(id.source(), n + 1));

  // k = 2 keeps the system up to renaming
  const Potential two = make_potential(id.source(), 2, 0.5, {{{0, 0}, 0.1}, {{0, 1}, -0.2}, {{1, 0}, 0.3}});
  const Recoded r2 = higher_block(id, two, 2);
  CHECK(r2.code.source().size() == 2);
  CHECK(r2.potential.values() == two.values());

  // range-4 potential on the pairing shift is carried by 3-blocks
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const CodeSpec pair = fx::pairing();
  WordTable table;
  for (const auto& w : allowed_words(pair.source(), 4)) table[w] = u(gen);
  const Potential four = make_potential(pair.source(), 4, 0.5, table);
  const Recoded r4 = higher_block(pair, four, 4);
  CHECK(r4.potential.range() <= 2);
  for (int n = 1; n <= 4; ++n) CHECK(count_words(r4.code.source(), n) == count_words(pair.source(), n + 2));
  // the recoded potential on a recoded 2-word is phi on the spelled-out 4-word
  for (const auto& [w, v] : r4.potential.values()) {
    Word spelled = r4.blocks[static_cast<std::size_t>(w[0])];
    if (w.size() > 1) spelled.push_back(r4.blocks[static_cast<std::size_t>(w[1])].back());
    CHECK(four.value(spelled) == doctest::Approx(v).epsilon(1e-15));
  }
}

TEST_CASE("image_presentation examples") {
  const LabelledGraph id = image_presentation(fx::golden_identity());
  CHECK(id.num_states() == 2);
  CHECK(id.edges().size() == 3);
  CHECK(id.right_resolving());

  for (const CodeSpec& code : {fx::pairing(), fx::run_choice()}) {
    const LabelledGraph g = image_presentation(code);
    CHECK(g.num_states() == 1);
    CHECK(g.edges().size() == 2);
    for (const auto& e : g.edges()) CHECK(e.from == e.to);
  }
  CHECK(image_presentation(fx::phase()).num_states() == 1);
}

TEST_CASE("image_presentation is right-resolving and generates L(Z)") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 25; ++trial) {
    const CodeSpec code = random_code(gen, 3 + trial % 4, 2 + trial % 2);
    const LabelledGraph g = image_presentation(code, 8);
    for (std::size_t s = 0; s < g.num_states(); ++s) {
      std::set<Symbol> labels;
      for (int e : g.out_edges(static_cast<int>(s))) {
        CHECK(labels.insert(g.edges()[static_cast<std::size_t>(e)].label).second);
      }
    }
    CHECK(g.strongly_connected());
    for (int n = 1; n <= 6; ++n) {
      all_target_words(code.target_size(), n, [&](const Word& z) { CHECK(g.generates(z) == in_image(code, z)); });
    }
  }
}

TEST_CASE("compare_language flags proper subshifts") {
  const CodeSpec pair = fx::pairing();
  // one loop labelled 0 only: a proper subshift of the full 2-shift
  const LabelledGraph zeros({"s"}, {{0, 0, 0}}, 2);
  const auto cmp = compare_language(zeros, pair, 4);
  CHECK(cmp.subset_of_image);
  CHECK_FALSE(cmp.covers_image);
  REQUIRE(cmp.witness);
  CHECK(pair.format_target(*cmp.witness) == "1");

  const CodeSpec id = fx::golden_identity();
  const LabelledGraph full({"s"}, {{0, 0, 0}, {0, 0, 1}}, 2);
  const auto cmp2 = compare_language(full, id, 4);
  CHECK_FALSE(cmp2.subset_of_image);
  CHECK(cmp2.covers_image);
}

TEST_CASE("strongly connected components") {
  int count = 0;
  // 0 <-> 1 -> 2 <-> 3
  const auto comp = strongly_connected_components({{1}, {0, 2}, {3}, {2}}, &count);
  CHECK(count == 2);
  CHECK(comp[0] == comp[1]);
  CHECK(comp[2] == comp[3]);
  CHECK(comp[0] > comp[2]);
}

TEST_CASE("code validation") {
  const Sft g = fx::golden_sft();
  CHECK_THROWS_AS(make_code(g, {"0", "1", "2"}, std::vector<Symbol>{0, 1}), Error);  // not surjective
  CHECK_THROWS_AS(make_code(g, {"0"}, std::vector<std::pair<std::string, std::string>>{{"g0", "0"}}), Error);
}
