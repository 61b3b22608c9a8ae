#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rankone/error.hpp"
#include "rankone/hnn.hpp"
#include "rankone/homology.hpp"
#include "rankone/presentation.hpp"

using namespace rankone;

namespace {

// <t, a_1..a_(top+1) | magnus, t a_k t^-1 a_(k+1)^-1>.
Presentation magnus_presentation(HnnSplitting const& s) {
  std::vector<std::string> names{"t"};
  for (std::size_t k = 0; k <= s.top; ++k) {
    names.push_back("a" + std::to_string(k + 1));
  }
  std::vector<Word> images;
  for (std::size_t k = 0; k <= s.top; ++k) {
    images.push_back(Word::generator(k + 1));
  }
  std::vector<Word> rels{s.magnus_relator.substitute(images)};
  for (std::size_t k = 0; k < s.top; ++k) {
    rels.push_back(Word::generator(0) * Word::generator(k + 1)
                   * Word::generator(0, -1) * Word::generator(k + 2, -1));
  }
  return make_presentation(Alphabet(names), rels);
}

template <class Rng>
Presentation random_presentation(std::size_t gens, std::size_t rels,
                                 std::size_t len, Rng& rng) {
  std::vector<Word> rs;
  for (std::size_t k = 0; k < rels; ++k) {
    rs.push_back(oracle::random_nonempty_word(gens, len, rng));
  }
  return make_presentation(Alphabet::standard(gens), rs);
}

}  // namespace

TEST_SUITE("presentation") {

TEST_CASE("parse_presentation normalizes and counts deficiency") {
  auto p = parse_presentation("< t, a | t a t^-1 a^-2 >");
  CHECK(p.rank() == 2);
  CHECK(p.relators.size() == 1);
  CHECK(p.deficiency() == 1);
  auto z = parse_presentation("< a | >");
  CHECK(z.deficiency() == 1);
  CHECK(z.relators.empty());
  auto z2 = parse_presentation("< a, b | a b a^-1 b^-1 >");
  CHECK(z2.deficiency() == 1);
}

TEST_CASE("parse_presentation reduces, drops identities and reports errors") {
  std::vector<std::string> warnings;
  auto p = parse_presentation("< a, b | b a b^-1 a^2 b a^-1 b^-1, a a^-1 >  # c",
                              &warnings);
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0] == parse_word("a^2", p.generators));
  CHECK(warnings.size() == 1);
  CHECK(p.deficiency() == 1);
  CHECK_THROWS_AS(parse_presentation("< a, a | a >"), ParseError);
  try {
    parse_presentation("< a, b |\n a c >");
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(parse_presentation("< a | a^0 >"), ParseError);
  CHECK_THROWS_AS(parse_presentation("< a | a"), ParseError);
}

TEST_CASE("exponent_sum per relator") {
  auto bs = parse_presentation("< t, a | t a t^-1 a^-2 >");
  CHECK(exponent_sum(bs, "t") == std::vector<long long>{0});
  CHECK(exponent_sum(bs, "a") == std::vector<long long>{-1});
  auto z2 = parse_presentation("< a, b | a b a^-1 b^-1 >");
  CHECK(exponent_sum(z2, "a") == std::vector<long long>{0});
  CHECK_THROWS_AS(exponent_sum(z2, "c"), PreconditionError);
}

TEST_CASE("tietze_simplify eliminates a defined generator") {
  auto p = parse_presentation(
      "< t, a, b | t a t^-1 b^-1, a^2 b a^-1 b^-1 t^3 >");
  auto r = tietze_simplify(p);
  CHECK(r.presentation.generators.names() == std::vector<std::string>{"t", "a"});
  REQUIRE(r.presentation.relators.size() == 1);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].generator == "b");
  Alphabet const ta{{"t", "a"}};
  Word expect = parse_word("a^2 t a t^-1 a^-1 t a^-1 t^-1 t^3", ta);
  CHECK(same_cyclic_word_up_to_inversion(r.presentation.relators[0],
                                         cyclic_reduce(expect).core));
}

TEST_CASE("tietze_simplify brings C(2,d) to one relator") {
  for (long long d : {2, 3, 5}) {
    Alphabet const a{{"a1", "a2"}};
    auto theta = make_endomorphism(
        a, {Word::generator(1), Word::generator(0).pow(d)});
    auto r = tietze_simplify(hnn_presentation(theta));
    CHECK(r.presentation.rank() == 2);
    REQUIRE(r.presentation.relators.size() == 1);
    Word expect = parse_word("t^2 a1 t^-2 a1^-" + std::to_string(d),
                             r.presentation.generators);
    CHECK(same_cyclic_word_up_to_inversion(r.presentation.relators[0], expect));
    CHECK(h1(r.presentation) == h1(hnn_presentation(theta)));
  }
}

TEST_CASE("tietze_simplify leaves BS(1,2) unchanged") {
  auto p = parse_presentation("< t, a | t a t^-1 a^-2 >");
  auto r = tietze_simplify(p);
  CHECK(r.presentation == p);
  CHECK(r.trace.empty());
  CHECK_FALSE(r.exhausted);
}

TEST_CASE("one_relator_hnn_split kinds") {
  auto bs = one_relator_hnn_split(parse_presentation("< t, a | t a t^-1 a^-2 >"));
  CHECK(bs.kind == HnnSplitting::Kind::ascending_strict);
  REQUIRE(bs.free_basis.size() == 1);
  REQUIRE(bs.images.size() == 1);
  CHECK(bs.images[0] == Word::generator(0).pow(2));
  auto z2 = one_relator_hnn_split(parse_presentation("< a, b | a b a^-1 b^-1 >"));
  CHECK(z2.kind == HnnSplitting::Kind::ascending_equal);
  auto c = one_relator_hnn_split(
      parse_presentation("< t, a | t a t^-1 a t a^-1 t^-1 a^-1 >"));
  CHECK(c.kind == HnnSplitting::Kind::both_proper);
  CHECK(c.top == 1);
  CHECK(c.lowest_occurrences >= 2);
  CHECK(c.highest_occurrences >= 2);
  // The vertex group is Z^2 on a_0, a_1; neither edge group contains the
  // other generator, already in the abelianization.
  auto vertex = make_presentation(Alphabet{{"a0", "a1"}}, {c.magnus_relator});
  auto m = oracle::exponent_matrix(vertex);
  CHECK(oracle::rank_mod_p(m, 2) == 0);
  CHECK_THROWS_AS(one_relator_hnn_split(parse_presentation("< a, b | a, b >")),
                  PreconditionError);
}

TEST_CASE("one_relator_hnn_split handles nonzero exponent sums") {
  auto p = parse_presentation("< a, b | a^2 b^-3 >");
  auto s = one_relator_hnn_split(p);
  CHECK(s.kind != HnnSplitting::Kind::not_found);
  CHECK(s.basis_change.verify());
  CHECK(s.relator == s.basis_change(p.relators[0]));
  CHECK(s.relator.exponent_sum(s.stable) == 0);
}

TEST_CASE("property: parse and print round trip") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_presentation(1 + trial % 3, trial % 4, 9, rng);
    CHECK(parse_presentation(format_presentation(p)) == p);
    for (auto const& r : p.relators) {
      CHECK_FALSE(r.empty());
      CHECK(cyclic_reduce(r).core == r);
    }
    CHECK(p.deficiency() == static_cast<long long>(p.rank())
                                - static_cast<long long>(p.relators.size()));
  }
}

TEST_CASE("property: tietze_simplify preserves homology and deficiency") {
  std::mt19937_64 rng(22);
  int eliminated = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t gens = 2 + trial % 3;
    auto p = random_presentation(gens, 1 + trial % 3, 7, rng);
    // Plant a defining relator for the last generator most of the time.
    if (trial % 4 != 0) {
      Word def = oracle::random_word(gens - 1, 4, rng);
      auto rels = p.relators;
      rels.push_back(def * Word::generator(gens - 1, -1));
      p = make_presentation(p.generators, rels);
    }
    auto r = tietze_simplify(p);
    CHECK(h1(r.presentation) == h1(p));
    CHECK(r.presentation.rank() <= p.rank());
    std::size_t drops = 0;
    for (auto const& m : r.trace) {
      if (m.kind == TietzeMove::Kind::drop_identity) {
        ++drops;
      } else {
        ++eliminated;
      }
    }
    CHECK(r.presentation.deficiency()
          == p.deficiency() + static_cast<long long>(drops));
    CHECK(tietze_simplify(p).presentation == r.presentation);
  }
  CHECK(eliminated > 50);
}

TEST_CASE("property: homology is invariant under relator conjugation and inversion") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_presentation(3, 2, 8, rng);
    std::vector<Word> rels;
    for (auto const& r : p.relators) {
      Word g = oracle::random_word(3, 4, rng);
      rels.push_back(trial % 2 ? (g * r * g.inverse()).inverse()
                               : g * r * g.inverse());
    }
    CHECK(h1(make_presentation(p.generators, rels)) == h1(p));
  }
}

TEST_CASE("property: splitting data reproduce the group's homology") {
  std::mt19937_64 rng(24);
  int split = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto p = random_presentation(2, 1, 12, rng);
    if (p.relators.size() != 1) {
      continue;
    }
    HnnSplitting s = one_relator_hnn_split(p);
    if (s.kind == HnnSplitting::Kind::not_found) {
      // Only when the relator lives in a single conjugate of the base.
      CHECK(s.top == 0);
      continue;
    }
    ++split;
    CHECK(s.basis_change.verify());
    // The Magnus relator over the vertex generators is a conjugate of the
    // relator or its inverse.
    Word back = s.magnus_relator.substitute(s.vertex_generators);
    CHECK(same_cyclic_word_up_to_inversion(cyclic_reduce(back).core,
                                           p.relators[0]));
    CHECK(h1(tietze_simplify(magnus_presentation(s)).presentation) == h1(p));
    if (!s.free_basis.empty()) {
      Endomorphism theta(Alphabet::standard(s.free_basis.size()), s.images);
      CHECK(h1(hnn_presentation(theta)) == h1(p));
    }
    // The kinds are exclusive and agree with the extreme occurrence counts.
    bool low = s.lowest_occurrences == 1;
    bool high = s.highest_occurrences == 1;
    switch (s.kind) {
      case HnnSplitting::Kind::ascending_equal:
        CHECK((low && high));
        break;
      case HnnSplitting::Kind::ascending_strict:
        CHECK(low != high);
        break;
      case HnnSplitting::Kind::both_proper:
        CHECK((!low && !high));
        break;
      default:
        break;
    }
  }
  CHECK(split > 60);
}

}  // TEST_SUITE
