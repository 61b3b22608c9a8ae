#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rankone/error.hpp"
#include "rankone/hnn.hpp"

using namespace rankone;

namespace {

Alphabet const ab{{"a", "b"}};

Word w2(char const* s) { return parse_word(s, ab); }

Endomorphism endo(char const* text) { return parse_endomorphism(text); }

}  // namespace

TEST_SUITE("hnn") {

TEST_CASE("make_endomorphism certifies injectivity") {
  CHECK_NOTHROW(make_endomorphism(ab, {w2("a^2"), w2("b")}));
  CHECK_NOTHROW(make_endomorphism(ab, {w2("a b"), w2("a")}));
  CHECK_THROWS_AS(make_endomorphism(ab, {w2("a"), w2("a^2")}),
                  PreconditionError);
  CHECK_THROWS_AS(make_endomorphism(ab, {w2("a b"), w2("a b")}),
                  PreconditionError);
}

TEST_CASE("is_surjective examples") {
  CHECK(is_surjective(make_endomorphism(ab, {w2("a b"), w2("a")})));
  CHECK_FALSE(is_surjective(make_endomorphism(ab, {w2("a^2"), w2("b")})));
  CHECK(is_surjective(make_endomorphism(ab, {w2("a"), w2("b")})));
}

TEST_CASE("parse_endomorphism reads one image per line") {
  auto t = endo("# comment\na -> a b\nb -> a\n");
  CHECK(t.alphabet() == ab);
  CHECK(t.images() == std::vector<Word>{w2("a b"), w2("a")});
  CHECK(parse_endomorphism(format_endomorphism(t)) == t);
  CHECK_THROWS_AS(endo("a -> b c\n"), ParseError);
  CHECK_THROWS_AS(endo("a => b\n"), ParseError);
  CHECK_THROWS_AS(endo("a -> a\na -> a\n"), ParseError);
}

TEST_CASE("hnn_presentation gives the DS and C families") {
  auto ds = hnn_presentation(endo("a1 -> a1^3\na2 -> a2^3\n"));
  CHECK(format_presentation(ds)
        == "< t, a1, a2 | t a1 t^-1 a1^-3, t a2 t^-1 a2^-3 >");
  auto c = hnn_presentation(endo("a1 -> a2\na2 -> a1^3\n"));
  CHECK(format_presentation(c)
        == "< t, a1, a2 | t a1 t^-1 a2^-1, t a2 t^-1 a1^-3 >");
  auto bs = hnn_presentation(endo("a -> a^5\n"));
  CHECK(format_presentation(bs) == "< t, a | t a t^-1 a^-5 >");
  CHECK(stable_letter_name(Alphabet{{"t", "a"}}) != "t");
}

TEST_CASE("cyclic_cover composes powers") {
  auto theta = make_endomorphism(ab, {w2("a^2"), w2("b")});
  CHECK(cyclic_cover(theta, 2).images() == std::vector<Word>{w2("a^4"), w2("b")});
  CHECK(cyclic_cover(theta, 1) == theta);
  auto c = endo("a1 -> a2\na2 -> a1^3\n");
  CHECK(cyclic_cover(c, 2) == endo("a1 -> a1^3\na2 -> a2^3\n"));
}

TEST_CASE("find_periodic_conjugacy examples") {
  auto w = find_periodic_conjugacy(make_endomorphism(ab, {w2("a^3"), w2("b^2")}));
  REQUIRE(w);
  CHECK(w->x == w2("a"));
  CHECK(w->g.empty());
  CHECK(w->d == 3);
  CHECK(w->i == 1);
  auto theta = make_endomorphism(ab, {w2("b a^2 b^-1"), w2("b")});
  auto v = find_periodic_conjugacy(theta);
  REQUIRE(v);
  CHECK(v->x == w2("a"));
  CHECK(v->d == 2);
  CHECK(v->i == 1);
  CHECK(verify(theta, *v));
  PeriodicSearch bounds;
  bounds.max_i = 6;
  bounds.max_len = 8;
  CHECK_FALSE(find_periodic_conjugacy(endo("a -> b\nb -> a b\n"), bounds));
}

TEST_CASE("normalize examples") {
  auto cube = make_endomorphism(ab, {w2("a^3"), w2("b a")});
  auto np = normalize(cube, PeriodicWitness{w2("a"), Word{}, 3, 1});
  CHECK(np.theta_prime == cube);
  CHECK(np.w == w2("a"));
  auto theta = make_endomorphism(ab, {w2("b a^2 b^-1"), w2("b")});
  auto n2 = normalize(theta, PeriodicWitness{w2("a"), w2("b"), 2, 1});
  CHECK(n2.theta_prime(w2("a")) == w2("a^2"));
  CHECK(n2.theta_prime(w2("b")) == w2("b"));
  auto swap = endo("a -> b\nb -> a^3\n");
  auto p = find_periodic_conjugacy(swap);
  REQUIRE(p);
  auto n3 = normalize(swap, *p);
  CHECK(n3.theta_prime(n3.w) == n3.w.pow(n3.d));
  CHECK_THROWS(normalize(theta, PeriodicWitness{w2("a"), Word{}, 2, 1}));
}

TEST_CASE("lemma_prim_check examples") {
  CHECK(lemma_prim_check(fold({w2("a^2"), w2("b")}, 2), w2("a"), 2));
  auto h = fold({w2("a^3"), w2("b"), w2("a b a^-1")}, 2);
  CHECK_FALSE(contains(h, w2("a")));
  CHECK_FALSE(contains(h, w2("a^2")));
  CHECK(lemma_prim_check(h, w2("a"), 3));
  CHECK_THROWS_AS(lemma_prim_check(h, w2("a b a^-1 b^-1"), 1), PreconditionError);
  CHECK_THROWS_AS(lemma_prim_check(h, w2("a"), 2), PreconditionError);
  CHECK_THROWS_AS(lemma_prim_check(fold({w2("a")}, 2), w2("a"), 2),
                  PreconditionError);
}

TEST_CASE("prove_primitive examples") {
  NormalizedPair np{make_endomorphism(ab, {w2("a^2"), w2("b^3")}), w2("a"), 2};
  auto cert = prove_primitive(np);
  CHECK(cert.chain.size() == 1);
  CHECK(verify(np, cert));
  NormalizedPair neg{make_endomorphism(ab, {w2("a^-2"), w2("b")}), w2("a"), -2};
  auto c2 = prove_primitive(neg);
  CHECK(c2.chain.size() == 1);
  CHECK(verify(neg, c2));
}

TEST_CASE("vsa_witness_strict on the doubling map") {
  auto theta = make_endomorphism(ab, {w2("a^2"), w2("b")});
  auto w = vsa_witness_strict(theta, PeriodicWitness{w2("a"), Word{}, 2, 1});
  CHECK(w.doubled);
  CHECK(w.p == 3);
  CHECK(w.rank >= 3);
  CHECK(oracle::shapiro_rank(w.cover, static_cast<long long>(w.p)) == w.rank);
  CHECK(w.golod_shafarevich.violated);
  CHECK(w.cover.verify());
}

TEST_CASE("vsa_witness_strict on a cubing map") {
  auto theta = make_endomorphism(ab, {w2("a^3"), w2("a b^2 a")});
  auto wit = find_periodic_conjugacy(theta);
  REQUIRE(wit);
  auto w = vsa_witness_strict(theta, *wit);
  CHECK(w.p == 2);
  CHECK(w.rank >= 3);
  CHECK(oracle::shapiro_rank(w.cover, 2) == w.rank);
  CHECK(golod_shafarevich_check(w.rewritten.presentation, 2).violated);
  CHECK_THROWS_AS(vsa_witness_strict(endo("a -> a^3\n"),
                                     PeriodicWitness{Word{1}, Word{}, 3, 1}),
                  PreconditionError);
}

TEST_CASE("property: HNN presentations have deficiency one") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t const r = 1 + trial % 3;
    std::vector<Word> images;
    for (std::size_t i = 0; i < r; ++i) {
      images.push_back(oracle::random_nonempty_word(r, 5, rng));
    }
    Endomorphism theta;
    try {
      theta = make_endomorphism(Alphabet::standard(r), images);
    } catch (PreconditionError const&) {
      CHECK(fold(images, r).rank() < r);
      continue;
    }
    CHECK(fold(images, r).rank() == r);
    auto p = hnn_presentation(theta);
    CHECK(p.deficiency() == 1);
    for (unsigned long long q : {2ull, 3ull, 5ull, 7ull}) {
      CHECK(h1_mod_p_rank(p, q) >= 1);
    }
  }
}

TEST_CASE("property: cyclic covers match rewriting at the cover") {
  for (char const* text : {"a1 -> a1^2\na2 -> a2^2\n", "a1 -> a2\na2 -> a1^3\n",
                           "a1 -> a2\na2 -> a1^2\n", "a -> b\nb -> a b\n"}) {
    auto theta = endo(text);
    auto p = hnn_presentation(theta);
    for (std::size_t i = 1; i <= 3; ++i) {
      std::vector<Word> gens{Word::generator(0).pow(static_cast<long long>(i))};
      for (std::size_t k = 1; k < p.rank(); ++k) {
        gens.push_back(Word::generator(k));
      }
      auto t = coset_enumerate(p, gens);
      REQUIRE(t.index == i);
      auto s = tietze_simplify(reidemeister_schreier(p, t).presentation);
      auto cover = tietze_simplify(hnn_presentation(cyclic_cover(theta, i)))
                       .presentation;
      CHECK(s.presentation.deficiency() == cover.deficiency());
      CHECK(h1(s.presentation) == h1(cover));
      for (unsigned long long q : {2ull, 3ull, 5ull}) {
        CHECK(h1_mod_p_rank(s.presentation, q) == h1_mod_p_rank(cover, q));
      }
    }
  }
}

TEST_CASE("property: periodic witnesses verify") {
  std::mt19937_64 rng(52);
  int found = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto alpha = oracle::random_automorphism(2, 4, rng);
    long long d = (trial % 3) + 2;
    auto theta = oracle::planted(alpha, trial % 2 ? d : -d);
    PeriodicSearch bounds;
    bounds.max_i = 2;
    bounds.max_len = 6;
    auto wit = find_periodic_conjugacy(theta, bounds);
    if (!wit) {
      continue;
    }
    ++found;
    CHECK(verify(theta, *wit));
    CHECK(root(wit->x).k == 1);
    Word lhs = theta.power(wit->i)(wit->x);
    CHECK(lhs == wit->g * wit->x.pow(wit->d) * wit->g.inverse());
    auto np = normalize(theta, *wit);
    CHECK(np.theta_prime(np.w) == np.w.pow(np.d));
  }
  CHECK(found > 10);
}

TEST_CASE("property: primitivity chains shrink and certify") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t const r = 2 + trial % 2;
    auto alpha = oracle::random_automorphism(r, 5, rng);
    long long d = std::vector<long long>{2, 3, 4, -2, -3}[trial % 5];
    auto theta = oracle::planted(alpha, d);
    NormalizedPair np{theta, alpha(Word::generator(0)), d};
    REQUIRE(np.theta_prime(np.w) == np.w.pow(d));
    auto cert = prove_primitive(np);
    CHECK(verify(np, cert));
    for (std::size_t k = 1; k < cert.chain.size(); ++k) {
      CHECK(cert.chain[k].rank < cert.chain[k - 1].rank);
      CHECK(cert.chain[k].rank >= 2);
    }
    CHECK(cert.terminal_trace.primitive);
    CHECK(replay(cert.terminal_trace));
    CHECK(cert.ambient_trace.primitive);
  }
}

TEST_CASE("property: strict witnesses violate Golod-Shafarevich") {
  for (char const* text : {"a -> a^2\nb -> b\n", "a -> a^3\nb -> a b^2 a\n",
                           "a -> a^-2\nb -> b a\n", "a -> b a^3 b^-1\nb -> b^2\n"}) {
    auto theta = endo(text);
    auto wit = find_periodic_conjugacy(theta);
    REQUIRE(wit);
    auto w = vsa_witness_strict(theta, *wit);
    CHECK(w.rank >= 3);
    CHECK(golod_shafarevich_check(w.rewritten.presentation, w.p).violated);
    CHECK(h1_mod_p_rank(w.rewritten.presentation, w.p) == w.rank);
    CHECK(oracle::shapiro_rank(w.cover, static_cast<long long>(w.p)) == w.rank);
  }
}

}  // TEST_SUITE
