#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rankone/error.hpp"
#include "rankone/homology.hpp"

using namespace rankone;

namespace {

IntMatrix make(std::vector<std::vector<long>> const& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

oracle::Matrix to_oracle(IntMatrix const& m) {
  oracle::Matrix out(m.rows(), std::vector<mpz_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out[i][j] = m(i, j);
    }
  }
  return out;
}

// Checks the decomposition against the oracle: product, unimodularity,
// diagonal shape, divisibility and the determinantal divisors.
void check_smith(IntMatrix const& m) {
  auto s = smith_normal_form(m);
  CHECK(s.U * m * s.V == s.D);
  mpz_class du = oracle::cofactor_det(to_oracle(s.U));
  mpz_class dv = oracle::cofactor_det(to_oracle(s.V));
  CHECK(abs(du) == 1);
  CHECK(abs(dv) == 1);
  for (std::size_t i = 0; i < s.D.rows(); ++i) {
    for (std::size_t j = 0; j < s.D.cols(); ++j) {
      if (i != j) {
        CHECK(s.D(i, j) == 0);
      } else {
        CHECK(s.D(i, j) >= 0);
      }
    }
  }
  auto diag = smith_diagonal(s);
  for (std::size_t k = 1; k < diag.size(); ++k) {
    CHECK(diag[k] % diag[k - 1] == 0);
  }
  CHECK(diag == oracle::invariant_factors(to_oracle(m)));
}

Presentation fp(char const* s) { return parse_presentation(s); }

}  // namespace

TEST_SUITE("homology") {

TEST_CASE("relation_matrix records exponent sums") {
  CHECK(relation_matrix(fp("< t, a | t a t^-1 a^-2 >")) == make({{0, -1}}));
  CHECK(relation_matrix(fp("< t, a | t a t^-1 a >")) == make({{0, 2}}));
  auto f2 = relation_matrix(fp("< a, b | >"));
  CHECK(f2.rows() == 0);
  CHECK(f2.cols() == 2);
}

TEST_CASE("smith_normal_form examples") {
  auto s = smith_normal_form(make({{2, 0}, {0, 3}}));
  CHECK(s.D == make({{1, 0}, {0, 6}}));
  check_smith(make({{2, 0}, {0, 3}}));
  auto z = smith_normal_form(make({{0, 0}, {0, 0}}));
  CHECK(z.D == make({{0, 0}, {0, 0}}));
  CHECK(z.U == IntMatrix::identity(2));
  CHECK(z.V == IntMatrix::identity(2));
  auto u = smith_normal_form(make({{0, -1}}));
  CHECK(u.D == make({{1, 0}}));
  check_smith(make({{0, -1}}));
}

TEST_CASE("smith_normal_form handles large entries exactly") {
  IntMatrix m(2, 2);
  m(0, 0) = mpz_class("123456789012345678901234567890");
  m(0, 1) = mpz_class("987654321098765432109876543210");
  m(1, 0) = 7;
  m(1, 1) = 11;
  check_smith(m);
}

TEST_CASE("h1 examples") {
  auto klein = h1(fp("< t, a | t a t^-1 a >"));
  CHECK(klein.betti == 1);
  CHECK(klein.torsion == std::vector<mpz_class>{2});
  auto bs23 = h1(fp("< t, a | t a^2 t^-1 a^-3 >"));
  CHECK(bs23.betti == 1);
  CHECK(bs23.torsion.empty());
  auto bs24 = h1(fp("< t, a | t a^2 t^-1 a^-4 >"));
  CHECK(bs24.betti == 1);
  CHECK(bs24.torsion == std::vector<mpz_class>{2});
}

TEST_CASE("h1_mod_p_rank examples") {
  auto bs14 = fp("< t, a | t a t^-1 a^-4 >");
  CHECK(h1_mod_p_rank(bs14, 3) == 2);
  CHECK(h1_mod_p_rank(bs14, 2) == 1);
  for (unsigned long long p : {2ull, 3ull, 5ull, 97ull}) {
    CHECK(h1_mod_p_rank(fp("< a, b | >"), p) == 2);
  }
  CHECK_THROWS_AS(h1_mod_p_rank(bs14, 4), PreconditionError);
  CHECK_THROWS_AS(h1_mod_p_rank(bs14, 1), PreconditionError);
}

TEST_CASE("golod_shafarevich_check examples") {
  auto r = golod_shafarevich_report(1, 2, 3);
  CHECK(r.violated);
  CHECK(r.relator_count_pro_p == 2);
  CHECK_FALSE(golod_shafarevich_report(1, 2, 2).violated);
  CHECK(golod_shafarevich_report(2, 2, 2).violated);
  auto f2 = golod_shafarevich_check(fp("< a, b | >"), 2);
  CHECK(f2.d_p == 2);
  CHECK(f2.violated);
  CHECK_THROWS_AS(golod_shafarevich_check(fp("< a, b | a, b >"), 2),
                  PreconditionError);
}

TEST_CASE("default primes include torsion divisors") {
  AbelianInvariants inv;
  inv.betti = 1;
  inv.torsion = {mpz_class(202)};
  auto ps = default_primes(inv);
  CHECK(ps.front() == 2);
  CHECK(std::find(ps.begin(), ps.end(), 101ull) != ps.end());
  CHECK(std::is_sorted(ps.begin(), ps.end()));
  CHECK(prime_divisors(mpz_class(360)) == std::vector<unsigned long long>{2, 3, 5});
}

TEST_CASE("homology_report rows") {
  auto r = homology_report(fp("< t, a | t a t^-1 a^-4 >"), {2, 3});
  CHECK(r.deficiency == 1);
  REQUIRE(r.per_prime.size() == 2);
  CHECK(r.per_prime[1].d_p == 2);
  auto z5 = homology_report(fp("< a | a^5 >"), {5});
  REQUIRE(z5.per_prime.size() == 1);
  CHECK(z5.per_prime[0].d_p == 1);
  CHECK_FALSE(z5.per_prime[0].violated);
}

TEST_CASE("property: Smith form round trip on random matrices") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> entry(-9, 9);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = dim(rng);
    std::size_t cols = dim(rng);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        m(i, j) = trial % 5 == 0 && entry(rng) > 3 ? 0 : entry(rng);
      }
    }
    check_smith(m);
  }
}

TEST_CASE("property: determinant agrees with cofactor expansion") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + trial % 5;
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = entry(rng);
      }
    }
    CHECK(determinant(m) == oracle::cofactor_det(to_oracle(m)));
  }
}

TEST_CASE("property: mod-p ranks bound the Betti number") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Word> rels;
    for (int k = 0; k < 2; ++k) {
      rels.push_back(oracle::random_nonempty_word(3, 8, rng));
    }
    auto p = make_presentation(Alphabet::standard(3), rels);
    auto inv = h1(p);
    auto m = oracle::exponent_matrix(p);
    for (unsigned long long q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
      std::size_t d = h1_mod_p_rank(p, q);
      CHECK(d >= inv.betti);
      std::size_t divisible = 0;
      for (auto const& t : inv.torsion) {
        divisible += t % mpz_class(static_cast<unsigned long>(q)) == 0 ? 1 : 0;
      }
      CHECK(d == inv.betti + divisible);
      CHECK(d == p.rank() - oracle::rank_mod_p(m, static_cast<long long>(q)));
    }
    // Equality with the Betti number away from the torsion primes.
    CHECK(h1_mod_p_rank(p, 1000003) == inv.betti);
    CHECK(inv.betti + oracle::invariant_factors(to_oracle(relation_matrix(p))).size()
          == p.rank());
  }
}

TEST_CASE("property: Golod-Shafarevich uses exact comparison") {
  for (long long def = 1; def <= 3; ++def) {
    for (std::size_t d = 0; d <= 8; ++d) {
      auto r = golod_shafarevich_report(def, 2, d);
      long long dd = static_cast<long long>(d);
      CHECK(r.relator_count_pro_p == dd - def);
      CHECK(r.violated == (dd * dd > 4 * (dd - def)));
      if (def >= 2) {
        CHECK(r.violated);
      }
    }
  }
}

}  // TEST_SUITE
