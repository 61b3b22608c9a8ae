#pragma once

// First homology: relation matrices, Smith normal form over Z, ranks over
// F_p and the Golod-Shafarevich test.

#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "rankone/presentation.hpp"

namespace rankone {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  mpz_class const& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  friend bool operator==(IntMatrix const&, IntMatrix const&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

IntMatrix operator*(IntMatrix const& a, IntMatrix const& b);
// Exact determinant (Bareiss) of a square matrix.
mpz_class determinant(IntMatrix const& m);

// Entry (j, k) is the exponent sum of generator k in relator j.
IntMatrix relation_matrix(Presentation const& p);

// U * m * V = D with D diagonal (d_1 | d_2 | ..., all >= 0) and U, V
// unimodular.
struct SmithForm {
  IntMatrix D;
  IntMatrix U;
  IntMatrix V;
};
SmithForm smith_normal_form(IntMatrix const& m);
// The nonzero diagonal of D, in order.
std::vector<mpz_class> smith_diagonal(SmithForm const& s);

struct AbelianInvariants {
  std::size_t betti = 0;
  std::vector<mpz_class> torsion;  // each >= 2, each dividing the next

  friend bool operator==(AbelianInvariants const&,
                         AbelianInvariants const&) = default;
};

AbelianInvariants h1(Presentation const& p);

bool is_prime(unsigned long long n) noexcept;

// |X| - rank of the relation matrix over F_p. Throws PreconditionError when
// `prime` is not prime.
std::size_t h1_mod_p_rank(Presentation const& p, unsigned long long prime);

struct GolodShafarevichReport {
  unsigned long long p = 0;
  std::size_t d_p = 0;
  long long relator_count_pro_p = 0;  // d_p - deficiency
  bool violated = false;              // d_p^2 > 4 (d_p - deficiency)
};

// Throws PreconditionError when the deficiency is <= 0.
GolodShafarevichReport golod_shafarevich_check(Presentation const& p,
                                               unsigned long long prime);
GolodShafarevichReport golod_shafarevich_report(long long deficiency,
                                                unsigned long long prime,
                                                std::size_t d_p);

// Primes <= 97 together with the prime divisors of the torsion
// coefficients, sorted.
std::vector<unsigned long long> default_primes(AbelianInvariants const& inv);
std::vector<unsigned long long> prime_divisors(mpz_class n);

struct HomologyReport {
  long long deficiency = 0;
  AbelianInvariants invariants;
  std::vector<GolodShafarevichReport> per_prime;
};

// Golod-Shafarevich rows are filled only when the deficiency is >= 1.
HomologyReport homology_report(Presentation const& p,
                               std::vector<unsigned long long> const& primes);

}  // namespace rankone
