#include "rankone/homology.hpp"

#include <algorithm>
#include <set>

#include "rankone/error.hpp"

namespace rankone {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
  if (a.cols() != b.rows()) {
    throw PreconditionError("matrix product: shape mismatch");
  }
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols(); ++j) {
        c(i, j) += a(i, k) * b(k, j);
      }
    }
  }
  return c;
}

mpz_class determinant(IntMatrix const& input) {
  if (input.rows() != input.cols()) {
    throw PreconditionError("determinant of a non-square matrix");
  }
  std::size_t const n = input.rows();
  if (n == 0) {
    return 1;
  }
  IntMatrix m = input;
  mpz_class sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) {
        ++swap;
      }
      if (swap == n) {
        return 0;
      }
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(k, j), m(swap, j));
      }
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix relation_matrix(Presentation const& p) {
  IntMatrix m(p.relators.size(), p.rank());
  for (std::size_t j = 0; j < p.relators.size(); ++j) {
    for (Letter l : p.relators[j].letters()) {
      m(j, generator_of(l)) += sign_of(l);
    }
  }
  return m;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::swap(m(a, j), m(b, j));
  }
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::swap(m(i, a), m(i, b));
  }
}

// row_dst -= q * row_src
void row_axpy(IntMatrix& m, std::size_t dst, std::size_t src,
              mpz_class const& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (m(src, j) != 0) {
      m(dst, j) -= q * m(src, j);
    }
  }
}

// col_dst -= q * col_src
void col_axpy(IntMatrix& m, std::size_t dst, std::size_t src,
              mpz_class const& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, src) != 0) {
      m(i, dst) -= q * m(i, src);
    }
  }
}

}  // namespace

SmithForm smith_normal_form(IntMatrix const& input) {
  SmithForm s{input, IntMatrix::identity(input.rows()),
              IntMatrix::identity(input.cols())};
  IntMatrix& a = s.D;
  std::size_t const rows = a.rows();
  std::size_t const cols = a.cols();
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Pivot: least nonzero absolute value in the trailing block.
      std::size_t pi = rows;
      std::size_t pj = cols;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a(i, j) != 0
              && (pi == rows || abs(a(i, j)) < abs(a(pi, pj)))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == rows) {
        return s;
      }
      if (pi != t) {
        swap_rows(a, pi, t);
        swap_rows(s.U, pi, t);
      }
      if (pj != t) {
        swap_cols(a, pj, t);
        swap_cols(s.V, pj, t);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) {
          continue;
        }
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        row_axpy(a, i, t, q);
        row_axpy(s.U, i, t, q);
        clean = clean && a(i, t) == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) {
          continue;
        }
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        col_axpy(a, j, t, q);
        col_axpy(s.V, j, t, q);
        clean = clean && a(t, j) == 0;
      }
      if (!clean) {
        continue;
      }
      // Divisibility: fold a row with an indivisible entry into row t.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
        }
      }
      if (bad != rows) {
        row_axpy(a, t, bad, -1);
        row_axpy(s.U, t, bad, -1);
        continue;
      }
      if (a(t, t) < 0) {
        for (std::size_t j = 0; j < cols; ++j) {
          a(t, j) = -a(t, j);
        }
        for (std::size_t j = 0; j < rows; ++j) {
          s.U(t, j) = -s.U(t, j);
        }
      }
      break;
    }
  }
  return s;
}

std::vector<mpz_class> smith_diagonal(SmithForm const& s) {
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < std::min(s.D.rows(), s.D.cols()); ++i) {
    if (s.D(i, i) != 0) {
      out.push_back(s.D(i, i));
    }
  }
  return out;
}

AbelianInvariants h1(Presentation const& p) {
  auto diag = smith_diagonal(smith_normal_form(relation_matrix(p)));
  AbelianInvariants inv;
  inv.betti = p.rank() - diag.size();
  for (auto const& d : diag) {
    if (d > 1) {
      inv.torsion.push_back(d);
    }
  }
  return inv;
}

bool is_prime(unsigned long long n) noexcept {
  if (n < 2) {
    return false;
  }
  for (unsigned long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

std::size_t h1_mod_p_rank(Presentation const& p, unsigned long long prime) {
  if (!is_prime(prime)) {
    throw PreconditionError("h1_mod_p_rank: " + std::to_string(prime)
                            + " is not prime");
  }
  IntMatrix m = relation_matrix(p);
  mpz_class const mp(std::to_string(prime));
  std::vector<std::vector<unsigned long long>> a(
      m.rows(), std::vector<unsigned long long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), m(i, j).get_mpz_t(), mp.get_mpz_t());
      a[i][j] = r.get_ui();
    }
  }
  __extension__ typedef unsigned __int128 wide;
  auto mulmod = [prime](unsigned long long x, unsigned long long y) {
    return static_cast<unsigned long long>(static_cast<wide>(x) * y % prime);
  };
  auto powmod = [&](unsigned long long b, unsigned long long e) {
    unsigned long long r = 1;
    while (e > 0) {
      if (e & 1u) {
        r = mulmod(r, b);
      }
      b = mulmod(b, b);
      e >>= 1u;
    }
    return r;
  };
  std::size_t rank = 0;
  for (std::size_t j = 0; j < m.cols() && rank < m.rows(); ++j) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][j] == 0) {
      ++piv;
    }
    if (piv == m.rows()) {
      continue;
    }
    std::swap(a[piv], a[rank]);
    unsigned long long inv = powmod(a[rank][j], prime - 2);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (a[i][j] == 0) {
        continue;
      }
      unsigned long long f = mulmod(a[i][j], inv);
      for (std::size_t k = j; k < m.cols(); ++k) {
        a[i][k] = (a[i][k] + prime - mulmod(f, a[rank][k])) % prime;
      }
    }
    ++rank;
  }
  return p.rank() - rank;
}

GolodShafarevichReport golod_shafarevich_report(long long deficiency,
                                                unsigned long long prime,
                                                std::size_t d_p) {
  GolodShafarevichReport r;
  r.p = prime;
  r.d_p = d_p;
  auto d = static_cast<long long>(d_p);
  r.relator_count_pro_p = d - deficiency;
  r.violated = d * d > 4 * r.relator_count_pro_p;
  return r;
}

GolodShafarevichReport golod_shafarevich_check(Presentation const& p,
                                               unsigned long long prime) {
  if (p.deficiency() <= 0) {
    throw PreconditionError("golod_shafarevich_check needs deficiency >= 1");
  }
  return golod_shafarevich_report(p.deficiency(), prime,
                                  h1_mod_p_rank(p, prime));
}

std::vector<unsigned long long> prime_divisors(mpz_class n) {
  std::vector<unsigned long long> out;
  n = abs(n);
  if (n < 2) {
    return out;
  }
  for (unsigned long d = 2; d < 1'000'000 && n > 1; ++d) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      out.push_back(d);
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
        n /= d;
      }
    }
  }
  if (n > 1 && n.fits_ulong_p() && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
    out.push_back(n.get_ui());
  }
  return out;
}

std::vector<unsigned long long> default_primes(AbelianInvariants const& inv) {
  std::set<unsigned long long> primes;
  for (unsigned long long q = 2; q <= 97; ++q) {
    if (is_prime(q)) {
      primes.insert(q);
    }
  }
  for (auto const& t : inv.torsion) {
    for (auto q : prime_divisors(t)) {
      primes.insert(q);
    }
  }
  return {primes.begin(), primes.end()};
}

HomologyReport homology_report(Presentation const& p,
                               std::vector<unsigned long long> const& primes) {
  HomologyReport r;
  r.deficiency = p.deficiency();
  r.invariants = h1(p);
  for (auto q : primes) {
    std::size_t d_p = h1_mod_p_rank(p, q);
    auto row = golod_shafarevich_report(r.deficiency, q, d_p);
    if (r.deficiency <= 0) {
      row.violated = false;
    }
    r.per_prime.push_back(row);
  }
  return r;
}

}  // namespace rankone
