#pragma once

// Words in finitely generated free groups.
//
// A letter is a non-zero integer: generator i (0-based) is the letter i + 1
// and its inverse is -(i + 1). A Word is always freely reduced; it does not
// carry its alphabet, which is held by whatever owns the word (a
// Presentation, an Endomorphism, ...). Generator names only matter for
// parsing and printing.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rankone {

using Letter = int;

constexpr Letter make_letter(std::size_t gen, int sign = 1) noexcept {
  return sign > 0 ? static_cast<Letter>(gen) + 1 : -static_cast<Letter>(gen) - 1;
}
constexpr std::size_t generator_of(Letter l) noexcept {
  return static_cast<std::size_t>(l > 0 ? l - 1 : -l - 1);
}
constexpr int sign_of(Letter l) noexcept { return l > 0 ? 1 : -1; }
constexpr Letter inverse_of(Letter l) noexcept { return -l; }

// Position of a letter in the total order x_0 < x_0^-1 < x_1 < x_1^-1 < ...
// used for shortlex comparisons, BFS traversals and every tie-break.
constexpr std::size_t letter_rank(Letter l) noexcept {
  return 2 * generator_of(l) + (l < 0 ? 1 : 0);
}
constexpr Letter letter_from_rank(std::size_t rank) noexcept {
  return make_letter(rank / 2, rank % 2 == 0 ? 1 : -1);
}

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> raw);
  explicit Word(std::vector<Letter> raw);

  static Word generator(std::size_t gen, int sign = 1) {
    return Word(std::vector<Letter>{make_letter(gen, sign)});
  }

  std::span<Letter const> letters() const noexcept { return letters_; }
  std::vector<Letter> const& vec() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const;
  Word pow(long long k) const;

  // One past the largest generator index used (0 for the identity).
  std::size_t generator_bound() const noexcept;

  // Image under the homomorphism sending generator i to images[i].
  Word substitute(std::span<Word const> images) const;

  // Signed number of occurrences of a generator.
  long long exponent_sum(std::size_t gen) const noexcept;
  // Unsigned number of occurrences of a generator.
  std::size_t occurrences(std::size_t gen) const noexcept;

  Word& operator*=(Word const& rhs);
  friend Word operator*(Word lhs, Word const& rhs) {
    lhs *= rhs;
    return lhs;
  }

  friend bool operator==(Word const&, Word const&) = default;
  // Shortlex order with letters ordered by letter_rank.
  friend std::strong_ordering operator<=>(Word const& a, Word const& b);

 private:
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(Word const& w) const noexcept;
};

// Free reduction with validation against a rank; throws PreconditionError on
// a zero letter or a generator index >= rank.
Word reduce(std::span<Letter const> raw, std::size_t rank);

// w = conjugator * core * conjugator^-1 with core cyclically reduced.
struct CyclicReduction {
  Word core;
  Word conjugator;
};
CyclicReduction cyclic_reduce(Word const& w);

// Rotation of a cyclically reduced word: letters [k, n) followed by [0, k).
Word rotate(Word const& w, std::size_t k);

// w = u^k with k maximal. Throws PreconditionError on the identity.
struct Root {
  Word u;
  long long k;
};
Root root(Word const& w);

// Finds g, d with y = g x^d g^-1 (d != 0). Throws PreconditionError when x is
// the identity. min_abs_d restricts the search to |d| >= min_abs_d.
struct ConjugatePower {
  Word g;
  long long d;
};
std::optional<ConjugatePower> is_conjugate_to_power(Word const& x,
                                                    Word const& y,
                                                    long long min_abs_d = 1);

// True when u and v are conjugate in the free group.
bool are_conjugate(Word const& u, Word const& v);

// True when u is conjugate to v or to v^-1 (equality of cyclic words up to
// inversion).
bool same_cyclic_word_up_to_inversion(Word const& u, Word const& v);

// Least representative (shortlex) of the cyclic word of w under rotation and,
// when with_inverse is set, inversion. w must be cyclically reduced.
Word canonical_cyclic_word(Word const& w, bool with_inverse);

// An ordered list of distinct generator names.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  // x0, x1, ... or a, b, c, ... for small ranks.
  static Alphabet standard(std::size_t rank);
  // prefix1, prefix2, ...
  static Alphabet numbered(std::string const& prefix, std::size_t rank);

  std::size_t rank() const noexcept { return names_.size(); }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string const& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index(std::string_view name) const;

  friend bool operator==(Alphabet const& a, Alphabet const& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

bool is_identifier(std::string_view s) noexcept;

// Word syntax: whitespace separated terms, each `ident` or `ident^k` with k a
// non-zero decimal integer; `e` alone is the identity.
std::string format_word(Word const& w, Alphabet const& alphabet);
Word parse_word(std::string_view text, Alphabet const& alphabet);

}  // namespace rankone
