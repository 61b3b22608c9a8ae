#pragma once

// Automorphisms of free groups and Whitehead's algorithm for primitivity.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rankone/word.hpp"

namespace rankone {

// A homomorphism F(domain_rank) -> F(codomain_rank) given by the images of
// the basis letters.
struct FreeMap {
  std::size_t codomain_rank = 0;
  std::vector<Word> images;

  std::size_t domain_rank() const noexcept { return images.size(); }
  Word operator()(Word const& w) const { return w.substitute(images); }

  static FreeMap identity(std::size_t rank);
  friend bool operator==(FreeMap const&, FreeMap const&) = default;
};

// first then second: (second . first)(x) = second(first(x)).
FreeMap compose(FreeMap const& first, FreeMap const& second);

// A Whitehead automorphism of the second kind, (A, a): the multiplier letter
// a is fixed and every other letter y is sent to
//   [a^-1 if y^-1 in A] y [a if y in A].
// The cut set A is a bitmask over letter_rank; it contains a and not a^-1.
struct WhiteheadMove {
  Letter multiplier = 0;
  std::uint64_t cut = 0;

  friend bool operator==(WhiteheadMove const&, WhiteheadMove const&) = default;
};

bool in_cut(std::uint64_t cut, Letter l) noexcept;

// The move as a free map of the given rank.
FreeMap whitehead_map(WhiteheadMove const& move, std::size_t rank);
// (A, a)^-1 = (A - a + a^-1, a^-1).
WhiteheadMove inverse_move(WhiteheadMove const& move, std::size_t rank);

// Image of a cyclic word (cyclically reduced result).
Word apply_cyclic(WhiteheadMove const& move, Word const& cyclic_word,
                  std::size_t rank);

// Change in cyclic length of a cyclically reduced word under the move, read
// off the Whitehead graph: |A.A'| - deg(a).
long long whitehead_length_change(WhiteheadMove const& move,
                                  Word const& cyclic_word, std::size_t rank);

// An automorphism stored together with its inverse.
class Automorphism {
 public:
  explicit Automorphism(std::size_t rank = 0);
  Automorphism(FreeMap forward, FreeMap backward);

  static Automorphism whitehead(WhiteheadMove const& move, std::size_t rank);
  // x -> g x g^-1
  static Automorphism inner(Word const& g, std::size_t rank);
  static Automorphism swap(std::size_t i, std::size_t j, std::size_t rank);
  static Automorphism invert(std::size_t i, std::size_t rank);
  // x_i -> x_i x_j^sign (i != j): an elementary Nielsen move.
  static Automorphism nielsen(std::size_t i, std::size_t j, int sign,
                              std::size_t rank);

  std::size_t rank() const noexcept { return forward_.domain_rank(); }
  FreeMap const& forward() const noexcept { return forward_; }
  FreeMap const& backward() const noexcept { return backward_; }
  Word operator()(Word const& w) const { return forward_(w); }
  Word apply_inverse(Word const& w) const { return backward_(w); }
  Automorphism inverse() const { return Automorphism(backward_, forward_); }

  // this first, then next.
  Automorphism then(Automorphism const& next) const;

  // Checks forward . backward = identity on the basis.
  bool verify() const;

 private:
  FreeMap forward_;
  FreeMap backward_;
};

struct WhiteheadStep {
  WhiteheadMove move;
  Word result;  // cyclic word after the move
};

// Certificate produced by is_primitive. When primitive, replaying the steps
// from `start` ends at a single letter; otherwise `minimal` is a cyclic word
// no Whitehead move shortens.
struct WhiteheadTrace {
  std::size_t rank = 0;
  Word start;  // cyclically reduced core of the input
  std::vector<WhiteheadStep> steps;
  Word minimal;
  bool primitive = false;
};

struct PrimitivityResult {
  bool answer;
  WhiteheadTrace certificate;
};

// Whitehead's algorithm. Throws PreconditionError on the identity or when
// rank > 32.
PrimitivityResult is_primitive(Word const& w, std::size_t rank);

// Re-applies every step of a trace and checks the recorded results and the
// final claim (length one when primitive, no shortening move otherwise).
bool replay(WhiteheadTrace const& trace);

// The least length-reducing move for a cyclically reduced word, if any.
// Multipliers are scanned in letter_rank order; for each multiplier a
// max-flow computation decides whether a shortening cut exists, and for
// rank <= 8 the numerically least shortening cut mask is returned.
std::optional<WhiteheadMove> least_reducing_move(Word const& cyclic_word,
                                                 std::size_t rank);

// An automorphism psi with psi(w) = x_0, built from a primitivity trace of w.
// Throws PreconditionError when the trace does not certify primitivity.
Automorphism automorphism_to_first_letter(Word const& w,
                                          WhiteheadTrace const& trace);

}  // namespace rankone
