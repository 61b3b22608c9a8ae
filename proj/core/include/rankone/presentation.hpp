#pragma once

// Finite presentations <X | R>: parsing, Tietze elimination, and the
// Magnus splitting of two-generator one-relator groups as HNN extensions.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rankone/whitehead.hpp"
#include "rankone/word.hpp"

namespace rankone {

struct Presentation {
  Alphabet generators;
  std::vector<Word> relators;

  std::size_t rank() const noexcept { return generators.rank(); }
  long long deficiency() const noexcept {
    return static_cast<long long>(generators.rank())
           - static_cast<long long>(relators.size());
  }

  friend bool operator==(Presentation const&, Presentation const&) = default;
};

// Cyclically reduces every relator and drops identity relators, appending a
// message to `warnings` (when given) for each one dropped.
Presentation make_presentation(Alphabet generators, std::vector<Word> relators,
                               std::vector<std::string>* warnings = nullptr);

// Grammar: '<' ident (',' ident)* '|' [word (',' word)*] '>'; '#' starts a
// comment running to the end of the line. Throws ParseError with the line and
// column of the offending token.
Presentation parse_presentation(std::string_view text,
                                std::vector<std::string>* warnings = nullptr);
std::string format_presentation(Presentation const& p);

// Signed count of the generator in each relator.
std::vector<long long> exponent_sum(Presentation const& p, std::size_t gen);
std::vector<long long> exponent_sum(Presentation const& p,
                                    std::string_view gen);

struct TietzeMove {
  enum class Kind { eliminate, drop_identity };
  Kind kind;
  std::size_t relator;    // index in the presentation before the move
  std::string generator;  // eliminated generator (eliminate only)
  std::string definition; // its value in the remaining generators
};

struct TietzeResult {
  Presentation presentation;
  std::vector<TietzeMove> trace;
  bool exhausted = false;  // the step budget ran out before a fixpoint
};

// Greedy elimination: repeatedly takes the shortest relator (ties by
// position) in which some generator occurs exactly once, solves it for the
// latest such generator, substitutes everywhere and drops the relator.
// Relators that become trivial are dropped as separate moves.
TietzeResult tietze_simplify(Presentation const& p, std::size_t budget = 1000);

std::string describe(TietzeMove const& move);

struct HnnSplitting {
  enum class Kind { ascending_strict, ascending_equal, both_proper, not_found };
  Kind kind = Kind::not_found;

  // Basis in which the splitting is read: new basis letter i is the word
  // basis_change.apply_inverse(x_i) in the original generators, and the
  // relator in the new basis is basis_change(r).
  Automorphism basis_change;
  std::size_t stable = 0;  // index of the stable letter t in the new basis
  Word relator;            // relator in the new basis

  // Magnus rewriting over a_k = t^(k + shift) a t^-(k + shift), 0 <= k <= top.
  long long shift = 0;
  std::size_t top = 0;
  Word magnus_relator;                    // over a_0 .. a_top
  std::vector<Word> vertex_generators;    // a_k in the original generators
  std::size_t lowest_occurrences = 0;     // occurrences of a_0
  std::size_t highest_occurrences = 0;    // occurrences of a_top

  // Ascending kinds only. The vertex group is free on `free_basis` (words in
  // the original generators); conjugation by t^stable_sign maps it into itself
  // as given by `images` (words over free_basis).
  int stable_sign = 1;
  std::vector<Word> free_basis;
  std::vector<Word> images;

  std::vector<std::string> trace;
};

std::string_view to_string(HnnSplitting::Kind kind) noexcept;

// Requires exactly two generators and one relator (PreconditionError
// otherwise). When no generator has zero exponent sum, a Euclidean sequence
// of Nielsen moves first produces one.
HnnSplitting one_relator_hnn_split(Presentation const& p);

}  // namespace rankone
