#pragma once

// Finite-index subgroups of finitely presented groups: coset enumeration,
// low-index search, Schreier transversals and Reidemeister-Schreier.

#include <compare>
#include <cstddef>
#include <vector>

#include "rankone/budget.hpp"
#include "rankone/presentation.hpp"

namespace rankone {

// A complete coset table. Cosets are 0-based internally (coset 0 is the
// subgroup) and numbered in BFS order, scanning letters by letter_rank.
struct CosetTable {
  Presentation parent;
  std::size_t index = 0;
  // action[r][c]: image of coset c under the letter of letter_rank r.
  std::vector<std::vector<std::size_t>> action;
  std::vector<Word> subgroup_generators;

  std::size_t act(std::size_t coset, Letter l) const {
    return action[letter_rank(l)][coset];
  }
  std::size_t act(std::size_t coset, Word const& w) const;

  // The table flattened row by row (coset, then letter_rank); this is the
  // key of the canonical subgroup order.
  std::vector<std::size_t> flat() const;

  // Coset 0 fixed by every subgroup generator, all relators trivial from
  // every coset, and each letter acting as a permutation.
  bool verify() const;
};

// Index first, then the flattened table.
std::strong_ordering canonical_compare(CosetTable const& a,
                                       CosetTable const& b);
bool same_subgroup_table(CosetTable const& a, CosetTable const& b);

// Renumbers the cosets in BFS order from coset 0.
CosetTable standardize(CosetTable t);

// Todd-Coxeter (HLT). Throws BudgetExhausted when more than max_cosets live
// cosets would be needed.
CosetTable coset_enumerate(Presentation const& p,
                           std::vector<Word> const& subgroup_generators,
                           std::size_t max_cosets = 100000,
                           Deadline const& deadline = {});

struct LowIndexOptions {
  std::size_t max_index = 1;
  std::vector<Word> must_contain;
  std::size_t jobs = 1;
  Deadline deadline;
};

// Conjugacy class representatives of the subgroups of index <= max_index
// whose table fixes coset 0 under every must_contain word. A class is
// represented by its table that is least in canonical order among the
// conjugates satisfying the constraint. Output in canonical order; the
// result does not depend on `jobs`.
std::vector<CosetTable> low_index_subgroups(Presentation const& p,
                                            LowIndexOptions const& options);

// Shortlex-least representative of each coset (prefix closed).
std::vector<Word> schreier_transversal(CosetTable const& t);

struct RewrittenPresentation {
  Presentation presentation;
  // origin[k]: s x (rep(s x))^-1 for the k-th generator, in the parent's
  // generators.
  std::vector<Word> origin;
  std::size_t dropped = 0;  // trivial generators s x (rep(s x))^-1 = e
  // Rewrite of s r s^-1 before cyclic reduction, with its (coset, relator).
  std::vector<Word> raw_relators;
  std::vector<std::pair<std::size_t, std::size_t>> sources;
};

// Generators are named <x>_<c> for the parent generator x and the 1-based
// coset c of s. Relators are s r s^-1 for each coset (outer) and relator.
RewrittenPresentation reidemeister_schreier(Presentation const& p,
                                            CosetTable const& t);

}  // namespace rankone
