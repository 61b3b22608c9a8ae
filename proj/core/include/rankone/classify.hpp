#pragma once

// Verdict pipelines for deficiency-one and one-relator groups, built on the
// VSA search and the free-by-cyclic witness.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankone/budget.hpp"
#include "rankone/hnn.hpp"
#include "rankone/homology.hpp"
#include "rankone/subgroup.hpp"

namespace rankone {

// A finite-index subgroup whose first homology mod p has rank >= 3.
struct VsaWitness {
  CosetTable subgroup;
  unsigned long long p = 0;
  std::size_t rank = 0;
  RewrittenPresentation rewritten;
};

// Recomputes the rewritten presentation and its mod-p rank from the stored
// coset table alone.
bool verify(VsaWitness const& w);

struct VsaSearchOptions {
  std::size_t max_index = 12;
  std::vector<unsigned long long> primes;  // empty: default_primes(h1(p))
  std::size_t jobs = 1;
  Deadline deadline;
};

struct VsaSearchResult {
  std::optional<VsaWitness> witness;
  std::size_t searched_index = 0;   // every subgroup of index <= this checked
  std::size_t subgroups_examined = 0;
  std::size_t best_rank = 0;        // largest mod-p rank seen
  bool budget_exhausted = false;
  std::vector<unsigned long long> primes;
};

// Walks conjugacy classes of subgroups in canonical order (index, then
// table), by rounds of increasing index bound, and returns the first with
// mod-p rank >= 3 at some listed prime (primes tried in increasing order).
// Requires deficiency >= 1. A wall-clock expiry ends the search with
// budget_exhausted set.
VsaSearchResult vsa_search_report(Presentation const& p,
                                  VsaSearchOptions const& options = {});
std::optional<VsaWitness> vsa_search(Presentation const& p,
                                     std::size_t max_index,
                                     std::vector<unsigned long long> primes = {},
                                     std::size_t jobs = 1);

struct FbyzWitness {
  std::size_t d = 0;  // order of the abelianized automorphism over F_p
  Presentation presentation;  // hnn_presentation(alpha)
  VsaWitness witness;         // at the index-d cover <t^d, F>
};

// alpha must be an automorphism of F_r with r >= 2. The rank at the cover is
// checked to be exactly r + 1 (CertificationError otherwise).
FbyzWitness fbyz_witness(Endomorphism const& alpha, unsigned long long p);

// Order of the abelianization of alpha in GL_r(F_p).
std::size_t abelianized_order(Endomorphism const& alpha, unsigned long long p);

struct Certificate {
  std::string kind;
  std::string statement;
  nlohmann::json data;
};

struct Verdict {
  enum class Label {
    cyclic,
    soluble_bs,
    vsa_witnessed,
    h2b_infinite,
    gbs_exception,
    conjectural_kernel_branch,
    inconclusive
  };
  Label label = Label::inconclusive;
  std::vector<Certificate> certificates;
  std::vector<std::string> citations;
  nlohmann::json budgets;
  std::vector<std::pair<std::string, double>> timings;  // milliseconds
};

std::string_view to_string(Verdict::Label label) noexcept;

struct ClassifyBudgets {
  std::size_t max_index = 12;
  std::vector<unsigned long long> primes;  // empty: default primes
  std::size_t periodic_max_i = 4;
  std::size_t periodic_max_len = 10;
  long long budget_ms = 60000;
  std::size_t jobs = 1;
};

nlohmann::json to_json(ClassifyBudgets const& b);

// BS(1, n) by syntax: the relator is t a^e t^-1 a^-n with e = +-1 up to
// cyclic permutation, inversion and renaming or inverting the generators.
// Returns n.
std::optional<long long> match_soluble_bs(Presentation const& p);

Verdict classify_deficiency_one(Presentation const& p,
                                ClassifyBudgets const& budgets = {});
Verdict classify_one_relator(Presentation const& p,
                             ClassifyBudgets const& budgets = {});

// One relator: classify_one_relator; deficiency 1: classify_deficiency_one;
// deficiency >= 2: the VSA search; otherwise inconclusive.
Verdict classify_presentation(Presentation const& p,
                              ClassifyBudgets const& budgets = {});

struct BoundedGeneration {
  enum class Answer { bounded, not_bounded, unknown };
  Answer answer = Answer::unknown;
  std::string reason;
};

std::string_view to_string(BoundedGeneration::Answer a) noexcept;

BoundedGeneration bounded_generation_verdict(Verdict const& v);

}  // namespace rankone
