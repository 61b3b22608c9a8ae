#pragma once

// Ascending HNN extensions of free groups <t, F_r | t x t^-1 = theta(x)>.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankone/budget.hpp"
#include "rankone/homology.hpp"
#include "rankone/presentation.hpp"
#include "rankone/stallings.hpp"
#include "rankone/subgroup.hpp"
#include "rankone/whitehead.hpp"

namespace rankone {

// An injective endomorphism of F_r. Construction certifies injectivity:
// the folded graph of the images must have rank r.
class Endomorphism {
 public:
  Endomorphism() = default;
  // Throws PreconditionError when the map is not injective.
  Endomorphism(Alphabet alphabet, std::vector<Word> images);

  Alphabet const& alphabet() const noexcept { return alphabet_; }
  std::vector<Word> const& images() const noexcept { return images_; }
  std::size_t rank() const noexcept { return images_.size(); }
  Word operator()(Word const& w) const { return w.substitute(images_); }

  // this first, then next: next(this(x)).
  Endomorphism then(Endomorphism const& next) const;
  Endomorphism power(std::size_t i) const;

  friend bool operator==(Endomorphism const& a, Endomorphism const& b) {
    return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

Endomorphism make_endomorphism(Alphabet alphabet, std::vector<Word> images);

// `.endo` format: one line `x -> word` per basis letter; '#' comments.
Endomorphism parse_endomorphism(std::string_view text);
std::string format_endomorphism(Endomorphism const& theta);

bool is_surjective(Endomorphism const& theta);

// A name for the stable letter not clashing with the alphabet ("t" when
// free).
std::string stable_letter_name(Alphabet const& alphabet);

// <t, x_1..x_r | t x_i t^-1 theta(x_i)^-1>, with t first.
Presentation hnn_presentation(Endomorphism const& theta);

// theta^i.
Endomorphism cyclic_cover(Endomorphism const& theta, std::size_t i);

// theta^i(x) = g x^d g^-1 with x cyclically reduced and not a proper power.
struct PeriodicWitness {
  Word x;
  Word g;
  long long d = 0;
  std::size_t i = 0;
};

bool verify(Endomorphism const& theta, PeriodicWitness const& wit);

struct PeriodicSearch {
  std::size_t max_i = 4;
  std::size_t max_len = 10;
  long long min_abs_d = 2;
  Deadline deadline;
};

// First witness ordered by i, then by x in shortlex order; candidates x are
// the least representatives of cyclic words up to inversion that are not
// proper powers.
std::optional<PeriodicWitness> find_periodic_conjugacy(
    Endomorphism const& theta, PeriodicSearch const& bounds = {});

struct NormalizedPair {
  Endomorphism theta_prime;
  Word w;
  long long d = 0;
};

// theta' = iota_{g^-1} . theta^i, so theta'(x) = x^d.
NormalizedPair normalize(Endomorphism const& theta, PeriodicWitness const& wit);

// Primitivity of g^k in H, read in the free basis graph_basis(H). Throws
// PreconditionError (with distinct messages) when g is not primitive in the
// ambient group, when g^k is not in H, or when some g^j (0 < j < k) is.
bool lemma_prim_check(SubgroupGraph const& h, Word const& g, std::size_t k);

struct PrimitivityStage {
  std::size_t rank = 0;
  std::vector<Word> basis;  // free basis of this stage in the previous one
  std::vector<Word> theta;  // theta on this stage's basis
  Word w;                   // w in this stage's basis
};

// Power-membership data for H = theta(F_j) inside G: w^|d| in H is
// primitive in H provided no lower power lies in H.
struct LemmaLevel {
  std::size_t stage = 0;  // j; G is stage j + 1, or stage j when terminal
  std::vector<bool> lower_powers_in_h;  // w^j in H for 1 <= j < |d|
  bool power_primitive = false;
};

struct PrimitivityCertificate {
  std::vector<PrimitivityStage> chain;  // chain[0] is F itself
  long long d = 0;
  WhiteheadTrace terminal_trace;  // w primitive in the last stage
  std::vector<LemmaLevel> lemma;  // terminal level first, then back to 0
  WhiteheadTrace ambient_trace;   // w primitive in F itself
};

// Rank reduction: S = <theta(F), w>; when rank S = rank F the last stage is
// certified by Whitehead's algorithm and the power-membership checks,
// otherwise theta and w are rewritten over a basis of S and the step repeats.
// Throws CertificationError if any step fails.
PrimitivityCertificate prove_primitive(NormalizedPair const& np);
bool verify(NormalizedPair const& np, PrimitivityCertificate const& cert);

struct StrictWitnessOptions {
  std::vector<std::size_t> schedule{2, 3, 4, 6, 8, 12};
  std::size_t max_index = 12;
  std::size_t jobs = 1;
  Deadline deadline;
};

struct StrictWitness {
  NormalizedPair normalized;
  PrimitivityCertificate certificate;
  Automorphism basis_change;  // carries w to the first basis letter
  Endomorphism rebased;       // theta'' with theta''(x_0) = x_0^d
  bool doubled = false;       // theta'' was squared because d = 2
  long long d = 0;
  unsigned long long p = 0;
  Presentation presentation;  // hnn_presentation(rebased)
  CosetTable cover;
  RewrittenPresentation rewritten;
  std::size_t rank = 0;
  GolodShafarevichReport golod_shafarevich;
  std::vector<std::string> trace;
};

// Requires r >= 2 and a witness with |d| >= 2. Throws BudgetExhausted when
// the index schedule is used up without a subgroup of mod-p rank >= 3.
StrictWitness vsa_witness_strict(Endomorphism const& theta,
                                 PeriodicWitness const& wit,
                                 StrictWitnessOptions const& options = {});

}  // namespace rankone
