#include "rankone/classify.hpp"

#include <algorithm>
#include <chrono>

#include "rankone/error.hpp"
#include "rankone/gbs.hpp"
#include "rankone/report.hpp"
#include "rankone/whitehead.hpp"

namespace rankone {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<unsigned long long> resolve_primes(
    Presentation const& p, std::vector<unsigned long long> primes) {
  if (primes.empty()) {
    return default_primes(h1(p));
  }
  for (auto q : primes) {
    if (!is_prime(q)) {
      throw PreconditionError(std::to_string(q) + " is not prime");
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

std::vector<std::size_t> index_rounds(std::size_t max_index) {
  std::vector<std::size_t> rounds;
  for (std::size_t b : {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64}) {
    if (b >= max_index) {
      break;
    }
    rounds.push_back(b);
  }
  rounds.push_back(max_index);
  return rounds;
}

// d_p from the Smith form: betti plus the torsion coefficients divisible by p.
std::size_t rank_mod(AbelianInvariants const& inv, unsigned long long q) {
  std::size_t r = inv.betti;
  for (auto const& t : inv.torsion) {
    if (mpz_divisible_ui_p(t.get_mpz_t(), q)) {
      ++r;
    }
  }
  return r;
}

}  // namespace

bool verify(VsaWitness const& w) {
  if (!w.subgroup.verify() || w.rank < 3 || !is_prime(w.p)) {
    return false;
  }
  auto rw = reidemeister_schreier(w.subgroup.parent, w.subgroup);
  if (!(rw.presentation == w.rewritten.presentation)) {
    return false;
  }
  return h1_mod_p_rank(rw.presentation, w.p) == w.rank;
}

VsaSearchResult vsa_search_report(Presentation const& p,
                                  VsaSearchOptions const& options) {
  if (p.deficiency() < 1) {
    throw PreconditionError("vsa_search needs deficiency >= 1, got "
                            + std::to_string(p.deficiency()));
  }
  if (options.max_index == 0) {
    throw PreconditionError("vsa_search: max_index must be >= 1");
  }
  VsaSearchResult out;
  out.primes = resolve_primes(p, options.primes);
  std::size_t searched = 0;
  try {
    for (std::size_t bound : index_rounds(options.max_index)) {
      LowIndexOptions lio;
      lio.max_index = bound;
      lio.jobs = options.jobs;
      lio.deadline = options.deadline;
      auto tables = low_index_subgroups(p, lio);
      for (auto& t : tables) {
        if (t.index <= searched) {
          continue;
        }
        options.deadline.check("vsa search");
        ++out.subgroups_examined;
        auto rw = reidemeister_schreier(p, t);
        AbelianInvariants inv = h1(rw.presentation);
        for (auto q : out.primes) {
          std::size_t r = rank_mod(inv, q);
          out.best_rank = std::max(out.best_rank, r);
          if (r >= 3) {
            if (h1_mod_p_rank(rw.presentation, q) != r) {
              throw CertificationError("mod-p rank disagrees with the Smith "
                                       "form");
            }
            out.witness = VsaWitness{std::move(t), q, r, std::move(rw)};
            out.searched_index = searched;
            return out;
          }
        }
      }
      searched = bound;
    }
  } catch (BudgetExhausted const&) {
    out.budget_exhausted = true;
  }
  out.searched_index = searched;
  return out;
}

std::optional<VsaWitness> vsa_search(Presentation const& p,
                                     std::size_t max_index,
                                     std::vector<unsigned long long> primes,
                                     std::size_t jobs) {
  VsaSearchOptions o;
  o.max_index = max_index;
  o.primes = std::move(primes);
  o.jobs = jobs;
  return vsa_search_report(p, o).witness;
}

std::size_t abelianized_order(Endomorphism const& alpha,
                              unsigned long long p) {
  if (!is_prime(p)) {
    throw PreconditionError(std::to_string(p) + " is not prime");
  }
  std::size_t const r = alpha.rank();
  using Mat = std::vector<std::vector<unsigned long long>>;
  Mat m(r, std::vector<unsigned long long>(r));
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < r; ++i) {
      long long e = alpha.images()[j].exponent_sum(i) % static_cast<long long>(p);
      m[i][j] = static_cast<unsigned long long>(e < 0 ? e + static_cast<long long>(p) : e);
    }
  }
  auto mul = [&](Mat const& a, Mat const& b) {
    Mat c(r, std::vector<unsigned long long>(r, 0));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t j = 0; j < r; ++j) {
          c[i][j] = (c[i][j] + a[i][k] * b[k][j]) % p;
        }
      }
    }
    return c;
  };
  Mat id(r, std::vector<unsigned long long>(r, 0));
  for (std::size_t i = 0; i < r; ++i) {
    id[i][i] = 1;
  }
  Mat power = m;
  for (std::size_t d = 1; d <= 1'000'000; ++d) {
    if (power == id) {
      return d;
    }
    power = mul(power, m);
  }
  throw BudgetExhausted("abelianized automorphism has order above 10^6");
}

FbyzWitness fbyz_witness(Endomorphism const& alpha, unsigned long long p) {
  std::size_t const r = alpha.rank();
  if (r < 2) {
    throw PreconditionError("fbyz_witness needs rank >= 2");
  }
  if (!is_surjective(alpha)) {
    throw PreconditionError("fbyz_witness needs an automorphism");
  }
  FbyzWitness out;
  out.d = abelianized_order(alpha, p);
  out.presentation = hnn_presentation(alpha);
  std::vector<Word> gens{Word::generator(0).pow(static_cast<long long>(out.d))};
  for (std::size_t i = 1; i <= r; ++i) {
    gens.push_back(Word::generator(i));
  }
  CosetTable t = coset_enumerate(out.presentation, gens);
  if (t.index != out.d) {
    throw CertificationError("cyclic cover has index "
                             + std::to_string(t.index) + ", expected "
                             + std::to_string(out.d));
  }
  auto rw = reidemeister_schreier(out.presentation, t);
  std::size_t rank = h1_mod_p_rank(rw.presentation, p);
  if (rank != r + 1) {
    throw CertificationError("cyclic cover has mod-p rank "
                             + std::to_string(rank) + ", expected "
                             + std::to_string(r + 1));
  }
  out.witness = VsaWitness{std::move(t), p, rank, std::move(rw)};
  return out;
}

std::string_view to_string(Verdict::Label label) noexcept {
  switch (label) {
    case Verdict::Label::cyclic:
      return "cyclic";
    case Verdict::Label::soluble_bs:
      return "soluble-BS(1,n)";
    case Verdict::Label::vsa_witnessed:
      return "VSA-witnessed";
    case Verdict::Label::h2b_infinite:
      return "H2b-infinite-by-theorem";
    case Verdict::Label::gbs_exception:
      return "GBS-exception";
    case Verdict::Label::conjectural_kernel_branch:
      return "conjectural-kernel-branch";
    case Verdict::Label::inconclusive:
      return "inconclusive";
  }
  return "?";
}

nlohmann::json to_json(ClassifyBudgets const& b) {
  return {{"max_index", b.max_index},
          {"primes", b.primes.empty() ? json("default") : json(b.primes)},
          {"periodic_max_i", b.periodic_max_i},
          {"periodic_max_len", b.periodic_max_len},
          {"budget_ms", b.budget_ms},
          {"jobs", b.jobs}};
}

std::optional<long long> match_soluble_bs(Presentation const& p) {
  auto bs = match_baumslag_solitar(p);
  if (!bs) {
    return std::nullopt;
  }
  auto [m, n] = *bs;
  if (m == 1 || m == -1) {
    return n * m;
  }
  if (n == 1 || n == -1) {
    return m * n;
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kGbsCheckIndex = 8;

struct Run {
  Verdict v;
  Clock::time_point t0 = Clock::now();
  Deadline deadline;
  ClassifyBudgets budgets;

  explicit Run(ClassifyBudgets const& b) : budgets(b) {
    v.budgets = to_json(b);
    deadline = Deadline::after(std::chrono::milliseconds(b.budget_ms));
  }

  void add(std::string kind, std::string statement, json data = json::object()) {
    v.certificates.push_back({std::move(kind), std::move(statement),
                              std::move(data)});
  }
  void cite(std::string tag) {
    if (std::find(v.citations.begin(), v.citations.end(), tag)
        == v.citations.end()) {
      v.citations.push_back(std::move(tag));
    }
  }
  Verdict finish(Verdict::Label label) {
    v.label = label;
    v.timings.emplace_back("total", ms_since(t0));
    return std::move(v);
  }
};

VsaSearchResult search(Run& run, Presentation const& p,
                       std::size_t max_index = 0) {
  auto t0 = Clock::now();
  VsaSearchOptions o;
  o.max_index = max_index == 0 ? run.budgets.max_index
                               : std::min(max_index, run.budgets.max_index);
  o.primes = run.budgets.primes;
  o.jobs = run.budgets.jobs;
  o.deadline = run.deadline;
  auto r = vsa_search_report(p, o);
  run.v.timings.emplace_back("vsa_search", ms_since(t0));
  return r;
}

void add_witness(Run& run, VsaWitness const& w) {
  auto gs = golod_shafarevich_check(w.rewritten.presentation, w.p);
  if (!gs.violated) {
    throw CertificationError("VSA witness does not violate Golod-Shafarevich");
  }
  run.add("vsa-witness",
          "index " + std::to_string(w.subgroup.index)
              + " subgroup with H1 mod " + std::to_string(w.p) + " of rank "
              + std::to_string(w.rank),
          to_json(w));
  run.cite("golod-shafarevich");
}

void add_search_summary(Run& run, VsaSearchResult const& r) {
  run.add("vsa-search",
          "no subgroup of index <= " + std::to_string(r.searched_index)
              + " has H1 mod p of rank >= 3 (largest seen "
              + std::to_string(r.best_rank) + ")"
              + (r.budget_exhausted ? "; wall-clock budget exhausted" : ""),
          to_json(r));
}

std::optional<Verdict> try_search(Run& run, Presentation const& p) {
  auto r = search(run, p);
  if (r.witness) {
    add_witness(run, *r.witness);
    return run.finish(Verdict::Label::vsa_witnessed);
  }
  add_search_summary(run, r);
  return std::nullopt;
}

std::optional<Verdict> syntactic(Run& run, Presentation const& p) {
  if (p.rank() == 1) {
    run.add("syntactic", "one generator: the group is cyclic",
            to_json(p));
    return run.finish(Verdict::Label::cyclic);
  }
  if (p.rank() == 2 && p.relators.size() == 1) {
    Word const& rel = p.relators[0];
    if (!rel.empty()) {
      auto prim = is_primitive(rel, 2);
      if (prim.answer) {
        run.add("primitive-relator",
                "the relator is primitive: the group is infinite cyclic",
                to_json(prim.certificate));
        return run.finish(Verdict::Label::cyclic);
      }
    }
    if (auto n = match_soluble_bs(p)) {
      run.add("syntactic",
              "relator has the form t a t^-1 a^-n: BS(1," + std::to_string(*n)
                  + ")",
              {{"n", *n}});
      run.cite("deficiency-one-trichotomy");
      return run.finish(Verdict::Label::soluble_bs);
    }
  }
  return std::nullopt;
}

Verdict general(Run& run, Presentation const& p) {
  if (auto v = try_search(run, p)) {
    return *v;
  }
  return run.finish(Verdict::Label::inconclusive);
}

Verdict deficiency_one(Run& run, Presentation const& p) {
  if (auto v = syntactic(run, p)) {
    return *v;
  }
  if (p.rank() != 2 || p.relators.size() != 1) {
    return general(run, p);
  }
  auto t0 = Clock::now();
  HnnSplitting split = one_relator_hnn_split(p);
  run.v.timings.emplace_back("split", ms_since(t0));
  json sj = to_json(split, p);
  std::size_t const r = split.free_basis.size();
  switch (split.kind) {
    case HnnSplitting::Kind::both_proper: {
      run.add("hnn-splitting",
              "both edge groups are proper in the vertex group", sj);
      if (auto v = try_search(run, p)) {
        return *v;
      }
      run.cite("hnn-both-proper-edge-groups");
      return run.finish(Verdict::Label::h2b_infinite);
    }
    case HnnSplitting::Kind::ascending_equal: {
      run.add("hnn-splitting", "ascending with equal edge groups: F_"
                                   + std::to_string(r) + " by cyclic", sj);
      std::vector<Word> images = split.images;
      Endomorphism alpha(Alphabet::standard(r), images);
      if (!is_surjective(alpha)) {
        throw CertificationError("ascending-equal splitting is not an "
                                 "automorphism");
      }
      if (r == 1) {
        long long n = images[0].exponent_sum(0);
        run.add("syntactic", "F_1 by cyclic: BS(1," + std::to_string(n) + ")",
                {{"n", n}});
        run.cite("deficiency-one-trichotomy");
        return run.finish(Verdict::Label::soluble_bs);
      }
      auto primes = resolve_primes(p, run.budgets.primes);
      auto fw = fbyz_witness(alpha, primes.front());
      run.add("free-by-cyclic", "cover of index " + std::to_string(fw.d)
                                    + " has H1 mod "
                                    + std::to_string(primes.front())
                                    + " of rank " + std::to_string(r + 1),
              to_json(fw));
      run.cite("free-by-cyclic-cover");
      run.cite("golod-shafarevich");
      return run.finish(Verdict::Label::vsa_witnessed);
    }
    case HnnSplitting::Kind::ascending_strict: {
      run.add("hnn-splitting", "strictly ascending over F_"
                                   + std::to_string(r), sj);
      Endomorphism theta(Alphabet::standard(r), split.images);
      if (r == 1) {
        long long n = split.images[0].exponent_sum(0);
        if (split.images[0] == Word::generator(0).pow(n)) {
          run.add("syntactic", "a -> a^" + std::to_string(n) + ": BS(1,"
                                   + std::to_string(n) + ")",
                  {{"n", n}});
          run.cite("deficiency-one-trichotomy");
          return run.finish(Verdict::Label::soluble_bs);
        }
        return general(run, p);
      }
      PeriodicSearch ps;
      ps.max_i = run.budgets.periodic_max_i;
      ps.max_len = run.budgets.periodic_max_len;
      ps.deadline = run.deadline;
      std::optional<PeriodicWitness> wit;
      try {
        auto tp = Clock::now();
        wit = find_periodic_conjugacy(theta, ps);
        run.v.timings.emplace_back("periodic", ms_since(tp));
      } catch (BudgetExhausted const&) {
        run.add("periodic-search", "wall-clock budget exhausted");
      }
      if (wit) {
        StrictWitnessOptions so;
        so.max_index = run.budgets.max_index;
        so.jobs = run.budgets.jobs;
        so.deadline = run.deadline;
        try {
          auto ts = Clock::now();
          StrictWitness sw = vsa_witness_strict(theta, *wit, so);
          run.v.timings.emplace_back("strict_witness", ms_since(ts));
          run.add("periodic-class",
                  "theta^" + std::to_string(wit->i)
                      + "(x) is conjugate to x^" + std::to_string(wit->d),
                  to_json(theta, *wit));
          run.add("strict-witness",
                  "index " + std::to_string(sw.cover.index)
                      + " subgroup of the rebased extension with H1 mod "
                      + std::to_string(sw.p) + " of rank "
                      + std::to_string(sw.rank),
                  to_json(sw));
          run.cite("periodic-class-primitive-cover");
          run.cite("golod-shafarevich");
          return run.finish(Verdict::Label::vsa_witnessed);
        } catch (BudgetExhausted const& e) {
          run.add("strict-witness", e.what());
        }
      } else {
        run.add("periodic-search", "no periodic conjugacy class within i <= "
                                       + std::to_string(ps.max_i)
                                       + ", |x| <= "
                                       + std::to_string(ps.max_len));
      }
      return general(run, p);
    }
    case HnnSplitting::Kind::not_found:
      break;
  }
  return general(run, p);
}

}  // namespace

Verdict classify_deficiency_one(Presentation const& p,
                                ClassifyBudgets const& budgets) {
  if (p.deficiency() != 1) {
    throw PreconditionError("classify_deficiency_one needs deficiency 1, got "
                            + std::to_string(p.deficiency()));
  }
  Run run(budgets);
  return deficiency_one(run, p);
}

Verdict classify_one_relator(Presentation const& p,
                             ClassifyBudgets const& budgets) {
  if (p.relators.size() != 1) {
    throw PreconditionError("classify_one_relator needs exactly one relator, "
                            "got " + std::to_string(p.relators.size()));
  }
  Run run(budgets);
  run.cite("one-relator-trichotomy");
  if (p.rank() == 1) {
    return *syntactic(run, p);
  }
  if (p.rank() >= 3) {
    return general(run, p);
  }
  if (auto v = syntactic(run, p)) {
    return *v;
  }
  auto t0 = Clock::now();
  auto circle = gbs_fingerprint(p);
  run.v.timings.emplace_back("gbs_fingerprint", ms_since(t0));
  if (circle) {
    GbsGraph g = circle_graph(*circle);
    GbsReduction red = reduce_gbs(g);
    GbsVerdict gv = classify_gbs(red.graph);
    auto reduced_circle = circle_criterion(red.graph);
    if (gv.kind == GbsVerdict::Kind::infinite_dim_h2b && reduced_circle
        && reduced_circle->coprime) {
      std::string labels;
      for (auto const& [l, r] : circle->labels) {
        labels += (labels.empty() ? "" : ", ") + std::string("(")
                  + std::to_string(l) + "," + std::to_string(r) + ")";
      }
      run.add("gbs-fingerprint",
              "presentation of the GBS circle with labels " + labels,
              {{"circle", to_json(*circle)},
               {"reduced", to_json(red.graph)},
               {"reduction_trace", red.trace}});
      run.add("gbs-classification", gv.reason, to_json(gv));
      QuotientRelation q = quotient_relation(*reduced_circle);
      run.add("quotient-relation", q.conclusion, to_json(q));
      // Consistency check only: the circle criterion excludes a witness.
      auto r = search(run, p, kGbsCheckIndex);
      if (r.witness) {
        throw CertificationError("coprime GBS circle has a VSA witness");
      }
      add_search_summary(run, r);
      run.cite("gbs-classification");
      run.cite("gbs-circle-coprime");
      return run.finish(Verdict::Label::gbs_exception);
    }
  }
  return deficiency_one(run, p);
}

Verdict classify_presentation(Presentation const& p,
                              ClassifyBudgets const& budgets) {
  if (p.relators.size() == 1) {
    return classify_one_relator(p, budgets);
  }
  if (p.deficiency() == 1) {
    return classify_deficiency_one(p, budgets);
  }
  Run run(budgets);
  if (p.deficiency() >= 2) {
    run.cite("deficiency-two");
    return general(run, p);
  }
  run.add("scope", "deficiency " + std::to_string(p.deficiency())
                       + ": no pipeline applies");
  return run.finish(Verdict::Label::inconclusive);
}

std::string_view to_string(BoundedGeneration::Answer a) noexcept {
  switch (a) {
    case BoundedGeneration::Answer::bounded:
      return "boundedly generated";
    case BoundedGeneration::Answer::not_bounded:
      return "NOT boundedly generated";
    case BoundedGeneration::Answer::unknown:
      return "unknown";
  }
  return "?";
}

BoundedGeneration bounded_generation_verdict(Verdict const& v) {
  using A = BoundedGeneration::Answer;
  switch (v.label) {
    case Verdict::Label::cyclic:
      return {A::bounded, "cyclic groups are boundedly generated"};
    case Verdict::Label::soluble_bs:
      return {A::bounded, "BS(1,n) is boundedly generated"};
    case Verdict::Label::vsa_witnessed:
      return {A::not_bounded,
              "a finite-index subgroup has a pro-p completion that is not "
              "p-adic analytic"};
    case Verdict::Label::h2b_infinite:
    case Verdict::Label::gbs_exception:
      return {A::not_bounded,
              "second bounded cohomology is infinite dimensional"};
    case Verdict::Label::conjectural_kernel_branch:
    case Verdict::Label::inconclusive:
      return {A::unknown, "no rank-1 phenomenon certified"};
  }
  return {A::unknown, ""};
}

}  // namespace rankone
