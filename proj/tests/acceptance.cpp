// Acceptance checks: one PASS/FAIL line per criterion, with detail lines.
// Exits nonzero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rankone/classify.hpp"
#include "rankone/gbs.hpp"
#include "rankone/hnn.hpp"
#include "rankone/homology.hpp"
#include "rankone/report.hpp"
#include "rankone/stallings.hpp"
#include "rankone/subgroup.hpp"
#include "rankone/whitehead.hpp"

using namespace rankone;

namespace {

// Pinned limits.
constexpr double kWallLimitSeconds = 60.0;
constexpr std::size_t kCoprimeIndex = 12;
constexpr std::size_t kNonCoprimeIndex = 8;
constexpr std::size_t kRandomFreeSubgroups = 50;
constexpr std::size_t kFreeSubgroupMaxIndex = 6;
constexpr std::size_t kDeficiencyOneSamples = 20;
constexpr std::size_t kDeficiencyOneMaxIndex = 5;
constexpr std::size_t kRandomAutomorphisms = 20;
constexpr std::size_t kMaxNielsenMoves = 5;
constexpr std::size_t kPlantedInstances = 100;
constexpr std::size_t kLemmaInstances = 100;
constexpr std::size_t kGbsSearchIndex = 8;
constexpr std::size_t kMembershipPairs = 200;
constexpr std::size_t kSmithMatrices = 200;
constexpr int kEntryBound = 9;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, std::string const& what) {
    if (!ok) {
      pass = false;
      detail << "    failed: " << what << "\n";
    }
  }
};

Presentation fp(char const* s) { return parse_presentation(s); }

Presentation bs(long long m, long long n) {
  Word const t = Word::generator(0);
  Word const a = Word::generator(1);
  return make_presentation(Alphabet{{"t", "a"}},
                           {t * a.pow(m) * t.inverse() * a.pow(-n)});
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

// Rank of H1 mod p from invariant factors computed by determinantal divisors
// of the exponent matrix, independent of the library's Smith form.
std::size_t independent_rank(Presentation const& p, unsigned long long q) {
  auto m = oracle::exponent_matrix(p);
  oracle::Matrix om(m.size(), std::vector<mpz_class>(p.rank()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < p.rank(); ++j) {
      om[i][j] = static_cast<long>(m[i][j]);
    }
  }
  auto factors = oracle::invariant_factors(om);
  std::size_t rank = p.rank() - factors.size();
  for (auto const& f : factors) {
    rank += f % static_cast<unsigned long>(q) == 0 ? 1 : 0;
  }
  return rank;
}

// Canonical cyclic words up to inversion, as a sorted multiset.
std::vector<std::vector<Letter>> relator_multiset(std::vector<Word> const& rels) {
  std::vector<std::vector<Letter>> out;
  for (auto const& r : rels) {
    std::vector<Letter> best;
    for (auto const& v : {r.vec(), r.inverse().vec()}) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        std::vector<Letter> rot(v.begin() + static_cast<long>(k), v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + static_cast<long>(k));
        if (best.empty() || rot < best) {
          best = rot;
        }
      }
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Some bijection of generators carries the relator multiset of p onto q's.
bool equal_up_to_renaming(Presentation const& p, Presentation const& q) {
  if (p.rank() != q.rank() || p.relators.size() != q.relators.size()) {
    return false;
  }
  auto target = relator_multiset(q.relators);
  std::vector<std::size_t> perm(p.rank());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<Word> images;
    for (std::size_t g = 0; g < p.rank(); ++g) {
      images.push_back(Word::generator(perm[g]));
    }
    std::vector<Word> renamed;
    for (auto const& r : p.relators) {
      renamed.push_back(r.substitute(images));
    }
    if (relator_multiset(renamed) == target) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Presentation cyclic_presentation(std::size_t r, long long d) {
  std::vector<std::string> names;
  std::vector<Word> images;
  for (std::size_t i = 0; i < r; ++i) {
    names.push_back("a" + std::to_string(i + 1));
    images.push_back(i + 1 < r ? Word::generator(i + 1)
                               : Word::generator(0).pow(d));
  }
  return hnn_presentation(make_endomorphism(Alphabet(names), images));
}

Presentation diagonal_presentation(std::size_t r, long long d) {
  std::vector<std::string> names;
  std::vector<Word> images;
  for (std::size_t i = 0; i < r; ++i) {
    names.push_back("a" + std::to_string(i + 1));
    images.push_back(Word::generator(i).pow(d));
  }
  return hnn_presentation(make_endomorphism(Alphabet(names), images));
}

std::vector<std::vector<std::size_t>> flats(std::vector<CosetTable> const& ts) {
  std::vector<std::vector<std::size_t>> out;
  for (auto const& t : ts) {
    out.push_back(t.flat());
  }
  return out;
}

struct Cli {
  int code = -1;
  std::string out;
};

Cli run_cli(std::string const& args) {
  Cli r;
  std::string cmd = std::string(RANKONE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    r.out.append(buf, n);
  }
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json without_run_fields(nlohmann::json j) {
  j.erase("config");
  for (auto& r : j["results"]) {
    r.erase("timings");
    if (r.contains("verdict")) {
      r["verdict"].erase("timings");
      r["verdict"].erase("budgets");
    }
  }
  return j;
}

void criterion1(Outcome& o) {
  for (auto [m, n] : {std::pair{2, 3}, {3, 4}, {2, 5}}) {
    auto r = vsa_search_report(bs(m, n), {kCoprimeIndex, {}, 1, {}});
    o.detail << "    BS(" << m << "," << n << "): "
             << (r.witness ? "witness" : "no witness") << " up to index "
             << r.searched_index << ", largest mod-p rank " << r.best_rank
             << "\n";
    o.require(r.witness.has_value(), "expected a witness for coprime BS("
                                         + std::to_string(m) + ","
                                         + std::to_string(n) + ")");
    if (r.witness) {
      o.require(independent_rank(r.witness->rewritten.presentation,
                                 r.witness->p)
                    == r.witness->rank,
                "witness rank mismatch");
    }
  }
  for (auto [m, n] : {std::pair{2, 4}, {2, 6}, {3, 6}}) {
    auto r = vsa_search_report(bs(m, n), {kNonCoprimeIndex, {}, 1, {}});
    o.detail << "    BS(" << m << "," << n << "): ";
    if (r.witness) {
      auto const& w = *r.witness;
      std::size_t check = independent_rank(w.rewritten.presentation, w.p);
      o.detail << "witness at index " << w.subgroup.index << ", p = " << w.p
               << ", rank " << w.rank << " (independent rank " << check
               << ")\n";
    } else {
      o.detail << "no witness up to index " << r.searched_index << "\n";
    }
    o.require(!r.witness, "expected no witness for BS(" + std::to_string(m)
                              + "," + std::to_string(n) + ")");
  }
}

void criterion2(Outcome& o) {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> deg(1, kFreeSubgroupMaxIndex);
  for (std::size_t k = 0; k < kRandomFreeSubgroups; ++k) {
    std::size_t const r = 2 + k % 2;
    auto t = oracle::table_from_action(
        oracle::random_transitive_action(r, deg(rng), rng));
    auto rw = reidemeister_schreier(t.parent, t);
    o.require(rw.presentation.rank() == t.index * (r - 1) + 1,
              "generator count at index " + std::to_string(t.index));
    o.require(rw.presentation.relators.empty(), "relators present");
  }
  o.detail << "    " << kRandomFreeSubgroups << " subgroups of F2 and F3\n";
}

void criterion3(Outcome& o) {
  std::mt19937_64 rng(1003);
  std::size_t done = 0;
  std::map<std::size_t, std::size_t> by_index;
  while (done < kDeficiencyOneSamples) {
    std::size_t const gens = 2 + done % 2;
    std::vector<Word> rels;
    for (std::size_t k = 0; k + 1 < gens; ++k) {
      rels.push_back(oracle::random_nonempty_word(gens, 8, rng));
    }
    auto p = make_presentation(Alphabet::standard(gens), rels);
    if (p.deficiency() != 1) {
      continue;
    }
    LowIndexOptions opts;
    opts.max_index = kDeficiencyOneMaxIndex;
    auto tables = low_index_subgroups(p, opts);
    std::uniform_int_distribution<std::size_t> pick(0, tables.size() - 1);
    auto const& t = tables[pick(rng)];
    auto rw = reidemeister_schreier(p, t);
    std::size_t const i = t.index;
    o.require(rw.presentation.rank() == i * gens - (i - 1),
              "generator count at index " + std::to_string(i));
    o.require(rw.presentation.relators.size() == i * p.relators.size(),
              "relator count at index " + std::to_string(i));
    ++by_index[i];
    ++done;
  }
  o.detail << "    indices drawn:";
  for (auto [i, c] : by_index) {
    o.detail << " " << i << "x" << c;
  }
  o.detail << "\n";
}

void criterion4(Outcome& o) {
  Alphabet const ab{{"a", "b"}};
  auto fib = fbyz_witness(
      make_endomorphism(ab, {Word::generator(1),
                             Word::generator(0) * Word::generator(1)}),
      2);
  o.detail << "    a -> b, b -> a b at p = 2: d = " << fib.d << ", rank "
           << fib.witness.rank << "\n";
  o.require(fib.d == 3, "d for the Fibonacci map");
  o.require(fib.witness.rank == 3, "rank for the Fibonacci map");
  o.require(oracle::shapiro_rank(fib.witness.subgroup, 2) == 3,
            "oracle rank for the Fibonacci map");
  std::mt19937_64 rng(1004);
  for (std::size_t k = 0; k < kRandomAutomorphisms; ++k) {
    std::size_t const r = 2 + k % 2;
    auto alpha = oracle::random_automorphism(r, kMaxNielsenMoves, rng);
    Endomorphism theta(Alphabet::standard(r), alpha.forward().images);
    unsigned long long const p = k % 3 == 0 ? 3 : 2;
    auto w = fbyz_witness(theta, p);
    o.require(w.witness.rank == r + 1, "rank r + 1");
    o.require(oracle::shapiro_rank(w.witness.subgroup, static_cast<long long>(p))
                  == r + 1,
              "oracle rank r + 1");
  }
}

void criterion5(Outcome& o) {
  for (auto [r, d] : {std::pair<std::size_t, long long>{2, 3}, {3, 2}}) {
    auto c = cyclic_presentation(r, d);
    auto ds = diagonal_presentation(r, d);
    std::vector<Word> gens{Word::generator(0).pow(static_cast<long long>(r))};
    for (std::size_t k = 1; k < c.rank(); ++k) {
      gens.push_back(Word::generator(k));
    }
    auto t = coset_enumerate(c, gens);
    o.require(t.index == r, "cover index");
    auto s = tietze_simplify(reidemeister_schreier(c, t).presentation)
                 .presentation;
    o.detail << "    C(" << r << "," << d << ") cover: "
             << format_presentation(s) << "\n";
    o.require(equal_up_to_renaming(s, ds), "relators differ from DS form");
    o.require(h1(s) == h1(ds), "H1 differs from DS");
  }
}

void criterion6(Outcome& o) {
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<int> mag(2, 4);
  std::size_t longest = 0;
  for (std::size_t k = 0; k < kPlantedInstances; ++k) {
    std::size_t const r = 2 + k % 2;
    auto alpha = oracle::random_automorphism(r, kMaxNielsenMoves, rng);
    long long d = mag(rng) * (rng() % 2 ? 1 : -1);
    auto theta = oracle::planted(alpha, d);
    NormalizedPair np{theta, alpha(Word::generator(0)), d};
    try {
      auto cert = prove_primitive(np);
      o.require(verify(np, cert), "certificate does not replay");
      longest = std::max(longest, cert.chain.size());
    } catch (std::exception const& e) {
      o.require(false, std::string("prove_primitive threw: ") + e.what());
    }
  }
  o.detail << "    longest rank chain " << longest << "\n";
}

void criterion7(Outcome& o) {
  std::mt19937_64 rng(1007);
  std::size_t checked = 0;
  std::size_t largest_k = 0;
  while (checked < kLemmaInstances) {
    std::size_t const rank = 2 + checked % 2;
    Word g = oracle::random_automorphism(rank, 4, rng)(Word{1});
    std::uniform_int_distribution<std::size_t> deg(2, 6);
    auto action = oracle::random_transitive_action(rank, deg(rng), rng);
    std::vector<oracle::Perm> invs;
    for (auto const& p : action) {
      invs.push_back(oracle::inverse(p));
    }
    std::size_t k = 1;
    for (std::size_t x = oracle::act(action, invs, 0, g.letters()); x != 0;
         x = oracle::act(action, invs, x, g.letters())) {
      ++k;
    }
    if (k < 2) {
      continue;
    }
    auto h = fold(oracle::schreier_generators(action), rank);
    for (std::size_t j = 1; j < k; ++j) {
      o.require(!contains(h, g.pow(static_cast<long long>(j))),
                "a lower power lies in H");
    }
    auto basis = graph_basis(h);
    Word gk = g.pow(static_cast<long long>(k));
    Word e = express_in_basis(h, basis, gk);
    o.require(e.substitute(basis) == gk, "basis expression");
    auto prim = is_primitive(e, basis.size());
    o.require(prim.answer && replay(prim.certificate),
              "g^k not primitive in the basis of H");
    largest_k = std::max(largest_k, k);
    ++checked;
  }
  o.detail << "    largest power k = " << largest_k << "\n";
}

void criterion8(Outcome& o) {
  for (char const* text : {"a -> a^2\nb -> b\n", "a -> a^3\nb -> a b^2 a\n"}) {
    auto theta = parse_endomorphism(text);
    auto wit = find_periodic_conjugacy(theta);
    o.require(wit.has_value(), "no periodic class");
    if (!wit) {
      continue;
    }
    auto w = vsa_witness_strict(theta, *wit);
    auto gs = golod_shafarevich_check(w.rewritten.presentation, w.p);
    o.detail << "    index " << w.cover.index << ", p = " << w.p << ", rank "
             << w.rank << ", GS violated " << (gs.violated ? "yes" : "no")
             << "\n";
    o.require(w.rank >= 3, "rank below 3");
    o.require(gs.violated, "Golod-Shafarevich not violated");
    o.require(oracle::shapiro_rank(w.cover, static_cast<long long>(w.p))
                  == w.rank,
              "oracle rank");
  }
}

void criterion9(Outcome& o) {
  auto c = make_circle({{2, 3}, {2, 3}});
  auto red = two_generator_reduction(c);
  Alphabet const ta{{"t", "a"}};
  Word expect = cyclic_reduce(parse_word(
                                  "a^2 t a^-3 t^-1 a^2 t a^-3 t^-1 a^2 t "
                                  "a^-3 t^-1 a^-2",
                                  ta))
                    .core;
  o.require(red.presentation.relators.size() == 1, "one relator");
  o.require(red.presentation.relators.size() == 1
                && same_cyclic_word_up_to_inversion(red.presentation.relators[0],
                                                    expect),
            "relator differs");
  auto q = quotient_relation(c);
  std::string rel = format_word(q.relation, q.alphabet);
  o.detail << "    relation " << rel << ", " << q.conclusion << "\n";
  o.require(rel == "t a^9 t^-1 a^-4", "quotient relation");
  o.require(q.R == 9 && q.L == 4, "R and L");
  auto s = vsa_search_report(red.presentation, {kGbsSearchIndex, {}, 1, {}});
  o.detail << "    search up to index " << s.searched_index << ": "
           << s.subgroups_examined << " subgroups, largest rank "
           << s.best_rank << "\n";
  o.require(!s.witness, "witness found");
  o.require(s.searched_index == kGbsSearchIndex && !s.budget_exhausted,
            "search not exhausted");
  o.require(s.best_rank <= 2, "rank above 2");
}

void criterion10(Outcome& o) {
  char const* const circle
      = "< t, a | a^2 t a^-3 t^-1 a^2 t a^-3 t^-1 a^2 t a^-3 t^-1 a^-2 >";
  struct Row {
    std::string name;
    Presentation p;
    Verdict::Label label;
  };
  std::vector<Row> rows{
      {"<a | a^5>", fp("< a | a^5 >"), Verdict::Label::cyclic},
      {"BS(1,2)", bs(1, 2), Verdict::Label::soluble_bs},
      {"Z^2", fp("< a, b | a b a^-1 b^-1 >"), Verdict::Label::soluble_bs},
      {"BS(2,3)", bs(2, 3), Verdict::Label::vsa_witnessed},
      {"GBS circle (2,3),(2,3)", fp(circle), Verdict::Label::gbs_exception},
  };
  for (auto const& row : rows) {
    auto v = classify_one_relator(row.p);
    auto bg = bounded_generation_verdict(v);
    o.detail << "    " << row.name << ": " << to_string(v.label) << ", "
             << to_string(bg.answer) << "\n";
    o.require(v.label == row.label, row.name + " expected "
                                        + std::string(to_string(row.label)));
    bool const expect_bg = row.label == Verdict::Label::cyclic
                           || row.label == Verdict::Label::soluble_bs;
    o.require((bg.answer == BoundedGeneration::Answer::bounded) == expect_bg,
              row.name + " bounded generation");
  }
}

void criterion11(Outcome& o) {
  std::mt19937_64 rng(1011);
  std::size_t members = 0;
  for (std::size_t k = 0; k < kMembershipPairs; ++k) {
    std::size_t const rank = 2 + k % 2;
    std::vector<Word> gens;
    if (k % 2 == 0) {
      std::uniform_int_distribution<std::size_t> deg(1, 4);
      gens = oracle::schreier_generators(
          oracle::random_transitive_action(rank, deg(rng), rng));
    } else {
      std::vector<Word> seed;
      for (int j = 0; j < 2; ++j) {
        seed.push_back(oracle::random_nonempty_word(rank, 4, rng));
      }
      gens = graph_basis(fold(seed, rank));
    }
    auto h = fold(gens, rank);
    Word w = oracle::random_word(rank, 5, rng);
    if (k % 4 == 1 && !gens.empty()) {
      // Bias toward members so both answers are exercised.
      w = gens[rng() % gens.size()];
      if (w.length() > 6) {
        w = oracle::random_word(rank, 5, rng);
      }
    }
    bool brute = oracle::brute_force_member(gens, w, w.length());
    members += brute ? 1 : 0;
    o.require(contains(h, w) == brute, "membership disagrees");
  }
  o.detail << "    " << members << " of " << kMembershipPairs
           << " words are members\n";
  std::uniform_int_distribution<int> entry(-kEntryBound, kEntryBound);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (std::size_t k = 0; k < kSmithMatrices; ++k) {
    IntMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        m(i, j) = entry(rng);
      }
    }
    auto s = smith_normal_form(m);
    o.require(s.U * m * s.V == s.D, "U m V != D");
    o.require(abs(oracle::cofactor_det(to_oracle(s.U))) == 1, "U not unimodular");
    o.require(abs(oracle::cofactor_det(to_oracle(s.V))) == 1, "V not unimodular");
    o.require(smith_diagonal(s) == oracle::invariant_factors(to_oracle(m)),
              "invariant factors");
  }
}

void criterion12(Outcome& o) {
  for (auto const& p : {bs(2, 4), bs(2, 3),
                        fp("< t, a | a^2 t a^-3 t^-1 a^2 t a^-3 t^-1 a^2 t "
                           "a^-3 t^-1 a^-2 >"),
                        fp("< a, b, c | a b a^-1 b^-1 c^2 >")}) {
    LowIndexOptions a;
    a.max_index = 7;
    LowIndexOptions b = a;
    b.jobs = 4;
    o.require(flats(low_index_subgroups(p, a)) == flats(low_index_subgroups(p, b)),
              "low-index tables differ");
    VsaSearchOptions va{8, {}, 1, {}};
    VsaSearchOptions vb{8, {}, 4, {}};
    o.require(to_json(vsa_search_report(p, va)) == to_json(vsa_search_report(p, vb)),
              "search reports differ");
    ClassifyBudgets ca;
    ca.max_index = 8;
    ClassifyBudgets cb = ca;
    cb.jobs = 4;
    auto ja = to_json(classify_presentation(p, ca), false);
    auto jb = to_json(classify_presentation(p, cb), false);
    ja.erase("budgets");
    jb.erase("budgets");
    o.require(ja == jb, "verdicts differ");
  }
  std::string files;
  for (char const* f : {"bs12.fp", "bs23.fp", "bs24.fp", "circle23.fp",
                        "trefoil.fp", "z2.fp"}) {
    files += std::string(" ") + RANKONE_DATA_DIR + "/" + f;
  }
  for (std::string cmd : {"vsa", "classify"}) {
    auto one = run_cli("--format json --max-index 8 --jobs 1 " + cmd + files);
    auto four = run_cli("--format json --max-index 8 --jobs 4 " + cmd + files);
    o.require(one.code == 0 && four.code == 0, "cli exit code");
    auto ja = nlohmann::json::parse(one.out, nullptr, false);
    auto jb = nlohmann::json::parse(four.out, nullptr, false);
    o.require(!ja.is_discarded() && !jb.is_discarded()
                  && without_run_fields(ja) == without_run_fields(jb),
              "cli " + cmd + " output differs");
  }
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Baumslag-Solitar coprimality law", criterion1},
      {"Nielsen-Schreier index law", criterion2},
      {"deficiency bookkeeping under rewriting", criterion3},
      {"free-by-cyclic witness", criterion4},
      {"cyclic cover of C(r,d) is DS(r,d)", criterion5},
      {"primitivity of planted periodic classes", criterion6},
      {"primitive powers in finite-index subgroups", criterion7},
      {"strictly ascending witnesses", criterion8},
      {"GBS worked example", criterion9},
      {"classification table", criterion10},
      {"membership and Smith form oracles", criterion11},
      {"determinism across jobs", criterion12},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (std::exception const& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    o.require(secs < kWallLimitSeconds, "over the time limit");
    std::printf("%s %2zu %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), secs);
    std::cout << o.detail.str() << std::flush;
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
