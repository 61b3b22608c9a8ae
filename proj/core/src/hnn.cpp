#include "rankone/hnn.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "rankone/detail/text.hpp"
#include "rankone/error.hpp"

namespace rankone {

Endomorphism::Endomorphism(Alphabet alphabet, std::vector<Word> images)
    : alphabet_(std::move(alphabet)), images_(std::move(images)) {
  std::size_t const r = alphabet_.rank();
  if (images_.size() != r) {
    throw PreconditionError("endomorphism needs one image per basis letter");
  }
  for (auto const& w : images_) {
    if (w.generator_bound() > r) {
      throw PreconditionError("endomorphism image uses unknown letters");
    }
  }
  if (fold(images_, r).rank() != r) {
    throw PreconditionError("endomorphism is not injective: its image has "
                            "rank below " + std::to_string(r));
  }
}

Endomorphism Endomorphism::then(Endomorphism const& next) const {
  std::vector<Word> out;
  out.reserve(images_.size());
  for (auto const& w : images_) {
    out.push_back(next(w));
  }
  return Endomorphism(alphabet_, std::move(out));
}

Endomorphism Endomorphism::power(std::size_t i) const {
  std::vector<Word> out;
  for (std::size_t g = 0; g < rank(); ++g) {
    out.push_back(Word::generator(g));
  }
  for (std::size_t k = 0; k < i; ++k) {
    for (auto& w : out) {
      w = (*this)(w);
    }
  }
  return Endomorphism(alphabet_, std::move(out));
}

Endomorphism make_endomorphism(Alphabet alphabet, std::vector<Word> images) {
  return Endomorphism(std::move(alphabet), std::move(images));
}

Endomorphism parse_endomorphism(std::string_view text) {
  struct Line {
    std::string_view rhs;
    detail::SourcePos pos;
  };
  std::vector<std::string> names;
  std::vector<Line> lines;
  detail::SourcePos pos;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view raw = text.substr(start, end - start);
    std::string_view body = detail::strip_comment(raw);
    if (!detail::trim(body).empty()) {
      std::size_t arrow = body.find("->");
      if (arrow == std::string_view::npos) {
        throw ParseError("expected 'x -> word'", pos.line, 1);
      }
      std::string_view lhs = detail::trim(body.substr(0, arrow));
      if (!is_identifier(lhs) || lhs == "e") {
        auto lead = body.find_first_not_of(" \t\r");
        throw ParseError("expected a generator name before '->'", pos.line,
                         lead == std::string_view::npos ? 1 : lead + 1);
      }
      if (std::find(names.begin(), names.end(), lhs) != names.end()) {
        auto lead = body.find_first_not_of(" \t\r");
        throw ParseError("generator '" + std::string(lhs) + "' mapped twice",
                         pos.line, lead + 1);
      }
      names.emplace_back(lhs);
      lines.push_back({body.substr(arrow + 2),
                       detail::SourcePos{pos.line, arrow + 3}});
    }
    pos.line += 1;
    if (end == text.size()) {
      break;
    }
    start = end + 1;
  }
  if (names.empty()) {
    throw ParseError("no basis letters defined", 0, 0);
  }
  Alphabet alphabet(names);
  std::vector<Word> images;
  for (auto const& line : lines) {
    images.push_back(detail::parse_word_at(line.rhs, alphabet, line.pos));
  }
  return Endomorphism(std::move(alphabet), std::move(images));
}

std::string format_endomorphism(Endomorphism const& theta) {
  std::string out;
  for (std::size_t i = 0; i < theta.rank(); ++i) {
    out += theta.alphabet().name(i) + " -> "
           + format_word(theta.images()[i], theta.alphabet()) + "\n";
  }
  return out;
}

bool is_surjective(Endomorphism const& theta) {
  SubgroupGraph g = fold(theta.images(), theta.rank());
  for (std::size_t i = 0; i < theta.rank(); ++i) {
    if (!contains(g, Word::generator(i))) {
      return false;
    }
  }
  return true;
}

std::string stable_letter_name(Alphabet const& alphabet) {
  if (!alphabet.index("t")) {
    return "t";
  }
  for (std::size_t k = 0;; ++k) {
    std::string name = "t" + std::to_string(k);
    if (!alphabet.index(name)) {
      return name;
    }
  }
}

Presentation hnn_presentation(Endomorphism const& theta) {
  std::vector<std::string> names{stable_letter_name(theta.alphabet())};
  for (auto const& n : theta.alphabet().names()) {
    names.push_back(n);
  }
  // Shift the free generators up by one to make room for t at index 0.
  std::vector<Word> shift;
  for (std::size_t i = 0; i < theta.rank(); ++i) {
    shift.push_back(Word::generator(i + 1));
  }
  Word const t = Word::generator(0);
  std::vector<Word> relators;
  for (std::size_t i = 0; i < theta.rank(); ++i) {
    relators.push_back(t * Word::generator(i + 1) * t.inverse()
                       * theta.images()[i].substitute(shift).inverse());
  }
  return make_presentation(Alphabet(std::move(names)), std::move(relators));
}

Endomorphism cyclic_cover(Endomorphism const& theta, std::size_t i) {
  if (i == 0) {
    throw PreconditionError("cyclic_cover: index must be >= 1");
  }
  return theta.power(i);
}

// ---------------------------------------------------------------------------
// Periodic conjugacy classes

bool verify(Endomorphism const& theta, PeriodicWitness const& wit) {
  if (wit.x.is_identity() || wit.d == 0 || wit.i == 0) {
    return false;
  }
  if (root(wit.x).k != 1) {
    return false;
  }
  return theta.power(wit.i)(wit.x) == wit.g * wit.x.pow(wit.d) * wit.g.inverse();
}

namespace {

// Calls visit on every reduced word of the given length in shortlex order;
// stops early when visit returns true.
bool for_each_word(std::size_t rank, std::size_t length,
                   std::function<bool(Word const&)> const& visit) {
  std::vector<Letter> letters;
  std::function<bool()> rec = [&]() -> bool {
    if (letters.size() == length) {
      return visit(Word(letters));
    }
    for (std::size_t r = 0; r < 2 * rank; ++r) {
      Letter l = letter_from_rank(r);
      if (!letters.empty() && letters.back() == -l) {
        continue;
      }
      letters.push_back(l);
      bool stop = rec();
      letters.pop_back();
      if (stop) {
        return true;
      }
    }
    return false;
  };
  return rec();
}

}  // namespace

std::optional<PeriodicWitness> find_periodic_conjugacy(
    Endomorphism const& theta, PeriodicSearch const& bounds) {
  std::optional<PeriodicWitness> found;
  std::size_t visited = 0;
  for (std::size_t i = 1; i <= bounds.max_i && !found; ++i) {
    Endomorphism const phi = theta.power(i);
    for (std::size_t len = 1; len <= bounds.max_len && !found; ++len) {
      for_each_word(theta.rank(), len, [&](Word const& x) {
        if ((++visited & 4095u) == 0) {
          bounds.deadline.check("periodic conjugacy search");
        }
        if (len > 1 && x.front() == -x.back()) {
          return false;
        }
        if (canonical_cyclic_word(x, true) != x || root(x).k != 1) {
          return false;
        }
        Word y = phi(x);
        if (y.is_identity()) {
          return false;
        }
        auto cp = is_conjugate_to_power(x, y, bounds.min_abs_d);
        if (!cp) {
          return false;
        }
        found = PeriodicWitness{x, cp->g, cp->d, i};
        return true;
      });
    }
  }
  if (found && !verify(theta, *found)) {
    throw CertificationError("periodic witness failed verification");
  }
  return found;
}

NormalizedPair normalize(Endomorphism const& theta, PeriodicWitness const& wit) {
  if (!verify(theta, wit)) {
    throw CertificationError("normalize: witness does not verify");
  }
  Endomorphism phi = theta.power(wit.i);
  std::vector<Word> images;
  for (auto const& img : phi.images()) {
    images.push_back(wit.g.inverse() * img * wit.g);
  }
  NormalizedPair np{Endomorphism(theta.alphabet(), std::move(images)), wit.x,
                    wit.d};
  if (np.theta_prime(np.w) != np.w.pow(np.d)) {
    throw CertificationError("normalize: theta'(w) != w^d");
  }
  return np;
}

// ---------------------------------------------------------------------------
// Primitivity

bool lemma_prim_check(SubgroupGraph const& h, Word const& g, std::size_t k) {
  if (g.is_identity() || k == 0) {
    throw PreconditionError("lemma_prim_check: needs g != e and k >= 1");
  }
  if (!is_primitive(g, h.ambient_rank()).answer) {
    throw PreconditionError("lemma_prim_check: g is not primitive");
  }
  Word const gk = g.pow(static_cast<long long>(k));
  if (!contains(h, gk)) {
    throw PreconditionError("lemma_prim_check: g^k is not in H");
  }
  for (std::size_t j = 1; j < k; ++j) {
    if (contains(h, g.pow(static_cast<long long>(j)))) {
      throw PreconditionError("lemma_prim_check: g^" + std::to_string(j)
                              + " already lies in H");
    }
  }
  auto basis = graph_basis(h);
  Word rewritten = express_in_basis(h, basis, gk);
  return is_primitive(rewritten, basis.size()).answer;
}

namespace {

LemmaLevel lemma_level(std::size_t stage, std::vector<Word> const& h_gens,
                       std::size_t ambient, Word const& w, long long d) {
  LemmaLevel level;
  level.stage = stage;
  SubgroupGraph h = fold(h_gens, ambient);
  std::size_t const k = static_cast<std::size_t>(std::llabs(d));
  for (std::size_t j = 1; j < k; ++j) {
    level.lower_powers_in_h.push_back(
        contains(h, w.pow(static_cast<long long>(j))));
  }
  level.power_primitive = lemma_prim_check(h, w, k);
  return level;
}

}  // namespace

PrimitivityCertificate prove_primitive(NormalizedPair const& np) {
  std::size_t const n = np.theta_prime.rank();
  if (n < 2) {
    throw PreconditionError("prove_primitive needs rank >= 2");
  }
  if (std::llabs(np.d) < 2) {
    throw PreconditionError("prove_primitive needs |d| >= 2");
  }
  if (np.w.is_identity() || root(np.w).k != 1) {
    throw PreconditionError("prove_primitive: w must be a non-trivial "
                            "non-power");
  }
  if (np.theta_prime(np.w) != np.w.pow(np.d)) {
    throw PreconditionError("prove_primitive: theta(w) != w^d");
  }
  PrimitivityCertificate cert;
  cert.d = np.d;
  PrimitivityStage stage;
  stage.rank = n;
  for (std::size_t i = 0; i < n; ++i) {
    stage.basis.push_back(Word::generator(i));
  }
  stage.theta = np.theta_prime.images();
  stage.w = np.w;
  cert.chain.push_back(stage);

  // Images of the previous stage's basis, expressed in the current stage,
  // for the backward lemma checks.
  std::vector<std::vector<Word>> inherited;
  while (true) {
    PrimitivityStage const& cur = cert.chain.back();
    std::vector<Word> gens = cur.theta;
    gens.push_back(cur.w);
    SubgroupGraph s = fold(gens, cur.rank);
    if (s.rank() == cur.rank) {
      break;
    }
    if (s.rank() < 2) {
      throw CertificationError("rank reduction went below 2");
    }
    PrimitivityStage next;
    next.rank = s.rank();
    next.basis = graph_basis(s);
    for (auto const& y : next.basis) {
      next.theta.push_back(
          express_in_basis(s, next.basis, y.substitute(cur.theta)));
    }
    next.w = express_in_basis(s, next.basis, cur.w);
    if (next.w.substitute(next.theta) != next.w.pow(np.d)) {
      throw CertificationError("theta(w) = w^d lost after changing stage");
    }
    std::vector<Word> images;
    for (auto const& img : cur.theta) {
      images.push_back(express_in_basis(s, next.basis, img));
    }
    inherited.push_back(std::move(images));
    cert.chain.push_back(std::move(next));
  }

  PrimitivityStage const& last = cert.chain.back();
  auto terminal = is_primitive(last.w, last.rank);
  if (!terminal.answer) {
    throw CertificationError(
        "w is not primitive at the terminal stage: this would contradict the "
        "theorem (or expose a bug)");
  }
  cert.terminal_trace = std::move(terminal.certificate);
  std::size_t const top = cert.chain.size() - 1;
  cert.lemma.push_back(lemma_level(top, last.theta, last.rank, last.w, np.d));
  for (std::size_t j = top; j-- > 0;) {
    PrimitivityStage const& g = cert.chain[j + 1];
    cert.lemma.push_back(lemma_level(j, inherited[j], g.rank, g.w, np.d));
  }
  for (auto const& level : cert.lemma) {
    if (!level.power_primitive) {
      throw CertificationError("w^|d| is not primitive in theta(F)");
    }
  }
  auto ambient = is_primitive(np.w, n);
  if (!ambient.answer) {
    throw CertificationError("w is not primitive in F");
  }
  cert.ambient_trace = std::move(ambient.certificate);
  return cert;
}

bool verify(NormalizedPair const& np, PrimitivityCertificate const& cert) {
  if (cert.chain.empty() || cert.d != np.d) {
    return false;
  }
  for (std::size_t j = 0; j < cert.chain.size(); ++j) {
    auto const& s = cert.chain[j];
    if (j > 0 && s.rank >= cert.chain[j - 1].rank) {
      return false;
    }
    if (s.rank < 2 || s.w.substitute(s.theta) != s.w.pow(cert.d)) {
      return false;
    }
  }
  if (!cert.terminal_trace.primitive || !replay(cert.terminal_trace)
      || cert.terminal_trace.start != cyclic_reduce(cert.chain.back().w).core) {
    return false;
  }
  if (!cert.ambient_trace.primitive || !replay(cert.ambient_trace)
      || cert.ambient_trace.start != cyclic_reduce(np.w).core) {
    return false;
  }
  if (cert.lemma.size() != cert.chain.size()) {
    return false;
  }
  for (auto const& level : cert.lemma) {
    if (!level.power_primitive) {
      return false;
    }
    for (bool in : level.lower_powers_in_h) {
      if (in) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Strictly ascending witness

namespace {

unsigned long long smallest_prime_factor(unsigned long long n) {
  for (unsigned long long q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      return q;
    }
  }
  return n;
}

}  // namespace

StrictWitness vsa_witness_strict(Endomorphism const& theta,
                                 PeriodicWitness const& wit,
                                 StrictWitnessOptions const& options) {
  if (theta.rank() < 2) {
    throw PreconditionError("vsa_witness_strict needs rank >= 2");
  }
  if (std::llabs(wit.d) < 2) {
    throw PreconditionError("vsa_witness_strict needs |d| >= 2");
  }
  StrictWitness out;
  std::size_t const r = theta.rank();
  out.normalized = normalize(theta, wit);
  out.trace.push_back("normalized: theta^" + std::to_string(wit.i)
                      + " conjugated so that theta'(w) = w^"
                      + std::to_string(wit.d));
  out.certificate = prove_primitive(out.normalized);
  out.trace.push_back("w certified primitive; rank chain length "
                      + std::to_string(out.certificate.chain.size()));
  out.basis_change = automorphism_to_first_letter(
      out.normalized.w, out.certificate.ambient_trace);

  std::vector<std::string> names{"a"};
  for (std::size_t i = 1; i < r; ++i) {
    names.push_back("a" + std::to_string(i + 1));
  }
  std::vector<Word> images;
  for (std::size_t j = 0; j < r; ++j) {
    Word pre = out.basis_change.apply_inverse(Word::generator(j));
    images.push_back(out.basis_change(out.normalized.theta_prime(pre)));
  }
  out.rebased = Endomorphism(Alphabet(names), std::move(images));
  out.d = out.normalized.d;
  if (out.d == 2) {
    out.rebased = out.rebased.power(2);
    out.d = 4;
    out.doubled = true;
    out.trace.push_back("d = 2: passed to the double cyclic cover, a -> a^4");
  }
  if (out.rebased.images()[0] != Word::generator(0).pow(out.d)) {
    throw CertificationError("basis change did not produce t a t^-1 = a^d");
  }
  out.p = smallest_prime_factor(static_cast<unsigned long long>(
      std::llabs(out.d - 1)));
  out.trace.push_back("prime p = " + std::to_string(out.p) + " divides d - 1 = "
                      + std::to_string(out.d - 1));
  out.presentation = hnn_presentation(out.rebased);

  std::vector<Word> const must{Word::generator(0), Word::generator(1)};
  std::size_t searched = 1;
  for (std::size_t bound : options.schedule) {
    if (bound > options.max_index) {
      break;
    }
    LowIndexOptions lio;
    lio.max_index = bound;
    lio.must_contain = must;
    lio.jobs = options.jobs;
    lio.deadline = options.deadline;
    auto tables = low_index_subgroups(out.presentation, lio);
    for (auto const& t : tables) {
      if (t.index <= searched) {
        continue;
      }
      auto rw = reidemeister_schreier(out.presentation, t);
      std::size_t rank = h1_mod_p_rank(rw.presentation, out.p);
      if (rank >= 3) {
        out.cover = t;
        out.rewritten = std::move(rw);
        out.rank = rank;
        out.golod_shafarevich =
            golod_shafarevich_check(out.rewritten.presentation, out.p);
        if (!out.golod_shafarevich.violated) {
          throw CertificationError(
              "witness subgroup does not violate Golod-Shafarevich");
        }
        out.trace.push_back("index " + std::to_string(t.index)
                            + " subgroup containing t, a has d_p = "
                            + std::to_string(rank));
        return out;
      }
    }
    searched = bound;
  }
  throw BudgetExhausted("no subgroup containing t and a with mod-"
                        + std::to_string(out.p) + " rank >= 3 up to index "
                        + std::to_string(searched));
}

}  // namespace rankone
