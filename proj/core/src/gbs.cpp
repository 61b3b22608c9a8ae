#include "rankone/gbs.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "rankone/detail/text.hpp"
#include "rankone/error.hpp"

namespace rankone {

namespace {

long long checked_mul(long long a, long long b) {
  long long out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw PreconditionError("GBS label product overflows 64 bits");
  }
  return out;
}

long long gcd_abs(long long a, long long b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::string str(long long v) { return std::to_string(v); }

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'
                               || line[i] == '\r')) {
      ++i;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t'
           && line[i] != '\r') {
      ++i;
    }
    if (i > start) {
      out.push_back({line.substr(start, i - start), start + 1});
    }
  }
  return out;
}

bool is_vertex_name(std::string_view s) {
  if (is_identifier(s)) {
    return true;
  }
  return !s.empty()
         && std::all_of(s.begin(), s.end(), [](char c) {
              return c >= '0' && c <= '9';
            });
}

}  // namespace

void validate(GbsGraph const& g) {
  std::size_t const n = g.vertices.size();
  if (n == 0) {
    throw PreconditionError("GBS graph has no vertices");
  }
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      x = parent[x] = parent[parent[x]];
    }
    return x;
  };
  for (auto const& e : g.edges) {
    if (e.u >= n || e.v >= n) {
      throw PreconditionError("GBS edge refers to an unknown vertex");
    }
    if (e.l == 0 || e.r == 0) {
      throw PreconditionError("GBS edge labels must be non-zero");
    }
    parent[find(e.u)] = find(e.v);
  }
  for (std::size_t v = 1; v < n; ++v) {
    if (find(v) != find(0)) {
      throw PreconditionError("GBS graph is not connected");
    }
  }
}

GbsGraph parse_gbs(std::string_view text) {
  GbsGraph g;
  auto vertex = [&](Token const& tok, std::size_t line) {
    if (!is_vertex_name(tok.text)) {
      throw ParseError("bad vertex name '" + std::string(tok.text) + "'", line,
                       tok.column);
    }
    auto it = std::find(g.vertices.begin(), g.vertices.end(), tok.text);
    if (it != g.vertices.end()) {
      return static_cast<std::size_t>(it - g.vertices.begin());
    }
    g.vertices.emplace_back(tok.text);
    return g.vertices.size() - 1;
  };
  auto label = [](Token const& tok, std::size_t line) {
    long long v = 0;
    auto const* first = tok.text.data();
    auto const* last = first + tok.text.size();
    if (!tok.text.empty() && *first == '+') {
      ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw ParseError("expected an integer label", line, tok.column);
    }
    if (v == 0) {
      throw ParseError("edge labels must be non-zero", line, tok.column);
    }
    return v;
  };
  std::size_t line_no = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    auto toks = tokenize(detail::strip_comment(text.substr(start, end - start)));
    if (!toks.empty()) {
      if (toks[0].text == "edge") {
        if (toks.size() != 5) {
          throw ParseError("expected 'edge u v l r'", line_no,
                           toks.size() > 5 ? toks[5].column : toks[0].column);
        }
        GbsEdge e;
        e.u = vertex(toks[1], line_no);
        e.v = vertex(toks[2], line_no);
        e.l = label(toks[3], line_no);
        e.r = label(toks[4], line_no);
        g.edges.push_back(e);
      } else if (toks[0].text == "vertex") {
        if (toks.size() != 2) {
          throw ParseError("expected 'vertex u'", line_no, toks[0].column);
        }
        vertex(toks[1], line_no);
      } else {
        throw ParseError("unknown directive '" + std::string(toks[0].text)
                             + "'",
                         line_no, toks[0].column);
      }
    }
    ++line_no;
    if (end == text.size()) {
      break;
    }
    start = end + 1;
  }
  if (g.vertices.empty()) {
    throw ParseError("no vertices or edges", 0, 0);
  }
  try {
    validate(g);
  } catch (PreconditionError const& err) {
    throw ParseError(err.what(), 0, 0);
  }
  return g;
}

std::string format_gbs(GbsGraph const& g) {
  std::string out;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    bool used = std::any_of(g.edges.begin(), g.edges.end(),
                            [v](GbsEdge const& e) {
                              return e.u == v || e.v == v;
                            });
    if (!used) {
      out += "vertex " + g.vertices[v] + "\n";
    }
  }
  for (auto const& e : g.edges) {
    out += "edge " + g.vertices[e.u] + " " + g.vertices[e.v] + " " + str(e.l)
           + " " + str(e.r) + "\n";
  }
  return out;
}

GbsReduction reduce_gbs(GbsGraph const& input) {
  validate(input);
  GbsReduction out{input, {}};
  GbsGraph& g = out.graph;
  while (true) {
    auto it = std::find_if(g.edges.begin(), g.edges.end(),
                           [](GbsEdge const& e) {
                             return !e.is_loop()
                                    && (e.l == 1 || e.l == -1 || e.r == 1
                                        || e.r == -1);
                           });
    if (it == g.edges.end()) {
      return out;
    }
    GbsEdge const e = *it;
    // a_gone = a_keep^factor
    bool const merge_u = e.l == 1 || e.l == -1;
    std::size_t const gone = merge_u ? e.u : e.v;
    std::size_t const keep = merge_u ? e.v : e.u;
    long long const factor = checked_mul(e.l, e.r);
    out.trace.push_back("collapse edge " + g.vertices[e.u] + " -- "
                        + g.vertices[e.v] + " (" + str(e.l) + ", " + str(e.r)
                        + "): merge " + g.vertices[gone] + " into "
                        + g.vertices[keep] + ", labels at " + g.vertices[gone]
                        + " multiplied by " + str(factor));
    g.edges.erase(it);
    for (auto& f : g.edges) {
      if (f.u == gone) {
        f.u = keep;
        f.l = checked_mul(f.l, factor);
      }
      if (f.v == gone) {
        f.v = keep;
        f.r = checked_mul(f.r, factor);
      }
    }
    g.vertices.erase(g.vertices.begin() + static_cast<std::ptrdiff_t>(gone));
    for (auto& f : g.edges) {
      f.u -= f.u > gone ? 1 : 0;
      f.v -= f.v > gone ? 1 : 0;
    }
  }
}

std::string_view to_string(GbsVerdict::Kind kind) noexcept {
  switch (kind) {
    case GbsVerdict::Kind::small_z:
      return "small-Z";
    case GbsVerdict::Kind::small_klein_type:
      return "small-Klein-type";
    case GbsVerdict::Kind::small_soluble_bs:
      return "small-soluble-BS";
    case GbsVerdict::Kind::infinite_dim_h2b:
      return "infinite-dim-H2b";
  }
  return "?";
}

GbsVerdict classify_gbs(GbsGraph const& input) {
  GbsGraph const g = reduce_gbs(input).graph;
  GbsVerdict v;
  auto is_unit = [](long long x) { return x == 1 || x == -1; };
  if (g.vertices.size() == 1 && g.edges.empty()) {
    v.kind = GbsVerdict::Kind::small_z;
    v.reason = "reduced graph is a single point: the group is Z";
  } else if (g.edges.size() == 1 && !g.edges[0].is_loop()
             && (g.edges[0].l == 2 || g.edges[0].l == -2)
             && (g.edges[0].r == 2 || g.edges[0].r == -2)) {
    v.kind = GbsVerdict::Kind::small_klein_type;
    v.reason = "reduced graph is a single edge with index 2 inclusions on "
               "both sides";
  } else if (g.edges.size() == 1 && g.edges[0].is_loop()
             && (is_unit(g.edges[0].l) || is_unit(g.edges[0].r))) {
    v.kind = GbsVerdict::Kind::small_soluble_bs;
    long long n = is_unit(g.edges[0].l) ? g.edges[0].r * g.edges[0].l
                                        : g.edges[0].l * g.edges[0].r;
    v.reason = "reduced graph is a single loop with a label +-1: BS(1,"
               + str(n) + ")";
  } else {
    v.kind = GbsVerdict::Kind::infinite_dim_h2b;
    v.reason = "reduced graph is not in the exception list: second bounded "
               "cohomology is infinite dimensional";
  }
  v.acylindrically_hyperbolic = false;
  return v;
}

namespace {

CircleData finish_circle(std::vector<std::string> vertices,
                         std::vector<std::pair<long long, long long>> labels) {
  CircleData c;
  c.n = labels.size();
  c.vertices = std::move(vertices);
  c.labels = std::move(labels);
  for (auto const& [l, r] : c.labels) {
    c.lprod = checked_mul(c.lprod, l);
    c.rprod = checked_mul(c.rprod, r);
  }
  c.coprime = gcd_abs(c.lprod, c.rprod) == 1;
  return c;
}

}  // namespace

CircleData make_circle(std::vector<std::pair<long long, long long>> labels) {
  if (labels.empty()) {
    throw PreconditionError("a circle needs at least one edge");
  }
  for (auto const& [l, r] : labels) {
    if (l == 0 || r == 0) {
      throw PreconditionError("GBS edge labels must be non-zero");
    }
  }
  std::vector<std::string> vertices;
  for (std::size_t i = 1; i <= labels.size(); ++i) {
    vertices.push_back(std::to_string(i));
  }
  return finish_circle(std::move(vertices), std::move(labels));
}

std::optional<CircleData> circle_criterion(GbsGraph const& g) {
  validate(g);
  std::size_t const n = g.vertices.size();
  if (g.edges.size() != n) {
    return std::nullopt;
  }
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    incident[g.edges[k].u].push_back(k);
    incident[g.edges[k].v].push_back(k);
  }
  for (auto const& inc : incident) {
    if (inc.size() != 2) {
      return std::nullopt;
    }
  }
  std::size_t start = 0;
  for (std::size_t v = 1; v < n; ++v) {
    if (g.vertices[v] < g.vertices[start]) {
      start = v;
    }
  }
  // (edge, end) pairs at a vertex; end 0 is the u end, 1 the v end.
  auto ends_at = [&](std::size_t v) {
    std::vector<std::pair<std::size_t, int>> ends;
    for (std::size_t k : incident[v]) {
      GbsEdge const& f = g.edges[k];
      if (f.is_loop()) {
        ends.emplace_back(k, ends.empty() || ends.back().first != k ? 0 : 1);
      } else {
        ends.emplace_back(k, f.u == v ? 0 : 1);
      }
    }
    return ends;
  };
  struct Walk {
    std::vector<std::string> vertices;
    std::vector<std::pair<long long, long long>> labels;
    std::vector<long long> key;
  };
  // Leaves `start` along edge `first`, through its end `first_end` (0: the
  // u end, 1: the v end).
  auto walk = [&](std::size_t first, int first_end) {
    Walk w;
    std::size_t v = start;
    std::size_t edge = first;
    int end = first_end;
    for (std::size_t step = 0; step < n; ++step) {
      GbsEdge const& e = g.edges[edge];
      w.vertices.push_back(g.vertices[v]);
      std::size_t next = 0;
      if (end == 0) {
        w.labels.emplace_back(e.l, e.r);
        next = e.v;
      } else {
        w.labels.emplace_back(e.r, e.l);
        next = e.u;
      }
      w.key.push_back(w.labels.back().first);
      w.key.push_back(w.labels.back().second);
      // Leave `next` through its other incidence.
      int const arrive = end == 0 ? 1 : 0;
      std::vector<std::pair<std::size_t, int>> ends = ends_at(next);
      std::size_t const slot =
          (ends[0].first == edge && ends[0].second == arrive) ? 1 : 0;
      edge = ends[slot].first;
      end = ends[slot].second;
      v = next;
    }
    return w;
  };
  auto ends = ends_at(start);
  Walk a = walk(ends[0].first, ends[0].second);
  Walk b = walk(ends[1].first, ends[1].second);
  Walk& best = b.key < a.key ? b : a;
  return finish_circle(std::move(best.vertices), std::move(best.labels));
}

GbsGraph circle_graph(CircleData const& c) {
  GbsGraph g;
  for (std::size_t i = 0; i < c.n; ++i) {
    g.vertices.push_back(i < c.vertices.size() ? c.vertices[i]
                                               : std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    g.edges.push_back({i, (i + 1) % c.n, c.labels[i].first,
                       c.labels[i].second});
  }
  return g;
}

Presentation circle_presentation(CircleData const& c) {
  if (c.n == 0 || c.labels.size() != c.n) {
    throw PreconditionError("circle_presentation: malformed circle");
  }
  std::vector<std::string> names;
  if (c.n == 1) {
    names.push_back("a");
  } else {
    for (std::size_t i = 1; i <= c.n; ++i) {
      names.push_back("a" + std::to_string(i));
    }
  }
  names.push_back("t");
  std::size_t const t = c.n;
  std::vector<Word> rels;
  for (std::size_t i = 0; i + 1 < c.n; ++i) {
    rels.push_back(Word::generator(i).pow(c.labels[i].first)
                   * Word::generator(i + 1).pow(-c.labels[i].second));
  }
  Word const tw = Word::generator(t);
  rels.push_back(Word::generator(c.n - 1).pow(c.labels[c.n - 1].first)
                 * (tw * Word::generator(0).pow(c.labels[c.n - 1].second)
                    * tw.inverse())
                       .inverse());
  return make_presentation(Alphabet(names), std::move(rels));
}

QuotientRelation quotient_relation(CircleData const& c) {
  if (!c.coprime) {
    throw PreconditionError("quotient_relation: L = " + str(c.lprod)
                            + " and R = " + str(c.rprod)
                            + " are not coprime");
  }
  QuotientRelation q;
  q.alphabet = Alphabet({"t", "a"});
  q.R = c.rprod;
  q.L = c.lprod;
  Word const t = Word::generator(0);
  Word const a = Word::generator(1);
  q.relation = t * a.pow(q.R) * t.inverse() * a.pow(-q.L);
  std::size_t const n = c.n;
  auto name = [n](std::size_t i) {
    return n == 1 ? std::string("a") : "a" + std::to_string(i);
  };
  auto l = [&](std::size_t i) { return c.labels[i - 1].first; };
  auto r = [&](std::size_t i) { return c.labels[i - 1].second; };
  // a_i^{r_{i-1}..r_1} = a_1^{l_{i-1}..l_1}
  long long rp = 1;
  long long lp = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    rp = checked_mul(rp, r(i - 1));
    lp = checked_mul(lp, l(i - 1));
    q.derivation.push_back(name(i) + "^" + str(rp) + " = " + name(1) + "^"
                           + str(lp) + "  (from " + name(i - 1) + "^"
                           + str(l(i - 1)) + " = " + name(i) + "^"
                           + str(r(i - 1)) + ")");
  }
  // a_i^{l_i..l_n} = a_n^{r_i..r_{n-1} l_n} = t a_1^{r_i..r_n} t^-1
  for (std::size_t i = n; i >= 1; --i) {
    long long lexp = 1;
    long long rexp = 1;
    for (std::size_t k = i; k <= n; ++k) {
      lexp = checked_mul(lexp, l(k));
      rexp = checked_mul(rexp, r(k));
    }
    long long mid = checked_mul(rexp / r(n), l(n));
    q.derivation.push_back(name(i) + "^" + str(lexp) + " = " + name(n) + "^"
                           + str(mid) + " = t " + name(1) + "^" + str(rexp)
                           + " t^-1");
  }
  q.derivation.push_back("taking i = 1: t a^" + str(q.R) + " t^-1 = a^"
                         + str(q.L));
  q.conclusion = "G is a quotient of BS(" + str(q.R) + "," + str(q.L) + ")";
  return q;
}

namespace {

struct Pair {
  long long e;  // b^e = w
  Word w;
};

Pair positive(Pair p) {
  if (p.e < 0) {
    return {-p.e, p.w.inverse()};
  }
  return p;
}

std::string show(Pair const& p, Alphabet const& alpha) {
  return "b^" + str(p.e) + " = " + format_word(p.w, alpha);
}

// Non-abelian Euclidean algorithm on b^r1 = a^l1, b^l2 = t a^r2 t^-1 over
// generators t (0), a (1).
struct EuclidResult {
  Word u;
  Pair last;
  Word relator;
  std::vector<std::string> trace;
};

EuclidResult euclid(long long l1, long long r1, long long l2, long long r2) {
  Alphabet const alpha({"t", "a"});
  Word const t = Word::generator(0);
  Word const a = Word::generator(1);
  Pair p = positive({r1, a.pow(l1)});
  Pair q = positive({l2, t * a.pow(r2) * t.inverse()});
  EuclidResult out;
  out.trace.push_back("start: " + show(p, alpha) + ", " + show(q, alpha));
  std::optional<Pair> replaced;
  while (p.e != 1 && q.e != 1) {
    if (p.e >= q.e) {
      replaced = p;
      p = {p.e - q.e, p.w * q.w.inverse()};
    } else {
      replaced = q;
      q = {q.e - p.e, q.w * p.w.inverse()};
    }
    out.trace.push_back("step: " + show(p, alpha) + ", " + show(q, alpha));
  }
  Pair const one = p.e == 1 ? p : q;
  Pair const other = p.e == 1 ? q : p;
  out.u = one.w;
  out.last = replaced ? *replaced : other;
  out.relator = out.u.pow(out.last.e) * out.last.w.inverse();
  out.trace.push_back("b = " + format_word(out.u, alpha));
  out.trace.push_back("substitute into " + show(out.last, alpha) + ": "
                      + format_word(out.relator, alpha));
  return out;
}

// x a + y b = g = gcd(a, b) >= 0.
long long ext_gcd(long long a, long long b, long long& x, long long& y) {
  long long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    long long q = a / b;
    long long r = a - q * b;
    a = b;
    b = r;
    long long nx = x0 - q * x1;
    long long ny = y0 - q * y1;
    x0 = x1;
    y0 = y1;
    x1 = nx;
    y1 = ny;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

}  // namespace

TwoGeneratorReduction two_generator_reduction(CircleData const& c) {
  if (c.n < 2) {
    throw PreconditionError("two_generator_reduction needs n >= 2: there is "
                            "nothing to eliminate");
  }
  if (!c.coprime) {
    throw PreconditionError("two_generator_reduction: L and R are not "
                            "coprime");
  }
  TwoGeneratorReduction out;
  Alphabet const alpha({"t", "a"});
  Word const t = Word::generator(0);
  Word const a = Word::generator(1);
  if (c.n == 2) {
    auto [l1, r1] = c.labels[0];
    auto [l2, r2] = c.labels[1];
    EuclidResult e = euclid(l1, r1, l2, r2);
    out.trace = std::move(e.trace);
    out.presentation = make_presentation(alpha, {e.relator});
    out.one_relator = true;
    return out;
  }
  std::size_t const n = c.n;
  auto l = [&](std::size_t i) { return c.labels[i - 1].first; };
  auto r = [&](std::size_t i) { return c.labels[i - 1].second; };
  // values[i - 1]: a_i as a word in t, a.
  std::vector<Word> values(n);
  values[0] = a;
  for (std::size_t i = n; i >= 2; --i) {
    long long pexp = 1;  // a_i^pexp = a^qexp
    long long qexp = 1;
    for (std::size_t k = 1; k < i; ++k) {
      pexp = checked_mul(pexp, r(k));
      qexp = checked_mul(qexp, l(k));
    }
    long long sexp = 1;  // a_i^sexp = t a^texp t^-1
    long long texp = 1;
    for (std::size_t k = i; k <= n; ++k) {
      sexp = checked_mul(sexp, l(k));
      texp = checked_mul(texp, r(k));
    }
    long long x = 0;
    long long y = 0;
    if (ext_gcd(pexp, sexp, x, y) != 1) {
      throw CertificationError("two_generator_reduction: exponents of a_"
                               + std::to_string(i) + " are not coprime");
    }
    values[i - 1] = a.pow(checked_mul(x, qexp)) * t
                    * a.pow(checked_mul(y, texp)) * t.inverse();
    out.trace.push_back("a" + std::to_string(i) + " = (a" + std::to_string(i)
                        + "^" + str(pexp) + ")^" + str(x) + " (a"
                        + std::to_string(i) + "^" + str(sexp) + ")^" + str(y)
                        + " = " + format_word(values[i - 1], alpha));
  }
  Presentation circle = circle_presentation(c);
  std::vector<Word> images = values;
  images.push_back(t);
  std::vector<Word> rels;
  for (auto const& rel : circle.relators) {
    rels.push_back(rel.substitute(images));
  }
  out.trace.push_back("substitute a2..a" + std::to_string(n)
                      + " into the circle relators");
  out.presentation = make_presentation(alpha, std::move(rels));
  out.one_relator = out.presentation.relators.size() == 1;
  return out;
}

std::optional<std::pair<long long, long long>> match_baumslag_solitar(
    Presentation const& p) {
  if (p.rank() != 2 || p.relators.size() != 1) {
    return std::nullopt;
  }
  Word const rel = cyclic_reduce(p.relators[0]).core;
  Word const t = Word::generator(0);
  Word const a = Word::generator(1);
  for (std::size_t tgen = 0; tgen < 2; ++tgen) {
    if (rel.occurrences(tgen) != 2 || rel.exponent_sum(tgen) != 0) {
      continue;
    }
    std::vector<Word> images(2);
    images[tgen] = t;
    images[1 - tgen] = a;
    Word const w = rel.substitute(images);
    // The two a-syllables, read from a rotation starting at t.
    std::size_t start = 0;
    while (w[start] != make_letter(0)) {
      ++start;
    }
    Word const rw = rotate(w, start);
    std::size_t close = 1;
    while (close < rw.length() && generator_of(rw[close]) != 0) {
      ++close;
    }
    long long const m = static_cast<long long>(close) - 1;
    long long const n = static_cast<long long>(rw.length() - close) - 1;
    if (m == 0 || n == 0) {
      continue;
    }
    long long const ms = sign_of(rw[1]) * m;
    long long const ns = -sign_of(rw[close + 1]) * n;
    if (t * a.pow(ms) * t.inverse() * a.pow(-ns) == rw) {
      return std::pair{ms, ns};
    }
  }
  return std::nullopt;
}

std::optional<CircleData> gbs_fingerprint(Presentation const& p) {
  if (p.rank() != 2 || p.relators.size() != 1) {
    return std::nullopt;
  }
  if (auto bs = match_baumslag_solitar(p)) {
    // t a^m t^-1 = a^n is the loop a^n = t a^m t^-1.
    long long const s = bs->second < 0 ? -1 : 1;
    return make_circle({{s * bs->second, s * bs->first}});
  }
  Word const rel = cyclic_reduce(p.relators[0]).core;
  if (rel.empty()) {
    return std::nullopt;
  }
  for (std::size_t tgen = 0; tgen < 2; ++tgen) {
    for (int ts : {1, -1}) {
      for (int as : {1, -1}) {
        // Rename to t = 0, a = 1 with the chosen orientations.
        std::vector<Word> images(2);
        images[tgen] = Word::generator(0, ts);
        images[1 - tgen] = Word::generator(1, as);
        Word const w = rel.substitute(images);
        if (w.exponent_sum(0) != 0 || w.occurrences(0) == 0) {
          continue;
        }
        // Heights of the a-syllables, read cyclically from a rotation that
        // starts with a t-letter.
        std::size_t start = 0;
        while (generator_of(w[start]) != 0) {
          ++start;
        }
        Word const rw = rotate(w, start);
        long long h = 0;
        long long lo = 0;
        long long hi = 0;
        std::vector<std::pair<long long, long long>> syllables;
        for (std::size_t i = 0; i < rw.length(); ++i) {
          Letter const x = rw[i];
          if (generator_of(x) == 0) {
            h += sign_of(x);
          } else if (i > 0 && generator_of(rw[i - 1]) == 1) {
            syllables.back().second += sign_of(x);
          } else {
            syllables.emplace_back(h, sign_of(x));
          }
        }
        if (syllables.empty()) {
          continue;
        }
        lo = hi = syllables[0].first;
        for (auto const& [sh, _] : syllables) {
          lo = std::min(lo, sh);
          hi = std::max(hi, sh);
        }
        if (hi - lo != 1) {
          continue;
        }
        long long g0 = 0;
        long long g1 = 0;
        std::size_t units = 0;
        for (auto const& [sh, ex] : syllables) {
          (sh == lo ? g0 : g1) = gcd_abs(sh == lo ? g0 : g1, ex);
        }
        for (auto const& [sh, ex] : syllables) {
          units += static_cast<std::size_t>((ex < 0 ? -ex : ex)
                                            / (sh == lo ? g0 : g1));
        }
        long long const bound = static_cast<long long>(units) + 3;
        for (long long l1 : {g0, -g0}) {
          for (long long r2 : {g1, -g1}) {
            for (long long r1 = -bound; r1 <= bound; ++r1) {
              for (long long l2 = -bound; l2 <= bound; ++l2) {
                if (r1 == 0 || l2 == 0 || gcd_abs(r1, l2) != 1) {
                  continue;
                }
                EuclidResult e = euclid(l1, r1, l2, r2);
                Word cand = cyclic_reduce(e.relator).core;
                if (cand.length() == w.length()
                    && same_cyclic_word_up_to_inversion(cand, w)) {
                  // Inverting a vertex generator negates both labels there.
                  long long const s1 = l1 < 0 ? -1 : 1;
                  long long const s2 = l2 < 0 ? -1 : 1;
                  return make_circle({{s1 * l1, s2 * r1}, {s2 * l2, s1 * r2}});
                }
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace rankone
