#include "rankone/whitehead.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "rankone/error.hpp"

namespace rankone {

FreeMap FreeMap::identity(std::size_t rank) {
  FreeMap map;
  map.codomain_rank = rank;
  for (std::size_t i = 0; i < rank; ++i) {
    map.images.push_back(Word::generator(i));
  }
  return map;
}

FreeMap compose(FreeMap const& first, FreeMap const& second) {
  FreeMap out;
  out.codomain_rank = second.codomain_rank;
  out.images.reserve(first.images.size());
  for (auto const& img : first.images) {
    out.images.push_back(second(img));
  }
  return out;
}

bool in_cut(std::uint64_t cut, Letter l) noexcept {
  return ((cut >> letter_rank(l)) & 1u) != 0;
}

FreeMap whitehead_map(WhiteheadMove const& move, std::size_t rank) {
  FreeMap map;
  map.codomain_rank = rank;
  std::size_t const mgen = generator_of(move.multiplier);
  Word const a = Word{move.multiplier};
  for (std::size_t g = 0; g < rank; ++g) {
    Letter x = make_letter(g);
    if (g == mgen) {
      map.images.push_back(Word{x});
      continue;
    }
    Word img;
    if (in_cut(move.cut, -x)) {
      img *= a.inverse();
    }
    img *= Word{x};
    if (in_cut(move.cut, x)) {
      img *= a;
    }
    map.images.push_back(std::move(img));
  }
  return map;
}

WhiteheadMove inverse_move(WhiteheadMove const& move, std::size_t) {
  WhiteheadMove inv;
  inv.multiplier = -move.multiplier;
  inv.cut = move.cut;
  inv.cut &= ~(std::uint64_t{1} << letter_rank(move.multiplier));
  inv.cut |= std::uint64_t{1} << letter_rank(-move.multiplier);
  return inv;
}

Word apply_cyclic(WhiteheadMove const& move, Word const& cyclic_word,
                  std::size_t rank) {
  return cyclic_reduce(whitehead_map(move, rank)(cyclic_word)).core;
}

namespace {

using Weights = std::vector<std::vector<long long>>;

// Whitehead graph: for each cyclically consecutive pair x y an edge joining
// x and y^-1, indexed by letter_rank.
Weights whitehead_graph(Word const& w, std::size_t rank) {
  std::size_t const n = 2 * rank;
  Weights weights(n, std::vector<long long>(n, 0));
  std::size_t const m = w.length();
  for (std::size_t i = 0; i < m; ++i) {
    Letter x = w[i];
    Letter y = w[(i + 1) % m];
    std::size_t u = letter_rank(x);
    std::size_t v = letter_rank(-y);
    ++weights[u][v];
    ++weights[v][u];
  }
  return weights;
}

long long degree(Weights const& weights, std::size_t v) {
  long long d = 0;
  for (long long x : weights[v]) {
    d += x;
  }
  return d;
}

long long cut_value(Weights const& weights, std::uint64_t cut) {
  long long total = 0;
  std::size_t const n = weights.size();
  for (std::size_t u = 0; u < n; ++u) {
    if (((cut >> u) & 1u) == 0) {
      continue;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (((cut >> v) & 1u) == 0) {
        total += weights[u][v];
      }
    }
  }
  return total;
}

// Edmonds-Karp on the dense undirected graph. Returns the min cut value and
// the source side of a minimum cut.
std::pair<long long, std::uint64_t> min_cut(Weights const& weights,
                                            std::size_t source,
                                            std::size_t sink) {
  std::size_t const n = weights.size();
  Weights residual = weights;
  long long flow = 0;
  while (true) {
    std::vector<int> parent(n, -1);
    parent[source] = static_cast<int>(source);
    std::queue<std::size_t> queue;
    queue.push(source);
    while (!queue.empty() && parent[sink] == -1) {
      std::size_t u = queue.front();
      queue.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] == -1 && residual[u][v] > 0) {
          parent[v] = static_cast<int>(u);
          queue.push(v);
        }
      }
    }
    if (parent[sink] == -1) {
      std::uint64_t side = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] != -1) {
          side |= std::uint64_t{1} << v;
        }
      }
      return {flow, side};
    }
    long long push = -1;
    for (std::size_t v = sink; v != source;
         v = static_cast<std::size_t>(parent[v])) {
      auto u = static_cast<std::size_t>(parent[v]);
      push = push < 0 ? residual[u][v] : std::min(push, residual[u][v]);
    }
    for (std::size_t v = sink; v != source;
         v = static_cast<std::size_t>(parent[v])) {
      auto u = static_cast<std::size_t>(parent[v]);
      residual[u][v] -= push;
      residual[v][u] += push;
    }
    flow += push;
  }
}

void check_rank(std::size_t rank) {
  if (rank > 32) {
    throw PreconditionError("Whitehead's algorithm supports rank <= 32, got "
                            + std::to_string(rank));
  }
}

}  // namespace

long long whitehead_length_change(WhiteheadMove const& move,
                                  Word const& cyclic_word, std::size_t rank) {
  check_rank(rank);
  Weights weights = whitehead_graph(cyclic_word, rank);
  return cut_value(weights, move.cut)
         - degree(weights, letter_rank(move.multiplier));
}

std::optional<WhiteheadMove> least_reducing_move(Word const& cyclic_word,
                                                 std::size_t rank) {
  check_rank(rank);
  Weights const weights = whitehead_graph(cyclic_word, rank);
  std::size_t const n = 2 * rank;
  for (std::size_t ra = 0; ra < n; ++ra) {
    long long const deg = degree(weights, ra);
    if (deg == 0) {
      continue;
    }
    std::size_t const rinv = ra ^ 1u;
    auto [value, side] = min_cut(weights, ra, rinv);
    if (value >= deg) {
      continue;
    }
    Letter const a = letter_from_rank(ra);
    if (rank > 8) {
      return WhiteheadMove{a, side};
    }
    std::vector<std::size_t> free_bits;
    for (std::size_t r = 0; r < n; ++r) {
      if (r != ra && r != rinv) {
        free_bits.push_back(r);
      }
    }
    std::uint64_t const limit = std::uint64_t{1} << free_bits.size();
    for (std::uint64_t m = 0; m < limit; ++m) {
      std::uint64_t cut = std::uint64_t{1} << ra;
      for (std::size_t b = 0; b < free_bits.size(); ++b) {
        if ((m >> b) & 1u) {
          cut |= std::uint64_t{1} << free_bits[b];
        }
      }
      if (cut_value(weights, cut) - deg < 0) {
        return WhiteheadMove{a, cut};
      }
    }
    throw CertificationError(
        "Whitehead graph max-flow and cut enumeration disagree");
  }
  return std::nullopt;
}

PrimitivityResult is_primitive(Word const& w, std::size_t rank) {
  if (w.is_identity()) {
    throw PreconditionError("is_primitive: identity input");
  }
  check_rank(rank);
  if (w.generator_bound() > rank) {
    throw PreconditionError("is_primitive: word uses generators beyond rank");
  }
  WhiteheadTrace trace;
  trace.rank = rank;
  trace.start = cyclic_reduce(w).core;
  Word current = trace.start;
  while (current.length() > 1) {
    auto move = least_reducing_move(current, rank);
    if (!move) {
      break;
    }
    Word next = apply_cyclic(*move, current, rank);
    if (next.length() >= current.length()) {
      throw CertificationError("Whitehead move predicted to shorten did not");
    }
    trace.steps.push_back(WhiteheadStep{*move, next});
    current = std::move(next);
  }
  trace.minimal = current;
  trace.primitive = current.length() == 1;
  return PrimitivityResult{trace.primitive, std::move(trace)};
}

bool replay(WhiteheadTrace const& trace) {
  Word current = trace.start;
  for (auto const& step : trace.steps) {
    Word next = apply_cyclic(step.move, current, trace.rank);
    if (next != step.result || next.length() >= current.length()) {
      return false;
    }
    current = std::move(next);
  }
  if (current != trace.minimal) {
    return false;
  }
  if (trace.primitive) {
    return current.length() == 1;
  }
  return current.length() > 1
         && !least_reducing_move(current, trace.rank).has_value();
}

// ---------------------------------------------------------------------------
// Automorphism

Automorphism::Automorphism(std::size_t rank)
    : forward_(FreeMap::identity(rank)), backward_(FreeMap::identity(rank)) {}

Automorphism::Automorphism(FreeMap forward, FreeMap backward)
    : forward_(std::move(forward)), backward_(std::move(backward)) {}

Automorphism Automorphism::whitehead(WhiteheadMove const& move,
                                     std::size_t rank) {
  return Automorphism(whitehead_map(move, rank),
                      whitehead_map(inverse_move(move, rank), rank));
}

Automorphism Automorphism::inner(Word const& g, std::size_t rank) {
  FreeMap fwd = FreeMap::identity(rank);
  FreeMap bwd = FreeMap::identity(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    fwd.images[i] = g * fwd.images[i] * g.inverse();
    bwd.images[i] = g.inverse() * bwd.images[i] * g;
  }
  return Automorphism(std::move(fwd), std::move(bwd));
}

Automorphism Automorphism::swap(std::size_t i, std::size_t j,
                                std::size_t rank) {
  FreeMap map = FreeMap::identity(rank);
  std::swap(map.images[i], map.images[j]);
  return Automorphism(map, map);
}

Automorphism Automorphism::invert(std::size_t i, std::size_t rank) {
  FreeMap map = FreeMap::identity(rank);
  map.images[i] = map.images[i].inverse();
  return Automorphism(map, map);
}

Automorphism Automorphism::nielsen(std::size_t i, std::size_t j, int sign,
                                   std::size_t rank) {
  if (i == j) {
    throw PreconditionError("Nielsen move needs distinct generators");
  }
  FreeMap fwd = FreeMap::identity(rank);
  FreeMap bwd = FreeMap::identity(rank);
  fwd.images[i] = Word::generator(i) * Word::generator(j, sign);
  bwd.images[i] = Word::generator(i) * Word::generator(j, -sign);
  return Automorphism(std::move(fwd), std::move(bwd));
}

Automorphism Automorphism::then(Automorphism const& next) const {
  return Automorphism(compose(forward_, next.forward_),
                      compose(next.backward_, backward_));
}

bool Automorphism::verify() const {
  FreeMap round = compose(backward_, forward_);
  return round == FreeMap::identity(rank());
}

Automorphism automorphism_to_first_letter(Word const& w,
                                          WhiteheadTrace const& trace) {
  if (!trace.primitive || !replay(trace)) {
    throw PreconditionError(
        "automorphism_to_first_letter: trace does not certify primitivity");
  }
  std::size_t const rank = trace.rank;
  Automorphism psi(rank);
  for (auto const& step : trace.steps) {
    psi = psi.then(Automorphism::whitehead(step.move, rank));
  }
  auto [core, conj] = cyclic_reduce(psi(w));
  if (core.length() != 1) {
    throw CertificationError("Whitehead trace did not reduce w to a letter");
  }
  psi = psi.then(Automorphism::inner(conj.inverse(), rank));
  Letter y = core.front();
  if (y < 0) {
    psi = psi.then(Automorphism::invert(generator_of(y), rank));
  }
  if (generator_of(y) != 0) {
    psi = psi.then(Automorphism::swap(generator_of(y), 0, rank));
  }
  if (psi(w) != Word::generator(0)) {
    throw CertificationError("basis change did not carry w to x_0");
  }
  return psi;
}

}  // namespace rankone
