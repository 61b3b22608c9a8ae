#pragma once

// Generalized Baumslag-Solitar groups: graphs of infinite cyclic groups.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankone/presentation.hpp"

namespace rankone {

// An edge from u to v with labels l (at u) and r (at v) imposes
// a_u^l = a_v^r, or a_u^l = t a_u^r t^-1 for a loop (u = v).
struct GbsEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  long long l = 1;
  long long r = 1;

  bool is_loop() const noexcept { return u == v; }
  friend bool operator==(GbsEdge const&, GbsEdge const&) = default;
};

struct GbsGraph {
  std::vector<std::string> vertices;
  std::vector<GbsEdge> edges;

  friend bool operator==(GbsGraph const&, GbsGraph const&) = default;
};

// Throws PreconditionError on a zero label, an unknown vertex or a
// disconnected graph.
void validate(GbsGraph const& g);

// `.gbs` format: lines `edge u v l r` (a loop when u = v) and optionally
// `vertex u`; vertices are named by identifiers or integers; '#' comments.
GbsGraph parse_gbs(std::string_view text);
std::string format_gbs(GbsGraph const& g);

struct GbsReduction {
  GbsGraph graph;
  std::vector<std::string> trace;
};

// Elementary collapses until every non-loop edge has both labels != +-1.
// The first collapsible edge in edge order is contracted each time: when
// |l| = 1 the vertex u is merged into v and labels at u are multiplied by
// l r; otherwise v is merged into u.
GbsReduction reduce_gbs(GbsGraph const& g);

struct GbsVerdict {
  enum class Kind { small_z, small_klein_type, small_soluble_bs,
                    infinite_dim_h2b };
  Kind kind = Kind::small_z;
  bool acylindrically_hyperbolic = false;  // never, for GBS groups
  std::string reason;
};

std::string_view to_string(GbsVerdict::Kind kind) noexcept;

// Reduces first when needed.
GbsVerdict classify_gbs(GbsGraph const& g);

struct CircleData {
  std::size_t n = 0;
  std::vector<std::string> vertices;  // traversal order
  std::vector<std::pair<long long, long long>> labels;
  long long lprod = 1;
  long long rprod = 1;
  bool coprime = false;

  friend bool operator==(CircleData const&, CircleData const&) = default;
};

// CircleData when the graph is a cycle (n vertices, n edges, every vertex of
// degree 2), read from the least vertex name in the direction giving the
// least label sequence.
std::optional<CircleData> circle_criterion(GbsGraph const& g);

// CircleData for explicit labels (l_1, r_1), ..., (l_n, r_n).
CircleData make_circle(std::vector<std::pair<long long, long long>> labels);

// The circle as a graph, vertices named by the traversal order.
GbsGraph circle_graph(CircleData const& c);

// <a_1..a_n, t | a_i^l_i a_{i+1}^-r_i (i < n), a_n^l_n t a_1^-r_n t^-1>;
// with n = 1 the generator is named a.
Presentation circle_presentation(CircleData const& c);

struct QuotientRelation {
  Alphabet alphabet;  // t, a
  Word relation;      // t a^R t^-1 a^-L
  long long R = 0;
  long long L = 0;
  std::vector<std::string> derivation;
  std::string conclusion;
};

// Throws PreconditionError when L and R are not coprime.
QuotientRelation quotient_relation(CircleData const& c);

struct TwoGeneratorReduction {
  Presentation presentation;  // generators t, a
  bool one_relator = false;
  std::vector<std::string> trace;
};

// n = 2: the Euclidean algorithm on the exponents of b = a_2 in
// b^r_1 = a^l_1 and b^l_2 = t a^r_2 t^-1 reaches b = u(t, a); substituting
// into the last relation replaced gives one relator. n >= 3: each a_i is
// written in t, a_1 by Bezout and substituted, leaving n relators. Throws
// PreconditionError for n = 1 or non-coprime input.
TwoGeneratorReduction two_generator_reduction(CircleData const& c);

// (m, n) when the single relator of a two-generator presentation is
// t a^m t^-1 a^-n, up to renaming and inverting the generators, cyclic
// permutation and inversion: the group is BS(m, n).
std::optional<std::pair<long long, long long>> match_baumslag_solitar(
    Presentation const& p);

// Recognises a two-generator one-relator presentation as the
// two_generator_reduction output for a two-edge circle, or as BS(m, n)
// = <a, t | t a^m t^-1 a^-n>, up to renaming, inverting generators, cyclic
// permutation and inversion of the relator. Returns the circle.
std::optional<CircleData> gbs_fingerprint(Presentation const& p);

}  // namespace rankone
