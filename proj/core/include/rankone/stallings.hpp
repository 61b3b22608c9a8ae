#pragma once

// Stallings graphs: folded core graphs of finitely generated subgroups of a
// free group, with membership tests and free bases.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rankone/word.hpp"

namespace rankone {

// A folded core graph. Vertices are numbered 0..V-1 in BFS order from the
// base vertex 0, scanning letters by letter_rank. out(v, l) is the endpoint
// of the edge leaving v labelled l (inverse letters walk edges backwards).
class SubgroupGraph {
 public:
  static constexpr std::size_t none = static_cast<std::size_t>(-1);

  SubgroupGraph() = default;

  std::size_t ambient_rank() const noexcept { return ambient_rank_; }
  std::size_t vertex_count() const noexcept { return out_.size(); }
  std::size_t edge_count() const noexcept;
  std::size_t base() const noexcept { return 0; }
  // E - V + 1.
  std::size_t rank() const noexcept;
  // True when every vertex has every outgoing letter, i.e. finite index.
  bool is_covering() const noexcept;

  std::size_t out(std::size_t v, Letter l) const {
    return out_[v][letter_rank(l)];
  }

  // Endpoint of the path labelled w starting at v, or none.
  std::size_t read(std::size_t v, Word const& w) const;

  friend bool operator==(SubgroupGraph const&, SubgroupGraph const&) = default;

  friend SubgroupGraph fold(std::span<Word const> generators,
                            std::size_t ambient_rank);

 private:
  std::size_t ambient_rank_ = 0;
  std::vector<std::vector<std::size_t>> out_;
};

// Folded core graph of the subgroup generated by `generators`. The trivial
// subgroup is a single vertex with no edges.
SubgroupGraph fold(std::span<Word const> generators, std::size_t ambient_rank);
inline SubgroupGraph fold(std::vector<Word> const& generators,
                          std::size_t ambient_rank) {
  return fold(std::span<Word const>(generators), ambient_rank);
}

bool contains(SubgroupGraph const& g, Word const& w);

// Free basis read from the BFS spanning tree: one word per non-tree edge
// u -x-> v (x a positive letter), ordered by x and then by u, namely
// path(u) x path(v)^-1.
std::vector<Word> graph_basis(SubgroupGraph const& g);

// Rewrites w as a word in the basis letters (generator i = basis[i]).
// Throws PreconditionError when w is not in the subgroup or `basis` is not
// graph_basis(g).
Word express_in_basis(SubgroupGraph const& g, std::span<Word const> basis,
                      Word const& w);
Word express_in_basis(SubgroupGraph const& g, Word const& w);

}  // namespace rankone
