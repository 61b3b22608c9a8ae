#include "rankone/stallings.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <utility>

#include "rankone/error.hpp"

namespace rankone {

std::size_t SubgroupGraph::edge_count() const noexcept {
  std::size_t e = 0;
  for (auto const& row : out_) {
    for (std::size_t r = 0; r < row.size(); r += 2) {
      if (row[r] != none) {
        ++e;
      }
    }
  }
  return e;
}

std::size_t SubgroupGraph::rank() const noexcept {
  return edge_count() + 1 - vertex_count();
}

bool SubgroupGraph::is_covering() const noexcept {
  for (auto const& row : out_) {
    for (std::size_t t : row) {
      if (t == none) {
        return false;
      }
    }
  }
  return true;
}

std::size_t SubgroupGraph::read(std::size_t v, Word const& w) const {
  for (Letter l : w.letters()) {
    if (generator_of(l) >= ambient_rank_) {
      return none;
    }
    v = out(v, l);
    if (v == none) {
      return none;
    }
  }
  return v;
}

namespace {

class Folder {
 public:
  explicit Folder(std::size_t rank) : letters_(2 * rank) { add_vertex(); }

  std::size_t add_vertex() {
    parent_.push_back(parent_.size());
    size_.push_back(1);
    out_.emplace_back(letters_, SubgroupGraph::none);
    return parent_.size() - 1;
  }

  void add_edge(std::size_t u, Letter x, std::size_t v) {
    u = find(u);
    v = find(v);
    link(u, letter_rank(x), v);
    link(v, letter_rank(-x), u);
  }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void run() {
    while (!pending_.empty()) {
      auto [a, b] = pending_.front();
      pending_.pop_front();
      a = find(a);
      b = find(b);
      if (a == b) {
        continue;
      }
      if (size_[a] < size_[b]) {
        std::swap(a, b);
      }
      parent_[b] = a;
      size_[a] += size_[b];
      for (std::size_t r = 0; r < letters_; ++r) {
        std::size_t t = out_[b][r];
        if (t == SubgroupGraph::none) {
          continue;
        }
        out_[b][r] = SubgroupGraph::none;
        if (out_[a][r] == SubgroupGraph::none) {
          out_[a][r] = t;
        } else {
          pending_.emplace_back(out_[a][r], t);
        }
      }
    }
  }

  // Root-level adjacency after folding.
  std::vector<std::vector<std::size_t>> resolved() {
    std::vector<std::vector<std::size_t>> adj(
        out_.size(), std::vector<std::size_t>(letters_, SubgroupGraph::none));
    for (std::size_t v = 0; v < out_.size(); ++v) {
      if (find(v) != v) {
        continue;
      }
      for (std::size_t r = 0; r < letters_; ++r) {
        if (out_[v][r] != SubgroupGraph::none) {
          adj[v][r] = find(out_[v][r]);
        }
      }
    }
    return adj;
  }

 private:
  void link(std::size_t u, std::size_t r, std::size_t v) {
    if (out_[u][r] == SubgroupGraph::none) {
      out_[u][r] = v;
    } else {
      pending_.emplace_back(out_[u][r], v);
    }
  }

  std::size_t letters_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::vector<std::size_t>> out_;
  std::deque<std::pair<std::size_t, std::size_t>> pending_;
};

}  // namespace

SubgroupGraph fold(std::span<Word const> generators, std::size_t ambient_rank) {
  std::size_t const n = 2 * ambient_rank;
  Folder folder(ambient_rank);
  for (auto const& w : generators) {
    if (w.generator_bound() > ambient_rank) {
      throw PreconditionError("fold: generator uses letters beyond the rank");
    }
    if (w.is_identity()) {
      continue;
    }
    std::size_t current = 0;
    for (std::size_t i = 0; i < w.length(); ++i) {
      std::size_t next = i + 1 == w.length() ? 0 : folder.add_vertex();
      folder.add_edge(current, w[i], next);
      current = next;
    }
    folder.run();
  }
  std::size_t const base = folder.find(0);
  auto adj = folder.resolved();

  std::vector<bool> alive(adj.size(), false);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    alive[v] = folder.find(v) == v;
  }
  auto degree = [&](std::size_t v) {
    std::size_t d = 0;
    for (std::size_t t : adj[v]) {
      d += t != SubgroupGraph::none ? 1 : 0;
    }
    return d;
  };
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if (alive[v] && v != base && degree(v) <= 1) {
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    if (!alive[v] || v == base || degree(v) > 1) {
      continue;
    }
    alive[v] = false;
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t t = adj[v][r];
      if (t == SubgroupGraph::none) {
        continue;
      }
      adj[v][r] = SubgroupGraph::none;
      adj[t][r ^ 1u] = SubgroupGraph::none;
      if (t != base && degree(t) <= 1) {
        stack.push_back(t);
      }
    }
  }

  std::vector<std::size_t> number(adj.size(), SubgroupGraph::none);
  std::vector<std::size_t> order{base};
  number[base] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t t = adj[order[k]][r];
      if (t != SubgroupGraph::none && number[t] == SubgroupGraph::none) {
        number[t] = order.size();
        order.push_back(t);
      }
    }
  }

  SubgroupGraph g;
  g.ambient_rank_ = ambient_rank;
  g.out_.assign(order.size(), std::vector<std::size_t>(n, SubgroupGraph::none));
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      std::size_t t = adj[order[k]][r];
      if (t != SubgroupGraph::none) {
        g.out_[k][r] = number[t];
      }
    }
  }
  return g;
}

bool contains(SubgroupGraph const& g, Word const& w) {
  return g.read(g.base(), w) == g.base();
}

namespace {

struct Tree {
  std::vector<Word> path;                // base -> v along the tree
  std::vector<std::size_t> parent;       // tree parent
  std::vector<std::size_t> parent_rank;  // letter_rank of parent -> v
};

Tree spanning_tree(SubgroupGraph const& g) {
  std::size_t const n = 2 * g.ambient_rank();
  Tree tree;
  tree.path.resize(g.vertex_count());
  tree.parent.assign(g.vertex_count(), SubgroupGraph::none);
  tree.parent_rank.assign(g.vertex_count(), SubgroupGraph::none);
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> queue{g.base()};
  seen[g.base()] = true;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    std::size_t u = queue[k];
    for (std::size_t r = 0; r < n; ++r) {
      Letter x = letter_from_rank(r);
      std::size_t v = g.out(u, x);
      if (v != SubgroupGraph::none && !seen[v]) {
        seen[v] = true;
        tree.parent[v] = u;
        tree.parent_rank[v] = r;
        tree.path[v] = tree.path[u] * Word{x};
        queue.push_back(v);
      }
    }
  }
  return tree;
}

bool is_tree_edge(Tree const& tree, std::size_t u, std::size_t r,
                  std::size_t v) {
  return (tree.parent[v] == u && tree.parent_rank[v] == r)
         || (tree.parent[u] == v && tree.parent_rank[u] == (r ^ 1u));
}

// Basis index of each non-tree positive edge, keyed by (vertex, generator).
std::vector<std::vector<std::size_t>> edge_labels(SubgroupGraph const& g,
                                                  Tree const& tree,
                                                  std::vector<Word>* basis) {
  std::size_t const rank = g.ambient_rank();
  std::vector<std::vector<std::size_t>> label(
      g.vertex_count(), std::vector<std::size_t>(rank, SubgroupGraph::none));
  std::size_t next = 0;
  for (std::size_t gen = 0; gen < rank; ++gen) {
    Letter x = make_letter(gen);
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      std::size_t v = g.out(u, x);
      if (v == SubgroupGraph::none || is_tree_edge(tree, u, 2 * gen, v)) {
        continue;
      }
      label[u][gen] = next++;
      if (basis != nullptr) {
        basis->push_back(tree.path[u] * Word{x} * tree.path[v].inverse());
      }
    }
  }
  return label;
}

}  // namespace

std::vector<Word> graph_basis(SubgroupGraph const& g) {
  Tree tree = spanning_tree(g);
  std::vector<Word> basis;
  edge_labels(g, tree, &basis);
  return basis;
}

Word express_in_basis(SubgroupGraph const& g, std::span<Word const> basis,
                      Word const& w) {
  Tree tree = spanning_tree(g);
  std::vector<Word> own;
  auto label = edge_labels(g, tree, &own);
  if (!std::equal(basis.begin(), basis.end(), own.begin(), own.end())) {
    throw PreconditionError("express_in_basis: basis is not graph_basis(g)");
  }
  std::vector<Letter> out;
  std::size_t u = g.base();
  for (Letter y : w.letters()) {
    std::size_t v = generator_of(y) < g.ambient_rank() ? g.out(u, y)
                                                       : SubgroupGraph::none;
    if (v == SubgroupGraph::none) {
      throw PreconditionError("express_in_basis: word not in the subgroup");
    }
    std::size_t gen = generator_of(y);
    std::size_t from = y > 0 ? u : v;
    std::size_t idx = label[from][gen];
    if (idx != SubgroupGraph::none) {
      out.push_back(make_letter(idx, sign_of(y)));
    }
    u = v;
  }
  if (u != g.base()) {
    throw PreconditionError("express_in_basis: word not in the subgroup");
  }
  return Word(std::move(out));
}

Word express_in_basis(SubgroupGraph const& g, Word const& w) {
  auto basis = graph_basis(g);
  return express_in_basis(g, basis, w);
}

}  // namespace rankone
