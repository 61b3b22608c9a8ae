#include "rankone/subgroup.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "rankone/error.hpp"

namespace rankone {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}

std::size_t CosetTable::act(std::size_t coset, Word const& w) const {
  for (Letter l : w.letters()) {
    coset = act(coset, l);
  }
  return coset;
}

std::vector<std::size_t> CosetTable::flat() const {
  std::vector<std::size_t> out;
  out.reserve(index * action.size());
  for (std::size_t c = 0; c < index; ++c) {
    for (auto const& col : action) {
      out.push_back(col[c]);
    }
  }
  return out;
}

bool CosetTable::verify() const {
  if (index == 0 || action.size() != 2 * parent.rank()) {
    return false;
  }
  for (std::size_t r = 0; r < action.size(); ++r) {
    if (action[r].size() != index) {
      return false;
    }
    for (std::size_t c = 0; c < index; ++c) {
      if (action[r][c] >= index || action[r ^ 1u][action[r][c]] != c) {
        return false;
      }
    }
  }
  for (auto const& h : subgroup_generators) {
    if (act(0, h) != 0) {
      return false;
    }
  }
  for (auto const& rel : parent.relators) {
    for (std::size_t c = 0; c < index; ++c) {
      if (act(c, rel) != c) {
        return false;
      }
    }
  }
  return true;
}

std::strong_ordering canonical_compare(CosetTable const& a,
                                       CosetTable const& b) {
  if (auto cmp = a.index <=> b.index; cmp != 0) {
    return cmp;
  }
  return a.flat() <=> b.flat();
}

bool same_subgroup_table(CosetTable const& a, CosetTable const& b) {
  return a.index == b.index && a.action == b.action;
}

CosetTable standardize(CosetTable t) {
  std::vector<std::size_t> number(t.index, kNone);
  std::vector<std::size_t> order{0};
  number[0] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (auto const& col : t.action) {
      std::size_t d = col[order[k]];
      if (number[d] == kNone) {
        number[d] = order.size();
        order.push_back(d);
      }
    }
  }
  if (order.size() != t.index) {
    throw CertificationError("coset table is not transitive");
  }
  auto old = t.action;
  for (std::size_t r = 0; r < old.size(); ++r) {
    for (std::size_t c = 0; c < t.index; ++c) {
      t.action[r][number[c]] = number[old[r][c]];
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Coset enumeration

namespace {

class Enumerator {
 public:
  Enumerator(std::size_t rank, std::size_t max_cosets, Deadline const& deadline)
      : cols_(2 * rank), max_(max_cosets), deadline_(deadline) {
    new_coset();
  }

  void run(Presentation const& p, std::vector<Word> const& subgens) {
    for (auto const& h : subgens) {
      if (!h.is_identity()) {
        scan_and_fill(0, h);
      }
    }
    for (std::size_t c = 0; c < rows_.size(); ++c) {
      if ((c & 255u) == 0) {
        deadline_.check("coset enumeration");
      }
      for (auto const& r : p.relators) {
        if (!live(c)) {
          break;
        }
        scan_and_fill(c, r);
      }
      for (std::size_t x = 0; x < cols_ && live(c); ++x) {
        if (rows_[c][x] == kNone) {
          define(c, x);
        }
      }
    }
  }

  CosetTable table(Presentation const& p, std::vector<Word> const& subgens) {
    std::vector<std::size_t> number(rows_.size(), kNone);
    std::size_t n = 0;
    for (std::size_t c = 0; c < rows_.size(); ++c) {
      if (live(c)) {
        number[c] = n++;
      }
    }
    CosetTable t;
    t.parent = p;
    t.index = n;
    t.subgroup_generators = subgens;
    t.action.assign(cols_, std::vector<std::size_t>(n, kNone));
    for (std::size_t c = 0; c < rows_.size(); ++c) {
      if (!live(c)) {
        continue;
      }
      for (std::size_t x = 0; x < cols_; ++x) {
        t.action[x][number[c]] = number[rep(rows_[c][x])];
      }
    }
    return standardize(std::move(t));
  }

 private:
  bool live(std::size_t c) const { return forward_[c] == c; }

  std::size_t new_coset() {
    if (live_count_ >= max_) {
      throw BudgetExhausted("coset enumeration exceeded "
                            + std::to_string(max_) + " live cosets");
    }
    rows_.emplace_back(cols_, kNone);
    forward_.push_back(rows_.size() - 1);
    ++live_count_;
    return rows_.size() - 1;
  }

  void define(std::size_t c, std::size_t x) {
    std::size_t d = new_coset();
    rows_[c][x] = d;
    rows_[d][x ^ 1u] = c;
  }

  std::size_t rep(std::size_t c) {
    std::size_t root = c;
    while (forward_[root] != root) {
      root = forward_[root];
    }
    while (forward_[c] != root) {
      std::size_t next = forward_[c];
      forward_[c] = root;
      c = next;
    }
    return root;
  }

  void merge(std::size_t k, std::size_t l, std::vector<std::size_t>& queue) {
    std::size_t a = rep(k);
    std::size_t b = rep(l);
    if (a == b) {
      return;
    }
    if (a > b) {
      std::swap(a, b);
    }
    forward_[b] = a;
    --live_count_;
    queue.push_back(b);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::size_t g = queue[i];
      for (std::size_t x = 0; x < cols_; ++x) {
        std::size_t d = rows_[g][x];
        if (d == kNone) {
          continue;
        }
        rows_[d][x ^ 1u] = kNone;
        std::size_t mu = rep(g);
        std::size_t nu = rep(d);
        if (rows_[mu][x] != kNone) {
          merge(nu, rows_[mu][x], queue);
        } else if (rows_[nu][x ^ 1u] != kNone) {
          merge(mu, rows_[nu][x ^ 1u], queue);
        } else {
          rows_[mu][x] = nu;
          rows_[nu][x ^ 1u] = mu;
        }
      }
    }
  }

  void scan_and_fill(std::size_t c, Word const& w) {
    std::size_t const m = w.length();
    std::size_t f = c;
    std::size_t b = c;
    std::size_t i = 0;
    std::size_t j = m;  // exclusive
    while (true) {
      while (i < j && rows_[f][letter_rank(w[i])] != kNone) {
        f = rows_[f][letter_rank(w[i])];
        ++i;
      }
      if (i == j) {
        if (f != b) {
          coincidence(f, b);
        }
        return;
      }
      while (j > i && rows_[b][letter_rank(w[j - 1]) ^ 1u] != kNone) {
        b = rows_[b][letter_rank(w[j - 1]) ^ 1u];
        --j;
      }
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        std::size_t x = letter_rank(w[i]);
        rows_[f][x] = b;
        rows_[b][x ^ 1u] = f;
        return;
      }
      define(f, letter_rank(w[i]));
    }
  }

  std::size_t cols_;
  std::size_t max_;
  Deadline deadline_;
  std::size_t live_count_ = 0;
  std::vector<std::vector<std::size_t>> rows_;
  std::vector<std::size_t> forward_;
};

}  // namespace

CosetTable coset_enumerate(Presentation const& p,
                           std::vector<Word> const& subgroup_generators,
                           std::size_t max_cosets, Deadline const& deadline) {
  if (max_cosets == 0) {
    throw PreconditionError("coset_enumerate: max_cosets must be positive");
  }
  for (auto const& h : subgroup_generators) {
    if (h.generator_bound() > p.rank()) {
      throw PreconditionError("coset_enumerate: subgroup generator uses "
                              "letters outside the presentation");
    }
  }
  Enumerator e(p.rank(), max_cosets, deadline);
  e.run(p, subgroup_generators);
  CosetTable t = e.table(p, subgroup_generators);
  if (!t.verify()) {
    throw CertificationError("coset enumeration produced an invalid table");
  }
  return t;
}

// ---------------------------------------------------------------------------
// Low-index subgroups

namespace {

struct SimsState {
  std::vector<std::size_t> tab;  // row-major, cols entries per coset
  std::size_t n = 1;
};

class Sims {
 public:
  Sims(Presentation const& p, LowIndexOptions const& options)
      : p_(p),
        cols_(2 * p.rank()),
        max_(options.max_index),
        must_(options.must_contain),
        deadline_(options.deadline),
        conjugates_(cols_) {
    for (auto const& r : p.relators) {
      for (Word const& v : {r, r.inverse()}) {
        for (std::size_t k = 0; k < v.length(); ++k) {
          Word const w = rotate(v, k);
          std::vector<std::size_t> rot;
          for (Letter l : w.letters()) {
            rot.push_back(letter_rank(l));
          }
          auto& bucket = conjugates_[rot.front()];
          if (std::find(bucket.begin(), bucket.end(), rot) == bucket.end()) {
            bucket.push_back(std::move(rot));
          }
        }
      }
    }
    for (auto const& w : must_) {
      std::vector<std::size_t> ranks;
      for (Letter l : w.letters()) {
        ranks.push_back(letter_rank(l));
      }
      must_ranks_.push_back(std::move(ranks));
    }
    to_new_.resize(max_);
    to_old_.reserve(max_);
    trail_.reserve(2 * max_ * cols_);
  }

  SimsState root() {
    SimsState s;
    s.tab.assign(max_ * cols_, kNone);
    s.n = 1;
    return s;
  }

  // Brings a fresh state to consistency; false on contradiction.
  bool close_root(SimsState& s) {
    trail_.clear();
    queue_.clear();
    return process(s);
  }

  // Children of a state in branch order (empty for complete states).
  std::vector<SimsState> children(SimsState const& s) {
    std::vector<SimsState> out;
    std::size_t pos = first_undefined(s);
    if (pos == kNone) {
      return out;
    }
    std::size_t c = pos / cols_;
    std::size_t r = pos % cols_;
    for (std::size_t d = 0; d <= s.n && d < max_; ++d) {
      if (d < s.n && s.tab[d * cols_ + (r ^ 1u)] != kNone) {
        continue;
      }
      SimsState child = s;
      if (d == s.n) {
        ++child.n;
      }
      trail_.clear();
      queue_.clear();
      set(child, c, r, d);
      if (process(child) && (!must_.empty() || partial_canonical(child))) {
        out.push_back(std::move(child));
      }
    }
    return out;
  }

  void search(SimsState& s, std::vector<CosetTable>& out) {
    if ((++nodes_ & 1023u) == 0) {
      deadline_.check("low-index subgroup search");
    }
    std::size_t pos = first_undefined(s);
    if (pos == kNone) {
      emit(s, out);
      return;
    }
    std::size_t c = pos / cols_;
    std::size_t r = pos % cols_;
    for (std::size_t d = 0; d <= s.n && d < max_; ++d) {
      if (d < s.n && s.tab[d * cols_ + (r ^ 1u)] != kNone) {
        continue;
      }
      std::size_t mark = trail_.size();
      bool fresh = d == s.n;
      if (fresh) {
        ++s.n;
      }
      queue_.clear();
      set(s, c, r, d);
      if (process(s) && (!must_.empty() || partial_canonical(s))) {
        search(s, out);
      }
      while (trail_.size() > mark) {
        s.tab[trail_.back()] = kNone;
        trail_.pop_back();
      }
      if (fresh) {
        --s.n;
      }
    }
  }

  bool complete(SimsState const& s) const { return first_undefined(s) == kNone; }

  void emit(SimsState const& s, std::vector<CosetTable>& out) {
    if (!must_.empty() && !constrained_canonical(s)) {
      return;
    }
    CosetTable t;
    t.parent = p_;
    t.index = s.n;
    t.action.assign(cols_, std::vector<std::size_t>(s.n));
    for (std::size_t c = 0; c < s.n; ++c) {
      for (std::size_t r = 0; r < cols_; ++r) {
        t.action[r][c] = s.tab[c * cols_ + r];
      }
    }
    if (!t.verify()) {
      throw CertificationError("low-index search produced an invalid table");
    }
    out.push_back(std::move(t));
  }

 private:
  std::size_t first_undefined(SimsState const& s) const {
    for (std::size_t pos = 0; pos < s.n * cols_; ++pos) {
      if (s.tab[pos] == kNone) {
        return pos;
      }
    }
    return kNone;
  }

  void set(SimsState& s, std::size_t c, std::size_t r, std::size_t d) {
    s.tab[c * cols_ + r] = d;
    s.tab[d * cols_ + (r ^ 1u)] = c;
    trail_.push_back(c * cols_ + r);
    trail_.push_back(d * cols_ + (r ^ 1u));
    queue_.emplace_back(c, r);
    queue_.emplace_back(d, r ^ 1u);
  }

  // Scans w around coset c, making the single deduction a one-entry gap
  // forces. False on contradiction.
  bool scan(SimsState& s, std::size_t c, std::vector<std::size_t> const& w) {
    std::size_t const m = w.size();
    std::size_t f = c;
    std::size_t i = 0;
    while (i < m) {
      std::size_t next = s.tab[f * cols_ + w[i]];
      if (next == kNone) {
        break;
      }
      f = next;
      ++i;
    }
    if (i == m) {
      return f == c;
    }
    std::size_t b = c;
    std::size_t j = m;
    while (j > i) {
      std::size_t next = s.tab[b * cols_ + (w[j - 1] ^ 1u)];
      if (next == kNone) {
        break;
      }
      b = next;
      --j;
    }
    if (j == i) {
      return f == b;
    }
    if (j == i + 1) {
      std::size_t r = w[i];
      if (s.tab[b * cols_ + (r ^ 1u)] != kNone) {
        return false;
      }
      set(s, f, r, b);
    }
    return true;
  }

  bool process(SimsState& s) {
    while (true) {
      while (!queue_.empty()) {
        auto [c, r] = queue_.back();
        queue_.pop_back();
        for (auto const& w : conjugates_[r]) {
          if (!scan(s, c, w)) {
            return false;
          }
        }
      }
      for (auto const& w : must_ranks_) {
        if (!scan(s, 0, w)) {
          return false;
        }
      }
      if (queue_.empty()) {
        return true;
      }
    }
  }

  // Compares the table re-rooted at coset `c` (and renumbered in BFS order)
  // with the table itself, position by position. Returns -1 if the re-rooted
  // table is smaller, +1 if larger, 0 if equal or undecided.
  int compare_reroot(SimsState const& s, std::size_t c) {
    std::fill(to_new_.begin(), to_new_.begin() + s.n, kNone);
    to_old_.clear();
    to_new_[c] = 0;
    to_old_.push_back(c);
    for (std::size_t k = 0; k < to_old_.size(); ++k) {
      for (std::size_t r = 0; r < cols_; ++r) {
        std::size_t v = s.tab[to_old_[k] * cols_ + r];
        std::size_t ov = s.tab[k * cols_ + r];
        if (v == kNone || ov == kNone) {
          return 0;
        }
        if (to_new_[v] == kNone) {
          to_new_[v] = to_old_.size();
          to_old_.push_back(v);
        }
        if (to_new_[v] != ov) {
          return to_new_[v] < ov ? -1 : 1;
        }
      }
    }
    return 0;
  }

  bool partial_canonical(SimsState const& s) {
    for (std::size_t c = 1; c < s.n; ++c) {
      if (compare_reroot(s, c) < 0) {
        return false;
      }
    }
    return true;
  }

  bool constrained_canonical(SimsState const& s) {
    for (std::size_t c = 1; c < s.n; ++c) {
      bool fixed = std::all_of(must_.begin(), must_.end(), [&](Word const& w) {
        std::size_t x = c;
        for (Letter l : w.letters()) {
          x = s.tab[x * cols_ + letter_rank(l)];
        }
        return x == c;
      });
      if (fixed && compare_reroot(s, c) < 0) {
        return false;
      }
    }
    return true;
  }

  Presentation const& p_;
  std::size_t cols_;
  std::size_t max_;
  std::vector<Word> must_;
  Deadline deadline_;
  std::vector<std::vector<std::size_t>> must_ranks_;
  std::vector<std::vector<std::vector<std::size_t>>> conjugates_;
  std::vector<std::size_t> to_new_;
  std::vector<std::size_t> to_old_;
  std::vector<std::size_t> trail_;
  std::vector<std::pair<std::size_t, std::size_t>> queue_;
  std::size_t nodes_ = 0;
};

}  // namespace

std::vector<CosetTable> low_index_subgroups(Presentation const& p,
                                            LowIndexOptions const& options) {
  if (options.max_index == 0) {
    throw PreconditionError("low_index_subgroups: max_index must be >= 1");
  }
  for (auto const& w : options.must_contain) {
    if (w.generator_bound() > p.rank()) {
      throw PreconditionError("low_index_subgroups: constraint uses letters "
                              "outside the presentation");
    }
  }
  std::vector<CosetTable> out;
  if (p.rank() == 0) {
    CosetTable t;
    t.parent = p;
    t.index = 1;
    out.push_back(std::move(t));
    return out;
  }
  Sims sims(p, options);
  SimsState root = sims.root();
  if (!sims.close_root(root)) {
    return out;
  }
  std::size_t const jobs = std::max<std::size_t>(options.jobs, 1);
  if (jobs == 1) {
    sims.search(root, out);
  } else {
    // Split the tree into a frontier of subtrees in branch order, then share
    // the subtrees among the workers.
    std::vector<SimsState> frontier{root};
    for (int round = 0; round < 8 && frontier.size() < 16 * jobs; ++round) {
      std::vector<SimsState> next;
      bool grew = false;
      for (auto& s : frontier) {
        if (sims.complete(s)) {
          next.push_back(std::move(s));
          continue;
        }
        for (auto& child : sims.children(s)) {
          next.push_back(std::move(child));
        }
        grew = true;
      }
      frontier = std::move(next);
      if (!grew) {
        break;
      }
    }
    std::vector<std::vector<CosetTable>> parts(frontier.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
      Sims local(p, options);
      while (!failed) {
        std::size_t k = cursor++;
        if (k >= frontier.size()) {
          return;
        }
        try {
          SimsState s = frontier[k];
          local.search(s, parts[k]);
        } catch (...) {
          if (!failed.exchange(true)) {
            failure = std::current_exception();
          }
        }
      }
    };
    std::vector<std::thread> threads;
    for (std::size_t j = 0; j < jobs; ++j) {
      threads.emplace_back(worker);
    }
    for (auto& t : threads) {
      t.join();
    }
    if (failure) {
      std::rethrow_exception(failure);
    }
    for (auto& part : parts) {
      for (auto& t : part) {
        out.push_back(std::move(t));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
    return canonical_compare(a, b) < 0;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Transversals and rewriting

std::vector<Word> schreier_transversal(CosetTable const& t) {
  std::vector<Word> reps(t.index);
  std::vector<bool> seen(t.index, false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    std::size_t c = queue[k];
    for (std::size_t r = 0; r < t.action.size(); ++r) {
      std::size_t d = t.action[r][c];
      if (!seen[d]) {
        seen[d] = true;
        reps[d] = reps[c] * Word{letter_from_rank(r)};
        queue.push_back(d);
      }
    }
  }
  return reps;
}

RewrittenPresentation reidemeister_schreier(Presentation const& p,
                                            CosetTable const& t) {
  if (t.action.size() != 2 * p.rank() || !t.verify()) {
    throw PreconditionError("reidemeister_schreier: table does not belong to "
                            "the presentation");
  }
  for (auto const& rel : p.relators) {
    for (std::size_t c = 0; c < t.index; ++c) {
      if (t.act(c, rel) != c) {
        throw PreconditionError(
            "reidemeister_schreier: table does not satisfy the relators");
      }
    }
  }
  auto reps = schreier_transversal(t);
  RewrittenPresentation out;
  std::vector<std::vector<std::size_t>> id(t.index,
                                           std::vector<std::size_t>(p.rank()));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < t.index; ++c) {
    for (std::size_t x = 0; x < p.rank(); ++x) {
      Letter l = make_letter(x);
      Word y = reps[c] * Word{l} * reps[t.act(c, l)].inverse();
      if (y.is_identity()) {
        id[c][x] = kNone;
        ++out.dropped;
        continue;
      }
      id[c][x] = out.origin.size();
      out.origin.push_back(std::move(y));
      names.push_back(p.generators.name(x) + "_" + std::to_string(c + 1));
    }
  }
  Alphabet alphabet;
  try {
    alphabet = Alphabet(names);
  } catch (PreconditionError const&) {
    alphabet = Alphabet::numbered("y", names.size());
  }
  std::vector<Word> relators;
  for (std::size_t c = 0; c < t.index; ++c) {
    for (std::size_t k = 0; k < p.relators.size(); ++k) {
      std::vector<Letter> raw;
      std::size_t at = c;
      for (Letter l : p.relators[k].letters()) {
        std::size_t x = generator_of(l);
        if (l > 0) {
          if (id[at][x] != kNone) {
            raw.push_back(make_letter(id[at][x]));
          }
          at = t.act(at, l);
        } else {
          std::size_t from = t.act(at, l);
          if (id[from][x] != kNone) {
            raw.push_back(make_letter(id[from][x], -1));
          }
          at = from;
        }
      }
      Word rewritten(std::move(raw));
      out.raw_relators.push_back(rewritten);
      out.sources.emplace_back(c, k);
      relators.push_back(cyclic_reduce(rewritten).core);
    }
  }
  out.presentation = Presentation{std::move(alphabet), std::move(relators)};
  return out;
}

}  // namespace rankone
