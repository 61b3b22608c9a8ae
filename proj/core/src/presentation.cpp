#include "rankone/presentation.hpp"

#include <algorithm>
#include <cstdlib>

#include "rankone/detail/text.hpp"
#include "rankone/error.hpp"

namespace rankone {

Presentation make_presentation(Alphabet generators, std::vector<Word> relators,
                               std::vector<std::string>* warnings) {
  Presentation p{std::move(generators), {}};
  for (std::size_t i = 0; i < relators.size(); ++i) {
    if (relators[i].generator_bound() > p.rank()) {
      throw PreconditionError("relator uses a generator outside the alphabet");
    }
    Word core = cyclic_reduce(relators[i]).core;
    if (core.is_identity()) {
      if (warnings != nullptr) {
        warnings->push_back("relator " + std::to_string(i + 1)
                            + " is trivial and was dropped");
      }
      continue;
    }
    p.relators.push_back(std::move(core));
  }
  return p;
}

namespace {

using detail::SourcePos;

// Blanks out comments so that offsets into the text keep their positions.
std::string without_comments(std::string_view text) {
  std::string out(text);
  bool in_comment = false;
  for (char& c : out) {
    if (c == '\n') {
      in_comment = false;
    } else if (c == '#') {
      in_comment = true;
    }
    if (in_comment) {
      c = ' ';
    }
  }
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

}  // namespace

Presentation parse_presentation(std::string_view source,
                                std::vector<std::string>* warnings) {
  std::string const text = without_comments(source);
  auto pos_of = [&](std::size_t offset) {
    return detail::advance(SourcePos{}, std::string_view(text).substr(0, offset));
  };
  auto fail = [&](std::string const& msg, std::size_t offset) -> void {
    auto p = pos_of(offset);
    throw ParseError(msg, p.line, p.column);
  };
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && is_space(text[i])) {
      ++i;
    }
  };

  skip();
  if (i >= text.size() || text[i] != '<') {
    fail("expected '<'", i);
  }
  ++i;

  std::vector<std::string> names;
  std::vector<std::size_t> name_offsets;
  while (true) {
    skip();
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i]) && text[i] != ','
           && text[i] != '|' && text[i] != '>') {
      ++i;
    }
    std::string name = text.substr(start, i - start);
    if (!is_identifier(name) || name == "e") {
      fail(name.empty() ? "expected generator name"
                        : "invalid generator name '" + name + "'",
           start);
    }
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      fail("duplicate generator '" + name + "'", start);
    }
    names.push_back(name);
    name_offsets.push_back(start);
    skip();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    if (i < text.size() && text[i] == '|') {
      ++i;
      break;
    }
    fail("expected ',' or '|'", i);
  }
  Alphabet alphabet(names);

  std::vector<Word> relators;
  skip();
  if (i < text.size() && text[i] == '>') {
    ++i;
  } else {
    while (true) {
      std::size_t start = i;
      while (i < text.size() && text[i] != ',' && text[i] != '>') {
        ++i;
      }
      if (i >= text.size()) {
        fail("expected '>'", i);
      }
      relators.push_back(detail::parse_word_at(
          std::string_view(text).substr(start, i - start), alphabet,
          pos_of(start)));
      if (text[i] == '>') {
        ++i;
        break;
      }
      ++i;
    }
  }
  skip();
  if (i != text.size()) {
    fail("unexpected text after '>'", i);
  }
  return make_presentation(std::move(alphabet), std::move(relators), warnings);
}

std::string format_presentation(Presentation const& p) {
  std::string out = "< ";
  for (std::size_t i = 0; i < p.rank(); ++i) {
    out += (i == 0 ? "" : ", ") + p.generators.name(i);
  }
  out += " |";
  for (std::size_t i = 0; i < p.relators.size(); ++i) {
    out += (i == 0 ? " " : ", ") + format_word(p.relators[i], p.generators);
  }
  out += " >";
  return out;
}

std::vector<long long> exponent_sum(Presentation const& p, std::size_t gen) {
  if (gen >= p.rank()) {
    throw PreconditionError("exponent_sum: unknown generator");
  }
  std::vector<long long> out;
  for (auto const& r : p.relators) {
    out.push_back(r.exponent_sum(gen));
  }
  return out;
}

std::vector<long long> exponent_sum(Presentation const& p,
                                    std::string_view gen) {
  auto idx = p.generators.index(gen);
  if (!idx) {
    throw PreconditionError("exponent_sum: unknown generator '"
                            + std::string(gen) + "'");
  }
  return exponent_sum(p, *idx);
}

// ---------------------------------------------------------------------------
// Tietze

std::string describe(TietzeMove const& move) {
  if (move.kind == TietzeMove::Kind::drop_identity) {
    return "drop trivial relator " + std::to_string(move.relator + 1);
  }
  return "eliminate " + move.generator + " = " + move.definition
         + " using relator " + std::to_string(move.relator + 1);
}

TietzeResult tietze_simplify(Presentation const& input, std::size_t budget) {
  TietzeResult result{input, {}, false};
  Presentation& p = result.presentation;
  std::size_t steps = 0;
  while (true) {
    auto trivial = std::find_if(p.relators.begin(), p.relators.end(),
                                [](Word const& r) { return r.is_identity(); });
    if (trivial != p.relators.end()) {
      if (steps++ == budget) {
        result.exhausted = true;
        return result;
      }
      auto idx = static_cast<std::size_t>(trivial - p.relators.begin());
      result.trace.push_back(
          TietzeMove{TietzeMove::Kind::drop_identity, idx, {}, {}});
      p.relators.erase(trivial);
      continue;
    }

    std::vector<std::size_t> order(p.relators.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
      return p.relators[a].length() < p.relators[b].length();
    });
    std::optional<std::pair<std::size_t, std::size_t>> choice;
    for (std::size_t ri : order) {
      Word const& r = p.relators[ri];
      for (std::size_t g = p.rank(); g-- > 0;) {
        if (r.occurrences(g) == 1) {
          choice.emplace(ri, g);
          break;
        }
      }
      if (choice) {
        break;
      }
    }
    if (!choice) {
      return result;
    }
    if (steps++ == budget) {
      result.exhausted = true;
      return result;
    }
    auto [ri, g] = *choice;
    Word const& r = p.relators[ri];
    std::size_t at = 0;
    while (generator_of(r[at]) != g) {
      ++at;
    }
    // r rotated to x^e u, so x = u^-e.
    Word u = rotate(r, at + 1);
    u = Word(std::vector<Letter>(u.vec().begin(), u.vec().end() - 1));
    Word value = sign_of(r[at]) > 0 ? u.inverse() : u;

    std::vector<Word> images;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < p.rank(); ++k) {
      if (k == g) {
        continue;
      }
      images.push_back(Word::generator(names.size()));
      names.push_back(p.generators.name(k));
    }
    std::vector<Word> full;
    for (std::size_t k = 0, j = 0; k < p.rank(); ++k) {
      full.push_back(k == g ? Word{} : images[j++]);
    }
    Word renamed = value.substitute(full);
    full[g] = renamed;

    TietzeMove move{TietzeMove::Kind::eliminate, ri, p.generators.name(g),
                    format_word(value, p.generators)};
    std::vector<Word> relators;
    for (std::size_t k = 0; k < p.relators.size(); ++k) {
      if (k != ri) {
        relators.push_back(cyclic_reduce(p.relators[k].substitute(full)).core);
      }
    }
    p = Presentation{Alphabet(std::move(names)), std::move(relators)};
    result.trace.push_back(std::move(move));
  }
}

// ---------------------------------------------------------------------------
// One-relator splitting

std::string_view to_string(HnnSplitting::Kind kind) noexcept {
  switch (kind) {
    case HnnSplitting::Kind::ascending_strict:
      return "ascending-strict";
    case HnnSplitting::Kind::ascending_equal:
      return "ascending-equal";
    case HnnSplitting::Kind::both_proper:
      return "both-proper";
    case HnnSplitting::Kind::not_found:
      return "not-found";
  }
  return "not-found";
}

namespace {

// x_i -> x_i x_j^k.
Automorphism transvection(std::size_t i, std::size_t j, long long k,
                          std::size_t rank) {
  FreeMap fwd = FreeMap::identity(rank);
  FreeMap bwd = FreeMap::identity(rank);
  fwd.images[i] = Word::generator(i) * Word::generator(j).pow(k);
  bwd.images[i] = Word::generator(i) * Word::generator(j).pow(-k);
  return Automorphism(std::move(fwd), std::move(bwd));
}

}  // namespace

HnnSplitting one_relator_hnn_split(Presentation const& p) {
  if (p.rank() != 2 || p.relators.size() != 1) {
    throw PreconditionError(
        "one_relator_hnn_split needs 2 generators and 1 relator");
  }
  HnnSplitting s;
  s.basis_change = Automorphism(2);
  Word r = p.relators.front();
  long long sigma[2] = {r.exponent_sum(0), r.exponent_sum(1)};
  auto const& names = p.generators.names();
  while (sigma[0] != 0 && sigma[1] != 0) {
    // Reduce the larger sum modulo the smaller: x_j -> x_j x_i^q changes
    // sigma_i by q sigma_j.
    std::size_t big = std::llabs(sigma[0]) >= std::llabs(sigma[1]) ? 0 : 1;
    std::size_t small = 1 - big;
    long long q = -(sigma[big] / sigma[small]);
    s.basis_change = s.basis_change.then(transvection(small, big, q, 2));
    sigma[big] += q * sigma[small];
    s.trace.push_back("substitute " + names[small] + " -> " + names[small]
                      + " " + names[big] + "^" + std::to_string(q)
                      + " (exponent sums now " + std::to_string(sigma[0])
                      + ", " + std::to_string(sigma[1]) + ")");
  }
  s.relator = cyclic_reduce(s.basis_change(r)).core;
  s.stable = sigma[0] == 0 ? 0 : 1;
  std::size_t const a = 1 - s.stable;
  s.trace.push_back("stable letter " + names[s.stable]);

  struct Syllable {
    long long height;
    int sign;
  };
  std::vector<Syllable> seq;
  long long h = 0;
  for (Letter l : s.relator.letters()) {
    if (generator_of(l) == s.stable) {
      h += sign_of(l);
    } else {
      seq.push_back({h, sign_of(l)});
    }
  }
  if (seq.empty()) {
    return s;
  }
  long long lo = seq.front().height;
  long long hi = lo;
  for (auto const& x : seq) {
    lo = std::min(lo, x.height);
    hi = std::max(hi, x.height);
  }
  s.shift = lo;
  s.top = static_cast<std::size_t>(hi - lo);
  std::vector<Letter> magnus;
  for (auto const& x : seq) {
    magnus.push_back(make_letter(static_cast<std::size_t>(x.height - lo), x.sign));
  }
  s.magnus_relator = Word(std::move(magnus));
  Word const t = Word::generator(s.stable);
  for (std::size_t k = 0; k <= s.top; ++k) {
    Word tk = t.pow(static_cast<long long>(k) + lo);
    s.vertex_generators.push_back(
        s.basis_change.apply_inverse(tk * Word::generator(a) * tk.inverse()));
  }
  s.lowest_occurrences = s.magnus_relator.occurrences(0);
  s.highest_occurrences = s.magnus_relator.occurrences(s.top);
  if (s.top == 0) {
    s.trace.push_back("relator is a power of a single conjugate; no splitting");
    return s;
  }
  bool const up = s.highest_occurrences == 1;
  bool const down = s.lowest_occurrences == 1;
  if (up && down) {
    s.kind = HnnSplitting::Kind::ascending_equal;
  } else if (up || down) {
    s.kind = HnnSplitting::Kind::ascending_strict;
  } else {
    s.kind = HnnSplitting::Kind::both_proper;
  }
  s.trace.push_back("Magnus relator over a_0..a_" + std::to_string(s.top)
                    + ": extremes occur " + std::to_string(s.lowest_occurrences)
                    + " and " + std::to_string(s.highest_occurrences)
                    + " times");
  if (!up && !down) {
    return s;
  }

  // Solve the relator for the extreme letter that occurs once.
  std::size_t const solved = up ? s.top : 0;
  Word const& m = s.magnus_relator;
  std::size_t at = 0;
  while (generator_of(m[at]) != solved) {
    ++at;
  }
  Word rest = rotate(m, at + 1);
  rest = Word(std::vector<Letter>(rest.vec().begin(), rest.vec().end() - 1));
  Word value = sign_of(m[at]) > 0 ? rest.inverse() : rest;

  std::size_t const offset = up ? 0 : 1;
  std::vector<Word> rename(s.top + 1);
  for (std::size_t k = 0; k < s.top; ++k) {
    rename[k + offset] = Word::generator(k);
  }
  value = value.substitute(rename);
  s.stable_sign = up ? 1 : -1;
  for (std::size_t k = 0; k < s.top; ++k) {
    s.free_basis.push_back(s.vertex_generators[k + offset]);
  }
  for (std::size_t k = 0; k < s.top; ++k) {
    bool last = up ? k + 1 == s.top : k == 0;
    if (last) {
      s.images.push_back(value);
    } else {
      s.images.push_back(Word::generator(up ? k + 1 : k - 1));
    }
  }
  return s;
}

}  // namespace rankone
