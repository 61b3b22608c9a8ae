#include "rankone/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>

#include "rankone/detail/text.hpp"
#include "rankone/error.hpp"

namespace rankone {

namespace {

void push_reduced(std::vector<Letter>& out, Letter l) {
  if (!out.empty() && out.back() == -l) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

Word::Word(std::initializer_list<Letter> raw)
    : Word(std::vector<Letter>(raw)) {}

Word::Word(std::vector<Letter> raw) {
  letters_.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0) {
      throw PreconditionError("zero is not a letter");
    }
    push_reduced(letters_, l);
  }
}

Word Word::inverse() const {
  Word result;
  result.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    result.letters_.push_back(-*it);
  }
  return result;
}

Word Word::pow(long long k) const {
  if (k == 0 || empty()) {
    return Word();
  }
  if (k < 0) {
    return inverse().pow(-k);
  }
  auto [core, conj] = cyclic_reduce(*this);
  Word result;
  result.letters_.reserve(core.length() * static_cast<std::size_t>(k)
                          + 2 * conj.length());
  result.letters_ = conj.letters_;
  for (long long i = 0; i < k; ++i) {
    result.letters_.insert(result.letters_.end(), core.letters_.begin(),
                           core.letters_.end());
  }
  Word tail = conj.inverse();
  result.letters_.insert(result.letters_.end(), tail.letters_.begin(),
                         tail.letters_.end());
  return result;
}

std::size_t Word::generator_bound() const noexcept {
  std::size_t bound = 0;
  for (Letter l : letters_) {
    bound = std::max(bound, generator_of(l) + 1);
  }
  return bound;
}

Word Word::substitute(std::span<Word const> images) const {
  Word result;
  for (Letter l : letters_) {
    std::size_t g = generator_of(l);
    if (g >= images.size()) {
      throw PreconditionError("substitution: no image for generator "
                              + std::to_string(g));
    }
    if (l > 0) {
      result *= images[g];
    } else {
      result *= images[g].inverse();
    }
  }
  return result;
}

long long Word::exponent_sum(std::size_t gen) const noexcept {
  long long s = 0;
  for (Letter l : letters_) {
    if (generator_of(l) == gen) {
      s += sign_of(l);
    }
  }
  return s;
}

std::size_t Word::occurrences(std::size_t gen) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      letters_.begin(), letters_.end(),
      [gen](Letter l) { return generator_of(l) == gen; }));
}

Word& Word::operator*=(Word const& rhs) {
  std::size_t cancel = 0;
  std::size_t const n = letters_.size();
  while (cancel < n && cancel < rhs.letters_.size()
         && letters_[n - 1 - cancel] == -rhs.letters_[cancel]) {
    ++cancel;
  }
  letters_.resize(n - cancel);
  letters_.insert(letters_.end(), rhs.letters_.begin() + cancel,
                  rhs.letters_.end());
  return *this;
}

std::strong_ordering operator<=>(Word const& a, Word const& b) {
  if (a.length() != b.length()) {
    return a.length() <=> b.length();
  }
  for (std::size_t i = 0; i < a.length(); ++i) {
    if (a[i] != b[i]) {
      return letter_rank(a[i]) <=> letter_rank(b[i]);
    }
  }
  return std::strong_ordering::equal;
}

std::size_t WordHash::operator()(Word const& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Letter l : w.letters()) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(l));
    h *= 1099511628211ull;
  }
  return h;
}

Word reduce(std::span<Letter const> raw, std::size_t rank) {
  for (Letter l : raw) {
    if (l == 0 || generator_of(l) >= rank) {
      throw PreconditionError("unknown generator index in letter "
                              + std::to_string(l));
    }
  }
  return Word(std::vector<Letter>(raw.begin(), raw.end()));
}

CyclicReduction cyclic_reduce(Word const& w) {
  auto letters = w.letters();
  std::size_t i = 0;
  std::size_t j = letters.size();
  while (j - i >= 2 && letters[i] == -letters[j - 1]) {
    ++i;
    --j;
  }
  CyclicReduction out;
  out.core = Word(std::vector<Letter>(letters.begin() + i, letters.begin() + j));
  out.conjugator
      = Word(std::vector<Letter>(letters.begin(), letters.begin() + i));
  return out;
}

Word rotate(Word const& w, std::size_t k) {
  auto letters = w.letters();
  if (letters.empty()) {
    return w;
  }
  k %= letters.size();
  std::vector<Letter> out(letters.begin() + k, letters.end());
  out.insert(out.end(), letters.begin(), letters.begin() + k);
  return Word(std::move(out));
}

Root root(Word const& w) {
  if (w.is_identity()) {
    throw PreconditionError("root: identity has no root");
  }
  auto [core, conj] = cyclic_reduce(w);
  auto letters = core.letters();
  std::size_t const n = letters.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) {
      continue;
    }
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) {
      periodic = letters[i] == letters[i - p];
    }
    if (periodic) {
      Word prefix(std::vector<Letter>(letters.begin(), letters.begin() + p));
      return Root{conj * prefix * conj.inverse(),
                  static_cast<long long>(n / p)};
    }
  }
  return Root{w, 1};  // unreachable: p = n always succeeds
}

namespace {

// Smallest k with rotate(w, k) == target, if any. Both cyclically reduced.
std::optional<std::size_t> rotation_offset(Word const& w, Word const& target) {
  if (w.length() != target.length()) {
    return std::nullopt;
  }
  if (w.empty()) {
    return 0;
  }
  std::vector<Letter> doubled(w.vec());
  doubled.insert(doubled.end(), w.vec().begin(), w.vec().end());
  auto it = std::search(doubled.begin(), doubled.end(), target.vec().begin(),
                        target.vec().end());
  if (it == doubled.end()) {
    return std::nullopt;
  }
  std::size_t k = static_cast<std::size_t>(it - doubled.begin());
  if (k >= w.length()) {
    return std::nullopt;
  }
  return k;
}

}  // namespace

std::optional<ConjugatePower> is_conjugate_to_power(Word const& x,
                                                    Word const& y,
                                                    long long min_abs_d) {
  if (x.is_identity()) {
    throw PreconditionError("is_conjugate_to_power: x is the identity");
  }
  if (y.is_identity()) {
    return std::nullopt;
  }
  auto [xc, xconj] = cyclic_reduce(x);
  auto [yc, yconj] = cyclic_reduce(y);
  if (yc.length() % xc.length() != 0) {
    return std::nullopt;
  }
  auto const m = static_cast<long long>(yc.length() / xc.length());
  if (m < min_abs_d) {
    return std::nullopt;
  }
  for (long long d : {m, -m}) {
    Word power = xc.pow(d);
    if (auto k = rotation_offset(power, yc)) {
      // yc = P^-1 power P with P the first k letters of power.
      Word prefix(std::vector<Letter>(power.vec().begin(),
                                      power.vec().begin()
                                          + static_cast<long>(*k)));
      Word g = yconj * prefix.inverse() * xconj.inverse();
      return ConjugatePower{std::move(g), d};
    }
  }
  return std::nullopt;
}

bool are_conjugate(Word const& u, Word const& v) {
  auto uc = cyclic_reduce(u).core;
  auto vc = cyclic_reduce(v).core;
  return rotation_offset(uc, vc).has_value();
}

bool same_cyclic_word_up_to_inversion(Word const& u, Word const& v) {
  return are_conjugate(u, v) || are_conjugate(u, v.inverse());
}

Word canonical_cyclic_word(Word const& w, bool with_inverse) {
  Word best = w;
  for (std::size_t k = 1; k < w.length(); ++k) {
    best = std::min(best, rotate(w, k));
  }
  if (with_inverse) {
    Word inv = w.inverse();
    for (std::size_t k = 0; k < inv.length(); ++k) {
      best = std::min(best, rotate(inv, k));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Alphabet

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) {
    return false;
  }
  auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) {
    return false;
  }
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '\'';
  });
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!is_identifier(names_[i])) {
      throw PreconditionError("invalid generator name '" + names_[i] + "'");
    }
    if (names_[i] == "e") {
      throw PreconditionError("'e' is reserved for the identity");
    }
    if (!index_.emplace(names_[i], i).second) {
      throw PreconditionError("duplicate generator name '" + names_[i] + "'");
    }
  }
}

Alphabet Alphabet::standard(std::size_t rank) {
  static constexpr std::string_view kLetters = "abcdfghijklmnopqrsuvwxyz";
  std::vector<std::string> names;
  if (rank <= kLetters.size()) {
    for (std::size_t i = 0; i < rank; ++i) {
      names.emplace_back(1, kLetters[i]);
    }
    return Alphabet(std::move(names));
  }
  return numbered("x", rank);
}

Alphabet Alphabet::numbered(std::string const& prefix, std::size_t rank) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rank; ++i) {
    names.push_back(prefix + std::to_string(i + 1));
  }
  return Alphabet(std::move(names));
}

std::optional<std::size_t> Alphabet::index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// Text

std::string format_word(Word const& w, Alphabet const& alphabet) {
  if (w.empty()) {
    return "e";
  }
  std::string out;
  auto letters = w.letters();
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) {
      ++j;
    }
    long long run = static_cast<long long>(j - i) * sign_of(letters[i]);
    if (!out.empty()) {
      out += ' ';
    }
    std::size_t g = generator_of(letters[i]);
    out += g < alphabet.rank() ? alphabet.name(g) : "?" + std::to_string(g);
    if (run != 1) {
      out += '^';
      out += std::to_string(run);
    }
    i = j;
  }
  return out;
}

namespace detail {

SourcePos advance(SourcePos pos, std::string_view text) {
  for (char c : text) {
    if (c == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  while (!s.empty() && is_space(s.front())) {
    s.remove_prefix(1);
  }
  while (!s.empty() && is_space(s.back())) {
    s.remove_suffix(1);
  }
  return s;
}

Word parse_word_at(std::string_view text, Alphabet const& alphabet,
                   SourcePos start) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  bool saw_term = false;
  auto is_space = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
  };
  auto where = [&](std::size_t offset) {
    return advance(start, text.substr(0, offset));
  };
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t term_start = i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j]) && text[j] != '^') {
      ++j;
    }
    std::string_view name = text.substr(i, j - i);
    if (!is_identifier(name)) {
      auto p = where(term_start);
      throw ParseError("expected generator name, found '" + std::string(name)
                           + "'",
                       p.line, p.column);
    }
    long long exponent = 1;
    if (j < text.size() && text[j] == '^') {
      std::size_t k = j + 1;
      std::size_t num_start = k;
      if (k < text.size() && (text[k] == '-' || text[k] == '+')) {
        ++k;
      }
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
        ++k;
      }
      std::string_view digits = text.substr(num_start, k - num_start);
      if (!digits.empty() && digits.front() == '+') {
        digits.remove_prefix(1);
      }
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(),
                                 exponent);
      if (digits.empty() || res.ec != std::errc()
          || res.ptr != digits.data() + digits.size()) {
        auto p = where(num_start);
        throw ParseError("expected integer exponent", p.line, p.column);
      }
      if (exponent == 0) {
        auto p = where(num_start);
        throw ParseError("exponent must be non-zero", p.line, p.column);
      }
      if (exponent > 1'000'000 || exponent < -1'000'000) {
        auto p = where(num_start);
        throw ParseError("exponent out of range", p.line, p.column);
      }
      j = k;
      if (j < text.size() && !is_space(text[j])) {
        auto p = where(j);
        throw ParseError("unexpected character after exponent", p.line,
                         p.column);
      }
    }
    if (name != "e") {
      auto idx = alphabet.index(name);
      if (!idx) {
        auto p = where(term_start);
        throw ParseError("unknown generator '" + std::string(name) + "'",
                         p.line, p.column);
      }
      Letter l = make_letter(*idx, exponent > 0 ? 1 : -1);
      for (long long r = 0; r < (exponent > 0 ? exponent : -exponent); ++r) {
        raw.push_back(l);
      }
    }
    saw_term = true;
    i = j;
  }
  if (!saw_term) {
    auto p = where(0);
    throw ParseError("empty word (write 'e' for the identity)", p.line,
                     p.column);
  }
  return Word(std::move(raw));
}

}  // namespace detail

Word parse_word(std::string_view text, Alphabet const& alphabet) {
  return detail::parse_word_at(text, alphabet, detail::SourcePos{});
}

}  // namespace rankone
