#pragma once

// Internal helpers shared by the text parsers (.fp, .endo, .gbs, words).

#include <cstddef>
#include <string>
#include <string_view>

#include "rankone/word.hpp"

namespace rankone::detail {

// A location in a source text, 1-based.
struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

// Parses a word occupying `text`, which starts at `start` in the enclosing
// source, so that errors carry absolute positions.
Word parse_word_at(std::string_view text, Alphabet const& alphabet,
                   SourcePos start);

// Advances a position over the characters of `text`.
SourcePos advance(SourcePos pos, std::string_view text);

// Removes a trailing `# ...` comment.
std::string_view strip_comment(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace rankone::detail
