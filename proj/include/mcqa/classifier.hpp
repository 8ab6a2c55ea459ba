#pragma once

#include <cstddef>
#include <string_view>

#include "mcqa/corpus.hpp"

namespace mcqa {

/// Line-level markers counted over a passage body.
struct FormatEvidence {
  std::size_t bullet_marker_count = 0;
  std::size_t header_like_line_count = 0;
  std::size_t numbered_list_count = 0;
  std::size_t table_like_line_count = 0;

  std::size_t total() const {
    return bullet_marker_count + header_like_line_count + numbered_list_count + table_like_line_count;
  }
  friend bool operator==(const FormatEvidence&, const FormatEvidence&) = default;
};

struct FormatSuggestion {
  TextFormat format = TextFormat::continuous;
  FormatEvidence evidence;
};

// Heuristics only: published classifications always take precedence.
FormatSuggestion classify_text_format(std::u32string_view body);
inline FormatSuggestion classify_text_format(const TextPassage& passage) {
  return classify_text_format(passage.chars());
}

Membership classify_membership(std::u32string_view body);
inline Membership classify_membership(const TextPassage& passage) {
  return classify_membership(passage.chars());
}

Aspect classify_mcq_aspect(std::string_view stem);
inline Aspect classify_mcq_aspect(const MCQUnit& mcq) { return classify_mcq_aspect(mcq.stem); }

/// A line with at most 8 words and no terminal sentence punctuation.
bool is_header_like_line(std::u32string_view line);

}  // namespace mcqa
