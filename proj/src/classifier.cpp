#include "mcqa/classifier.hpp"

#include <map>
#include <regex>
#include <string>
#include <vector>

namespace mcqa {

namespace {

std::vector<std::u32string_view> nonempty_lines(std::u32string_view body) {
  std::vector<std::u32string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || is_newline(body[i])) {
      auto line = trim(body.substr(start, i - start));
      if (!line.empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  return lines;
}

bool is_closing(char32_t c) {
  return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x201D || c == 0x2019;
}

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == 0x2026; }

char32_t last_significant(std::u32string_view line) {
  while (!line.empty() && is_closing(line.back())) line.remove_suffix(1);
  return line.empty() ? U'\0' : line.back();
}

bool is_bullet_line(std::u32string_view line) {
  static constexpr std::u32string_view kBullets = U"-*•·●▪◆■○►";
  return line.size() >= 2 && kBullets.find(line[0]) != std::u32string_view::npos && is_horizontal_space(line[1]);
}

bool is_numbered_line(std::u32string_view line) {
  std::size_t i = 0;
  if (!line.empty() && line[0] == U'(') {
    i = 1;
    std::size_t d = i;
    while (d < line.size() && is_digit(line[d])) ++d;
    return d > i && d - i <= 2 && d < line.size() && line[d] == U')';
  }
  while (i < line.size() && is_digit(line[i])) ++i;
  if (i == 0 || i > 2 || i + 1 >= line.size()) return false;
  return (line[i] == U'.' || line[i] == U')') && is_horizontal_space(line[i + 1]);
}

bool is_table_line(std::u32string_view line) {
  if (line.find(U'\t') != std::u32string_view::npos) return true;
  std::size_t pipes = 0, wide_gaps = 0, run = 0;
  for (char32_t c : line) {
    if (c == U'|') ++pipes;
    if (c == U' ') {
      if (++run == 3) ++wide_gaps;
    } else {
      run = 0;
    }
  }
  return pipes >= 2 || wide_gaps >= 2;
}

bool is_list_or_table(std::u32string_view line) {
  return is_bullet_line(line) || is_numbered_line(line) || is_table_line(line);
}

// True when a sentence terminator is followed by more text on the same line.
bool has_multiple_sentences(std::u32string_view line) {
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (!is_terminal(line[i])) continue;
    std::size_t j = i + 1;
    while (j < line.size() && (is_closing(line[j]) || is_terminal(line[j]))) ++j;
    if (j < line.size() && is_horizontal_space(line[j])) {
      while (j < line.size() && is_horizontal_space(line[j])) ++j;
      if (j < line.size() && (is_upper(line[j]) || is_digit(line[j]) || !is_letter(line[j]) ))
        return true;
    }
  }
  return false;
}

// Header lines head something: never the last line; a leading title line is
// the article title, not a subheading.
std::vector<std::size_t> counted_header_lines(const std::vector<std::u32string_view>& lines) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    if (!is_header_like_line(lines[i])) continue;
    if (is_header_like_line(lines[i + 1])) continue;
    out.push_back(i);
  }
  return out;
}

std::string shape_signature(std::u32string_view line) {
  std::string sig;
  if (!line.empty() && last_significant(line) == U':') sig += "colon|";
  if (line.find(U'(') != std::u32string_view::npos) sig += "paren|";
  char prev = 0;
  for (auto word : split_words(line)) {
    char shape = 'o';
    for (char32_t c : word) {
      if (is_digit(c)) { shape = 'n'; break; }
      if (is_letter(c)) { shape = is_lower(c) ? 'w' : 'W'; break; }
    }
    if (shape != prev) sig.push_back(shape);
    prev = shape;
  }
  return sig;
}

const std::regex& opening_patterns() {
  static const std::regex re(
      R"(^(?:[A-Z][\w.'-]*(?: [A-Z][\w.'-]*){0,2}(?:, (?:aged? )?\d{1,3}\b| \((?:aged? )?\d{1,3}\)|,? from [A-Z])|Dear [A-Z]))");
  return re;
}

}  // namespace

bool is_header_like_line(std::u32string_view line) {
  line = trim(line);
  if (line.empty()) return false;
  if (split_words(line).size() > 8) return false;
  char32_t last = last_significant(line);
  return !(is_terminal(last) || last == U',' || last == U';');
}

FormatSuggestion classify_text_format(std::u32string_view body) {
  FormatSuggestion out;
  auto lines = nonempty_lines(body);
  std::size_t list_or_table = 0;
  bool any_multi_sentence = false;
  for (auto line : lines) {
    if (is_bullet_line(line)) ++out.evidence.bullet_marker_count;
    else if (is_numbered_line(line)) ++out.evidence.numbered_list_count;
    else if (is_table_line(line)) ++out.evidence.table_like_line_count;
    if (is_list_or_table(line)) ++list_or_table;
    if (has_multiple_sentences(line)) any_multi_sentence = true;
  }
  for (std::size_t idx : counted_header_lines(lines))
    if (!is_list_or_table(lines[idx])) ++out.evidence.header_like_line_count;

  if (!lines.empty() && list_or_table * 10 >= lines.size() * 9 && !any_multi_sentence)
    out.format = TextFormat::non_continuous;
  else if (out.evidence.total() > 0)
    out.format = TextFormat::partly_continuous;
  else
    out.format = TextFormat::continuous;
  return out;
}

Membership classify_membership(std::u32string_view body) {
  auto lines = nonempty_lines(body);

  // Repeated section titles of one shape, each heading an ordinary paragraph.
  std::map<std::string, std::size_t> groups;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (!is_header_like_line(lines[i]) || is_header_like_line(lines[i + 1])) continue;
    if (++groups[shape_signature(lines[i])] >= 2) return Membership::multiple_member;
  }

  // Repeated name/age/location openings, or several letters.
  std::size_t openings = 0;
  for (auto line : lines) {
    if (std::regex_search(to_utf8(line), opening_patterns())) ++openings;
    if (openings >= 2) return Membership::multiple_member;
  }
  return Membership::single_member;
}

Aspect classify_mcq_aspect(std::string_view stem) {
  // Vocabulary probes: a quoted or underlined word together with a meaning cue.
  static const std::regex quoted(R"((["“‘'][^"”’']{1,40}["”’'])|\bunderlined\b|\bthe (word|phrase|expression)\b)",
                                 std::regex::icase);
  static const std::regex meaning(
      R"(\bmeans?\b|\bmeaning\b|\bclosest in meaning\b|\bcan be replaced by\b|\bsynonym\b|\bopposite\b|\bstands? for\b|\bbest explained\b)",
      std::regex::icase);
  static const std::regex structure(
      R"(\b(best )?title\b|\bheading\b|\bparagraph|\borgani[sz]ed\b|\bstructure of the (passage|text)\b|\b(be )?taken from\b|\bwhat (comes|will come) next\b)",
      std::regex::icase);
  const std::string s(stem);
  if (std::regex_search(s, quoted) && std::regex_search(s, meaning)) return Aspect::vocabulary;
  if (std::regex_search(s, structure)) return Aspect::structure;
  return Aspect::content;
}

}  // namespace mcqa
