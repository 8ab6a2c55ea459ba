#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mcqa {

/// Half-open range [begin, end) of Unicode scalar offsets.
struct CharRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(std::size_t offset) const { return offset >= begin && offset < end; }

  friend bool operator==(const CharRange&, const CharRange&) = default;
  friend auto operator<=>(const CharRange&, const CharRange&) = default;
};

// UTF-8 <-> UTF-32. Decoding throws SchemaError on malformed input.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
std::size_t scalar_length(std::string_view utf8);

bool is_horizontal_space(char32_t c);
bool is_newline(char32_t c);
bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
/// ASCII letters plus any non-ASCII scalar that is not punctuation or space.
bool is_letter(char32_t c);
bool is_alnum(char32_t c);

std::string_view trim(std::string_view s);
std::u32string_view trim(std::u32string_view s);
std::string to_lower_ascii(std::string_view s);

/// Splits on whitespace, dropping empty pieces.
std::vector<std::u32string_view> split_words(std::u32string_view s);

}  // namespace mcqa
