#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mcqa/text.hpp"

namespace mcqa {

enum class TextFormat { continuous, partly_continuous, non_continuous, mixed };
enum class Membership { single_member, multiple_member };
enum class StemStyle { interrogative, fill_in_gap };
enum class Aspect { content, structure, vocabulary };

enum class Label : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };
inline constexpr std::array<Label, 4> kLabels{Label::A, Label::B, Label::C, Label::D};

char label_char(Label label);
std::optional<Label> parse_label(std::string_view s);
inline std::size_t label_index(Label label) { return static_cast<std::size_t>(label); }

std::string_view to_string(TextFormat f);
std::string_view to_string(Membership m);
std::string_view to_string(StemStyle s);
std::string_view to_string(Aspect a);
std::optional<TextFormat> parse_text_format(std::string_view s);
std::optional<Membership> parse_membership(std::string_view s);
std::optional<Aspect> parse_aspect(std::string_view s);

/// Paragraph breaks are runs of newlines with any horizontal whitespace around
/// them. Empty segments are dropped; a body without newlines is one paragraph.
std::vector<CharRange> segment_paragraphs(std::u32string_view body);

/// fill_in_gap iff the stem contains an underscore.
StemStyle detect_stem_style(std::string_view stem);

/// One article. Offsets everywhere are Unicode scalar offsets into `chars`.
/// `format` and `membership` hold the heuristic suggestion until an
/// annotation overrides them.
class TextPassage {
 public:
  TextPassage() = default;
  TextPassage(std::string text_id, std::string body);

  const std::string& text_id() const { return text_id_; }
  const std::string& body() const { return body_; }
  const std::u32string& chars() const { return chars_; }
  std::size_t length() const { return chars_.size(); }
  const std::vector<CharRange>& paragraphs() const { return paragraphs_; }

  /// Index of the paragraph containing `offset`, if any.
  std::optional<std::size_t> paragraph_of(std::size_t offset) const;

  TextFormat format = TextFormat::continuous;
  Membership membership = Membership::single_member;

 private:
  std::string text_id_;
  std::string body_;
  std::u32string chars_;
  std::vector<CharRange> paragraphs_;
};

struct MCQUnit {
  std::string mcq_id;
  std::string text_id;
  std::size_t index = 0;  // position of the question within its article
  std::string stem;
  StemStyle stem_style = StemStyle::interrogative;
  std::array<std::string, 4> alternatives;
  Label key = Label::A;
  Aspect aspect = Aspect::content;

  const std::string& alternative(Label label) const { return alternatives[label_index(label)]; }
  const std::string& key_text() const { return alternative(key); }
};

/// "<text_id>:<question index>"
std::string make_mcq_id(std::string_view text_id, std::size_t index);

struct CorpusEntry {
  TextPassage passage;
  std::vector<MCQUnit> mcqs;
};

/// Immutable after construction; safe to share across threads.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusEntry> entries);

  const std::vector<CorpusEntry>& entries() const { return entries_; }
  std::size_t passage_count() const { return entries_.size(); }
  std::size_t mcq_count() const { return mcq_count_; }

  const MCQUnit* find_mcq(std::string_view mcq_id) const;
  const TextPassage* find_passage(std::string_view text_id) const;
  const TextPassage& passage_of(const MCQUnit& mcq) const;

  /// All MCQs in corpus order.
  std::vector<const MCQUnit*> mcqs() const;

 private:
  std::vector<CorpusEntry> entries_;
  std::size_t mcq_count_ = 0;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> mcq_index_;
  std::unordered_map<std::string, std::size_t> text_index_;
};

/// Parses one RACE record {article, questions, options, answers, id}.
/// `source` prefixes error messages.
CorpusEntry parse_race_record(const nlohmann::json& record, std::string_view source);
nlohmann::json to_race_record(const CorpusEntry& entry);

/// Loads a RACE file (one object, an array of objects, or .jsonl) or a
/// directory of such files (recursively, sorted by path).
Corpus load_corpus(const std::filesystem::path& path);

/// Writes one RACE file per article into `dir`, named after its id.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace mcqa
