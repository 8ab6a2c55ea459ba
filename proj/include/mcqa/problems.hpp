#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcqa/corpus.hpp"
#include "mcqa/text.hpp"

namespace mcqa {

enum class Severity { mild, moderate, severe };
std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view s);

/// Acceptability of an MCQ element, ordered from best to worst.
enum class Acceptability { acceptable, mainly_acceptable, partially_acceptable, unacceptable };
std::string_view to_string(Acceptability a);
std::optional<Acceptability> parse_acceptability(std::string_view s);
Acceptability acceptability_of(Severity s);

// Error typology. The detector-only `gap_marker` stands for either gap type
// until an annotator refines it.
enum class ErrorType {
  // severe
  incomplete_text,
  misleading_gaps,
  extra_gaps,
  gap_marker,
  misleading_spaces,
  extra_spaces_within_word,
  missing_spaces_between_words,
  misleading_spelling_errors,
  spelling_errors,
  grammatical_errors,
  syntax_errors,
  ocr_errors,
  time_dependent,
  incomplete_question,
  answerable_without_reading,
  subjective_formulation,
  ambiguously_formulated,
  incomplete_alternatives,
  overlapping_alternatives,
  inconsistency_q_a,
  inconsistency_q_t,
  inconsistency_t_a,
  // moderate
  spelling_errors_hyphens_contractions,
  additional_notes,
  inconsistency_between_alternatives,
  // mild
  extra_spaces_punctuation,
  missing_spaces_punctuation,
  punctuation_errors,
  formatting_inconsistency,
};

std::span<const ErrorType> all_error_types();
std::string_view to_string(ErrorType t);
/// Throws VocabularyError for unknown names.
ErrorType parse_error_type(std::string_view s);
Severity severity_of(ErrorType t);
/// Severity lookup by name; throws VocabularyError for unknown types.
Severity severity_of(std::string_view error_type);

enum class ElementKind { text, question, alternatives, alternative, interaction };
enum class Interaction { question_alternatives, text_question, text_alternatives };

/// The MCQ element a finding belongs to. Serialized as "text", "question",
/// "alternatives", "alternative:B", "interaction:Q-A" / "T-Q" / "T-A".
struct Element {
  ElementKind kind = ElementKind::text;
  std::optional<Label> label;
  std::optional<Interaction> pair;

  static Element text() { return {ElementKind::text, {}, {}}; }
  static Element question() { return {ElementKind::question, {}, {}}; }
  static Element alternatives() { return {ElementKind::alternatives, {}, {}}; }
  static Element alternative(Label l) { return {ElementKind::alternative, l, {}}; }
  static Element interaction(Interaction p) { return {ElementKind::interaction, {}, p}; }

  std::string str() const;
  /// Text, question and alternative(s) belong to the MCQ unit except the text.
  bool is_unit() const { return kind != ElementKind::text; }
  friend bool operator==(const Element&, const Element&) = default;
};
std::optional<Element> parse_element(std::string_view s);

enum class FindingSource { detected, annotated };

struct ErrorFinding {
  Element element;
  ErrorType type = ErrorType::punctuation_errors;
  Severity severity = Severity::mild;
  std::optional<CharRange> span;
  FindingSource source = FindingSource::annotated;

  static ErrorFinding detected(Element e, ErrorType t, CharRange span) {
    return {e, t, severity_of(t), span, FindingSource::detected};
  }
  friend bool operator==(const ErrorFinding&, const ErrorFinding&) = default;
};

/// Non-negative JSON integer, whether stored signed or unsigned.
inline bool is_offset(const nlohmann::json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

nlohmann::json to_json(const ErrorFinding& f);
/// Validates type, element and (if present) severity against the typology.
ErrorFinding error_finding_from_json(const nlohmann::json& j, FindingSource source);

/// Surface errors findable without human judgment, over text, stem and
/// alternatives. Output is ordered by element, then span start.
std::vector<ErrorFinding> detect_mechanical_errors(const MCQUnit& mcq, const TextPassage& passage);

// Individual detectors over one element's text.
std::vector<CharRange> find_extra_spaces_punctuation(std::u32string_view s);
std::vector<CharRange> find_missing_spaces_punctuation(std::u32string_view s);
std::vector<CharRange> find_extra_spaces_within_word(std::u32string_view s);
std::vector<CharRange> find_missing_spaces_between_words(std::u32string_view s);
std::vector<CharRange> find_gap_markers(std::u32string_view s);
std::vector<CharRange> find_additional_notes(std::u32string_view s);
/// Label of the first alternative whose formatting differs from the majority.
std::optional<Label> find_formatting_inconsistency(const std::array<std::string, 4>& alternatives);

/// Worst category implied by the findings; acceptable when empty.
Acceptability aggregate_category(std::span<const ErrorFinding> findings);
Acceptability worst(Acceptability a, Acceptability b);

}  // namespace mcqa
