#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcqa/corpus.hpp"
#include "mcqa/problems.hpp"

namespace mcqa {

enum class ExclusionFlag {
  non_continuous_text,
  non_content_aspect,
  partly_continuous_text,
  severe_problem,
  toi_3to1_split,
};
std::string_view to_string(ExclusionFlag f);
std::optional<ExclusionFlag> parse_exclusion_flag(std::string_view s);

/// One or more category names for a variable; several candidates are
/// resolved by the assessment principles (highest points, lowest for TOI).
using Candidates = std::vector<std::string>;

struct BasisSpan {
  Label label = Label::A;
  CharRange span;
  friend bool operator==(const BasisSpan&, const BasisSpan&) = default;
};

/// Human assessment of one MCQ. Every variable is optional so partial
/// annotations can be stored and validated.
struct AnnotationRecord {
  std::string mcq_id;

  std::vector<Candidates> toi;  // empty, one resolved concept, or one per alternative
  std::optional<Candidates> tom_tq;
  std::optional<Candidates> tom_ta;
  bool tom_gen = false;
  std::optional<int> nphr;  // raw clause count
  std::optional<int> ni;    // raw item count
  std::optional<Candidates> nit;
  std::optional<Candidates> npar;
  std::optional<Candidates> ic;
  std::vector<std::string> pod;  // one category per classified distractor
  std::optional<Candidates> toc;

  std::vector<BasisSpan> bases;
  std::vector<ErrorFinding> error_marks;
  std::set<ExclusionFlag> exclusion_flags;

  // Explicit classifications; they win over heuristic suggestions.
  std::optional<TextFormat> text_format;
  std::optional<Membership> membership;
  std::optional<Aspect> aspect;

  std::optional<std::uint64_t> revision;

  bool has_flag(ExclusionFlag f) const { return exclusion_flags.count(f) != 0; }
  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

nlohmann::json to_json(const AnnotationRecord& record);

/// Parses and vocabulary-checks one record. When `passage` is given, bases
/// and error spans on the text are checked against its length.
AnnotationRecord annotation_from_json(const nlohmann::json& j, const TextPassage* passage = nullptr);

/// Parses against a corpus: the mcq_id must exist and spans must fit.
AnnotationRecord annotation_from_json(const nlohmann::json& j, const Corpus& corpus);

/// Line-delimited records. Duplicate or dangling mcq_ids are rejected.
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path, const Corpus& corpus);
std::vector<AnnotationRecord> parse_annotations(std::string_view jsonl, const Corpus& corpus,
                                                std::string_view source = "<annotations>");

}  // namespace mcqa
