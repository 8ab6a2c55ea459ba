#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mcqa/annotation.hpp"
#include "mcqa/corpus.hpp"
#include "mcqa/problems.hpp"
#include "mcqa/scoring.hpp"

namespace mcqa {

/// An annotated MCQ with its passage; pointers into a Corpus and a record list.
struct AnalysisItem {
  const MCQUnit* mcq = nullptr;
  const TextPassage* passage = nullptr;
  const AnnotationRecord* record = nullptr;
};

// Stage names, in funnel order.
inline constexpr std::string_view kStageAnnotated = "annotated";
inline constexpr std::string_view kStageContinuous = "continuous_texts";
inline constexpr std::string_view kStageContent = "content_aspect";
inline constexpr std::string_view kStageQuality = "acceptable_quality";
inline constexpr std::string_view kStageFullyContinuous = "fully_continuous";
inline constexpr std::string_view kStageToi = "toi_consistent";

struct GateStage {
  std::string name;
  std::size_t texts = 0;
  std::size_t mcqs = 0;
  std::map<std::string, std::size_t> dropped;  // reason -> MCQs removed by this stage
};

struct GateTrace {
  std::vector<GateStage> stages;
  const GateStage* find(std::string_view name) const;
};

struct GateOptions {
  bool include_detected = false;  // let detector findings count towards the quality stage
  bool heuristics = true;         // fall back to classifier suggestions when unannotated
};

struct GateResult {
  std::vector<AnalysisItem> annotated;  // the funnel's input
  std::vector<AnalysisItem> analysed;  // after the aspect stage; basis of problem statistics
  std::vector<AnalysisItem> retained;  // final stage
  GateTrace trace;
  std::vector<std::string> warnings;   // heuristic/annotation disagreements
};

/// Explicit field on any record of the text, then exclusion flags, then the
/// heuristic (when enabled), else continuous.
TextFormat effective_text_format(const TextPassage& passage, std::span<const AnnotationRecord* const> records,
                                 bool heuristics = true);
/// Explicit aspect, then the non_content_aspect flag, then the heuristic.
bool is_content_mcq(const MCQUnit& mcq, const AnnotationRecord& record, bool heuristics = true);

/// Runs the funnel over the annotated MCQs in corpus order. Records whose
/// mcq_id is not in the corpus throw ReferenceError.
GateResult apply_quality_gate(const Corpus& corpus, std::span<const AnnotationRecord> records,
                              const GateOptions& options = {});

struct DifficultyDistribution {
  std::map<int, std::size_t> histogram;  // bin k holds totals in [k, k+1)
  std::size_t count = 0;
  // Undefined (nullopt) for an empty input.
  std::optional<double> mean;
  std::optional<double> median;
  std::optional<int> mode;  // smallest bin on ties
  std::optional<HalfPoints> min;
  std::optional<HalfPoints> max;
};
DifficultyDistribution difficulty_distribution(std::span<const Scorecard> cards);

/// Category -> count, in table order (ascending points). NPhr and NI are
/// counted by band; TOM by combined category.
using CategoryCounts = std::vector<std::pair<std::string, std::size_t>>;
CategoryCounts variable_distribution(std::span<const ResolvedAssessment> assessments, Variable variable);

/// Element group of a finding: "text", "question", "alternatives", "interaction".
std::string_view element_group(const Element& element);

struct ProblemCount {
  std::string group;
  ErrorType type = ErrorType::punctuation_errors;
  std::size_t mcqs = 0;
};

/// Findings that apply to each item: its text marks (shared by every MCQ of
/// the passage) plus its own unit marks, optionally with detector output.
class FindingIndex {
 public:
  FindingIndex(std::span<const AnalysisItem> universe, bool include_detected);
  std::vector<ErrorFinding> text_findings(const TextPassage& passage) const;
  std::vector<ErrorFinding> unit_findings(const AnalysisItem& item) const;
  Acceptability text_category(const TextPassage& passage) const;
  Acceptability unit_category(const AnalysisItem& item) const;

 private:
  std::map<std::string, std::vector<ErrorFinding>, std::less<>> text_marks_;
  std::map<std::string, std::vector<ErrorFinding>, std::less<>> detected_;
  bool include_detected_;
};

/// Number of MCQs with at least one finding per (group, type); groups in
/// element order, types in typology order, zero rows omitted.
std::vector<ProblemCount> problem_distribution(std::span<const AnalysisItem> items, const FindingIndex& index);

/// [text category][unit category] -> MCQs.
using CategoryHeatmap = std::array<std::array<std::size_t, 4>, 4>;
CategoryHeatmap category_heatmap(std::span<const AnalysisItem> items, const FindingIndex& index);
std::size_t acceptable_text_count(std::span<const AnalysisItem> items, const FindingIndex& index);

inline constexpr std::size_t kBuckets = 100;

/// floor(c * 100 / length), clamped to 99.
std::size_t bucket_of(std::size_t c, std::size_t text_length);
/// Contiguous bucket indices covered by `span`; throws SpanError for an
/// empty or out-of-range span or a zero length.
std::vector<std::size_t> bases_bucket_map(std::size_t text_length, CharRange span);

struct BasesHeatmap {
  std::array<std::array<std::size_t, kBuckets>, 4> cells{};
  std::array<std::size_t, 4> mcqs_with_basis{};

  BasesHeatmap& operator+=(const BasesHeatmap& o);
  friend BasesHeatmap operator+(BasesHeatmap a, const BasesHeatmap& b) { return a += b; }
  friend bool operator==(const BasesHeatmap&, const BasesHeatmap&) = default;
};

/// Each MCQ adds the union of its bases' buckets once per label.
BasesHeatmap bases_heatmap(std::span<const AnalysisItem> items);

struct Report {
  GateTrace trace;
  DifficultyDistribution difficulty;
  std::size_t unscored = 0;  // retained MCQs whose annotation is incomplete
  std::vector<std::pair<Variable, CategoryCounts>> variables;
  std::vector<ProblemCount> problems;
  CategoryHeatmap categories{};
  std::size_t analysed_texts = 0;
  std::size_t acceptable_texts = 0;
  BasesHeatmap bases;
  std::vector<std::string> warnings;
};

Report build_report(const Corpus& corpus, std::span<const AnnotationRecord> records, const GateOptions& options = {});

/// "gate", "difficulty", "variables", "problems", "categories", "bases".
std::span<const std::string_view> report_kinds();
/// Throws Error for an unknown kind; "all" bundles every kind.
nlohmann::json report_json(const Report& report, std::string_view kind);
std::string report_tsv(const Report& report, std::string_view kind);
nlohmann::json gate_trace_json(const GateTrace& trace);
std::string gate_trace_table(const GateTrace& trace);

/// Writes <kind>.json and <kind>.tsv for every kind into `dir`.
void write_report(const Report& report, const std::filesystem::path& dir);

struct ReferenceCheck {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

/// Compares a report with a reference-expectations document (see
/// data/reference_funnel.json). Sections absent from the document are skipped.
std::vector<ReferenceCheck> check_reference(const Report& report, const nlohmann::json& reference);

}  // namespace mcqa
