#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcqa/annotation.hpp"
#include "mcqa/corpus.hpp"
#include "mcqa/vocabulary.hpp"

namespace mcqa {

/// Points per variable plus their exact sum.
struct Scorecard {
  std::string mcq_id;
  std::array<HalfPoints, 9> components{};
  HalfPoints total;

  HalfPoints operator[](Variable v) const { return components[static_cast<std::size_t>(v)]; }
  friend bool operator==(const Scorecard&, const Scorecard&) = default;
};

nlohmann::json to_json(const Scorecard& card);

/// Table lookup. NPhr and NI accept band labels ("4+", "3-4"); TOI accepts
/// concept aliases. Throws VocabularyError naming the scale and value.
HalfPoints score_variable(Scale scale, std::string_view category);

/// Symmetric TOM matrix. gen overrides the pair; HLTI with anything else
/// scores 4; HLTI on both sides without gen throws ValidationError.
HalfPoints score_tom(Relation tq, Relation ta, bool gen);
/// Name of the TOM category ("LM-SM", "HLTI", "GEN", ...) for the pair.
std::string tom_category(Relation tq, Relation ta, bool gen);

struct ToiResolution {
  enum class Kind { unanimous, indeterminate, split_3to1 };
  Kind kind = Kind::unanimous;
  std::string concept_name;  // canonical concept, "indeterminate", or empty for a 3+1 split
};

/// One concept per alternative: 4 equal -> that concept, 3+1 -> split flag,
/// anything else -> indeterminate. A single entry is taken as already resolved.
ToiResolution resolve_alternatives_toi(std::span<const std::string> concepts);

/// 1 for contrast or for synthesis between paragraphs, else 0. A contrast that
/// spans paragraphs scores no more than a comparison that does.
HalfPoints score_ic(std::string_view ic, std::string_view npar);

/// Highest-scoring distractor category; ties go to the later table row.
std::string select_pod_category(std::span<const std::string> per_distractor);

/// Highest-points candidate (later row on ties), except TOI which keeps the
/// lowest-points candidate (earlier row on ties).
std::string resolve_multi_category(Scale scale, std::span<const std::string> candidates);

struct ValidationFinding {
  Variable variable;
  std::string message;
  friend bool operator==(const ValidationFinding&, const ValidationFinding&) = default;
};
nlohmann::json to_json(const ValidationFinding& f);

/// Minimum item count implied by a key such as "Both A and B" or
/// "All of the above"; nullopt for ordinary alternatives.
std::optional<int> complex_alternative_items(const MCQUnit& mcq);

/// Empty iff the nine variables are all resolvable (and, with `mcq`, NI is
/// consistent with a complex key).
std::vector<ValidationFinding> validate_complete(const AnnotationRecord& record, const MCQUnit* mcq = nullptr);

/// Every variable reduced to one category (NPhr/NI as raw counts).
struct ResolvedAssessment {
  std::string toi;
  std::string tom;
  int nphr = 1;
  int ni = 1;
  std::string nit;
  std::string npar;
  std::string ic;
  std::string pod;
  std::string toc;
};

/// nullopt when validate_complete reports anything.
std::optional<ResolvedAssessment> resolve_assessment(const AnnotationRecord& record, const MCQUnit* mcq = nullptr);
Scorecard score_resolved(const ResolvedAssessment& assessment, std::string mcq_id = {});

/// Throws ValidationError listing the findings when the record is incomplete.
Scorecard score_total(const AnnotationRecord& record, const MCQUnit* mcq = nullptr);

}  // namespace mcqa
