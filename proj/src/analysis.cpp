#include "mcqa/analysis.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mcqa/errors.hpp"
#include "mcqa/io.hpp"

namespace mcqa {

using nlohmann::json;
namespace fs = std::filesystem;

const GateStage* GateTrace::find(std::string_view name) const {
  for (const auto& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

TextFormat effective_text_format(const TextPassage& passage, std::span<const AnnotationRecord* const> records,
                                 bool heuristics) {
  for (const auto* r : records)
    if (r->text_format) return *r->text_format;
  for (const auto* r : records)
    if (r->has_flag(ExclusionFlag::non_continuous_text)) return TextFormat::non_continuous;
  for (const auto* r : records)
    if (r->has_flag(ExclusionFlag::partly_continuous_text)) return TextFormat::partly_continuous;
  return heuristics ? passage.format : TextFormat::continuous;
}

bool is_content_mcq(const MCQUnit& mcq, const AnnotationRecord& record, bool heuristics) {
  if (record.aspect) return *record.aspect == Aspect::content;
  if (record.has_flag(ExclusionFlag::non_content_aspect)) return false;
  return !heuristics || mcq.aspect == Aspect::content;
}

namespace {

std::pair<std::size_t, std::size_t> count_items(std::span<const AnalysisItem> items) {
  std::unordered_set<const TextPassage*> texts;
  for (const auto& it : items) texts.insert(it.passage);
  return {texts.size(), items.size()};
}

GateStage make_stage(std::string_view name, std::span<const AnalysisItem> items,
                     std::map<std::string, std::size_t> dropped = {}) {
  auto [texts, mcqs] = count_items(items);
  return GateStage{std::string(name), texts, mcqs, std::move(dropped)};
}

// Applies `reason_of` to each item; an empty reason keeps it.
template <class F>
std::vector<AnalysisItem> run_stage(std::string_view name, const std::vector<AnalysisItem>& in, GateTrace& trace,
                                    F&& reason_of) {
  std::vector<AnalysisItem> out;
  std::map<std::string, std::size_t> dropped;
  for (const auto& it : in) {
    std::string reason = reason_of(it);
    if (reason.empty())
      out.push_back(it);
    else
      ++dropped[reason];
  }
  trace.stages.push_back(make_stage(name, out, std::move(dropped)));
  return out;
}

bool has_toi_split(const AnnotationRecord& r) {
  if (r.has_flag(ExclusionFlag::toi_3to1_split)) return true;
  if (r.toi.size() != 4) return false;
  try {
    std::vector<std::string> per_alt;
    for (const auto& c : r.toi) per_alt.push_back(resolve_multi_category(Scale::toi, c));
    return resolve_alternatives_toi(per_alt).kind == ToiResolution::Kind::split_3to1;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

GateResult apply_quality_gate(const Corpus& corpus, std::span<const AnnotationRecord> records,
                              const GateOptions& options) {
  GateResult result;
  std::unordered_map<std::string_view, const AnnotationRecord*> by_id;
  for (const auto& r : records) {
    if (!corpus.find_mcq(r.mcq_id)) throw ReferenceError("annotation for unknown MCQ '" + r.mcq_id + "'");
    if (!by_id.emplace(r.mcq_id, &r).second) throw ReferenceError("duplicate annotation for '" + r.mcq_id + "'");
  }

  std::unordered_map<const TextPassage*, std::vector<const AnnotationRecord*>> by_text;
  for (const auto& entry : corpus.entries()) {
    for (const auto& mcq : entry.mcqs) {
      auto found = by_id.find(mcq.mcq_id);
      if (found == by_id.end()) continue;
      result.annotated.push_back({&mcq, &entry.passage, found->second});
      by_text[&entry.passage].push_back(found->second);
    }
  }

  std::unordered_map<const TextPassage*, TextFormat> format;
  for (const auto& [passage, recs] : by_text) {
    format[passage] = effective_text_format(*passage, recs, options.heuristics);
  }
  if (options.heuristics) {
    for (const auto& it : result.annotated) {
      const auto& r = *it.record;
      if (r.text_format && *r.text_format != it.passage->format)
        result.warnings.push_back(r.mcq_id + ": text_format annotated " + std::string(to_string(*r.text_format)) +
                                  ", heuristic suggests " + std::string(to_string(it.passage->format)));
      if (r.membership && *r.membership != it.passage->membership)
        result.warnings.push_back(r.mcq_id + ": membership annotated " + std::string(to_string(*r.membership)) +
                                  ", heuristic suggests " + std::string(to_string(it.passage->membership)));
      if (r.aspect && *r.aspect != it.mcq->aspect)
        result.warnings.push_back(r.mcq_id + ": aspect annotated " + std::string(to_string(*r.aspect)) +
                                  ", heuristic suggests " + std::string(to_string(it.mcq->aspect)));
    }
    for (const auto& [passage, recs] : by_text) {
      for (const auto* r : recs)
        if (r->text_format && *r->text_format != format[passage])
          result.warnings.push_back(r->mcq_id + ": text_format disagrees with other records of " +
                                    passage->text_id());
    }
    std::sort(result.warnings.begin(), result.warnings.end());
  }

  GateTrace& trace = result.trace;
  trace.stages.push_back(make_stage(kStageAnnotated, result.annotated));

  auto continuous = run_stage(kStageContinuous, result.annotated, trace, [&](const AnalysisItem& it) -> std::string {
    switch (format[it.passage]) {
      case TextFormat::non_continuous: return "non_continuous_text";
      case TextFormat::mixed: return "mixed_text";
      default: return {};
    }
  });

  result.analysed = run_stage(kStageContent, continuous, trace, [&](const AnalysisItem& it) -> std::string {
    if (is_content_mcq(*it.mcq, *it.record, options.heuristics)) return {};
    if (it.record->aspect) return std::string(to_string(*it.record->aspect)) + "_aspect";
    if (it.record->has_flag(ExclusionFlag::non_content_aspect)) return "non_content_aspect";
    return std::string(to_string(it.mcq->aspect)) + "_aspect";
  });

  FindingIndex index(result.annotated, options.include_detected);
  auto quality = run_stage(kStageQuality, result.analysed, trace, [&](const AnalysisItem& it) -> std::string {
    if (index.text_category(*it.passage) == Acceptability::unacceptable) return "unacceptable_text";
    if (index.unit_category(it) == Acceptability::unacceptable) return "unacceptable_unit";
    if (it.record->has_flag(ExclusionFlag::severe_problem)) return "severe_problem";
    return {};
  });

  auto fully = run_stage(kStageFullyContinuous, quality, trace, [&](const AnalysisItem& it) -> std::string {
    return format[it.passage] == TextFormat::partly_continuous ? "partly_continuous_text" : "";
  });

  result.retained = run_stage(kStageToi, fully, trace, [&](const AnalysisItem& it) -> std::string {
    return has_toi_split(*it.record) ? "toi_3to1_split" : "";
  });
  return result;
}

DifficultyDistribution difficulty_distribution(std::span<const Scorecard> cards) {
  DifficultyDistribution d;
  d.count = cards.size();
  if (cards.empty()) return d;
  std::vector<int> units;
  units.reserve(cards.size());
  long long sum = 0;
  for (const auto& c : cards) {
    int u = c.total.units();
    units.push_back(u);
    sum += u;
    // floor(u / 2) for non-negative totals; totals are never negative.
    ++d.histogram[u >= 0 ? u / 2 : -((-u + 1) / 2)];
  }
  std::sort(units.begin(), units.end());
  const std::size_t n = units.size();
  d.mean = static_cast<double>(sum) / 2.0 / static_cast<double>(n);
  d.median = n % 2 ? units[n / 2] / 2.0 : (units[n / 2 - 1] + units[n / 2]) / 4.0;
  d.min = HalfPoints::from_units(units.front());
  d.max = HalfPoints::from_units(units.back());
  std::size_t best = 0;
  for (const auto& [bin, count] : d.histogram) {
    if (count > best) {
      best = count;
      d.mode = bin;
    }
  }
  return d;
}

namespace {

Scale scale_of(Variable v) {
  switch (v) {
    case Variable::TOI: return Scale::toi;
    case Variable::TOM: return Scale::tom;
    case Variable::NPhr: return Scale::nphr;
    case Variable::NI: return Scale::ni;
    case Variable::NIt: return Scale::nit;
    case Variable::NPar: return Scale::npar;
    case Variable::IC: return Scale::ic;
    case Variable::POD: return Scale::pod;
    case Variable::TOC: return Scale::toc;
  }
  return Scale::toi;
}

std::string category_of(const ResolvedAssessment& a, Variable v) {
  switch (v) {
    case Variable::TOI: return std::string(*canonical_toi(a.toi));
    case Variable::TOM: return a.tom;
    case Variable::NPhr: return std::string(nphr_band(a.nphr));
    case Variable::NI: return std::string(ni_band(a.ni));
    case Variable::NIt: return a.nit;
    case Variable::NPar: return a.npar;
    case Variable::IC: return a.ic;
    case Variable::POD: return a.pod;
    case Variable::TOC: return a.toc;
  }
  return {};
}

}  // namespace

CategoryCounts variable_distribution(std::span<const ResolvedAssessment> assessments, Variable variable) {
  const Scale scale = scale_of(variable);
  CategoryCounts out;
  std::map<std::string, std::size_t, std::less<>> slot;
  for (const auto& c : vocabulary(scale)) {
    slot.emplace(std::string(c.name), out.size());
    out.emplace_back(std::string(c.name), 0);
  }
  for (const auto& a : assessments) {
    auto it = slot.find(category_of(a, variable));
    if (it == slot.end()) throw VocabularyError("unexpected category in resolved assessment");
    ++out[it->second].second;
  }
  return out;
}

std::string_view element_group(const Element& e) {
  switch (e.kind) {
    case ElementKind::text: return "text";
    case ElementKind::question: return "question";
    case ElementKind::alternatives:
    case ElementKind::alternative: return "alternatives";
    case ElementKind::interaction: return "interaction";
  }
  return "text";
}

FindingIndex::FindingIndex(std::span<const AnalysisItem> universe, bool include_detected)
    : include_detected_(include_detected) {
  for (const auto& it : universe) {
    auto& marks = text_marks_[it.passage->text_id()];
    for (const auto& m : it.record->error_marks)
      if (!m.element.is_unit()) marks.push_back(m);
  }
  if (!include_detected) return;
  std::set<std::string, std::less<>> seen_text;
  for (const auto& it : universe) {
    bool first_of_text = seen_text.insert(it.passage->text_id()).second;
    for (auto& f : detect_mechanical_errors(*it.mcq, *it.passage)) {
      if (f.element.is_unit())
        detected_[it.mcq->mcq_id].push_back(std::move(f));
      else if (first_of_text)
        detected_["\x01" + it.passage->text_id()].push_back(std::move(f));
    }
  }
}

std::vector<ErrorFinding> FindingIndex::text_findings(const TextPassage& passage) const {
  std::vector<ErrorFinding> out;
  if (auto it = text_marks_.find(passage.text_id()); it != text_marks_.end()) out = it->second;
  if (include_detected_)
    if (auto it = detected_.find("\x01" + passage.text_id()); it != detected_.end())
      out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

std::vector<ErrorFinding> FindingIndex::unit_findings(const AnalysisItem& item) const {
  std::vector<ErrorFinding> out;
  for (const auto& m : item.record->error_marks)
    if (m.element.is_unit()) out.push_back(m);
  if (include_detected_)
    if (auto it = detected_.find(item.mcq->mcq_id); it != detected_.end())
      out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

Acceptability FindingIndex::text_category(const TextPassage& passage) const {
  return aggregate_category(text_findings(passage));
}

Acceptability FindingIndex::unit_category(const AnalysisItem& item) const {
  return aggregate_category(unit_findings(item));
}

std::vector<ProblemCount> problem_distribution(std::span<const AnalysisItem> items, const FindingIndex& index) {
  static constexpr std::array<std::string_view, 4> kGroups{"text", "question", "alternatives", "interaction"};
  const auto types = all_error_types();
  std::vector<std::size_t> counts(kGroups.size() * types.size(), 0);
  auto group_index = [](std::string_view g) {
    return static_cast<std::size_t>(std::find(kGroups.begin(), kGroups.end(), g) - kGroups.begin());
  };
  for (const auto& it : items) {
    std::set<std::size_t> hit;
    auto add = [&](const ErrorFinding& f) {
      hit.insert(group_index(element_group(f.element)) * types.size() + static_cast<std::size_t>(f.type));
    };
    for (const auto& f : index.text_findings(*it.passage)) add(f);
    for (const auto& f : index.unit_findings(it)) add(f);
    for (auto h : hit) ++counts[h];
  }
  std::vector<ProblemCount> out;
  for (std::size_t g = 0; g < kGroups.size(); ++g)
    for (std::size_t t = 0; t < types.size(); ++t)
      if (auto n = counts[g * types.size() + t]) out.push_back({std::string(kGroups[g]), types[t], n});
  return out;
}

CategoryHeatmap category_heatmap(std::span<const AnalysisItem> items, const FindingIndex& index) {
  CategoryHeatmap m{};
  for (const auto& it : items)
    ++m[static_cast<std::size_t>(index.text_category(*it.passage))][static_cast<std::size_t>(index.unit_category(it))];
  return m;
}

std::size_t acceptable_text_count(std::span<const AnalysisItem> items, const FindingIndex& index) {
  std::unordered_set<const TextPassage*> seen;
  std::size_t n = 0;
  for (const auto& it : items)
    if (seen.insert(it.passage).second && index.text_category(*it.passage) == Acceptability::acceptable) ++n;
  return n;
}

std::size_t bucket_of(std::size_t c, std::size_t text_length) {
  return std::min<std::size_t>(c * kBuckets / text_length, kBuckets - 1);
}

std::vector<std::size_t> bases_bucket_map(std::size_t text_length, CharRange span) {
  if (text_length == 0) throw SpanError("basis on an empty text");
  if (span.begin >= span.end || span.end > text_length)
    throw SpanError("basis span [" + std::to_string(span.begin) + ", " + std::to_string(span.end) +
                    ") invalid for a text of " + std::to_string(text_length) + " characters");
  std::vector<std::size_t> out;
  for (std::size_t b = bucket_of(span.begin, text_length); b <= bucket_of(span.end - 1, text_length); ++b)
    out.push_back(b);
  return out;
}

BasesHeatmap& BasesHeatmap::operator+=(const BasesHeatmap& o) {
  for (std::size_t l = 0; l < 4; ++l) {
    mcqs_with_basis[l] += o.mcqs_with_basis[l];
    for (std::size_t b = 0; b < kBuckets; ++b) cells[l][b] += o.cells[l][b];
  }
  return *this;
}

BasesHeatmap bases_heatmap(std::span<const AnalysisItem> items) {
  BasesHeatmap h;
  for (const auto& it : items) {
    std::array<std::bitset<kBuckets>, 4> covered;
    std::array<bool, 4> any{};
    for (const auto& basis : it.record->bases) {
      const auto l = label_index(basis.label);
      any[l] = true;
      for (auto b : bases_bucket_map(it.passage->length(), basis.span)) covered[l].set(b);
    }
    for (std::size_t l = 0; l < 4; ++l) {
      if (!any[l]) continue;
      ++h.mcqs_with_basis[l];
      for (std::size_t b = 0; b < kBuckets; ++b) h.cells[l][b] += covered[l][b];
    }
  }
  return h;
}

Report build_report(const Corpus& corpus, std::span<const AnnotationRecord> records, const GateOptions& options) {
  Report report;
  GateResult gate = apply_quality_gate(corpus, records, options);
  report.trace = gate.trace;
  report.warnings = gate.warnings;

  std::vector<Scorecard> cards;
  std::vector<ResolvedAssessment> assessments;
  for (const auto& it : gate.retained) {
    auto a = resolve_assessment(*it.record, it.mcq);
    if (!a) {
      ++report.unscored;
      continue;
    }
    cards.push_back(score_resolved(*a, it.mcq->mcq_id));
    assessments.push_back(std::move(*a));
  }
  report.difficulty = difficulty_distribution(cards);
  for (auto v : kVariables) report.variables.emplace_back(v, variable_distribution(assessments, v));

  FindingIndex index(gate.annotated, options.include_detected);
  report.problems = problem_distribution(gate.analysed, index);
  report.categories = category_heatmap(gate.analysed, index);
  report.analysed_texts = count_items(gate.analysed).first;
  report.acceptable_texts = acceptable_text_count(gate.analysed, index);
  report.bases = bases_heatmap(gate.retained);
  return report;
}

namespace {

constexpr std::array<std::string_view, 6> kKinds{"gate", "difficulty", "variables", "problems", "categories", "bases"};
constexpr int kLowestBin = 2;   // floor of the 2.5 minimum
constexpr int kHighestBin = 29;

void write_stage_rows(std::ostream& out, const GateTrace& trace) {
  out << "stage\ttexts\tmcqs\tdropped\n";
  for (const auto& s : trace.stages) {
    out << s.name << '\t' << s.texts << '\t' << s.mcqs << '\t';
    bool first = true;
    for (const auto& [reason, n] : s.dropped) {
      out << (first ? "" : ",") << reason << '=' << n;
      first = false;
    }
    out << '\n';
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json difficulty_json(const Report& r) {
  const auto& d = r.difficulty;
  json bins = json::array();
  for (int k = kLowestBin; k <= kHighestBin; ++k) {
    auto it = d.histogram.find(k);
    bins.push_back({{"bin", k}, {"lower", k}, {"upper", k + 1}, {"count", it == d.histogram.end() ? 0 : it->second}});
  }
  return json{{"count", d.count},
              {"unscored", r.unscored},
              {"mean", optional_json(d.mean)},
              {"median", optional_json(d.median)},
              {"mode", d.mode ? json(*d.mode) : json(nullptr)},
              {"mode_ties", "smallest bin"},
              {"min", d.min ? d.min->to_json() : json(nullptr)},
              {"max", d.max ? d.max->to_json() : json(nullptr)},
              {"bins", bins}};
}

json variables_json(const Report& r) {
  json out = json::object();
  for (const auto& [v, counts] : r.variables) {
    const Scale scale = scale_of(v);
    json rows = json::array();
    for (const auto& [name, n] : counts)
      rows.push_back({{"category", name}, {"points", find_category(scale, name)->points.to_json()}, {"count", n}});
    out[std::string(to_string(v))] = rows;
  }
  return out;
}

json problems_json(const Report& r) {
  json rows = json::array();
  for (const auto& p : r.problems)
    rows.push_back({{"group", p.group},
                    {"type", to_string(p.type)},
                    {"severity", to_string(severity_of(p.type))},
                    {"mcqs", p.mcqs}});
  return rows;
}

constexpr std::array<Acceptability, 4> kCategories{Acceptability::acceptable, Acceptability::mainly_acceptable,
                                                   Acceptability::partially_acceptable, Acceptability::unacceptable};

json categories_json(const Report& r) {
  json axes = json::array();
  for (auto a : kCategories) axes.push_back(to_string(a));
  std::size_t mcqs = 0;
  for (const auto& row : r.categories)
    for (auto n : row) mcqs += n;
  return json{{"rows", "text"},
              {"columns", "unit"},
              {"axes", axes},
              {"matrix", r.categories},
              {"analysed_mcqs", mcqs},
              {"analysed_texts", r.analysed_texts},
              {"acceptable_texts", r.acceptable_texts},
              {"fully_acceptable_mcqs", r.categories[0][0]}};
}

json bases_json(const Report& r) {
  json labels = json::object();
  for (auto l : kLabels)
    labels[std::string(1, label_char(l))] = {{"mcqs_with_basis", r.bases.mcqs_with_basis[label_index(l)]},
                                             {"cells", r.bases.cells[label_index(l)]}};
  return json{{"buckets", kBuckets}, {"labels", labels}};
}

}  // namespace

std::span<const std::string_view> report_kinds() { return kKinds; }

json gate_trace_json(const GateTrace& trace) {
  json stages = json::array();
  for (const auto& s : trace.stages)
    stages.push_back({{"stage", s.name}, {"texts", s.texts}, {"mcqs", s.mcqs}, {"dropped", s.dropped}});
  return json{{"stages", stages}};
}

std::string gate_trace_table(const GateTrace& trace) {
  std::ostringstream out;
  write_stage_rows(out, trace);
  if (!trace.stages.empty())
    out << trace.stages.back().mcqs << " MCQs / " << trace.stages.back().texts << " texts\n";
  return out.str();
}

json report_json(const Report& r, std::string_view kind) {
  if (kind == "gate") return gate_trace_json(r.trace);
  if (kind == "difficulty") return difficulty_json(r);
  if (kind == "variables") return variables_json(r);
  if (kind == "problems") return problems_json(r);
  if (kind == "categories") return categories_json(r);
  if (kind == "bases") return bases_json(r);
  if (kind == "all") {
    json out = json::object();
    for (auto k : kKinds) out[std::string(k)] = report_json(r, k);
    out["warnings"] = r.warnings;
    return out;
  }
  throw Error("unknown report kind '" + std::string(kind) + "'");
}

std::string report_tsv(const Report& r, std::string_view kind) {
  std::ostringstream out;
  if (kind == "gate") {
    write_stage_rows(out, r.trace);
  } else if (kind == "difficulty") {
    out << "bin\tlower\tupper\tcount\n";
    for (int k = kLowestBin; k <= kHighestBin; ++k) {
      auto it = r.difficulty.histogram.find(k);
      out << k << '\t' << k << '\t' << k + 1 << '\t' << (it == r.difficulty.histogram.end() ? 0 : it->second)
          << '\n';
    }
  } else if (kind == "variables") {
    out << "variable\tcategory\tpoints\tcount\n";
    for (const auto& [v, counts] : r.variables)
      for (const auto& [name, n] : counts)
        out << to_string(v) << '\t' << name << '\t' << find_category(scale_of(v), name)->points.str() << '\t' << n
            << '\n';
  } else if (kind == "problems") {
    out << "group\ttype\tseverity\tmcqs\n";
    for (const auto& p : r.problems)
      out << p.group << '\t' << to_string(p.type) << '\t' << to_string(severity_of(p.type)) << '\t' << p.mcqs
          << '\n';
  } else if (kind == "categories") {
    out << "text\\unit";
    for (auto a : kCategories) out << '\t' << to_string(a);
    out << '\n';
    for (std::size_t t = 0; t < 4; ++t) {
      out << to_string(kCategories[t]);
      for (auto n : r.categories[t]) out << '\t' << n;
      out << '\n';
    }
  } else if (kind == "bases") {
    out << "label";
    for (std::size_t b = 0; b < kBuckets; ++b) out << '\t' << b;
    out << '\n';
    for (auto l : kLabels) {
      out << label_char(l);
      for (auto n : r.bases.cells[label_index(l)]) out << '\t' << n;
      out << '\n';
    }
  } else {
    throw Error("unknown report kind '" + std::string(kind) + "'");
  }
  return out.str();
}

void write_report(const Report& r, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (auto kind : kKinds) {
    const std::string name(kind);
    write_file_atomic(dir / (name + ".json"), report_json(r, kind).dump(2) + "\n");
    write_file_atomic(dir / (name + ".tsv"), report_tsv(r, kind));
  }
}

namespace {

std::string num(const json& j) {
  if (j.is_null()) return "undefined";
  if (j.is_number_float()) {
    std::ostringstream s;
    s << j.get<double>();
    return s.str();
  }
  return j.dump();
}

}  // namespace

std::vector<ReferenceCheck> check_reference(const Report& r, const json& ref) {
  std::vector<ReferenceCheck> out;
  auto exact = [&](std::string name, const json& expected, const json& actual) {
    out.push_back({std::move(name), num(expected), num(actual), !actual.is_null() && expected == actual});
  };

  if (ref.contains("stages")) {
    for (const auto& [stage, counts] : ref.at("stages").items()) {
      const GateStage* s = r.trace.find(stage);
      for (const auto& key : {"texts", "mcqs"}) {
        if (!counts.contains(key)) continue;
        json actual = s ? json(key == std::string_view("texts") ? s->texts : s->mcqs) : json(nullptr);
        exact("stage " + stage + " " + key, counts.at(key), actual);
      }
    }
  }

  if (ref.contains("difficulty")) {
    const auto& d = ref.at("difficulty");
    const auto& got = r.difficulty;
    if (d.contains("mean")) {
      double want = d.at("mean").at("value").get<double>();
      double tol = d.at("mean").value("tolerance", 0.0);
      bool pass = got.mean && std::fabs(*got.mean - want) <= tol + 1e-12;
      out.push_back({"difficulty mean", num(want) + " +/- " + num(tol), num(optional_json(got.mean)), pass});
    }
    if (d.contains("median")) {
      json actual = optional_json(got.median);
      bool pass = got.median && *got.median == d.at("median").get<double>();
      out.push_back({"difficulty median", num(d.at("median")), num(actual), pass});
    }
    if (d.contains("mode")) exact("difficulty mode", d.at("mode"), got.mode ? json(*got.mode) : json(nullptr));
    if (d.contains("min_at_least")) {
      double bound = d.at("min_at_least").get<double>();
      out.push_back({"difficulty min", ">= " + num(bound), got.min ? got.min->str() : "undefined",
                     got.min && got.min->value() >= bound});
    }
    if (d.contains("max_at_most")) {
      double bound = d.at("max_at_most").get<double>();
      out.push_back({"difficulty max", "<= " + num(bound), got.max ? got.max->str() : "undefined",
                     got.max && got.max->value() <= bound});
    }
  }

  if (ref.contains("variables")) {
    for (const auto& [var, cats] : ref.at("variables").items()) {
      auto v = parse_variable(var);
      const CategoryCounts* counts = nullptr;
      for (const auto& [rv, c] : r.variables)
        if (v && rv == *v) counts = &c;
      for (const auto& [cat, n] : cats.items()) {
        json actual = nullptr;
        if (counts)
          for (const auto& [name, k] : *counts)
            if (name == cat) actual = k;
        exact(var + " " + cat, n, actual);
      }
    }
  }

  if (ref.contains("problems")) {
    for (const auto& p : ref.at("problems")) {
      const auto group = p.at("group").get<std::string>();
      const auto type = p.at("type").get<std::string>();
      std::size_t actual = 0;
      for (const auto& got : r.problems)
        if (got.group == group && to_string(got.type) == type) actual = got.mcqs;
      exact(group + " " + type, p.at("mcqs"), actual);
    }
  }

  if (ref.contains("categories")) {
    const auto got = categories_json(r);
    for (const auto& [key, n] : ref.at("categories").items())
      exact("categories " + key, n, got.contains(key) ? got.at(key) : json(nullptr));
  }
  return out;
}

}  // namespace mcqa
