#include "mcqa/annotation.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "mcqa/errors.hpp"
#include "mcqa/io.hpp"
#include "mcqa/vocabulary.hpp"

namespace mcqa {

using nlohmann::json;

std::string_view to_string(ExclusionFlag f) {
  switch (f) {
    case ExclusionFlag::non_continuous_text: return "non_continuous_text";
    case ExclusionFlag::non_content_aspect: return "non_content_aspect";
    case ExclusionFlag::partly_continuous_text: return "partly_continuous_text";
    case ExclusionFlag::severe_problem: return "severe_problem";
    case ExclusionFlag::toi_3to1_split: return "toi_3to1_split";
  }
  return "severe_problem";
}

std::optional<ExclusionFlag> parse_exclusion_flag(std::string_view s) {
  for (auto f : {ExclusionFlag::non_continuous_text, ExclusionFlag::non_content_aspect,
                 ExclusionFlag::partly_continuous_text, ExclusionFlag::severe_problem,
                 ExclusionFlag::toi_3to1_split})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

namespace {

json candidates_json(const Candidates& c) {
  if (c.size() == 1) return c.front();
  return json(c);
}

Candidates parse_candidates(const json& j, const char* field) {
  Candidates out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_array() && !j.empty()) {
    for (const auto& e : j) {
      if (!e.is_string()) throw SchemaError(std::string(field) + ": candidates must be strings");
      out.push_back(e.get<std::string>());
    }
  } else {
    throw SchemaError(std::string(field) + ": expected a category string or a non-empty array of them");
  }
  return out;
}

void check_scale(Scale scale, const Candidates& c, const char* field) {
  for (const auto& name : c)
    if (!find_category(scale, name))
      throw VocabularyError(std::string(field) + ": unknown category '" + name + "' for " +
                            std::string(to_string(scale)));
}

void check_toi(const Candidates& c) {
  for (const auto& name : c) {
    if (canonical_toi(name)) continue;
    if (name == "job" || name == "profession" || name == "position")
      throw VocabularyError("toi: '" + name + "' is context-dependent; annotate it as person, group or role");
    throw VocabularyError("toi: unknown concept '" + name + "'");
  }
}

int parse_count(const json& j, const char* field) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw SchemaError(std::string(field) + ": expected an integer >= 1");
  return static_cast<int>(j.get<long long>());
}

CharRange parse_span(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !is_offset(j[0]) || !is_offset(j[1]))
    throw SchemaError(std::string(what) + ": span must be [start, end] with non-negative integers");
  CharRange r{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  if (r.empty())
    throw SpanError(std::string(what) + ": empty or reversed span [" + std::to_string(r.begin) + ", " +
                    std::to_string(r.end) + ")");
  return r;
}

void check_within(const CharRange& r, std::size_t length, const std::string& what) {
  if (r.end > length)
    throw SpanError(what + ": span [" + std::to_string(r.begin) + ", " + std::to_string(r.end) +
                    ") exceeds element length " + std::to_string(length));
}

std::size_t element_length(const Element& e, const MCQUnit& mcq) {
  switch (e.kind) {
    case ElementKind::question: return scalar_length(mcq.stem);
    case ElementKind::alternative: return scalar_length(mcq.alternative(*e.label));
    default: return 0;
  }
}

const std::unordered_set<std::string>& known_keys() {
  static const std::unordered_set<std::string> keys{
      "mcq_id", "toi", "tom_tq", "tom_ta", "tom_gen", "nphr", "ni", "nit", "npar", "ic", "pod", "toc",
      "bases", "error_marks", "exclusion_flags", "text_format", "membership", "aspect", "revision"};
  return keys;
}

AnnotationRecord parse_record(const json& j, const TextPassage* passage, const MCQUnit* mcq) {
  if (!j.is_object()) throw SchemaError("annotation record must be an object");
  for (const auto& [key, _] : j.items())
    if (!known_keys().count(key)) throw SchemaError("unknown field '" + key + "'");
  if (!j.contains("mcq_id") || !j["mcq_id"].is_string()) throw SchemaError("missing field 'mcq_id'");

  AnnotationRecord r;
  r.mcq_id = j["mcq_id"].get<std::string>();

  if (j.contains("toi") && !j["toi"].is_null()) {
    const auto& t = j["toi"];
    if (t.is_string()) {
      r.toi.push_back({t.get<std::string>()});
    } else if (t.is_array()) {
      for (const auto& e : t) r.toi.push_back(parse_candidates(e, "toi"));
    } else {
      throw SchemaError("toi: expected a concept or an array of concepts");
    }
    if (r.toi.size() != 1 && r.toi.size() != 4)
      throw SchemaError("toi: expected one resolved concept or one concept per alternative (4), got " +
                        std::to_string(r.toi.size()));
    for (const auto& c : r.toi) check_toi(c);
  }

  auto optional_scale = [&](const char* field, Scale scale, std::optional<Candidates>& dst) {
    if (!j.contains(field) || j[field].is_null()) return;
    dst = parse_candidates(j[field], field);
    check_scale(scale, *dst, field);
  };
  optional_scale("tom_tq", Scale::tom_tq, r.tom_tq);
  optional_scale("tom_ta", Scale::tom_ta, r.tom_ta);
  optional_scale("nit", Scale::nit, r.nit);
  optional_scale("npar", Scale::npar, r.npar);
  optional_scale("ic", Scale::ic, r.ic);
  optional_scale("toc", Scale::toc, r.toc);

  if (j.contains("tom_gen") && !j["tom_gen"].is_null()) {
    if (!j["tom_gen"].is_boolean()) throw SchemaError("tom_gen: expected a boolean");
    r.tom_gen = j["tom_gen"].get<bool>();
  }
  if (j.contains("nphr") && !j["nphr"].is_null()) r.nphr = parse_count(j["nphr"], "nphr");
  if (j.contains("ni") && !j["ni"].is_null()) r.ni = parse_count(j["ni"], "ni");

  if (j.contains("pod") && !j["pod"].is_null()) {
    const auto& p = j["pod"];
    Candidates pod = p.is_string() ? Candidates{p.get<std::string>()} : parse_candidates(p, "pod");
    if (pod.size() > 3) throw SchemaError("pod: at most one category per distractor (3)");
    check_scale(Scale::pod, pod, "pod");
    r.pod = std::move(pod);
  }

  if (j.contains("bases") && !j["bases"].is_null()) {
    if (!j["bases"].is_array()) throw SchemaError("bases: expected an array");
    for (const auto& b : j["bases"]) {
      if (!b.is_object() || !b.contains("label") || !b["label"].is_string() || !b.contains("span"))
        throw SchemaError("bases: each entry needs 'label' and 'span'");
      auto label = parse_label(b["label"].get<std::string>());
      if (!label) throw VocabularyError("bases: label '" + b["label"].get<std::string>() + "' not in A-D");
      BasisSpan basis{*label, parse_span(b["span"], "bases")};
      if (passage) check_within(basis.span, passage->length(), "bases " + std::string(1, label_char(*label)));
      r.bases.push_back(basis);
    }
  }

  if (j.contains("error_marks") && !j["error_marks"].is_null()) {
    if (!j["error_marks"].is_array()) throw SchemaError("error_marks: expected an array");
    for (const auto& m : j["error_marks"]) {
      auto f = error_finding_from_json(m, FindingSource::annotated);
      if (f.span) {
        if (f.element.kind == ElementKind::text && passage)
          check_within(*f.span, passage->length(), "error mark on text");
        else if (mcq && (f.element.kind == ElementKind::question || f.element.kind == ElementKind::alternative))
          check_within(*f.span, element_length(f.element, *mcq), "error mark on " + f.element.str());
      }
      r.error_marks.push_back(std::move(f));
    }
  }

  if (j.contains("exclusion_flags") && !j["exclusion_flags"].is_null()) {
    if (!j["exclusion_flags"].is_array()) throw SchemaError("exclusion_flags: expected an array");
    for (const auto& f : j["exclusion_flags"]) {
      if (!f.is_string()) throw SchemaError("exclusion_flags: expected strings");
      auto flag = parse_exclusion_flag(f.get<std::string>());
      if (!flag) throw VocabularyError("exclusion_flags: unknown flag '" + f.get<std::string>() + "'");
      r.exclusion_flags.insert(*flag);
    }
  }

  auto enum_field = [&](const char* field, auto parse, auto& dst) {
    if (!j.contains(field) || j[field].is_null()) return;
    if (!j[field].is_string()) throw SchemaError(std::string(field) + ": expected a string");
    auto v = parse(j[field].get<std::string>());
    if (!v) throw VocabularyError(std::string(field) + ": unknown value '" + j[field].get<std::string>() + "'");
    dst = *v;
  };
  enum_field("text_format", parse_text_format, r.text_format);
  enum_field("membership", parse_membership, r.membership);
  enum_field("aspect", parse_aspect, r.aspect);

  if (j.contains("revision") && !j["revision"].is_null()) {
    if (!is_offset(j["revision"])) throw SchemaError("revision: expected a non-negative integer");
    r.revision = j["revision"].get<std::uint64_t>();
  }
  return r;
}

}  // namespace

json to_json(const AnnotationRecord& r) {
  json j{{"mcq_id", r.mcq_id}};
  if (!r.toi.empty()) {
    json t = json::array();
    for (const auto& c : r.toi) t.push_back(candidates_json(c));
    j["toi"] = std::move(t);
  }
  if (r.tom_tq) j["tom_tq"] = candidates_json(*r.tom_tq);
  if (r.tom_ta) j["tom_ta"] = candidates_json(*r.tom_ta);
  if (r.tom_gen) j["tom_gen"] = true;
  if (r.nphr) j["nphr"] = *r.nphr;
  if (r.ni) j["ni"] = *r.ni;
  if (r.nit) j["nit"] = candidates_json(*r.nit);
  if (r.npar) j["npar"] = candidates_json(*r.npar);
  if (r.ic) j["ic"] = candidates_json(*r.ic);
  if (!r.pod.empty()) j["pod"] = r.pod;
  if (r.toc) j["toc"] = candidates_json(*r.toc);
  if (!r.bases.empty()) {
    json b = json::array();
    for (const auto& s : r.bases)
      b.push_back({{"label", std::string(1, label_char(s.label))}, {"span", {s.span.begin, s.span.end}}});
    j["bases"] = std::move(b);
  }
  if (!r.error_marks.empty()) {
    json m = json::array();
    for (const auto& f : r.error_marks) {
      json e = to_json(f);
      e.erase("source");
      m.push_back(std::move(e));
    }
    j["error_marks"] = std::move(m);
  }
  if (!r.exclusion_flags.empty()) {
    json f = json::array();
    for (auto flag : r.exclusion_flags) f.push_back(to_string(flag));
    j["exclusion_flags"] = std::move(f);
  }
  if (r.text_format) j["text_format"] = to_string(*r.text_format);
  if (r.membership) j["membership"] = to_string(*r.membership);
  if (r.aspect) j["aspect"] = to_string(*r.aspect);
  if (r.revision) j["revision"] = *r.revision;
  return j;
}

AnnotationRecord annotation_from_json(const json& j, const TextPassage* passage) {
  return parse_record(j, passage, nullptr);
}

AnnotationRecord annotation_from_json(const json& j, const Corpus& corpus) {
  if (!j.is_object() || !j.contains("mcq_id") || !j["mcq_id"].is_string())
    throw SchemaError("missing field 'mcq_id'");
  const auto id = j["mcq_id"].get<std::string>();
  const MCQUnit* mcq = corpus.find_mcq(id);
  if (!mcq) throw ReferenceError("annotation references unknown mcq_id '" + id + "'");
  return parse_record(j, &corpus.passage_of(*mcq), mcq);
}

std::vector<AnnotationRecord> parse_annotations(std::string_view jsonl, const Corpus& corpus,
                                                std::string_view source) {
  std::vector<AnnotationRecord> out;
  std::unordered_set<std::string> seen;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    auto line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = std::string(source) + ": line " + std::to_string(lineno);
    try {
      json j = json::parse(line);
      auto record = annotation_from_json(j, corpus);
      if (!seen.insert(record.mcq_id).second)
        throw ReferenceError("duplicate annotation for mcq_id '" + record.mcq_id + "'");
      out.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw SchemaError(where + ": " + e.what());
    } catch (const SpanError& e) {
      throw SpanError(where + ": " + e.what());
    } catch (const ReferenceError& e) {
      throw ReferenceError(where + ": " + e.what());
    } catch (const VocabularyError& e) {
      throw VocabularyError(where + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path, const Corpus& corpus) {
  return parse_annotations(read_file(path), corpus, path.string());
}

}  // namespace mcqa
