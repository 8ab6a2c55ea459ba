#include "mcqa/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "mcqa/errors.hpp"

namespace mcqa {

using nlohmann::json;

json to_json(const Scorecard& card) {
  json j = json::object();
  if (!card.mcq_id.empty()) j["mcq_id"] = card.mcq_id;
  for (auto v : kVariables) j[std::string(to_string(v))] = card[v].to_json();
  j["total"] = card.total.to_json();
  return j;
}

json to_json(const ValidationFinding& f) {
  return json{{"variable", to_string(f.variable)}, {"message", f.message}};
}

HalfPoints score_variable(Scale scale, std::string_view category) {
  if (scale == Scale::tom_tq || scale == Scale::tom_ta)
    throw VocabularyError("a single TOM relation has no points; score the (T-Q, T-A) pair");
  if (scale == Scale::toi) {
    auto canonical = canonical_toi(category);
    if (!canonical) throw VocabularyError("TOI: unknown concept '" + std::string(category) + "'");
    category = *canonical;
  }
  const auto* c = find_category(scale, category);
  if (!c)
    throw VocabularyError(std::string(to_string(scale)) + ": unknown category '" + std::string(category) + "'");
  return c->points;
}

std::string tom_category(Relation tq, Relation ta, bool gen) {
  if (gen) return "GEN";
  if (tq == Relation::HLTI && ta == Relation::HLTI)
    throw ValidationError("TOM: HLTI on both relations is generating an interpretive framework; set tom_gen");
  if (tq == Relation::HLTI || ta == Relation::HLTI) return "HLTI";
  auto lo = std::min(tq, ta), hi = std::max(tq, ta);
  return std::string(to_string(lo)) + "-" + std::string(to_string(hi));
}

HalfPoints score_tom(Relation tq, Relation ta, bool gen) {
  return find_category(Scale::tom, tom_category(tq, ta, gen))->points;
}

ToiResolution resolve_alternatives_toi(std::span<const std::string> concepts) {
  std::vector<std::string> canon;
  for (const auto& c : concepts) {
    auto k = canonical_toi(c);
    if (!k) throw VocabularyError("TOI: unknown concept '" + c + "'");
    canon.emplace_back(*k);
  }
  if (canon.size() == 1) {
    auto kind = canon[0] == kIndeterminate ? ToiResolution::Kind::indeterminate : ToiResolution::Kind::unanimous;
    return {kind, canon[0]};
  }
  if (canon.size() != 4) throw ValidationError("TOI: expected one concept per alternative");
  std::map<std::string, int> counts;
  for (const auto& c : canon) ++counts[c];
  int largest = 0;
  for (const auto& [_, n] : counts) largest = std::max(largest, n);
  if (largest == 4) {
    auto kind = canon[0] == kIndeterminate ? ToiResolution::Kind::indeterminate : ToiResolution::Kind::unanimous;
    return {kind, canon[0]};
  }
  if (largest == 3) return {ToiResolution::Kind::split_3to1, ""};
  return {ToiResolution::Kind::indeterminate, std::string(kIndeterminate)};
}

HalfPoints score_ic(std::string_view ic, std::string_view npar) {
  if (!find_category(Scale::ic, ic)) throw VocabularyError("IC: unknown category '" + std::string(ic) + "'");
  if (!find_category(Scale::npar, npar))
    throw VocabularyError("NPar: unknown category '" + std::string(npar) + "'");
  // Synthesis across paragraphs already earns the point; contrast adds nothing on top.
  return (ic == "contrast" || npar == "between_paragraphs") ? HalfPoints::whole(1) : HalfPoints::whole(0);
}

namespace {

std::string pick(Scale scale, std::span<const std::string> candidates, bool lowest) {
  if (candidates.empty())
    throw ValidationError(std::string(to_string(scale)) + ": no candidate categories to resolve");
  const Category* best = nullptr;
  int best_row = -1;
  for (const auto& name : candidates) {
    std::string_view key = name;
    if (scale == Scale::toi) {
      auto canonical = canonical_toi(name);
      if (canonical) key = *canonical;
    }
    const Category* c = find_category(scale, key);
    if (!c)
      throw ValidationError(std::string(to_string(scale)) + ": candidate '" + name +
                            "' is not in this variable's vocabulary");
    int row = category_row(scale, key);
    bool better = !best || (lowest ? (c->points < best->points || (c->points == best->points && row < best_row))
                                   : (c->points > best->points || (c->points == best->points && row > best_row)));
    if (better) {
      best = c;
      best_row = row;
    }
  }
  // Return the annotator's spelling for the chosen category.
  for (const auto& name : candidates) {
    std::string_view key = name;
    if (scale == Scale::toi)
      if (auto canonical = canonical_toi(name)) key = *canonical;
    if (key == best->name) return name;
  }
  return std::string(best->name);
}

Relation relation_of(const Candidates& c) {
  return *parse_relation(pick(Scale::tom_tq, c, false));
}

}  // namespace

std::string select_pod_category(std::span<const std::string> per_distractor) {
  if (per_distractor.empty()) throw ValidationError("POD: no distractor categories");
  return pick(Scale::pod, per_distractor, false);
}

std::string resolve_multi_category(Scale scale, std::span<const std::string> candidates) {
  return pick(scale, candidates, scale == Scale::toi);
}

std::optional<int> complex_alternative_items(const MCQUnit& mcq) {
  const std::string key = mcq.key_text();
  std::string lower = to_lower_ascii(key);
  if (lower.find("all of the above") != std::string::npos || lower.find("all the above") != std::string::npos)
    return 3;
  // Only the words below may appear: "Both A and B", "A, B and C", "A & C".
  std::vector<std::string> words;
  std::string cur;
  for (char ch : key) {
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    } else {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  std::set<char> letters;
  for (const auto& w : words) {
    if (w.size() == 1 && w[0] >= 'A' && w[0] <= 'D') {
      letters.insert(w[0]);
      continue;
    }
    auto lw = to_lower_ascii(w);
    if (lw != "both" && lw != "and") return std::nullopt;
  }
  if (letters.size() < 2) return std::nullopt;
  return static_cast<int>(letters.size());
}

std::vector<ValidationFinding> validate_complete(const AnnotationRecord& r, const MCQUnit* mcq) {
  std::vector<ValidationFinding> out;
  auto missing = [&](Variable v, std::string detail = {}) {
    std::string msg = std::string(to_string(v)) + " missing";
    if (!detail.empty()) msg += " " + detail;
    out.push_back({v, std::move(msg)});
  };

  if (r.toi.empty()) {
    missing(Variable::TOI);
  } else {
    std::vector<std::string> per_alt;
    for (const auto& c : r.toi) per_alt.push_back(resolve_multi_category(Scale::toi, c));
    if (resolve_alternatives_toi(per_alt).kind == ToiResolution::Kind::split_3to1)
      out.push_back({Variable::TOI, "TOI 3+1 split across alternatives; excluded from difficulty analysis"});
  }

  if (!r.tom_gen) {
    if (!r.tom_tq && !r.tom_ta) {
      missing(Variable::TOM);
    } else if (!r.tom_tq) {
      missing(Variable::TOM, "T-Q relation");
    } else if (!r.tom_ta) {
      missing(Variable::TOM, "T-A relation");
    } else if (relation_of(*r.tom_tq) == Relation::HLTI && relation_of(*r.tom_ta) == Relation::HLTI) {
      out.push_back({Variable::TOM, "TOM inconsistent: HLTI on both relations requires tom_gen"});
    }
  }

  if (!r.nphr) missing(Variable::NPhr);
  if (!r.ni) {
    missing(Variable::NI);
  } else if (mcq) {
    if (auto implied = complex_alternative_items(*mcq); implied && *r.ni < *implied)
      out.push_back({Variable::NI, "NI inconsistent: key '" + mcq->key_text() + "' combines " +
                                       std::to_string(*implied) + " alternatives but NI is " +
                                       std::to_string(*r.ni)});
  }
  if (!r.nit) missing(Variable::NIt);
  if (!r.npar) missing(Variable::NPar);
  if (!r.ic) missing(Variable::IC);
  if (r.pod.empty()) missing(Variable::POD);
  if (!r.toc) missing(Variable::TOC);
  return out;
}

std::optional<ResolvedAssessment> resolve_assessment(const AnnotationRecord& r, const MCQUnit* mcq) {
  if (!validate_complete(r, mcq).empty()) return std::nullopt;
  ResolvedAssessment a;
  std::vector<std::string> per_alt;
  for (const auto& c : r.toi) per_alt.push_back(resolve_multi_category(Scale::toi, c));
  a.toi = resolve_alternatives_toi(per_alt).concept_name;
  a.tom = r.tom_gen ? "GEN" : tom_category(relation_of(*r.tom_tq), relation_of(*r.tom_ta), false);
  a.nphr = *r.nphr;
  a.ni = *r.ni;
  a.nit = resolve_multi_category(Scale::nit, *r.nit);
  a.npar = resolve_multi_category(Scale::npar, *r.npar);
  a.ic = resolve_multi_category(Scale::ic, *r.ic);
  a.pod = select_pod_category(r.pod);
  a.toc = resolve_multi_category(Scale::toc, *r.toc);
  return a;
}

Scorecard score_resolved(const ResolvedAssessment& a, std::string mcq_id) {
  Scorecard card;
  card.mcq_id = std::move(mcq_id);
  auto set = [&](Variable v, HalfPoints p) { card.components[static_cast<std::size_t>(v)] = p; };
  set(Variable::TOI, score_variable(Scale::toi, a.toi));
  set(Variable::TOM, score_variable(Scale::tom, a.tom));
  set(Variable::NPhr, score_variable(Scale::nphr, nphr_band(a.nphr)));
  set(Variable::NI, score_variable(Scale::ni, ni_band(a.ni)));
  set(Variable::NIt, score_variable(Scale::nit, a.nit));
  set(Variable::NPar, score_variable(Scale::npar, a.npar));
  set(Variable::IC, score_ic(a.ic, a.npar));
  set(Variable::POD, score_variable(Scale::pod, a.pod));
  set(Variable::TOC, score_variable(Scale::toc, a.toc));
  for (auto p : card.components) card.total += p;
  return card;
}

Scorecard score_total(const AnnotationRecord& record, const MCQUnit* mcq) {
  auto findings = validate_complete(record, mcq);
  if (!findings.empty()) {
    std::string msg = record.mcq_id + ": incomplete annotation:";
    for (const auto& f : findings) msg += " " + f.message + ";";
    msg.pop_back();
    throw ValidationError(msg);
  }
  return score_resolved(*resolve_assessment(record, mcq), record.mcq_id);
}

}  // namespace mcqa
