#include "mcqa/vocabulary.hpp"

#include <algorithm>
#include <cstdlib>

namespace mcqa {

using nlohmann::json;

std::string HalfPoints::str() const {
  const int whole = units_ / 2;
  const bool half = units_ % 2 != 0;
  std::string s = (units_ < 0 && whole == 0) ? "-0" : std::to_string(whole);
  if (half) s += ".5";
  return s;
}

json HalfPoints::to_json() const {
  if (units_ % 2 == 0) return json(units_ / 2);
  return json(value());
}

namespace {

constexpr HalfPoints P(int units) { return HalfPoints::from_units(units); }

// clang-format off
constexpr Category kToi[] = {
    {"person", P(2), ""}, {"animal", P(2), ""}, {"place", P(2), ""}, {"group", P(2), ""}, {"thing", P(2), ""},
    {"amount", P(4), ""}, {"time", P(4), ""}, {"attribute", P(4), ""}, {"action", P(4), ""},
    {"location", P(4), ""}, {"type/kind", P(4), ""}, {"procedure", P(4), ""}, {"part", P(4), ""},
    {"manner", P(6), ""}, {"goal", P(6), ""}, {"purpose", P(6), ""}, {"condition", P(6), ""},
    {"predicate adjective", P(6), ""}, {"function", P(6), ""}, {"alternative", P(6), ""},
    {"attempt", P(6), ""}, {"sequence", P(6), ""}, {"pronominal reference", P(6), ""},
    {"verification", P(6), ""}, {"assertion", P(6), ""}, {"problem", P(6), ""}, {"solution", P(6), ""},
    {"role", P(6), ""}, {"process", P(6), ""},
    {"cause", P(8), ""}, {"reason", P(8), ""}, {"result", P(8), ""}, {"effect", P(8), ""},
    {"justification", P(8), ""}, {"evidence", P(8), ""}, {"similarity", P(8), ""}, {"opinion", P(8), ""},
    {"explanation", P(8), ""}, {"theme", P(8), ""}, {"pattern", P(8), ""},
    {"equivalent", P(10), ""}, {"difference", P(10), ""}, {"definition", P(10), ""},
    {"advantage", P(10), ""}, {"indeterminate", P(10), "alternatives of 4 types or a 2+2 split"},
};

constexpr ToiAlias kToiAliases[] = {
    {"proper names (people)", "person"},
    {"proper names (published materials)", "thing"},
    {"proper names (names of events)", "thing"},
    {"contact details", "thing"},
    {"age", "amount"},
    {"prerequisite", "condition"},
    {"attitude", "opinion"},
    {"recommendation", "opinion"},
    {"piece of advice", "opinion"},
    {"main idea", "theme"},
    {"purpose of the passage", "theme"},
    {"example", "equivalent"},
};

constexpr Category kTom[] = {
    {"LM-LM", P(1), "both relations literal"},
    {"LM-SM", P(2), "one literal, the other synonymous"},
    {"SM-SM", P(3), "both relations synonymous"},
    {"LM-LLTI", P(4), "one low-level inference, the other literal"},
    {"SM-LLTI", P(5), "one low-level inference, the other synonymous"},
    {"LLTI-LLTI", P(6), "both relations low-level inference"},
    {"HLTI", P(8), "either relation requires a high-level inference"},
    {"GEN", P(10), "generate the appropriate interpretive framework"},
};

constexpr Category kRelation[] = {
    {"LM", P(2), "literal match"},
    {"SM", P(4), "synonymous match"},
    {"LLTI", P(6), "low-level text-based inference"},
    {"HLTI", P(8), "high-level text-based inference"},
};

constexpr Category kNphr[] = {
    {"1", P(0), "one clause"}, {"2", P(2), "two clauses"}, {"3", P(4), "three clauses"},
    {"4+", P(6), "four or more clauses"},
};

constexpr Category kNi[] = {
    {"1", P(0), "one item"}, {"2", P(2), "two items"}, {"3-4", P(4), "three or four items"},
    {"5+", P(6), "five or more items"},
};

constexpr Category kNit[] = {
    {"specified", P(0), "item count given in the stem or equal across alternatives"},
    {"unspecified", P(2), "item count not derivable from the MCQ unit"},
};

constexpr Category kNpar[] = {
    {"within_paragraph", P(0), "one paragraph suffices"},
    {"between_paragraphs", P(2), "two or more paragraphs required"},
};

constexpr Category kIc[] = {
    {"compare", P(0), "compare, or synthesis of features throughout a paragraph"},
    {"contrast", P(2), "contrast, or synthesis of features throughout paragraphs"},
};

constexpr Category kPod[] = {
    {"no_distracting_information", P(2), "no distracting information in the text"},
    {"literal_not_same_paragraph", P(3),
     "distractor corresponds literally to the text, not in the key's paragraph"},
    {"synonymous_not_same_paragraph", P(4),
     "distractor is synonymous to the text, not in the key's paragraph"},
    {"invited_inference_not_same_paragraph", P(6),
     "plausible invited inference not based on the key's paragraph"},
    {"one_related_same_paragraph", P(8), "one distractor related to the key's paragraph"},
    {"two_or_more_related_same_paragraph", P(10), "two or more distractors related to the key's paragraph"},
    {"outside_text_inference", P(10), "plausible inference based on information outside the text"},
};

constexpr Category kToc[] = {
    {"none", P(0), "no calculations"},
    {"addition", P(2), "single addition"},
    {"one_by_one_counting", P(2), "one-by-one counting, scored as single addition"},
    {"subtraction", P(4), "single subtraction"},
    {"multiplication", P(6), "single multiplication"},
    {"division", P(8), "single division"},
    {"multiple", P(10), "multiple operations"},
};
// clang-format on

struct ScaleInfo {
  Scale scale;
  std::string_view name;
  Variable variable;
  std::span<const Category> categories;
};

constexpr ScaleInfo kScales[] = {
    {Scale::toi, "TOI", Variable::TOI, kToi},          {Scale::tom, "TOM", Variable::TOM, kTom},
    {Scale::tom_tq, "TOM_TQ", Variable::TOM, kRelation}, {Scale::tom_ta, "TOM_TA", Variable::TOM, kRelation},
    {Scale::nphr, "NPhr", Variable::NPhr, kNphr},      {Scale::ni, "NI", Variable::NI, kNi},
    {Scale::nit, "NIt", Variable::NIt, kNit},          {Scale::npar, "NPar", Variable::NPar, kNpar},
    {Scale::ic, "IC", Variable::IC, kIc},              {Scale::pod, "POD", Variable::POD, kPod},
    {Scale::toc, "TOC", Variable::TOC, kToc},
};

const ScaleInfo& info(Scale s) {
  return *std::find_if(std::begin(kScales), std::end(kScales), [s](const ScaleInfo& i) { return i.scale == s; });
}

}  // namespace

std::string_view to_string(Variable v) {
  static constexpr std::string_view names[] = {"TOI", "TOM", "NPhr", "NI", "NIt", "NPar", "IC", "POD", "TOC"};
  return names[static_cast<int>(v)];
}

std::optional<Variable> parse_variable(std::string_view s) {
  for (auto v : kVariables)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::string_view to_string(Scale s) { return info(s).name; }

std::optional<Scale> parse_scale(std::string_view s) {
  for (const auto& i : kScales)
    if (i.name == s) return i.scale;
  return std::nullopt;
}

Variable variable_of(Scale s) { return info(s).variable; }

std::span<const Category> vocabulary(Scale s) { return info(s).categories; }

const Category* find_category(Scale s, std::string_view name) {
  for (const auto& c : vocabulary(s))
    if (c.name == name) return &c;
  return nullptr;
}

int category_row(Scale s, std::string_view name) {
  auto cats = vocabulary(s);
  for (std::size_t i = 0; i < cats.size(); ++i)
    if (cats[i].name == name) return static_cast<int>(i);
  return -1;
}

std::string_view to_string(Relation r) {
  static constexpr std::string_view names[] = {"LM", "SM", "LLTI", "HLTI"};
  return names[static_cast<int>(r)];
}

std::optional<Relation> parse_relation(std::string_view s) {
  for (auto r : kRelations)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::span<const ToiAlias> toi_aliases() { return kToiAliases; }

std::optional<std::string_view> canonical_toi(std::string_view name) {
  if (const auto* c = find_category(Scale::toi, name)) return c->name;
  for (const auto& a : kToiAliases)
    if (a.alias == name) return a.concept_name;
  return std::nullopt;
}

std::string_view nphr_band(int clauses) {
  if (clauses <= 1) return "1";
  if (clauses == 2) return "2";
  if (clauses == 3) return "3";
  return "4+";
}

std::string_view ni_band(int items) {
  if (items <= 1) return "1";
  if (items == 2) return "2";
  if (items <= 4) return "3-4";
  return "5+";
}

json vocabulary_json() {
  json scales = json::object();
  for (const auto& i : kScales) {
    json cats = json::array();
    for (const auto& c : i.categories) {
      json entry{{"name", c.name}, {"points", c.points.to_json()}};
      if (!c.description.empty()) entry["description"] = c.description;
      cats.push_back(std::move(entry));
    }
    scales[std::string(i.name)] = {{"variable", to_string(i.variable)}, {"categories", std::move(cats)}};
  }
  // Relation scales rank rather than score.
  for (auto name : {"TOM_TQ", "TOM_TA"}) scales[name]["ranked_only"] = true;
  json aliases = json::object();
  for (const auto& a : kToiAliases) aliases[std::string(a.alias)] = a.concept_name;
  json tom_matrix = json::array();
  for (auto tq : kRelations)
    for (auto ta : kRelations) {
      if (tq == Relation::HLTI && ta == Relation::HLTI) continue;
      int hi = std::max(static_cast<int>(tq), static_cast<int>(ta));
      int lo = std::min(static_cast<int>(tq), static_cast<int>(ta));
      std::string cat = hi == 3 ? "HLTI"
                                : std::string(to_string(static_cast<Relation>(lo))) + "-" +
                                      std::string(to_string(static_cast<Relation>(hi)));
      tom_matrix.push_back({{"tq", to_string(tq)}, {"ta", to_string(ta)}, {"category", cat}});
    }
  return json{{"scales", std::move(scales)},
              {"toi_aliases", std::move(aliases)},
              {"tom_matrix", std::move(tom_matrix)},
              {"tom_gen_category", "GEN"},
              {"components", {"TOI", "TOM", "NPhr", "NI", "NIt", "NPar", "IC", "POD", "TOC"}},
              {"ic_rule", "IC scores 1 when ic is contrast or npar is between_paragraphs, else 0"},
              {"ic_matrix",
               {{{"ic", "compare"}, {"npar", "within_paragraph"}, {"points", 0}},
                {{"ic", "compare"}, {"npar", "between_paragraphs"}, {"points", 1}},
                {{"ic", "contrast"}, {"npar", "within_paragraph"}, {"points", 1}},
                {{"ic", "contrast"}, {"npar", "between_paragraphs"}, {"points", 1}}}}};
}

}  // namespace mcqa
