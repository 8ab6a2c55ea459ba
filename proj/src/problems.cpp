#include "mcqa/problems.hpp"

#include <algorithm>
#include <regex>

#include "mcqa/errors.hpp"

namespace mcqa {

using nlohmann::json;

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::mild: return "mild";
    case Severity::moderate: return "moderate";
    case Severity::severe: return "severe";
  }
  return "mild";
}

std::optional<Severity> parse_severity(std::string_view s) {
  for (auto v : {Severity::mild, Severity::moderate, Severity::severe})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::string_view to_string(Acceptability a) {
  switch (a) {
    case Acceptability::acceptable: return "acceptable";
    case Acceptability::mainly_acceptable: return "mainly_acceptable";
    case Acceptability::partially_acceptable: return "partially_acceptable";
    case Acceptability::unacceptable: return "unacceptable";
  }
  return "acceptable";
}

std::optional<Acceptability> parse_acceptability(std::string_view s) {
  for (auto v : {Acceptability::acceptable, Acceptability::mainly_acceptable,
                 Acceptability::partially_acceptable, Acceptability::unacceptable})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

Acceptability acceptability_of(Severity s) {
  switch (s) {
    case Severity::mild: return Acceptability::mainly_acceptable;
    case Severity::moderate: return Acceptability::partially_acceptable;
    case Severity::severe: return Acceptability::unacceptable;
  }
  return Acceptability::unacceptable;
}

namespace {

// Which elements a type may be attached to: T(ext), Q(uestion), A(lternatives), I(nteraction).
struct TypeInfo {
  ErrorType type;
  std::string_view name;
  Severity severity;
  std::string_view elements;
};

constexpr TypeInfo kTypes[] = {
    {ErrorType::incomplete_text, "incomplete_text", Severity::severe, "T"},
    {ErrorType::misleading_gaps, "misleading_gaps", Severity::severe, "TQ"},
    {ErrorType::extra_gaps, "extra_gaps", Severity::severe, "TQ"},
    {ErrorType::gap_marker, "gap_marker", Severity::severe, "TQ"},
    {ErrorType::misleading_spaces, "misleading_spaces", Severity::severe, "TQA"},
    {ErrorType::extra_spaces_within_word, "extra_spaces_within_word", Severity::severe, "TQA"},
    {ErrorType::missing_spaces_between_words, "missing_spaces_between_words", Severity::severe, "TQA"},
    {ErrorType::misleading_spelling_errors, "misleading_spelling_errors", Severity::severe, "TQA"},
    {ErrorType::spelling_errors, "spelling_errors", Severity::severe, "TQA"},
    {ErrorType::grammatical_errors, "grammatical_errors", Severity::severe, "TQA"},
    {ErrorType::syntax_errors, "syntax_errors", Severity::severe, "TQA"},
    {ErrorType::ocr_errors, "ocr_errors", Severity::severe, "TQA"},
    {ErrorType::time_dependent, "time_dependent", Severity::severe, "TQA"},
    {ErrorType::incomplete_question, "incomplete_question", Severity::severe, "Q"},
    {ErrorType::answerable_without_reading, "answerable_without_reading", Severity::severe, "Q"},
    {ErrorType::subjective_formulation, "subjective_formulation", Severity::severe, "QA"},
    {ErrorType::ambiguously_formulated, "ambiguously_formulated", Severity::severe, "Q"},
    {ErrorType::incomplete_alternatives, "incomplete_alternatives", Severity::severe, "A"},
    {ErrorType::overlapping_alternatives, "overlapping_alternatives", Severity::severe, "A"},
    {ErrorType::inconsistency_q_a, "inconsistency_q_a", Severity::severe, "I"},
    {ErrorType::inconsistency_q_t, "inconsistency_q_t", Severity::severe, "I"},
    {ErrorType::inconsistency_t_a, "inconsistency_t_a", Severity::severe, "I"},
    {ErrorType::spelling_errors_hyphens_contractions, "spelling_errors_hyphens_contractions", Severity::moderate,
     "TQA"},
    {ErrorType::additional_notes, "additional_notes", Severity::moderate, "TQA"},
    {ErrorType::inconsistency_between_alternatives, "inconsistency_between_alternatives", Severity::moderate, "A"},
    {ErrorType::extra_spaces_punctuation, "extra_spaces_punctuation", Severity::mild, "TQA"},
    {ErrorType::missing_spaces_punctuation, "missing_spaces_punctuation", Severity::mild, "TQA"},
    {ErrorType::punctuation_errors, "punctuation_errors", Severity::mild, "TQA"},
    {ErrorType::formatting_inconsistency, "formatting_inconsistency", Severity::mild, "TQA"},
};

const TypeInfo& info(ErrorType t) {
  return *std::find_if(std::begin(kTypes), std::end(kTypes), [t](const TypeInfo& i) { return i.type == t; });
}

char element_code(ElementKind k) {
  switch (k) {
    case ElementKind::text: return 'T';
    case ElementKind::question: return 'Q';
    case ElementKind::alternatives:
    case ElementKind::alternative: return 'A';
    case ElementKind::interaction: return 'I';
  }
  return 'T';
}

}  // namespace

std::span<const ErrorType> all_error_types() {
  static const std::vector<ErrorType> types = [] {
    std::vector<ErrorType> v;
    for (const auto& i : kTypes) v.push_back(i.type);
    return v;
  }();
  return types;
}

std::string_view to_string(ErrorType t) { return info(t).name; }

ErrorType parse_error_type(std::string_view s) {
  for (const auto& i : kTypes)
    if (i.name == s) return i.type;
  throw VocabularyError("unknown error type '" + std::string(s) + "'");
}

Severity severity_of(ErrorType t) { return info(t).severity; }
Severity severity_of(std::string_view error_type) { return severity_of(parse_error_type(error_type)); }

std::string Element::str() const {
  switch (kind) {
    case ElementKind::text: return "text";
    case ElementKind::question: return "question";
    case ElementKind::alternatives: return "alternatives";
    case ElementKind::alternative: return std::string("alternative:") + label_char(label.value_or(Label::A));
    case ElementKind::interaction:
      switch (pair.value_or(Interaction::question_alternatives)) {
        case Interaction::question_alternatives: return "interaction:Q-A";
        case Interaction::text_question: return "interaction:T-Q";
        case Interaction::text_alternatives: return "interaction:T-A";
      }
  }
  return "text";
}

std::optional<Element> parse_element(std::string_view s) {
  if (s == "text") return Element::text();
  if (s == "question") return Element::question();
  if (s == "alternatives") return Element::alternatives();
  if (s.starts_with("alternative:")) {
    auto l = parse_label(s.substr(12));
    if (!l) return std::nullopt;
    return Element::alternative(*l);
  }
  if (s == "interaction:Q-A") return Element::interaction(Interaction::question_alternatives);
  if (s == "interaction:T-Q") return Element::interaction(Interaction::text_question);
  if (s == "interaction:T-A") return Element::interaction(Interaction::text_alternatives);
  return std::nullopt;
}

json to_json(const ErrorFinding& f) {
  json j{{"element", f.element.str()},
         {"type", to_string(f.type)},
         {"severity", to_string(f.severity)},
         {"source", f.source == FindingSource::detected ? "detected" : "annotated"}};
  if (f.span) j["span"] = {f.span->begin, f.span->end};
  return j;
}

ErrorFinding error_finding_from_json(const json& j, FindingSource source) {
  if (!j.is_object()) throw SchemaError("error mark must be an object");
  if (!j.contains("element") || !j["element"].is_string()) throw SchemaError("error mark needs an 'element' string");
  if (!j.contains("type") || !j["type"].is_string()) throw SchemaError("error mark needs a 'type' string");
  ErrorFinding f;
  f.source = source;
  const auto element_name = j["element"].get<std::string>();
  auto element = parse_element(element_name);
  if (!element) throw VocabularyError("unknown element '" + element_name + "'");
  f.element = *element;
  f.type = parse_error_type(j["type"].get<std::string>());
  f.severity = severity_of(f.type);
  if (info(f.type).elements.find(element_code(f.element.kind)) == std::string_view::npos)
    throw VocabularyError("error type '" + std::string(to_string(f.type)) + "' does not apply to element '" +
                          element_name + "'");
  if (j.contains("severity")) {
    if (!j["severity"].is_string()) throw SchemaError("severity must be a string");
    auto sev = parse_severity(j["severity"].get<std::string>());
    if (!sev) throw VocabularyError("unknown severity '" + j["severity"].get<std::string>() + "'");
    if (*sev != f.severity)
      throw VocabularyError("severity '" + std::string(to_string(*sev)) + "' contradicts the tier of '" +
                            std::string(to_string(f.type)) + "' (" + std::string(to_string(f.severity)) + ")");
  }
  if (j.contains("span") && !j["span"].is_null()) {
    const auto& sp = j["span"];
    if (!sp.is_array() || sp.size() != 2 || !is_offset(sp[0]) || !is_offset(sp[1]))
      throw SchemaError("span must be [start, end] with non-negative integers");
    f.span = CharRange{sp[0].get<std::size_t>(), sp[1].get<std::size_t>()};
    if (f.span->empty()) throw SpanError("empty or reversed error span");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Detectors

namespace {

bool is_sentence_punct(char32_t c) {
  return c == U',' || c == U'.' || c == U';' || c == U':' || c == U'!' || c == U'?';
}

bool is_currency(char32_t c) { return c == U'$' || c == 0xA3 || c == 0xA5 || c == 0x20AC || c == 0xFFE5; }

bool ieq_ascii(std::u32string_view a, std::u32string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char32_t x = a[i], y = b[i];
    if (is_upper(x)) x += 32;
    if (is_upper(y)) y += 32;
    if (x != y) return false;
  }
  return true;
}

bool contains_ci(std::u32string_view hay, std::u32string_view needle) {
  if (needle.size() > hay.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i)
    if (ieq_ascii(hay.substr(i, needle.size()), needle)) return true;
  return false;
}

// Web addresses, e-mail addresses and currency+figure tokens are atomic:
// detectors never look inside them.
std::vector<bool> protected_mask(std::u32string_view s) {
  std::vector<bool> mask(s.size(), false);
  std::size_t i = 0;
  static constexpr std::u32string_view kTlds[] = {U".com", U".org", U".net", U".edu", U".gov",
                                                  U".cn",  U".uk",  U".io",  U".co",  U".info"};
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    auto tok = s.substr(start, i - start);
    if (tok.empty()) continue;
    bool atomic = contains_ci(tok, U"://") || contains_ci(tok, U"www.");
    if (!atomic) {
      auto at = tok.find(U'@');
      atomic = at != std::u32string_view::npos && tok.find(U'.', at) != std::u32string_view::npos;
    }
    if (!atomic)
      for (auto tld : kTlds) {
        auto pos = tok.find(tld);
        if (pos != std::u32string_view::npos && pos > 0 && is_letter(tok[pos - 1]) &&
            (pos + tld.size() == tok.size() || !is_letter(tok[pos + tld.size()])))
          atomic = true;
      }
    if (!atomic)
      atomic = std::any_of(tok.begin(), tok.end(), is_currency) ||
               ((tok.starts_with(U"RMB") || tok.starts_with(U"USD")) && tok.size() > 3 && is_digit(tok[3]));
    if (atomic)
      for (std::size_t k = start; k < i; ++k) mask[k] = true;
  }
  return mask;
}

std::size_t letter_run_before(std::u32string_view s, std::size_t end) {
  std::size_t k = end;
  while (k > 0 && is_letter(s[k - 1])) --k;
  return end - k;
}

bool has_lower(std::u32string_view s) { return std::any_of(s.begin(), s.end(), is_lower); }

// Map byte offsets from a UTF-8 regex match to scalar offsets.
std::size_t scalar_offset(const std::string& utf8, std::size_t byte) {
  return scalar_length(std::string_view(utf8).substr(0, byte));
}

}  // namespace

std::vector<CharRange> find_extra_spaces_punctuation(std::u32string_view s) {
  std::vector<CharRange> out;
  auto mask = protected_mask(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (mask[i]) continue;
    if ((is_sentence_punct(c) || c == U')') && i > 0 && is_horizontal_space(s[i - 1])) {
      std::size_t j = i;
      while (j > 0 && is_horizontal_space(s[j - 1])) --j;
      if (j == 0 || is_newline(s[j - 1])) continue;
      if (s[j - 1] == U'_') continue;  // "about _ ." gap convention
      if (c == U'.' && i + 1 < s.size() && (s[i + 1] == U'.' || is_digit(s[i + 1]))) continue;
      if (c == 0x2026) continue;
      if (is_sentence_punct(s[j - 1]) || s[j - 1] == U'-' || s[j - 1] == 0x2014) continue;
      out.push_back({j, i});
    } else if (c == U'(' && i + 1 < s.size() && is_horizontal_space(s[i + 1])) {
      std::size_t k = i + 1;
      while (k < s.size() && is_horizontal_space(s[k])) ++k;
      if (k < s.size() && !is_newline(s[k]) && is_alnum(s[k])) out.push_back({i + 1, k});
    }
  }
  return out;
}

std::vector<CharRange> find_missing_spaces_punctuation(std::u32string_view s) {
  std::vector<CharRange> out;
  auto mask = protected_mask(s);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const char32_t c = s[i];
    const char32_t next = s[i + 1];
    if (mask[i] || !is_sentence_punct(c)) continue;
    bool missing = false;
    if (c == U',' || c == U';' || c == U'!' || c == U'?' || c == U':') {
      missing = is_letter(next);
      if (c == U',' && is_digit(next) && i > 0 && is_letter(s[i - 1])) missing = true;
    } else if (c == U'.') {
      // "world.Hello" but not "U.S.A", "e.g.", "3.5" or "google.com".
      if (is_upper(next) && i + 2 < s.size() && is_lower(s[i + 2])) {
        std::size_t run = letter_run_before(s, i);
        missing = run >= 2 && has_lower(s.substr(i - run, run));
      }
    }
    if (missing) out.push_back({i, i + 1});
  }
  return out;
}

std::vector<CharRange> find_extra_spaces_within_word(std::u32string_view s) {
  std::vector<CharRange> out;
  auto mask = protected_mask(s);
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) continue;
    // Number split into groups: "2 000", "12 500". Both runs stand alone.
    if (is_digit(s[i]) && (i == 0 || !(is_alnum(s[i - 1]) || s[i - 1] == U',' || s[i - 1] == U'.'))) {
      std::size_t a = i;
      while (a < n && is_digit(s[a])) ++a;
      if (a - i <= 3 && a + 1 < n && s[a] == U' ' && is_digit(s[a + 1])) {
        std::size_t b = a + 1;
        while (b < n && is_digit(s[b])) ++b;
        bool standalone = b == n || !(is_alnum(s[b]) || ((s[b] == U'.' || s[b] == U',') && b + 1 < n && is_digit(s[b + 1])));
        if (b - (a + 1) == 3 && standalone) out.push_back({a, a + 1});
      }
      i = a;
      continue;
    }
    // Isolated lowercase letter glued to words on both sides: "t he", "hous e".
    if (is_lower(s[i]) && i > 0 && s[i - 1] == U' ' && i + 1 < n && s[i + 1] == U' ') {
      if (s[i] == U'a' || s[i] == U'i' || s[i] == U'o') continue;
      std::size_t p = i - 1;
      while (p > 0 && s[p - 1] == U' ') --p;
      std::size_t q = i + 1;
      while (q < n && s[q] == U' ') ++q;
      if (p == 0 || q >= n) continue;
      if (!is_letter(s[p - 1]) || !is_letter(s[q])) continue;
      if (mask[p - 1] || mask[q]) continue;
      out.push_back({p, q});
    }
  }
  return out;
}

std::vector<CharRange> find_missing_spaces_between_words(std::u32string_view s) {
  static constexpr std::u32string_view kUnitSuffixes[] = {
      U"st", U"nd", U"rd", U"th", U"s", U"am", U"pm", U"km", U"kg", U"cm", U"mm", U"m", U"g", U"l", U"ml",
      U"mph", U"h", U"hr", U"hrs", U"min", U"mins", U"d", U"x", U"k", U"kb", U"mb", U"gb", U"ft", U"lb", U"lbs",
      U"yuan", U"sec", U"s", U"kw", U"w", U"mg", U"t"};
  std::vector<CharRange> out;
  auto mask = protected_mask(s);
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    while (i < n && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < n && !is_space(s[i])) ++i;
    if (i == start || mask[start]) continue;
    auto tok = s.substr(start, i - start);
    // Runs of letters or digits inside the token.
    std::size_t k = 0;
    while (k < tok.size()) {
      if (!is_alnum(tok[k])) {
        ++k;
        continue;
      }
      std::size_t r = k;
      const bool digits = is_digit(tok[k]);
      while (r < tok.size() && (digits ? is_digit(tok[r]) : is_letter(tok[r]))) ++r;
      if (r < tok.size() && is_alnum(tok[r]) && is_digit(tok[r]) != digits) {
        std::size_t r2 = r;
        while (r2 < tok.size() && (digits ? is_letter(tok[r2]) : is_digit(tok[r2]))) ++r2;
        bool missing = false;
        if (!digits) {
          auto letters = tok.substr(k, r - k);
          missing = letters.size() >= 2 && std::all_of(letters.begin(), letters.end(), is_lower);
        } else {
          auto letters = tok.substr(r, r2 - r);
          bool unit = std::any_of(std::begin(kUnitSuffixes), std::end(kUnitSuffixes),
                                  [&](std::u32string_view u) { return ieq_ascii(letters, u); });
          bool upper = std::all_of(letters.begin(), letters.end(), is_upper);
          missing = !unit && !upper && letters.size() >= 2;
        }
        if (missing) out.push_back({start + r - 1, start + r + 1});
      }
      // camelCase join inside a lowercase-initial word: "theCity", "home,theCity".
      if (!digits && (k == 0 || !is_digit(tok[k - 1])) && is_lower(tok[k])) {
        std::size_t low = k;
        while (low < r && is_lower(tok[low])) ++low;
        if (low - k >= 2 && low + 1 < r && is_upper(tok[low]) && is_lower(tok[low + 1]))
          out.push_back({start + low - 1, start + low + 1});
      }
      k = r;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CharRange> find_gap_markers(std::u32string_view s) {
  std::vector<CharRange> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != U'_') continue;
    std::size_t j = i;
    while (j < s.size() && s[j] == U'_') ++j;
    out.push_back({i, j});
    i = j;
  }
  return out;
}

std::vector<CharRange> find_additional_notes(std::u32string_view s) {
  static const std::regex kPatterns(
      R"(prefix\s*=\s*st\d\s*/?|\bs\dt-*|<\s*/?\s*[a-z]:[a-z]+\s*/?\s*>|\(\s*\d+\s*words?\s*\)|\b[Ww]ords?\s*:\s*\d+\b|\b(?:Source|SOURCE)\s*:[^\n]*)");
  const std::string utf8 = to_utf8(s);
  std::vector<CharRange> out;
  for (auto it = std::sregex_iterator(utf8.begin(), utf8.end(), kPatterns); it != std::sregex_iterator(); ++it) {
    const auto b = static_cast<std::size_t>(it->position());
    std::size_t e = b + static_cast<std::size_t>(it->length());
    while (e > b && std::isspace(static_cast<unsigned char>(utf8[e - 1]))) --e;
    CharRange r{scalar_offset(utf8, b), scalar_offset(utf8, e)};
    if (!out.empty() && r.begin <= out.back().end)
      out.back().end = std::max(out.back().end, r.end);
    else if (!r.empty())
      out.push_back(r);
  }
  return out;
}

std::optional<Label> find_formatting_inconsistency(const std::array<std::string, 4>& alternatives) {
  // -1 = not applicable, 0/1 = feature absent/present.
  std::array<int, 4> terminal{}, capital{};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::u32string full = to_u32(alternatives[k]);
    std::u32string text(trim(std::u32string_view(full)));
    terminal[k] = -1;
    capital[k] = -1;
    if (text.empty()) continue;
    std::u32string_view v = text;
    while (!v.empty() && (v.back() == U'"' || v.back() == U'\'' || v.back() == 0x201D || v.back() == U')'))
      v.remove_suffix(1);
    terminal[k] = (!v.empty() && (v.back() == U'.' || v.back() == U'!' || v.back() == U'?')) ? 1 : 0;
    if (is_letter(text[0]) && text[0] < 0x80) capital[k] = is_upper(text[0]) ? 1 : 0;
  }
  auto deviant = [](const std::array<int, 4>& f) -> std::optional<Label> {
    int ones = 0, zeros = 0;
    for (int v : f) {
      if (v == 1) ++ones;
      if (v == 0) ++zeros;
    }
    if (ones == 0 || zeros == 0) return std::nullopt;
    int majority;
    if (ones != zeros) {
      majority = ones > zeros ? 1 : 0;
    } else {
      majority = f[0] >= 0 ? f[0] : (f[1] >= 0 ? f[1] : f[2]);
    }
    for (std::size_t k = 0; k < 4; ++k)
      if (f[k] >= 0 && f[k] != majority) return kLabels[k];
    return std::nullopt;
  };
  if (auto l = deviant(terminal)) return l;
  return deviant(capital);
}

std::vector<ErrorFinding> detect_mechanical_errors(const MCQUnit& mcq, const TextPassage& passage) {
  std::vector<ErrorFinding> out;
  auto scan = [&](const Element& element, std::u32string_view s, bool is_passage) {
    std::vector<ErrorFinding> local;
    auto add = [&](ErrorType t, const std::vector<CharRange>& spans) {
      for (const auto& r : spans) local.push_back(ErrorFinding::detected(element, t, r));
    };
    add(ErrorType::extra_spaces_punctuation, find_extra_spaces_punctuation(s));
    add(ErrorType::missing_spaces_punctuation, find_missing_spaces_punctuation(s));
    add(ErrorType::extra_spaces_within_word, find_extra_spaces_within_word(s));
    add(ErrorType::missing_spaces_between_words, find_missing_spaces_between_words(s));
    if (is_passage) add(ErrorType::gap_marker, find_gap_markers(s));
    const auto notes = find_additional_notes(s);
    add(ErrorType::additional_notes, notes);
    // Leftover markup is one finding, not a cluster of spacing errors.
    std::erase_if(local, [&](const ErrorFinding& f) {
      return f.type != ErrorType::additional_notes &&
             std::any_of(notes.begin(), notes.end(), [&](const CharRange& n) {
               return n.begin <= f.span->begin && f.span->end <= n.end;
             });
    });
    out.insert(out.end(), local.begin(), local.end());
  };
  scan(Element::text(), passage.chars(), true);
  scan(Element::question(), to_u32(mcq.stem), false);
  std::optional<Label> inconsistent = find_formatting_inconsistency(mcq.alternatives);
  for (Label l : kLabels) {
    const auto alt = to_u32(mcq.alternative(l));
    scan(Element::alternative(l), alt, false);
    if (inconsistent == l) {
      out.push_back(ErrorFinding::detected(Element::alternative(l), ErrorType::formatting_inconsistency,
                                           CharRange{0, alt.size()}));
    }
  }
  auto rank = [](const Element& e) {
    return e.kind == ElementKind::alternative ? 2 + static_cast<int>(label_index(*e.label))
                                              : (e.kind == ElementKind::question ? 1 : 0);
  };
  std::stable_sort(out.begin(), out.end(), [&](const ErrorFinding& a, const ErrorFinding& b) {
    if (rank(a.element) != rank(b.element)) return rank(a.element) < rank(b.element);
    if (a.span->begin != b.span->begin) return a.span->begin < b.span->begin;
    return static_cast<int>(a.type) < static_cast<int>(b.type);
  });
  return out;
}

Acceptability worst(Acceptability a, Acceptability b) { return std::max(a, b); }

Acceptability aggregate_category(std::span<const ErrorFinding> findings) {
  Acceptability out = Acceptability::acceptable;
  for (const auto& f : findings) out = worst(out, acceptability_of(f.severity));
  return out;
}

}  // namespace mcqa
