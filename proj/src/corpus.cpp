#include "mcqa/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mcqa/classifier.hpp"
#include "mcqa/errors.hpp"
#include "mcqa/io.hpp"

namespace mcqa {

namespace fs = std::filesystem;
using nlohmann::json;

char label_char(Label label) { return static_cast<char>('A' + static_cast<int>(label)); }

std::optional<Label> parse_label(std::string_view s) {
  s = trim(s);
  if (s.size() != 1) return std::nullopt;
  if (s[0] >= 'A' && s[0] <= 'D') return static_cast<Label>(s[0] - 'A');
  return std::nullopt;
}

std::string_view to_string(TextFormat f) {
  switch (f) {
    case TextFormat::continuous: return "continuous";
    case TextFormat::partly_continuous: return "partly_continuous";
    case TextFormat::non_continuous: return "non_continuous";
    case TextFormat::mixed: return "mixed";
  }
  return "continuous";
}

std::string_view to_string(Membership m) {
  return m == Membership::single_member ? "single_member" : "multiple_member";
}

std::string_view to_string(StemStyle s) {
  return s == StemStyle::interrogative ? "interrogative" : "fill_in_gap";
}

std::string_view to_string(Aspect a) {
  switch (a) {
    case Aspect::content: return "content";
    case Aspect::structure: return "structure";
    case Aspect::vocabulary: return "vocabulary";
  }
  return "content";
}

std::optional<TextFormat> parse_text_format(std::string_view s) {
  for (auto f : {TextFormat::continuous, TextFormat::partly_continuous, TextFormat::non_continuous,
                 TextFormat::mixed})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

std::optional<Membership> parse_membership(std::string_view s) {
  for (auto m : {Membership::single_member, Membership::multiple_member})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::optional<Aspect> parse_aspect(std::string_view s) {
  for (auto a : {Aspect::content, Aspect::structure, Aspect::vocabulary})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

std::vector<CharRange> segment_paragraphs(std::u32string_view body) {
  std::vector<CharRange> out;
  const std::size_t n = body.size();
  std::size_t start = 0;
  std::size_t i = 0;
  auto flush = [&](std::size_t end) {
    if (end > start) out.push_back({start, end});
  };
  while (i < n) {
    if (!is_newline(body[i])) {
      ++i;
      continue;
    }
    // Extend the break backwards over horizontal space, forwards over
    // newlines and horizontal space.
    std::size_t brk_begin = i;
    while (brk_begin > start && is_horizontal_space(body[brk_begin - 1])) --brk_begin;
    std::size_t brk_end = i;
    while (brk_end < n && (is_newline(body[brk_end]) || is_horizontal_space(body[brk_end]))) ++brk_end;
    flush(brk_begin);
    start = brk_end;
    i = brk_end;
  }
  flush(n);
  return out;
}

StemStyle detect_stem_style(std::string_view stem) {
  return stem.find('_') != std::string_view::npos ? StemStyle::fill_in_gap : StemStyle::interrogative;
}

TextPassage::TextPassage(std::string text_id, std::string body)
    : text_id_(std::move(text_id)), body_(std::move(body)), chars_(to_u32(body_)),
      paragraphs_(segment_paragraphs(chars_)) {}

std::optional<std::size_t> TextPassage::paragraph_of(std::size_t offset) const {
  auto it = std::upper_bound(paragraphs_.begin(), paragraphs_.end(), offset,
                             [](std::size_t off, const CharRange& r) { return off < r.end; });
  if (it == paragraphs_.end() || !it->contains(offset)) return std::nullopt;
  return static_cast<std::size_t>(it - paragraphs_.begin());
}

std::string make_mcq_id(std::string_view text_id, std::size_t index) {
  return std::string(text_id) + ":" + std::to_string(index);
}

Corpus::Corpus(std::vector<CorpusEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& entry = entries_[e];
    if (!text_index_.emplace(entry.passage.text_id(), e).second)
      throw SchemaError("duplicate article id '" + entry.passage.text_id() + "'");
    for (std::size_t q = 0; q < entry.mcqs.size(); ++q) {
      if (!mcq_index_.emplace(entry.mcqs[q].mcq_id, std::make_pair(e, q)).second)
        throw SchemaError("duplicate mcq id '" + entry.mcqs[q].mcq_id + "'");
    }
    mcq_count_ += entry.mcqs.size();
  }
}

const MCQUnit* Corpus::find_mcq(std::string_view mcq_id) const {
  auto it = mcq_index_.find(std::string(mcq_id));
  if (it == mcq_index_.end()) return nullptr;
  return &entries_[it->second.first].mcqs[it->second.second];
}

const TextPassage* Corpus::find_passage(std::string_view text_id) const {
  auto it = text_index_.find(std::string(text_id));
  if (it == text_index_.end()) return nullptr;
  return &entries_[it->second].passage;
}

const TextPassage& Corpus::passage_of(const MCQUnit& mcq) const {
  const auto* p = find_passage(mcq.text_id);
  if (p == nullptr) throw ReferenceError("no passage '" + mcq.text_id + "' for mcq '" + mcq.mcq_id + "'");
  return *p;
}

std::vector<const MCQUnit*> Corpus::mcqs() const {
  std::vector<const MCQUnit*> out;
  out.reserve(mcq_count_);
  for (const auto& e : entries_)
    for (const auto& m : e.mcqs) out.push_back(&m);
  return out;
}

namespace {

const json& require(const json& record, const char* field, std::string_view source) {
  auto it = record.find(field);
  if (it == record.end())
    throw SchemaError(std::string(source) + ": missing field '" + field + "'");
  return *it;
}

std::string require_string(const json& j, std::string_view what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

CorpusEntry parse_race_record(const json& record, std::string_view source) {
  if (!record.is_object()) throw SchemaError(std::string(source) + ": record is not an object");
  const std::string src(source);
  std::string id = require_string(require(record, "id", source), src + ": id");
  std::string article = require_string(require(record, "article", source), src + ": article");
  const auto& questions = require(record, "questions", source);
  const auto& options = require(record, "options", source);
  const auto& answers = require(record, "answers", source);
  if (!questions.is_array() || !options.is_array() || !answers.is_array())
    throw SchemaError(src + ": questions, options and answers must be arrays");
  if (questions.size() != options.size() || questions.size() != answers.size())
    throw SchemaError(src + ": questions/options/answers lengths differ (" +
                      std::to_string(questions.size()) + "/" + std::to_string(options.size()) + "/" +
                      std::to_string(answers.size()) + ")");

  CorpusEntry entry;
  try {
    entry.passage = TextPassage(id, std::move(article));
  } catch (const SchemaError& e) {
    throw SchemaError(src + ": article: " + e.what());
  }
  auto fmt = classify_text_format(entry.passage);
  entry.passage.format = fmt.format;
  entry.passage.membership = classify_membership(entry.passage);

  for (std::size_t q = 0; q < questions.size(); ++q) {
    const std::string where = src + ": question " + std::to_string(q);
    MCQUnit mcq;
    mcq.text_id = id;
    mcq.index = q;
    mcq.mcq_id = make_mcq_id(id, q);
    mcq.stem = require_string(questions[q], where + ": question");
    const auto& opts = options[q];
    if (!opts.is_array() || opts.size() != 4)
      throw SchemaError(where + ": options must have exactly 4 entries, found " +
                        std::to_string(opts.is_array() ? opts.size() : 0));
    for (std::size_t k = 0; k < 4; ++k) mcq.alternatives[k] = require_string(opts[k], where + ": option");
    if (!answers[q].is_string()) throw SchemaError(where + ": answer must be a string");
    auto key = parse_label(answers[q].get<std::string>());
    if (!key) throw SchemaError(where + ": answer '" + answers[q].get<std::string>() + "' not in A-D");
    mcq.key = *key;
    mcq.stem_style = detect_stem_style(mcq.stem);
    mcq.aspect = classify_mcq_aspect(mcq);
    entry.mcqs.push_back(std::move(mcq));
  }
  return entry;
}

json to_race_record(const CorpusEntry& entry) {
  json questions = json::array(), options = json::array(), answers = json::array();
  for (const auto& m : entry.mcqs) {
    questions.push_back(m.stem);
    options.push_back(json(m.alternatives));
    answers.push_back(std::string(1, label_char(m.key)));
  }
  return json{{"answers", answers},
              {"options", options},
              {"questions", questions},
              {"article", entry.passage.body()},
              {"id", entry.passage.text_id()}};
}

namespace {

void load_file(const fs::path& path, std::vector<CorpusEntry>& out) {
  const std::string content = read_file(path);
  const std::string name = path.string();
  if (path.extension() == ".jsonl") {
    std::istringstream lines(content);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw SchemaError(name + ": line " + std::to_string(lineno) + ": " + e.what());
      }
      out.push_back(parse_race_record(j, name + ": line " + std::to_string(lineno)));
    }
    return;
  }
  json j;
  try {
    j = json::parse(content);
  } catch (const json::exception& e) {
    throw SchemaError(name + ": " + e.what());
  }
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(parse_race_record(j[i], name + ": record " + std::to_string(i)));
  } else {
    out.push_back(parse_race_record(j, name));
  }
}

}  // namespace

Corpus load_corpus(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError("no such file or directory: " + path.string());
  std::vector<CorpusEntry> entries;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& de : fs::recursive_directory_iterator(path)) {
      if (!de.is_regular_file()) continue;
      auto ext = de.path().extension();
      if (ext == ".txt" || ext == ".json" || ext == ".jsonl") files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) load_file(f, entries);
  } else {
    load_file(path, entries);
  }
  return Corpus(std::move(entries));
}

void write_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& entry : corpus.entries()) {
    std::string name = entry.passage.text_id();
    std::replace(name.begin(), name.end(), '/', '_');
    if (fs::path(name).extension() != ".txt" && fs::path(name).extension() != ".json") name += ".json";
    write_file_atomic(dir / name, to_race_record(entry).dump());
  }
}

}  // namespace mcqa
