#pragma once

// Builders shared by the unit and acceptance tests.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcqa/annotation.hpp"
#include "mcqa/corpus.hpp"

namespace fixtures {

using nlohmann::json;

inline json race_record(const std::string& id, const std::string& article,
                        const std::vector<std::string>& questions,
                        const std::vector<std::vector<std::string>>& options, const std::vector<std::string>& answers) {
  return json{{"id", id}, {"article", article}, {"questions", questions}, {"options", options}, {"answers", answers}};
}

// One article with `n` plain questions.
inline json simple_record(const std::string& id, std::size_t n = 1,
                          const std::string& article = "The farmer sold his apples at the market. He went home "
                                                       "happy.\n\nHis wife cooked dinner for the family.") {
  std::vector<std::string> qs, answers;
  std::vector<std::vector<std::string>> opts;
  for (std::size_t i = 0; i < n; ++i) {
    qs.push_back("What did the farmer sell?");
    opts.push_back({"Apples", "Pears", "Bread", "Milk"});
    answers.push_back("A");
  }
  return race_record(id, article, qs, opts, answers);
}

inline mcqa::Corpus corpus_of(const std::vector<json>& records) {
  std::vector<mcqa::CorpusEntry> entries;
  for (const auto& r : records) entries.push_back(mcqa::parse_race_record(r, "fixture"));
  return mcqa::Corpus(std::move(entries));
}

// Lowest-scoring complete record: total 2.5.
inline mcqa::AnnotationRecord minimal_record(const std::string& id) {
  mcqa::AnnotationRecord r;
  r.mcq_id = id;
  r.toi = {{"person"}};
  r.tom_tq = mcqa::Candidates{"LM"};
  r.tom_ta = mcqa::Candidates{"LM"};
  r.nphr = 1;
  r.ni = 1;
  r.nit = mcqa::Candidates{"specified"};
  r.npar = mcqa::Candidates{"within_paragraph"};
  r.ic = mcqa::Candidates{"compare"};
  r.pod = {"no_distracting_information"};
  r.toc = mcqa::Candidates{"none"};
  return r;
}

inline json minimal_record_json(const std::string& id) {
  return json{{"mcq_id", id},     {"toi", "person"}, {"tom_tq", "LM"},        {"tom_ta", "LM"},
              {"nphr", 1},        {"ni", 1},         {"nit", "specified"},    {"npar", "within_paragraph"},
              {"ic", "compare"},  {"pod", {"no_distracting_information"}},    {"toc", "none"}};
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() / ("mcqa-test-" + tag + "-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace fixtures
