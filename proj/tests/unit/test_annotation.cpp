#include <doctest.h>

#include "fixtures.hpp"
#include "mcqa/annotation.hpp"
#include "mcqa/errors.hpp"

using namespace mcqa;
using fixtures::json;

namespace {

const Corpus& corpus() {
  static const Corpus c = fixtures::corpus_of({fixtures::simple_record("t1", 3), fixtures::simple_record("t2", 1)});
  return c;
}

std::string lines(std::initializer_list<json> records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace

TEST_CASE("empty annotation input is an empty list") {
  CHECK(parse_annotations("", corpus()).empty());
  CHECK(parse_annotations("\n  \n", corpus()).empty());
}

TEST_CASE("full record round trip") {
  json j = fixtures::minimal_record_json("t1:0");
  j["toi"] = json::array({"person", "person", json::array({"time", "amount"}), "role"});
  j["tom_ta"] = "LLTI";
  j["tom_gen"] = true;
  j["pod"] = {"outside_text_inference", "literal_not_same_paragraph"};
  j["bases"] = {{{"label", "A"}, {"span", {0, 10}}}, {{"label", "C"}, {"span", {5, 20}}}};
  j["error_marks"] = {{{"element", "text"}, {"type", "spelling_errors"}, {"span", {2, 4}}},
                      {{"element", "alternatives"}, {"type", "overlapping_alternatives"}}};
  j["exclusion_flags"] = {"severe_problem"};
  j["text_format"] = "partly_continuous";
  j["membership"] = "multiple_member";
  j["aspect"] = "structure";
  j["revision"] = 3;

  auto r = annotation_from_json(j, corpus());
  CHECK(r.tom_ta == Candidates{"LLTI"});
  REQUIRE(r.toi.size() == 4);
  CHECK(r.toi[2] == Candidates{"time", "amount"});
  CHECK(r.bases[1].label == Label::C);
  CHECK(r.bases[1].span == CharRange{5, 20});
  CHECK(r.error_marks[0].severity == Severity::severe);
  CHECK(r.has_flag(ExclusionFlag::severe_problem));
  CHECK(r.text_format == TextFormat::partly_continuous);
  CHECK(r.revision == 3u);

  auto again = annotation_from_json(to_json(r), corpus());
  CHECK(again == r);
  CHECK(to_json(again) == to_json(r));
}

TEST_CASE("vocabulary is closed") {
  auto bad = [](const char* field, json value) {
    json j = fixtures::minimal_record_json("t1:0");
    j[field] = value;
    return j;
  };
  CHECK_THROWS_AS(annotation_from_json(bad("tom_ta", "XX"), corpus()), VocabularyError);
  CHECK_THROWS_AS(annotation_from_json(bad("pod", {"far_away"}), corpus()), VocabularyError);
  CHECK_THROWS_AS(annotation_from_json(bad("toi", "job"), corpus()), VocabularyError);
  CHECK_THROWS_AS(annotation_from_json(bad("toi", "nonsense"), corpus()), VocabularyError);
  CHECK_THROWS_AS(annotation_from_json(bad("toc", "integration"), corpus()), VocabularyError);
  CHECK_THROWS_AS(annotation_from_json(bad("exclusion_flags", {"too_hard"}), corpus()), VocabularyError);
  CHECK_THROWS_AS(annotation_from_json(bad("text_format", "poem"), corpus()), VocabularyError);
  CHECK(annotation_from_json(bad("toi", "main idea"), corpus()).toi[0] == Candidates{"main idea"});
}

TEST_CASE("schema shape") {
  auto with = [](const char* field, json value) {
    json j = fixtures::minimal_record_json("t1:0");
    j[field] = value;
    return j;
  };
  CHECK_THROWS_AS(annotation_from_json(with("colour", "red"), corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(with("nphr", 0), corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(with("ni", "two"), corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(with("toi", {"person", "time"}), corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(with("pod", {"literal_not_same_paragraph", "literal_not_same_paragraph",
                                                    "literal_not_same_paragraph", "literal_not_same_paragraph"}),
                                       corpus()),
                  SchemaError);
  CHECK_THROWS_AS(annotation_from_json(with("tom_gen", "yes"), corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(with("revision", -1), corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(json{{"toi", "person"}}, corpus()), SchemaError);
  CHECK_THROWS_AS(annotation_from_json(json::array(), corpus()), SchemaError);

  // Partial records are legal.
  auto r = annotation_from_json(json{{"mcq_id", "t1:1"}, {"nphr", 2}}, corpus());
  CHECK(r.nphr == 2);
  CHECK_FALSE(r.tom_tq);
}

TEST_CASE("spans are checked against the passage") {
  const auto length = corpus().find_passage("t1")->length();
  json j = fixtures::minimal_record_json("t1:0");
  j["bases"] = {{{"label", "B"}, {"span", {0, length}}}};
  CHECK_NOTHROW(annotation_from_json(j, corpus()));

  j["bases"] = {{{"label", "B"}, {"span", {3, length + 1}}}};
  try {
    annotation_from_json(j, corpus());
    FAIL("expected SpanError");
  } catch (const SpanError& e) {
    std::string msg = e.what();
    CHECK(msg.find(std::to_string(length + 1)) != std::string::npos);
    CHECK(msg.find("[3,") != std::string::npos);
  }
  j["bases"] = {{{"label", "B"}, {"span", {5, 5}}}};
  CHECK_THROWS_AS(annotation_from_json(j, corpus()), SpanError);
  j["bases"] = {{{"label", "E"}, {"span", {0, 1}}}};
  CHECK_THROWS_AS(annotation_from_json(j, corpus()), VocabularyError);

  SUBCASE("error spans on the question use the stem length") {
    json k = fixtures::minimal_record_json("t1:0");
    k["error_marks"] = {{{"element", "question"}, {"type", "punctuation_errors"}, {"span", {0, 500}}}};
    CHECK_THROWS_AS(annotation_from_json(k, corpus()), SpanError);
  }
  SUBCASE("without a passage only the shape is checked") {
    j["bases"] = {{{"label", "B"}, {"span", {3, 100000}}}};
    CHECK_NOTHROW(annotation_from_json(j));
  }
}

TEST_CASE("references") {
  CHECK_THROWS_AS(annotation_from_json(fixtures::minimal_record_json("t9:0"), corpus()), ReferenceError);
  CHECK_THROWS_AS(annotation_from_json(fixtures::minimal_record_json("t1:3"), corpus()), ReferenceError);
}

TEST_CASE("files name the offending line") {
  SUBCASE("dangling id") {
    auto text = lines({fixtures::minimal_record_json("t1:0"), fixtures::minimal_record_json("nope:0")});
    try {
      parse_annotations(text, corpus(), "ann.jsonl");
      FAIL("expected ReferenceError");
    } catch (const ReferenceError& e) {
      CHECK(std::string(e.what()).find("ann.jsonl: line 2") != std::string::npos);
    }
  }
  SUBCASE("duplicate id") {
    auto text = lines({fixtures::minimal_record_json("t1:0"), fixtures::minimal_record_json("t2:0"),
                       fixtures::minimal_record_json("t1:0")});
    try {
      parse_annotations(text, corpus(), "ann.jsonl");
      FAIL("expected ReferenceError");
    } catch (const ReferenceError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("malformed json") {
    CHECK_THROWS_AS(parse_annotations("{\"mcq_id\":", corpus()), SchemaError);
  }
  SUBCASE("every accepted record references one mcq") {
    auto records = parse_annotations(lines({fixtures::minimal_record_json("t1:2"),
                                            fixtures::minimal_record_json("t2:0")}),
                                     corpus());
    REQUIRE(records.size() == 2);
    for (const auto& r : records) CHECK(corpus().find_mcq(r.mcq_id));
  }
}

TEST_CASE("load from disk") {
  auto dir = fixtures::temp_dir("ann");
  fixtures::write(dir / "a.jsonl", lines({fixtures::minimal_record_json("t1:1")}));
  auto records = load_annotations(dir / "a.jsonl", corpus());
  REQUIRE(records.size() == 1);
  CHECK(records[0].mcq_id == "t1:1");
  CHECK_THROWS_AS(load_annotations(dir / "missing.jsonl", corpus()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("exclusion flag names") {
  for (auto f : {ExclusionFlag::non_continuous_text, ExclusionFlag::non_content_aspect,
                 ExclusionFlag::partly_continuous_text, ExclusionFlag::severe_problem, ExclusionFlag::toi_3to1_split})
    CHECK(parse_exclusion_flag(to_string(f)) == f);
  CHECK_FALSE(parse_exclusion_flag("other"));
}
