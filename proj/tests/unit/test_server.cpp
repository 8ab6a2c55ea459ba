#include <doctest.h>

#include <httplib.h>

#include <thread>

#include "fixtures.hpp"
#include "mcqa/io.hpp"
#include "mcqa/server.hpp"

using namespace mcqa;
using fixtures::json;

namespace {

const Corpus& corpus() {
  static const Corpus c = fixtures::corpus_of(
      {fixtures::simple_record("t1", 3),
       fixtures::race_record("t2", "Tom likes apples. He eats one every day.", {"Tom eats an apple every _ ."},
                             {{"day", "week", "month", "year"}}, {"A"})});
  return c;
}

std::string read(const std::filesystem::path& p) { return read_file(p); }

}  // namespace

TEST_CASE("store revisions and conflicts") {
  SessionStore store(corpus());
  CHECK_FALSE(store.get("t1:0"));
  auto first = store.put(fixtures::minimal_record("t1:0"), 0);
  CHECK(first.revision == 1u);
  auto second = store.put(fixtures::minimal_record("t1:0"), 1);
  CHECK(second.revision == 2u);
  try {
    store.put(fixtures::minimal_record("t1:0"), 1);
    FAIL("expected ConflictError");
  } catch (const ConflictError& e) {
    CHECK(e.current_revision == 2u);
  }
  CHECK_THROWS_AS(store.put(fixtures::minimal_record("t1:1"), 4), ConflictError);
  CHECK(store.put(fixtures::minimal_record("t1:0")).revision == 3u);
  CHECK_THROWS_AS(store.put(fixtures::minimal_record("t9:0")), ReferenceError);
  CHECK(store.size() == 1);
}

TEST_CASE("log replay") {
  auto dir = fixtures::temp_dir("store");
  const auto log = dir / "session.jsonl";

  SUBCASE("survives a restart and compacts") {
    {
      SessionStore store(corpus(), log);
      store.put(fixtures::minimal_record("t1:0"));
      auto r = fixtures::minimal_record("t1:0");
      r.nphr = 3;
      store.put(r);
      store.put(fixtures::minimal_record("t2:0"));
    }
    const auto before = read(log);
    CHECK(std::count(before.begin(), before.end(), '\n') == 3);
    SessionStore again(corpus(), log);
    CHECK(again.size() == 2);
    CHECK(again.get("t1:0")->nphr == 3);
    CHECK(again.get("t1:0")->revision == 2u);
    auto text = read(log);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    auto snap = again.snapshot();
    CHECK(snap[0].mcq_id == "t1:0");
    CHECK(snap[1].mcq_id == "t2:0");
  }
  SUBCASE("a torn final line is dropped") {
    fixtures::write(log, fixtures::minimal_record_json("t1:1").dump() + "\n{\"mcq_id\": \"t1:2\", \"to");
    SessionStore store(corpus(), log);
    CHECK(store.size() == 1);
    CHECK(store.get("t1:1"));
    auto text = read(log);
    CHECK(text.back() == '\n');
    CHECK(text.find("t1:2") == std::string::npos);
  }
  SUBCASE("a malformed middle line is corruption") {
    fixtures::write(log, "{\"mcq_id\": \"t1:1\"\n" + fixtures::minimal_record_json("t1:2").dump() + "\n");
    CHECK_THROWS_AS(SessionStore(corpus(), log), SchemaError);
  }
  SUBCASE("an invalid record names its line") {
    fixtures::write(log, fixtures::minimal_record_json("t1:1").dump() + "\n" +
                             fixtures::minimal_record_json("zz:0").dump() + "\n");
    try {
      SessionStore store(corpus(), log);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
  }
  SUBCASE("a missing log starts empty") {
    SessionStore store(corpus(), dir / "sub" / "new.jsonl");
    CHECK(store.size() == 0);
    CHECK(std::filesystem::exists(dir / "sub" / "new.jsonl"));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("concurrent puts") {
  SessionStore store(corpus());
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&store, t] {
      for (int k = 0; k < 50; ++k) store.put(fixtures::minimal_record("t1:" + std::to_string((t + k) % 3)));
    });
  for (auto& th : threads) th.join();
  std::uint64_t revisions = 0;
  for (const auto& r : store.snapshot()) revisions += *r.revision;
  CHECK(revisions == 400);
}

TEST_CASE("service endpoints") {
  SessionStore store(corpus());
  AnnotationService service(store);

  SUBCASE("corpus listing") {
    store.put(fixtures::minimal_record("t1:0"));
    auto r = service.corpus();
    CHECK(r.status == 200);
    CHECK(r.body["texts"] == 2);
    CHECK(r.body["mcqs"] == 4);
    CHECK(r.body["annotated"] == 1);
    CHECK(r.body["complete"] == 1);
    CHECK(r.body["items"][0]["revision"] == 1);
  }
  SUBCASE("mcq bundle") {
    auto r = service.mcq("t2:0");
    CHECK(r.status == 200);
    CHECK(r.body["mcq"]["stem_style"] == "fill_in_gap");
    CHECK(r.body["mcq"]["alternatives"]["A"] == "day");
    CHECK(r.body["passage"]["length"] == corpus().find_passage("t2")->length());
    CHECK(r.body["annotation"].is_null());
    CHECK(r.body["heuristics"]["text_format"] == "continuous");
    CHECK(r.body["detected"].is_array());
    CHECK(service.mcq("t7:0").status == 404);
  }
  SUBCASE("put") {
    auto body = fixtures::minimal_record_json("t1:1");
    auto r = service.put_annotation("t1:1", body.dump());
    CHECK(r.status == 200);
    CHECK(r.body["revision"] == 1);
    CHECK(r.body["complete"] == true);
    CHECK(r.body["scorecard"]["total"] == 2.5);

    body["revision"] = 0;
    auto stale = service.put_annotation("t1:1", body.dump());
    CHECK(stale.status == 409);
    CHECK(stale.body["current_revision"] == 1);
    body["revision"] = 1;
    CHECK(service.put_annotation("t1:1", body.dump()).body["revision"] == 2);

    CHECK(service.put_annotation("t1:2", body.dump()).status == 400);  // id mismatch
    CHECK(service.put_annotation("t1:1", "[1]").status == 400);
    CHECK(service.put_annotation("t1:1", "{\"toi\": \"job\"}").status == 400);
    CHECK(service.put_annotation("x:0", "{}").status == 404);
  }
  SUBCASE("a partial record is stored with its findings and no scorecard") {
    auto body = fixtures::minimal_record_json("t1:2");
    body.erase("pod");
    auto r = service.put_annotation("t1:2", body.dump());
    CHECK(r.status == 200);
    CHECK(r.body["complete"] == false);
    CHECK_FALSE(r.body.contains("scorecard"));
    REQUIRE(r.body["findings"].size() == 1);
    CHECK(r.body["findings"][0]["message"] == "POD missing");
    CHECK(store.get("t1:2"));
  }
  SUBCASE("score") {
    auto body = fixtures::minimal_record_json("t1:0");
    body["toc"] = "multiple";
    auto r = service.score(body.dump());
    CHECK(r.status == 200);
    CHECK(r.body["scorecard"]["total"] == 7.5);
    CHECK(store.size() == 0);
    body.erase("pod");
    r = service.score(body.dump());
    CHECK(r.body["findings"][0]["message"] == "POD missing");
    CHECK_FALSE(r.body.contains("scorecard"));
    CHECK(service.score("nope").status == 400);
  }
  SUBCASE("report") {
    store.put(fixtures::minimal_record("t1:0"));
    auto r = service.report("gate");
    CHECK(r.status == 200);
    CHECK(r.body["stages"][0]["mcqs"] == 1);
    CHECK(service.report("all").body.contains("bases"));
    CHECK(service.report("weather").status == 404);
  }
  SUBCASE("vocabulary") {
    auto r = service.vocabulary();
    CHECK(r.status == 200);
    CHECK(r.body.is_object());
  }
}

TEST_CASE("http round trip on localhost") {
  SessionStore store(corpus());
  AnnotationService service(store);
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&server] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  httplib::Result res;
  for (int attempt = 0; attempt < 50 && !(res = client.Get("/api/corpus")); ++attempt)
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["mcqs"] == 4);

  auto put = client.Put("/api/annotation/t1:0", fixtures::minimal_record_json("t1:0").dump(), "application/json");
  REQUIRE(put);
  CHECK(put->status == 200);
  CHECK(json::parse(put->body)["revision"] == 1);

  auto stale = client.Put("/api/annotation/t1:0", json{{"revision", 0}, {"nphr", 2}}.dump(), "application/json");
  REQUIRE(stale);
  CHECK(stale->status == 409);

  auto missing = client.Get("/api/mcq/none:0");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto report = client.Get("/api/report/difficulty");
  REQUIRE(report);
  CHECK(json::parse(report->body)["count"] == 1);

  server.stop();
  loop.join();
}
