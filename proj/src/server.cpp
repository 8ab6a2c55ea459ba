#include "mcqa/server.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <httplib.h>

#include "mcqa/classifier.hpp"
#include "mcqa/io.hpp"
#include "mcqa/scoring.hpp"
#include "mcqa/vocabulary.hpp"

namespace mcqa {

using nlohmann::json;
namespace fs = std::filesystem;

SessionStore::SessionStore(const Corpus& corpus, fs::path log_path)
    : corpus_(corpus), log_path_(std::move(log_path)) {
  if (log_path_.empty()) return;
  replay();
  compact();
}

void SessionStore::replay() {
  std::error_code ec;
  if (!fs::exists(log_path_, ec)) return;
  const std::string content = read_file(log_path_);
  std::vector<std::string> lines;
  std::istringstream in(content);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  const bool torn_tail = !content.empty() && content.back() != '\n';

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(std::string_view(lines[i]));
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      // An interrupted append leaves a partial last line; anything else is corruption.
      if (i + 1 == lines.size() && torn_tail) break;
      throw SchemaError(log_path_.string() + ":" + std::to_string(i + 1) + ": malformed log line");
    }
    AnnotationRecord r;
    try {
      r = annotation_from_json(j, corpus_);
    } catch (const Error& e) {
      throw SchemaError(log_path_.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
    std::string id = r.mcq_id;
    records_[id] = std::move(r);
  }
}

void SessionStore::compact() {
  if (log_path_.empty()) return;
  std::scoped_lock lock(log_mutex_);
  std::string out;
  for (const auto& r : snapshot()) out += to_json(r).dump() + "\n";
  if (log_path_.has_parent_path()) fs::create_directories(log_path_.parent_path());
  write_file_atomic(log_path_, out);
}

std::mutex& SessionStore::stripe(std::string_view mcq_id) {
  return stripes_[std::hash<std::string_view>{}(mcq_id) % stripes_.size()];
}

std::optional<AnnotationRecord> SessionStore::get(std::string_view mcq_id) const {
  std::shared_lock lock(map_mutex_);
  auto it = records_.find(std::string(mcq_id));
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

AnnotationRecord SessionStore::put(AnnotationRecord record, std::optional<std::uint64_t> expected_revision) {
  if (!corpus_.find_mcq(record.mcq_id)) throw ReferenceError("unknown MCQ '" + record.mcq_id + "'");
  std::scoped_lock write_lock(stripe(record.mcq_id));

  std::uint64_t current = 0;
  if (auto existing = get(record.mcq_id)) current = existing->revision.value_or(0);
  if (expected_revision && *expected_revision != current)
    throw ConflictError(record.mcq_id + ": expected revision " + std::to_string(*expected_revision) +
                            ", current is " + std::to_string(current),
                        current);
  record.revision = current + 1;

  if (!log_path_.empty()) {
    std::scoped_lock lock(log_mutex_);
    std::ofstream log(log_path_, std::ios::binary | std::ios::app);
    if (!log) throw IoError("cannot append to " + log_path_.string());
    log << to_json(record).dump() << '\n';
    log.flush();
    if (!log) throw IoError("cannot append to " + log_path_.string());
  }
  std::unique_lock lock(map_mutex_);
  records_[record.mcq_id] = record;
  return record;
}

std::vector<AnnotationRecord> SessionStore::snapshot() const {
  std::shared_lock lock(map_mutex_);
  std::vector<AnnotationRecord> out;
  out.reserve(records_.size());
  for (const auto* mcq : corpus_.mcqs())
    if (auto it = records_.find(mcq->mcq_id); it != records_.end()) out.push_back(it->second);
  return out;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(map_mutex_);
  return records_.size();
}

json assessment_json(const AnnotationRecord& record, const MCQUnit* mcq) {
  json findings = json::array();
  auto found = validate_complete(record, mcq);
  for (const auto& f : found) findings.push_back(to_json(f));
  json out{{"mcq_id", record.mcq_id}, {"complete", found.empty()}, {"findings", findings}};
  if (found.empty()) out["scorecard"] = to_json(score_total(record, mcq));
  return out;
}

namespace {

using Response = AnnotationService::Response;

Response error_response(int status, const std::string& message) { return {status, json{{"error", message}}}; }

json mcq_json(const MCQUnit& m) {
  json alts = json::object();
  for (auto l : kLabels) alts[std::string(1, label_char(l))] = m.alternative(l);
  return json{{"mcq_id", m.mcq_id},
              {"text_id", m.text_id},
              {"index", m.index},
              {"stem", m.stem},
              {"stem_style", to_string(m.stem_style)},
              {"alternatives", alts},
              {"key", std::string(1, label_char(m.key))}};
}

json passage_json(const TextPassage& p) {
  json paragraphs = json::array();
  for (const auto& r : p.paragraphs()) paragraphs.push_back({r.begin, r.end});
  return json{{"text_id", p.text_id()}, {"body", p.body()}, {"length", p.length()}, {"paragraphs", paragraphs}};
}

}  // namespace

AnnotationService::AnnotationService(SessionStore& store, GateOptions options)
    : store_(store), options_(options) {}

Response AnnotationService::corpus() const {
  const Corpus& c = store_.corpus();
  json items = json::array();
  std::size_t annotated = 0, complete = 0;
  for (const auto* m : c.mcqs()) {
    json item{{"mcq_id", m->mcq_id}, {"text_id", m->text_id}, {"annotated", false}, {"complete", false}};
    if (auto r = store_.get(m->mcq_id)) {
      ++annotated;
      bool ok = validate_complete(*r, m).empty();
      complete += ok;
      item["annotated"] = true;
      item["complete"] = ok;
      item["revision"] = r->revision.value_or(0);
    }
    items.push_back(std::move(item));
  }
  return {200, json{{"texts", c.passage_count()},
                    {"mcqs", c.mcq_count()},
                    {"annotated", annotated},
                    {"complete", complete},
                    {"items", items}}};
}

Response AnnotationService::mcq(std::string_view mcq_id) const {
  const Corpus& c = store_.corpus();
  const MCQUnit* m = c.find_mcq(mcq_id);
  if (!m) return error_response(404, "unknown MCQ '" + std::string(mcq_id) + "'");
  const TextPassage& p = c.passage_of(*m);
  json detected = json::array();
  for (const auto& f : detect_mechanical_errors(*m, p)) detected.push_back(to_json(f));
  const auto suggestion = classify_text_format(p);
  json evidence{{"bullet_marker_count", suggestion.evidence.bullet_marker_count},
                {"header_like_line_count", suggestion.evidence.header_like_line_count},
                {"numbered_list_count", suggestion.evidence.numbered_list_count},
                {"table_like_line_count", suggestion.evidence.table_like_line_count}};
  auto record = store_.get(mcq_id);
  return {200, json{{"mcq", mcq_json(*m)},
                    {"passage", passage_json(p)},
                    {"annotation", record ? to_json(*record) : json(nullptr)},
                    {"detected", detected},
                    {"heuristics",
                     {{"text_format", to_string(p.format)},
                      {"membership", to_string(p.membership)},
                      {"aspect", to_string(m->aspect)},
                      {"format_evidence", evidence}}}}};
}

Response AnnotationService::put_annotation(std::string_view mcq_id, std::string_view body) {
  const Corpus& c = store_.corpus();
  const MCQUnit* m = c.find_mcq(mcq_id);
  if (!m) return error_response(404, "unknown MCQ '" + std::string(mcq_id) + "'");
  json j = json::parse(body, nullptr, false);
  if (!j.is_object()) return error_response(400, "request body is not a JSON object");
  if (!j.contains("mcq_id")) j["mcq_id"] = std::string(mcq_id);
  if (j["mcq_id"] != std::string(mcq_id)) return error_response(400, "mcq_id in body does not match the URL");
  try {
    AnnotationRecord record = annotation_from_json(j, c);
    const auto expected = record.revision;
    AnnotationRecord stored = store_.put(std::move(record), expected);
    json out = assessment_json(stored, m);
    out["revision"] = *stored.revision;
    return {200, out};
  } catch (const ConflictError& e) {
    return {409, json{{"error", e.what()}, {"current_revision", e.current_revision}}};
  } catch (const IoError& e) {
    return error_response(500, e.what());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

Response AnnotationService::score(std::string_view body) const {
  json j = json::parse(body, nullptr, false);
  if (!j.is_object()) return error_response(400, "request body is not a JSON object");
  try {
    const Corpus& c = store_.corpus();
    const MCQUnit* m = nullptr;
    AnnotationRecord record;
    if (j.contains("mcq_id") && j["mcq_id"].is_string() && (m = c.find_mcq(j["mcq_id"].get<std::string>())))
      record = annotation_from_json(j, c);
    else
      record = annotation_from_json(j);
    return {200, assessment_json(record, m)};
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

Response AnnotationService::report(std::string_view kind) const {
  bool known = kind == "all";
  for (auto k : report_kinds()) known = known || k == kind;
  if (!known) return error_response(404, "unknown report kind '" + std::string(kind) + "'");
  try {
    auto records = store_.snapshot();
    return {200, report_json(build_report(store_.corpus(), records, options_), kind)};
  } catch (const Error& e) {
    return error_response(500, e.what());
  }
}

Response AnnotationService::vocabulary() const { return {200, vocabulary_json()}; }

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(AnnotationService& service, std::optional<fs::path> static_dir)
    : impl_(std::make_unique<Impl>()) {
  auto& s = impl_->server;
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  s.Get("/api/corpus", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.corpus());
  });
  s.Get(R"(/api/mcq/(.+))", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.mcq(req.matches[1].str()));
  });
  s.Put(R"(/api/annotation/(.+))", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.put_annotation(req.matches[1].str(), req.body));
  });
  s.Post("/api/score", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.score(req.body));
  });
  s.Get(R"(/api/report/([A-Za-z_]+))", [&service, send](const httplib::Request& req, httplib::Response& res) {
    send(res, service.report(req.matches[1].str()));
  });
  s.Get("/api/vocabulary", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.vocabulary());
  });
  if (static_dir && !s.set_mount_point("/", static_dir->string()))
    throw IoError("static directory " + static_dir->string() + " does not exist");
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  auto& s = impl_->server;
  if (port == 0) {
    int bound = s.bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind to " + host);
    return bound;
  }
  if (!s.bind_to_port(host, port)) throw IoError("cannot bind to " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace mcqa
