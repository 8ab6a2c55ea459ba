#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mcqa/analysis.hpp"
#include "mcqa/annotation.hpp"
#include "mcqa/corpus.hpp"
#include "mcqa/errors.hpp"

namespace mcqa {

/// A write carried a revision that is no longer current.
class ConflictError : public Error {
 public:
  ConflictError(const std::string& what, std::uint64_t current) : Error(what), current_revision(current) {}
  std::uint64_t current_revision;
};

/// Current annotation per MCQ, backed by an append-only JSONL log. On open the
/// log is replayed (last line per mcq_id wins, a torn final line is dropped)
/// and rewritten compacted. An empty path keeps everything in memory.
class SessionStore {
 public:
  SessionStore(const Corpus& corpus, std::filesystem::path log_path = {});

  /// The stored record with its revision set.
  std::optional<AnnotationRecord> get(std::string_view mcq_id) const;
  /// Stores `record` under the next revision and returns it as stored. With
  /// `expected_revision`, throws ConflictError unless it is the current
  /// revision (0 meaning "no record yet").
  AnnotationRecord put(AnnotationRecord record, std::optional<std::uint64_t> expected_revision = std::nullopt);

  /// All current records in corpus order.
  std::vector<AnnotationRecord> snapshot() const;
  std::size_t size() const;
  /// Rewrites the log with one line per current record.
  void compact();

  const Corpus& corpus() const { return corpus_; }

 private:
  void replay();
  std::mutex& stripe(std::string_view mcq_id);

  const Corpus& corpus_;
  std::filesystem::path log_path_;
  mutable std::shared_mutex map_mutex_;
  std::unordered_map<std::string, AnnotationRecord> records_;
  std::mutex log_mutex_;
  std::array<std::mutex, 64> stripes_;
};

/// HTTP-independent request handling; the HTTP layer only routes to these.
class AnnotationService {
 public:
  struct Response {
    int status = 200;
    nlohmann::json body;
  };

  AnnotationService(SessionStore& store, GateOptions options = {});

  Response corpus() const;                                                // GET /api/corpus
  Response mcq(std::string_view mcq_id) const;                            // GET /api/mcq/{id}
  Response put_annotation(std::string_view mcq_id, std::string_view body);  // PUT /api/annotation/{id}
  Response score(std::string_view body) const;                            // POST /api/score
  Response report(std::string_view kind) const;                           // GET /api/report/{kind}
  Response vocabulary() const;                                            // GET /api/vocabulary

 private:
  SessionStore& store_;
  GateOptions options_;
};

/// Findings plus, when complete, the scorecard: the payload shared by PUT,
/// POST /api/score and `mcqa validate`/`score`.
nlohmann::json assessment_json(const AnnotationRecord& record, const MCQUnit* mcq);

class HttpServer {
 public:
  explicit HttpServer(AnnotationService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mcqa
