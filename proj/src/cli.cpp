#include "mcqa/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcqa/analysis.hpp"
#include "mcqa/annotation.hpp"
#include "mcqa/corpus.hpp"
#include "mcqa/errors.hpp"
#include "mcqa/io.hpp"
#include "mcqa/problems.hpp"
#include "mcqa/scoring.hpp"
#include "mcqa/server.hpp"

namespace mcqa {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum class Format { records, table };

struct Config {
  std::string corpus;
  std::string annotations;
  std::string out;
  Format format = Format::records;
  bool strict = false;
  bool include_detected = false;
  bool no_heuristics = false;
  std::string reference;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
};

// Streams to `path` through a temporary that only replaces it on commit();
// without a path everything goes to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path_.empty()) {
      stream_ = &fallback;
      return;
    }
    tmp_ = path_;
    tmp_ += ".tmp";
    file_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!file_) throw IoError("cannot write " + tmp_.string());
    stream_ = &file_;
  }
  ~Sink() {
    if (!path_.empty() && !committed_) {
      file_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  std::ostream& operator*() { return *stream_; }
  void commit() {
    if (path_.empty()) return;
    file_.flush();
    if (!file_) throw IoError("cannot write " + tmp_.string());
    file_.close();
    std::error_code ec;
    fs::rename(tmp_, path_, ec);
    if (ec) throw IoError("cannot replace " + path_.string() + ": " + ec.message());
    committed_ = true;
  }

 private:
  fs::path path_;
  fs::path tmp_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
  bool committed_ = false;
};

GateOptions gate_options(const Config& c) { return GateOptions{c.include_detected, !c.no_heuristics}; }

std::vector<AnnotationRecord> load_records(const Config& c, const Corpus& corpus) {
  return load_annotations(c.annotations, corpus);
}

template <class Map>
void table_counts(std::ostream& out, const std::string& title, const Map& m) {
  out << title << ":";
  for (const auto& [k, n] : m) out << ' ' << k << '=' << n;
  out << '\n';
}

int cmd_ingest(const Config& c, std::ostream& out) {
  Corpus corpus = load_corpus(c.corpus);
  std::map<std::string, std::size_t> formats, membership, aspects, stems;
  for (const auto& e : corpus.entries()) {
    ++formats[std::string(to_string(e.passage.format))];
    ++membership[std::string(to_string(e.passage.membership))];
    for (const auto& m : e.mcqs) {
      ++aspects[std::string(to_string(m.aspect))];
      ++stems[std::string(to_string(m.stem_style))];
    }
  }
  if (!c.out.empty()) write_corpus(corpus, c.out);
  if (c.format == Format::table) {
    out << "texts: " << corpus.passage_count() << "\nmcqs: " << corpus.mcq_count() << '\n';
    table_counts(out, "text_format", formats);
    table_counts(out, "membership", membership);
    table_counts(out, "aspect", aspects);
    table_counts(out, "stem_style", stems);
  } else {
    out << json{{"texts", corpus.passage_count()},
                {"mcqs", corpus.mcq_count()},
                {"text_format", formats},
                {"membership", membership},
                {"aspect", aspects},
                {"stem_style", stems}}
               .dump()
        << '\n';
  }
  return kExitOk;
}

int cmd_lint(const Config& c, std::ostream& out) {
  Corpus corpus = load_corpus(c.corpus);
  Sink sink(c.out, out);
  std::size_t total = 0, affected = 0;
  if (c.format == Format::table) *sink << "mcq_id\telement\ttype\tseverity\tspan\n";
  for (const auto& e : corpus.entries()) {
    for (const auto& m : e.mcqs) {
      auto findings = detect_mechanical_errors(m, e.passage);
      total += findings.size();
      affected += !findings.empty();
      if (c.format == Format::table) {
        for (const auto& f : findings)
          *sink << m.mcq_id << '\t' << f.element.str() << '\t' << to_string(f.type) << '\t'
                << to_string(f.severity) << '\t' << f.span->begin << '-' << f.span->end << '\n';
        continue;
      }
      std::map<std::string, Acceptability> per_element;
      for (std::string_view g : {"text", "question", "alternatives"}) per_element[std::string(g)] = Acceptability::acceptable;
      json list = json::array();
      for (const auto& f : findings) {
        list.push_back(to_json(f));
        auto& slot = per_element[std::string(element_group(f.element))];
        slot = worst(slot, acceptability_of(f.severity));
      }
      json elements = json::object();
      for (const auto& [g, a] : per_element) elements[g] = to_string(a);
      *sink << json{{"mcq_id", m.mcq_id},
                    {"findings", list},
                    {"elements", elements},
                    {"category", to_string(aggregate_category(findings))}}
                   .dump()
            << '\n';
    }
  }
  if (c.format == Format::table) *sink << total << " findings in " << affected << " MCQs\n";
  sink.commit();
  return total == 0 ? kExitOk : kExitFindings;
}

int cmd_validate(const Config& c, std::ostream& out, std::ostream& err) {
  Corpus corpus = load_corpus(c.corpus);
  auto records = load_records(c, corpus);
  Sink sink(c.out, out);
  std::size_t incomplete = 0;
  for (const auto& r : records) {
    const MCQUnit* m = corpus.find_mcq(r.mcq_id);
    auto findings = validate_complete(r, m);
    incomplete += !findings.empty();
    if (c.format == Format::table) {
      for (const auto& f : findings) *sink << r.mcq_id << '\t' << to_string(f.variable) << '\t' << f.message << '\n';
      continue;
    }
    json list = json::array();
    for (const auto& f : findings) list.push_back(to_json(f));
    *sink << json{{"mcq_id", r.mcq_id}, {"complete", findings.empty()}, {"findings", list}}.dump() << '\n';
  }
  auto gate = apply_quality_gate(corpus, records, gate_options(c));
  for (const auto& w : gate.warnings) err << "warning: " << w << '\n';
  if (c.format == Format::table) *sink << records.size() - incomplete << " complete / " << records.size() << " records\n";
  sink.commit();
  if (incomplete) return kExitFindings;
  if (c.strict && !gate.warnings.empty()) return kExitFindings;
  return kExitOk;
}

int cmd_score(const Config& c, std::ostream& out, std::ostream& err) {
  Corpus corpus = load_corpus(c.corpus);
  auto records = load_records(c, corpus);
  Sink sink(c.out, out);
  std::size_t failed = 0;
  if (c.format == Format::table) {
    *sink << "mcq_id";
    for (auto v : kVariables) *sink << '\t' << to_string(v);
    *sink << "\ttotal\n";
  }
  for (const auto& r : records) {
    const MCQUnit* m = corpus.find_mcq(r.mcq_id);
    auto findings = validate_complete(r, m);
    if (!findings.empty()) {
      ++failed;
      for (const auto& f : findings) err << r.mcq_id << ": " << f.message << '\n';
      continue;
    }
    Scorecard card = score_total(r, m);
    if (c.format == Format::table) {
      *sink << card.mcq_id;
      for (auto v : kVariables) *sink << '\t' << card[v].str();
      *sink << '\t' << card.total.str() << '\n';
    } else {
      *sink << to_json(card).dump() << '\n';
    }
  }
  if (failed) {
    err << failed << " record(s) could not be scored\n";
    return kExitFindings;  // the Sink discards any partial file
  }
  sink.commit();
  return kExitOk;
}

int cmd_filter(const Config& c, std::ostream& out, std::ostream& err) {
  Corpus corpus = load_corpus(c.corpus);
  auto records = load_records(c, corpus);
  auto gate = apply_quality_gate(corpus, records, gate_options(c));
  for (const auto& w : gate.warnings) err << "warning: " << w << '\n';
  if (!c.out.empty()) {
    std::string body;
    for (const auto& it : gate.retained) body += to_json(*it.record).dump() + "\n";
    write_file_atomic(c.out, body);
  }
  if (c.format == Format::table) {
    out << gate_trace_table(gate.trace);
  } else {
    for (const auto& it : gate.retained)
      out << json{{"mcq_id", it.mcq->mcq_id}, {"text_id", it.mcq->text_id}}.dump() << '\n';
    out << json{{"gate", gate_trace_json(gate.trace)}}.dump() << '\n';
  }
  return c.strict && !gate.warnings.empty() ? kExitFindings : kExitOk;
}

int cmd_report(const Config& c, std::ostream& out, std::ostream& err) {
  Corpus corpus = load_corpus(c.corpus);
  auto records = load_records(c, corpus);
  Report report = build_report(corpus, records, gate_options(c));
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (!c.out.empty()) {
    write_report(report, c.out);
  } else if (c.format == Format::records) {
    out << report_json(report, "all").dump() << '\n';
  }
  if (c.format == Format::table) {
    out << gate_trace_table(report.trace);
    const auto& d = report.difficulty;
    auto show = [](const std::optional<double>& v) {
      std::ostringstream s;
      if (v)
        s << std::fixed << std::setprecision(2) << *v;
      else
        s << "undefined";
      return s.str();
    };
    out << "difficulty: n=" << d.count << " mean=" << show(d.mean) << " median=" << show(d.median)
        << " mode=" << (d.mode ? std::to_string(*d.mode) : "undefined")
        << " min=" << (d.min ? d.min->str() : "undefined") << " max=" << (d.max ? d.max->str() : "undefined")
        << " unscored=" << report.unscored << '\n';
  }
  bool ok = true;
  if (!c.reference.empty()) {
    json ref = json::parse(read_file(c.reference), nullptr, false);
    if (ref.is_discarded()) throw SchemaError(c.reference + ": not valid JSON");
    for (const auto& check : check_reference(report, ref)) {
      err << (check.pass ? "PASS " : "FAIL ") << check.name << ": expected " << check.expected << ", got "
          << check.actual << '\n';
      ok = ok && check.pass;
    }
  }
  if (!ok) return kExitFindings;
  return c.strict && !report.warnings.empty() ? kExitFindings : kExitOk;
}

int cmd_serve(const Config& c, std::ostream& out) {
  Corpus corpus = load_corpus(c.corpus);
  SessionStore store(corpus, c.annotations);
  AnnotationService service(store, gate_options(c));
  std::optional<fs::path> static_dir;
  if (!c.static_dir.empty()) static_dir = c.static_dir;
  HttpServer server(service, static_dir);
  int port = server.bind(c.host, c.port);
  out << "serving " << corpus.mcq_count() << " MCQs (" << store.size() << " annotated) on http://" << c.host << ':'
      << port << std::endl;
  server.listen();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lint, score and analyse multiple-choice reading comprehension corpora", "mcqa"};
  app.require_subcommand(1);
  Config c;
  const std::map<std::string, Format> formats{{"records", Format::records}, {"table", Format::table}};

  auto add_common = [&](CLI::App* sub, bool annotations_required) {
    sub->add_option("--corpus", c.corpus, "RACE file or directory")->required()->check(CLI::ExistingPath);
    auto* a = sub->add_option("--annotations", c.annotations, "annotation records (JSONL)");
    if (annotations_required) a->required()->check(CLI::ExistingFile);
    sub->add_option("--format", c.format, "output format")->transform(CLI::CheckedTransformer(formats));
    sub->add_flag("--strict", c.strict, "treat classification disagreements as failures");
  };
  auto add_gate = [&](CLI::App* sub) {
    sub->add_flag("--include-detected", c.include_detected, "count detector findings in the quality stage");
    sub->add_flag("--no-heuristics", c.no_heuristics, "use annotated classifications only");
  };

  auto* ingest = app.add_subcommand("ingest", "load a corpus and summarise it");
  add_common(ingest, false);
  ingest->add_option("--out", c.out, "write the normalised corpus to this directory");

  auto* lint = app.add_subcommand("lint", "detect mechanical errors");
  add_common(lint, false);
  lint->add_option("--out", c.out, "output file");

  auto* validate = app.add_subcommand("validate", "check annotation completeness");
  add_common(validate, true);
  add_gate(validate);
  validate->add_option("--out", c.out, "output file");

  auto* score = app.add_subcommand("score", "score annotation records");
  add_common(score, true);
  score->add_option("--out", c.out, "output file");

  auto* filter = app.add_subcommand("filter", "apply the quality gate");
  add_common(filter, true);
  add_gate(filter);
  filter->add_option("--out", c.out, "write retained annotation records here");

  auto* report = app.add_subcommand("report", "distribution and heatmap reports");
  add_common(report, true);
  add_gate(report);
  report->add_option("--out", c.out, "output directory");
  report->add_option("--check-reference", c.reference, "reference expectations file")->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "run the annotation server");
  add_common(serve, false);
  add_gate(serve);
  serve->get_option("--annotations")->required();
  serve->add_option("--host", c.host, "bind address");
  serve->add_option("--port", c.port, "port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--static", c.static_dir, "directory of workbench assets")->check(CLI::ExistingDirectory);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      auto parsed = app.get_subcommands();
      out << (parsed.empty() ? app.help() : parsed.back()->help());
      return kExitOk;
    }
    err << "mcqa: " << e.what() << '\n';
    return kExitFailure;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(c, out);
    if (lint->parsed()) return cmd_lint(c, out);
    if (validate->parsed()) return cmd_validate(c, out, err);
    if (score->parsed()) return cmd_score(c, out, err);
    if (filter->parsed()) return cmd_filter(c, out, err);
    if (report->parsed()) return cmd_report(c, out, err);
    if (serve->parsed()) return cmd_serve(c, out);
  } catch (const ValidationError& e) {
    err << "mcqa: " << e.what() << '\n';
    return kExitFindings;
  } catch (const Error& e) {
    err << "mcqa: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "mcqa: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace mcqa
