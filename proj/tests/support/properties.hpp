#pragma once

// Randomised property suites shared by the unit tests and the acceptance run.
// Each returns the number of cases checked and the first counterexample.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.hpp"
#include "mcqa/analysis.hpp"
#include "mcqa/problems.hpp"

namespace properties {

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  void fail(const std::string& why) {
    if (!failures++) first_failure = why;
  }
  bool ok() const { return failures == 0 && cases > 0; }
};

inline mcqa::ErrorFinding random_finding(std::mt19937& rng) {
  auto types = mcqa::all_error_types();
  mcqa::ErrorFinding f;
  f.type = types[rng() % types.size()];
  f.severity = mcqa::severity_of(f.type);
  f.element = mcqa::Element::text();
  return f;
}

inline std::vector<mcqa::ErrorFinding> random_findings(std::mt19937& rng, std::size_t max) {
  std::vector<mcqa::ErrorFinding> out(rng() % (max + 1));
  for (auto& f : out) f = random_finding(rng);
  return out;
}

// aggregate is the lattice join of the per-finding categories.
inline Outcome severity_lattice(std::size_t n, unsigned seed) {
  using mcqa::Acceptability;
  std::mt19937 rng(seed);
  Outcome o;
  for (std::size_t k = 0; k < n; ++k, ++o.cases) {
    auto f = random_findings(rng, 6);
    auto g = random_findings(rng, 6);
    auto fg = f;
    fg.insert(fg.end(), g.begin(), g.end());
    const auto af = mcqa::aggregate_category(f);
    const auto ag = mcqa::aggregate_category(g);
    const auto afg = mcqa::aggregate_category(fg);
    if (afg != mcqa::worst(af, ag)) o.fail("join of unions differs at case " + std::to_string(k));
    if (mcqa::worst(af, ag) != mcqa::worst(ag, af)) o.fail("worst is not commutative");
    if (mcqa::worst(af, af) != af) o.fail("worst is not idempotent");
    if (afg < af || afg < ag) o.fail("adding findings improved the category");

    Acceptability expect = Acceptability::acceptable;
    bool severe = false, moderate = false, mild = false;
    for (const auto& x : f) {
      severe |= x.severity == mcqa::Severity::severe;
      moderate |= x.severity == mcqa::Severity::moderate;
      mild |= x.severity == mcqa::Severity::mild;
    }
    if (severe) expect = Acceptability::unacceptable;
    else if (moderate) expect = Acceptability::partially_acceptable;
    else if (mild) expect = Acceptability::mainly_acceptable;
    if (af != expect) o.fail("aggregate disagrees with the severity rule at case " + std::to_string(k));
    for (const auto& x : f)
      if (x.severity != mcqa::severity_of(mcqa::to_string(x.type))) o.fail("severity lookup by name differs");
  }
  return o;
}

// ---------------------------------------------------------------------------
// Quality gate

inline const std::vector<std::string>& gate_articles() {
  static const std::vector<std::string> a = {
      "Last summer my family went to the seaside. We stayed in a small hotel near the beach.\n\n"
      "Every morning we swam before breakfast. The water was cold but clear.\n\n"
      "On the last day it rained. We drove home, tired but happy.",
      "Our school has a new library. Students can borrow three books a week.\n"
      "1. Bring your card.\n2. Return books on time.\n3. Keep the room quiet.\n",
      "Name\tAge\tCity\nTom\t12\tLeeds\nAnna\t11\tYork\nSam\t13\tBath\n",
      "Tom lost his dog in the park. He looked for it all afternoon.\n\n"
      "At last a girl found the dog near the lake and brought it back."};
  return a;
}

inline const std::vector<std::string>& gate_stems() {
  static const std::vector<std::string> s = {"Why did they go home early?", "Which is the best title for the passage?",
                                             "What does the phrase \"give up\" mean?", "What did Tom lose?"};
  return s;
}

struct GateCase {
  mcqa::Corpus corpus;
  std::vector<mcqa::AnnotationRecord> records;
};

inline GateCase random_gate_case(std::mt19937& rng) {
  using namespace mcqa;
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::vector<fixtures::json> raw;
  const std::size_t texts = 1 + pick(6);
  for (std::size_t t = 0; t < texts; ++t) {
    const std::size_t n = 1 + pick(4);
    std::vector<std::string> qs;
    std::vector<std::vector<std::string>> opts;
    std::vector<std::string> answers;
    for (std::size_t q = 0; q < n; ++q) {
      qs.push_back(gate_stems()[pick(gate_stems().size())]);
      opts.push_back({"Rain", "A dog", "A book", "Home"});
      answers.push_back("B");
    }
    raw.push_back(fixtures::race_record("g" + std::to_string(t), gate_articles()[pick(gate_articles().size())], qs,
                                        opts, answers));
  }
  GateCase c{fixtures::corpus_of(raw), {}};

  const auto types = all_error_types();
  static constexpr ExclusionFlag kFlags[] = {ExclusionFlag::non_continuous_text, ExclusionFlag::non_content_aspect,
                                             ExclusionFlag::partly_continuous_text, ExclusionFlag::severe_problem,
                                             ExclusionFlag::toi_3to1_split};
  static constexpr TextFormat kFormats[] = {TextFormat::continuous, TextFormat::partly_continuous,
                                            TextFormat::non_continuous, TextFormat::mixed};
  static constexpr Aspect kAspects[] = {Aspect::content, Aspect::structure, Aspect::vocabulary};
  for (const auto* mcq : c.corpus.mcqs()) {
    if (!chance(0.8)) continue;
    AnnotationRecord r = fixtures::minimal_record(mcq->mcq_id);
    if (chance(0.15)) r.text_format = kFormats[pick(4)];
    if (chance(0.15)) r.aspect = kAspects[pick(3)];
    for (auto f : kFlags)
      if (chance(0.06)) r.exclusion_flags.insert(f);
    if (chance(0.1)) r.toi = {{"person"}, {"person"}, {"person"}, {"cause"}};
    if (chance(0.1)) r.pod.clear();
    for (std::size_t k = pick(3); k > 0; --k) {
      ErrorFinding f;
      f.type = types[pick(types.size())];
      f.severity = severity_of(f.type);
      switch (pick(4)) {
        case 0: f.element = Element::text(); break;
        case 1: f.element = Element::question(); break;
        case 2: f.element = Element::alternatives(); break;
        default: f.element = Element::interaction(Interaction::text_alternatives); break;
      }
      r.error_marks.push_back(f);
    }
    c.records.push_back(std::move(r));
  }
  return c;
}

inline std::vector<std::string> ids_of(const std::vector<mcqa::AnalysisItem>& items) {
  std::vector<std::string> out;
  for (const auto& it : items) out.push_back(it.mcq->mcq_id);
  return out;
}

inline bool is_subsequence(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  std::size_t j = 0;
  for (const auto& s : big)
    if (j < small.size() && small[j] == s) ++j;
  return j == small.size();
}

using StageRow = std::tuple<std::string, std::size_t, std::size_t, std::map<std::string, std::size_t>>;

inline std::vector<StageRow> stage_rows(const mcqa::GateTrace& trace) {
  std::vector<StageRow> out;
  for (const auto& s : trace.stages) out.emplace_back(s.name, s.texts, s.mcqs, s.dropped);
  return out;
}

// Every stage keeps a subset of its input, drops are accounted for, and the
// record order does not matter.
inline Outcome gate_monotonicity(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  Outcome o;
  const std::vector<std::string_view> names = {mcqa::kStageAnnotated, mcqa::kStageContinuous,
                                               mcqa::kStageContent,   mcqa::kStageQuality,
                                               mcqa::kStageFullyContinuous, mcqa::kStageToi};
  for (std::size_t k = 0; k < n; ++k, ++o.cases) {
    const std::string at = " at case " + std::to_string(k);
    GateCase c = random_gate_case(rng);
    const bool heuristics = rng() % 4 != 0;
    const mcqa::GateOptions options{false, heuristics};
    const auto g = mcqa::apply_quality_gate(c.corpus, c.records, options);
    const auto& st = g.trace.stages;
    if (st.size() != names.size()) {
      o.fail("wrong number of stages" + at);
      continue;
    }
    for (std::size_t s = 0; s < st.size(); ++s) {
      if (st[s].name != names[s]) o.fail("stage order" + at);
      if (s == 0) {
        if (st[0].mcqs != c.records.size()) o.fail("annotated count differs from the records" + at);
        continue;
      }
      if (st[s].mcqs > st[s - 1].mcqs || st[s].texts > st[s - 1].texts) o.fail(st[s].name + " grew" + at);
      std::size_t dropped = 0;
      for (const auto& [_, d] : st[s].dropped) dropped += d;
      if (st[s - 1].mcqs - std::min(st[s - 1].mcqs, st[s].mcqs) != dropped)
        o.fail(st[s].name + " drop reasons do not add up" + at);
    }
    const auto annotated = ids_of(g.annotated), analysed = ids_of(g.analysed), retained = ids_of(g.retained);
    if (analysed.size() != st[2].mcqs || retained.size() != st.back().mcqs) o.fail("item lists disagree with trace" + at);
    if (!is_subsequence(analysed, annotated) || !is_subsequence(retained, analysed))
      o.fail("a stage emitted an MCQ it was not given" + at);

    auto shuffled = c.records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto h = mcqa::apply_quality_gate(c.corpus, shuffled, options);
    if (stage_rows(h.trace) != stage_rows(g.trace) || ids_of(h.retained) != retained)
      o.fail("reordering records changed the funnel" + at);
  }
  return o;
}

// ---------------------------------------------------------------------------
// Bases heatmap and bucketing

// Bucket of character c computed directly from the definition.
inline std::size_t bucket_direct(std::size_t c, std::size_t length) {
  const std::size_t b = (c * 100) / length;
  return b > 99 ? 99 : b;
}

struct HeatmapWorld {
  mcqa::Corpus corpus;
  std::vector<const mcqa::MCQUnit*> mcqs;
};

inline HeatmapWorld heatmap_world(unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<fixtures::json> raw;
  const std::size_t lengths[] = {40, 99, 100, 101, 333, 1000, 2417, 5000};
  for (std::size_t t = 0; t < std::size(lengths); ++t) {
    std::string article;
    while (article.size() < lengths[t]) article += "word ";
    article.resize(lengths[t] - 1);
    article += ".";
    raw.push_back(fixtures::simple_record("h" + std::to_string(t), 3, article));
  }
  HeatmapWorld w{fixtures::corpus_of(raw), {}};
  w.mcqs = w.corpus.mcqs();
  return w;
}

inline std::vector<mcqa::AnnotationRecord> random_basis_records(std::mt19937& rng, const HeatmapWorld& w,
                                                                std::size_t n) {
  std::vector<mcqa::AnnotationRecord> out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto* mcq = w.mcqs[rng() % w.mcqs.size()];
    const std::size_t L = w.corpus.passage_of(*mcq).length();
    mcqa::AnnotationRecord r;
    r.mcq_id = mcq->mcq_id;
    for (std::size_t b = rng() % 5; b > 0; --b) {
      std::size_t x = rng() % L, y = rng() % L;
      if (x > y) std::swap(x, y);
      r.bases.push_back({mcqa::kLabels[rng() % 4], {x, y + 1}});
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<mcqa::AnalysisItem> items_of(const HeatmapWorld& w,
                                                const std::vector<mcqa::AnnotationRecord>& records) {
  std::vector<mcqa::AnalysisItem> out;
  for (const auto& r : records) {
    const auto* mcq = w.corpus.find_mcq(r.mcq_id);
    out.push_back({mcq, &w.corpus.passage_of(*mcq), &r});
  }
  return out;
}

// heatmap(S1 + S2) == heatmap(S1) + heatmap(S2), each cell is bounded by the
// MCQs with a basis for its label, and cells match a direct count.
inline Outcome heatmap_additivity(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  const HeatmapWorld w = heatmap_world(seed);
  Outcome o;
  for (std::size_t k = 0; k < n; ++k, ++o.cases) {
    const std::string at = " at case " + std::to_string(k);
    const auto records = random_basis_records(rng, w, rng() % 12);
    const auto all = items_of(w, records);
    std::vector<mcqa::AnalysisItem> s1, s2;
    for (const auto& it : all) (rng() % 2 ? s1 : s2).push_back(it);

    const auto h = mcqa::bases_heatmap(all);
    if (h != mcqa::bases_heatmap(s1) + mcqa::bases_heatmap(s2)) o.fail("heatmap is not additive" + at);

    mcqa::BasesHeatmap expect;
    for (const auto& it : all) {
      const std::size_t L = it.passage->length();
      std::array<std::set<std::size_t>, 4> covered;
      std::array<bool, 4> any{};
      for (const auto& b : it.record->bases) {
        const auto l = mcqa::label_index(b.label);
        any[l] = true;
        for (auto x = bucket_direct(b.span.begin, L); x <= bucket_direct(b.span.end - 1, L); ++x) covered[l].insert(x);
      }
      for (std::size_t l = 0; l < 4; ++l) {
        expect.mcqs_with_basis[l] += any[l];
        for (auto x : covered[l]) ++expect.cells[l][x];
      }
    }
    if (h != expect) o.fail("heatmap differs from a direct count" + at);
    for (std::size_t l = 0; l < 4; ++l)
      for (auto cell : h.cells[l])
        if (cell > h.mcqs_with_basis[l]) o.fail("cell exceeds the MCQs with a basis" + at);
  }
  return o;
}

inline std::size_t random_length(std::mt19937& rng, std::size_t lo, std::size_t hi) {
  // Log-uniform, so short and long texts are both common.
  std::uniform_real_distribution<double> d(std::log(static_cast<double>(lo)), std::log(static_cast<double>(hi) + 1));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::exp(d(rng))), lo, hi);
}

inline bool contiguous_nonempty(const std::vector<std::size_t>& v) {
  if (v.empty()) return false;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[i - 1] + 1) return false;
  return v.back() < mcqa::kBuckets;
}

// For texts of at least 100 characters, any partition of the text into spans
// covers every bucket, and each span maps to a non-empty contiguous interval.
inline Outcome bucket_coverage(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  Outcome o;
  for (std::size_t k = 0; k < n; ++k, ++o.cases) {
    const std::string at = " at case " + std::to_string(k);
    const std::size_t L = random_length(rng, 100, 20000);
    std::set<std::size_t> cuts = {0, L};
    for (std::size_t c = rng() % 40; c > 0; --c) cuts.insert(1 + rng() % (L - 1));
    std::set<std::size_t> covered;
    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
      const auto m = mcqa::bases_bucket_map(L, {*it, *std::next(it)});
      if (!contiguous_nonempty(m)) o.fail("non-contiguous or empty map" + at);
      covered.insert(m.begin(), m.end());
    }
    if (covered.size() != mcqa::kBuckets || *covered.begin() != 0 || *covered.rbegin() != mcqa::kBuckets - 1)
      o.fail("partition of a " + std::to_string(L) + "-character text does not cover every bucket" + at);
  }
  return o;
}

// bases_bucket_map against the per-character definition. Short texts (under
// 100 characters) skip buckets, so there the map must be the contiguous hull
// of the per-character set.
inline Outcome bucket_oracle(std::size_t n, unsigned seed, std::size_t min_length = 100,
                             std::size_t max_length = 20000) {
  std::mt19937 rng(seed);
  Outcome o;
  for (std::size_t k = 0; k < n; ++k, ++o.cases) {
    const std::size_t L = random_length(rng, min_length, max_length);
    std::size_t x = rng() % L, y = rng() % L;
    if (x > y) std::swap(x, y);
    if (rng() % 4 == 0) y = std::min(L - 1, x + rng() % 5);
    const mcqa::CharRange span{x, y + 1};
    std::set<std::size_t> per_char;
    for (std::size_t c = span.begin; c < span.end; ++c) per_char.insert(bucket_direct(c, L));
    const auto got = mcqa::bases_bucket_map(L, span);
    std::vector<std::size_t> expect;
    if (L >= 100) {
      expect.assign(per_char.begin(), per_char.end());
    } else {
      for (auto b = *per_char.begin(); b <= *per_char.rbegin(); ++b) expect.push_back(b);
    }
    if (got != expect)
      o.fail("L=" + std::to_string(L) + " span [" + std::to_string(span.begin) + ", " + std::to_string(span.end) +
             ") maps to the wrong buckets");
  }
  return o;
}

}  // namespace properties
