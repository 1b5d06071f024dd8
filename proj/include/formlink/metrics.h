// Copyright 2026 The formlink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Entity-linking metrics.
//
// Link counts are pooled over the corpus:
//   tp  predicted links that are gold
//   fp  predicted links that are not gold
//   fn  gold links that were not predicted
//   tn  answers and questions with neither a gold nor a predicted link
// precision = tp / (tp + fp), recall = tp / (tp + fn) and F1 is their
// harmonic mean; each is 0 when its denominator vanishes.
//
// Ranking metrics are per answer, over its candidate score vector ordered
// by descending score (ties: ascending distance, then question id). With m
// gold questions at 1-based positions i_1 < ... < i_m:
//   AP   = sum_n (R_n - R_{n-1}) * P_n over the positions of the ordering
//   Rank = sum_k (i_k - k)
// A gold question missing from the candidates is never retrieved by AP and
// is placed after the last candidate for Rank. mAP and mRank average over
// answers with m >= 1.

#ifndef FORMLINK_METRICS_H_
#define FORMLINK_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "formlink/funsd.h"
#include "formlink/linking.h"
#include "json.hpp"

namespace formlink {

struct LinkCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  friend bool operator==(const LinkCounts&, const LinkCounts&) = default;
};

struct Prf1 {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

Prf1 ComputePrf1(const LinkCounts& counts);

// Matches predictions to gold by form name. Throws FormMismatch when the
// two sides do not cover the same forms.
LinkCounts CountLinks(std::span<const LinkPrediction> predictions,
                      std::span<const GoldLinkSet> gold);

struct RankedCandidate {
  EntityId question_id = 0;
  double score = 0;
  double distance = 0;
};

struct AnswerRanking {
  EntityId answer_id = 0;
  std::vector<RankedCandidate> ordered;
  std::vector<EntityId> gold;  // the m gold questions

  // Orders `candidates` by (score desc, distance asc, question id asc).
  static AnswerRanking Build(EntityId answer_id,
                             std::span<const ScoredCandidate> candidates,
                             std::vector<EntityId> gold);
};

// Throws NoGold when the ranking has no gold question.
double AveragePrecision(const AnswerRanking& ranking);
std::int64_t RankValue(const AnswerRanking& ranking);

struct AnswerMetrics {
  std::string form_name;
  EntityId answer_id = 0;
  std::size_t m = 0;
  double ap = 0;
  std::int64_t rank = 0;
};

struct MetricsDiagnostics {
  std::size_t answers = 0;
  std::size_t answers_evaluated = 0;   // m >= 1
  std::size_t answers_without_gold = 0;  // excluded from mAP / mRank
  std::size_t gold_links = 0;
  std::size_t gold_links_in_candidates = 0;

  double candidate_recall() const {
    return gold_links == 0 ? 1.0
                           : static_cast<double>(gold_links_in_candidates) /
                                 static_cast<double>(gold_links);
  }
};

struct MetricsReport {
  LinkCounts counts;
  Prf1 prf1;
  double map = 0;
  double mrank = 0;
  std::vector<AnswerMetrics> per_answer;  // gold form order, then answer order
  MetricsDiagnostics diagnostics;
};

// Throws FormMismatch.
MetricsReport Evaluate(std::span<const LinkPrediction> predictions,
                       std::span<const GoldLinkSet> gold);

// `run` is echoed verbatim under "config".
nlohmann::ordered_json ReportToJson(const MetricsReport& report,
                                    const nlohmann::ordered_json& run);

// Human-readable summary table.
std::string FormatReport(const MetricsReport& report);

}  // namespace formlink

#endif  // FORMLINK_METRICS_H_
