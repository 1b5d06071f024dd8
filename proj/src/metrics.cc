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

#include "formlink/metrics.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "formlink/errors.h"

namespace formlink {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Pairs each gold set with its prediction. Throws FormMismatch.
std::vector<std::pair<const GoldLinkSet*, const LinkPrediction*>> Align(
    std::span<const LinkPrediction> predictions,
    std::span<const GoldLinkSet> gold) {
  std::map<std::string, const LinkPrediction*> by_name;
  for (const LinkPrediction& p : predictions) {
    if (!by_name.emplace(p.form_name, &p).second) {
      throw FormMismatch("form '" + p.form_name + "' predicted twice");
    }
  }
  std::vector<std::pair<const GoldLinkSet*, const LinkPrediction*>> aligned;
  std::set<std::string> gold_names;
  for (const GoldLinkSet& g : gold) {
    if (!gold_names.insert(g.form_name).second) {
      throw FormMismatch("form '" + g.form_name + "' appears twice in gold");
    }
    auto it = by_name.find(g.form_name);
    if (it == by_name.end()) {
      throw FormMismatch("no prediction for form '" + g.form_name + "'");
    }
    aligned.emplace_back(&g, it->second);
  }
  for (const auto& [name, p] : by_name) {
    if (!gold_names.contains(name)) {
      throw FormMismatch("prediction for unknown form '" + name + "'");
    }
  }
  return aligned;
}

LinkCounts CountForm(const GoldLinkSet& gold, const LinkPrediction& pred) {
  std::set<QaLink> predicted;
  for (const PredictedLink& l : pred.links) {
    predicted.insert({l.question_id, l.answer_id});
  }
  LinkCounts c;
  std::set<EntityId> linked;  // entities touched by a gold or predicted link
  for (const QaLink& l : predicted) {
    if (gold.Contains(l.question_id, l.answer_id)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
    linked.insert(l.question_id);
    linked.insert(l.answer_id);
  }
  for (const QaLink& l : gold.links) {
    if (!predicted.contains(l)) ++c.fn;
    linked.insert(l.question_id);
    linked.insert(l.answer_id);
  }
  for (const auto* ids : {&gold.answer_ids, &gold.question_ids}) {
    for (EntityId id : *ids) {
      if (!linked.contains(id)) ++c.tn;
    }
  }
  return c;
}

void Add(LinkCounts& total, const LinkCounts& c) {
  total.tp += c.tp;
  total.fp += c.fp;
  total.fn += c.fn;
  total.tn += c.tn;
}

}  // namespace

Prf1 ComputePrf1(const LinkCounts& counts) {
  Prf1 out;
  out.precision = Ratio(counts.tp, counts.tp + counts.fp);
  out.recall = Ratio(counts.tp, counts.tp + counts.fn);
  double sum = out.precision + out.recall;
  out.f1 = sum == 0 ? 0.0 : 2 * out.precision * out.recall / sum;
  return out;
}

LinkCounts CountLinks(std::span<const LinkPrediction> predictions,
                      std::span<const GoldLinkSet> gold) {
  LinkCounts total;
  for (const auto& [g, p] : Align(predictions, gold)) Add(total, CountForm(*g, *p));
  return total;
}

AnswerRanking AnswerRanking::Build(EntityId answer_id,
                                   std::span<const ScoredCandidate> candidates,
                                   std::vector<EntityId> gold) {
  AnswerRanking r;
  r.answer_id = answer_id;
  for (const ScoredCandidate& c : candidates) {
    r.ordered.push_back({c.question_id, c.score, c.distance});
  }
  std::sort(r.ordered.begin(), r.ordered.end(),
            [](const RankedCandidate& a, const RankedCandidate& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.question_id < b.question_id;
            });
  std::sort(gold.begin(), gold.end());
  gold.erase(std::unique(gold.begin(), gold.end()), gold.end());
  r.gold = std::move(gold);
  return r;
}

namespace {

bool IsGold(const AnswerRanking& r, EntityId q) {
  return std::binary_search(r.gold.begin(), r.gold.end(), q);
}

void RequireGold(const AnswerRanking& r) {
  if (r.gold.empty()) {
    throw NoGold("answer " + std::to_string(r.answer_id) +
                 " has no gold question");
  }
}

}  // namespace

double AveragePrecision(const AnswerRanking& ranking) {
  RequireGold(ranking);
  const double m = static_cast<double>(ranking.gold.size());
  double ap = 0;
  double prev_recall = 0;
  std::size_t hits = 0;
  for (std::size_t n = 0; n < ranking.ordered.size(); ++n) {
    if (IsGold(ranking, ranking.ordered[n].question_id)) ++hits;
    double precision =
        static_cast<double>(hits) / static_cast<double>(n + 1);
    double recall = static_cast<double>(hits) / m;
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

std::int64_t RankValue(const AnswerRanking& ranking) {
  RequireGold(ranking);
  std::vector<std::int64_t> positions;
  for (std::size_t n = 0; n < ranking.ordered.size(); ++n) {
    if (IsGold(ranking, ranking.ordered[n].question_id)) {
      positions.push_back(static_cast<std::int64_t>(n + 1));
    }
  }
  auto present = static_cast<std::int64_t>(positions.size());
  auto m = static_cast<std::int64_t>(ranking.gold.size());
  auto size = static_cast<std::int64_t>(ranking.ordered.size());
  for (std::int64_t j = 1; j <= m - present; ++j) positions.push_back(size + j);
  std::int64_t sum = 0;
  for (std::int64_t i : positions) sum += i;
  return sum - m * (m + 1) / 2;
}

MetricsReport Evaluate(std::span<const LinkPrediction> predictions,
                       std::span<const GoldLinkSet> gold) {
  MetricsReport report;
  double ap_sum = 0;
  double rank_sum = 0;
  for (const auto& [g, p] : Align(predictions, gold)) {
    Add(report.counts, CountForm(*g, *p));

    std::map<EntityId, const AnswerCandidates*> scored;
    for (const AnswerCandidates& a : p->answers) scored.emplace(a.answer_id, &a);

    for (EntityId answer : g->answer_ids) {
      ++report.diagnostics.answers;
      std::vector<EntityId> gold_questions = g->QuestionsFor(answer);
      if (gold_questions.empty()) {
        ++report.diagnostics.answers_without_gold;
        continue;
      }
      ++report.diagnostics.answers_evaluated;
      auto it = scored.find(answer);
      std::span<const ScoredCandidate> candidates;
      if (it != scored.end()) candidates = it->second->candidates;
      AnswerRanking ranking =
          AnswerRanking::Build(answer, candidates, gold_questions);

      report.diagnostics.gold_links += ranking.gold.size();
      for (const RankedCandidate& c : ranking.ordered) {
        if (IsGold(ranking, c.question_id)) {
          ++report.diagnostics.gold_links_in_candidates;
        }
      }

      AnswerMetrics metrics{g->form_name, answer, ranking.gold.size(),
                            AveragePrecision(ranking), RankValue(ranking)};
      ap_sum += metrics.ap;
      rank_sum += static_cast<double>(metrics.rank);
      report.per_answer.push_back(std::move(metrics));
    }
  }
  report.prf1 = ComputePrf1(report.counts);
  if (!report.per_answer.empty()) {
    auto n = static_cast<double>(report.per_answer.size());
    report.map = ap_sum / n;
    report.mrank = rank_sum / n;
  }
  return report;
}

nlohmann::ordered_json ReportToJson(const MetricsReport& report,
                                    const nlohmann::ordered_json& run) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["tool"] = "formlink";
  out["version"] = FORMLINK_VERSION;
  out["config"] = run;
  out["counts"] = {{"tp", report.counts.tp},
                   {"fp", report.counts.fp},
                   {"fn", report.counts.fn},
                   {"tn", report.counts.tn}};
  out["precision"] = report.prf1.precision;
  out["recall"] = report.prf1.recall;
  out["f1"] = report.prf1.f1;
  out["map"] = report.map;
  out["mrank"] = report.mrank;
  const MetricsDiagnostics& d = report.diagnostics;
  out["diagnostics"] = {
      {"answers", d.answers},
      {"answers_evaluated", d.answers_evaluated},
      {"answers_without_gold", d.answers_without_gold},
      {"gold_links", d.gold_links},
      {"gold_links_in_candidates", d.gold_links_in_candidates},
      {"candidate_recall", d.candidate_recall()},
      {"ranking_tie_break", "score desc, distance asc, question id asc"},
      {"zero_denominator", "0"}};
  ordered_json per_answer = ordered_json::array();
  for (const AnswerMetrics& a : report.per_answer) {
    per_answer.push_back({{"form", a.form_name},
                          {"aid", a.answer_id},
                          {"m", a.m},
                          {"ap", a.ap},
                          {"rank", a.rank}});
  }
  out["per_answer"] = std::move(per_answer);
  return out;
}

std::string FormatReport(const MetricsReport& report) {
  const LinkCounts& c = report.counts;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "  mAP        %.4f\n"
                "  mRank      %.4f\n"
                "  F1         %.4f\n"
                "  precision  %.4f\n"
                "  recall     %.4f\n"
                "  TP %zu  FP %zu  FN %zu  TN %zu\n"
                "  answers evaluated %zu (excluded, no gold: %zu)\n"
                "  candidate recall %.4f\n",
                report.map, report.mrank, report.prf1.f1,
                report.prf1.precision, report.prf1.recall, c.tp, c.fp, c.fn,
                c.tn, report.diagnostics.answers_evaluated,
                report.diagnostics.answers_without_gold,
                report.diagnostics.candidate_recall());
  return buf;
}

}  // namespace formlink
