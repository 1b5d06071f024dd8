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

// Brute-force ranking metrics, written separately from the library.

#ifndef FORMLINK_TESTS_METRIC_ORACLES_H_
#define FORMLINK_TESTS_METRIC_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "formlink/linking.h"

namespace formlink::oracle {

struct Instance {
  std::vector<ScoredCandidate> candidates;
  std::vector<EntityId> gold;  // distinct; may include ids not in candidates
};

// True when candidate a must be ranked above b.
inline bool Above(const ScoredCandidate& a, const ScoredCandidate& b) {
  return std::make_tuple(-a.score, a.distance, a.question_id) <
         std::make_tuple(-b.score, b.distance, b.question_id);
}

// Average precision by exhaustive threshold sweep: for every cut-off
// count how many gold items lie at or above it, and accumulate the recall
// gain times the precision at that cut-off.
inline double AveragePrecision(const Instance& in) {
  std::set<EntityId> gold(in.gold.begin(), in.gold.end());
  double m = static_cast<double>(gold.size());
  double ap = 0, prev_recall = 0;
  // Cut-offs in rank order: the n-th cut keeps exactly n candidates.
  std::vector<ScoredCandidate> cuts = in.candidates;
  std::sort(cuts.begin(), cuts.end(), [&](const auto& a, const auto& b) {
    auto count_above = [&](const ScoredCandidate& x) {
      int n = 0;
      for (const auto& c : in.candidates) n += Above(c, x);
      return n;
    };
    return count_above(a) < count_above(b);
  });
  for (const ScoredCandidate& cut : cuts) {
    int kept = 0, hits = 0;
    for (const ScoredCandidate& c : in.candidates) {
      if (c.question_id != cut.question_id && !Above(c, cut)) continue;
      ++kept;
      hits += gold.contains(c.question_id);
    }
    double precision = static_cast<double>(hits) / kept;
    double recall = hits / m;
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

// Rank as a direct count: for every gold question, the wrong candidates
// ranked above it. A gold question missing from the candidates is beaten
// by every wrong candidate.
inline std::int64_t RankValue(const Instance& in) {
  std::set<EntityId> gold(in.gold.begin(), in.gold.end());
  std::int64_t rank = 0;
  for (EntityId g : gold) {
    const ScoredCandidate* self = nullptr;
    for (const auto& c : in.candidates) {
      if (c.question_id == g) self = &c;
    }
    for (const auto& c : in.candidates) {
      if (gold.contains(c.question_id)) continue;
      if (self == nullptr || Above(c, *self)) ++rank;
    }
  }
  return rank;
}

// Up to `max_candidates` distinct questions with coarse scores and
// distances so ties are common; m gold ids, sometimes outside the list.
inline Instance RandomInstance(std::mt19937_64& rng, int max_candidates,
                               int m) {
  std::uniform_int_distribution<int> size(0, max_candidates);
  std::uniform_int_distribution<int> level(0, 4), dist(0, 3);
  Instance in;
  int n = size(rng);
  std::vector<EntityId> ids;
  for (int i = 0; i < n + m; ++i) ids.push_back(i * 7 % 23);
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int i = 0; i < n; ++i) {
    in.candidates.push_back({ids[i], level(rng) / 4.0, double(dist(rng))});
  }
  // Gold drawn from all ids, so some may be absent from the candidates.
  std::vector<EntityId> pool(ids.begin(), ids.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  in.gold.assign(pool.begin(), pool.begin() + m);
  return in;
}

}  // namespace formlink::oracle

#endif  // FORMLINK_TESTS_METRIC_ORACLES_H_
