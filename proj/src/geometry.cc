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

#include "formlink/geometry.h"

#include <algorithm>
#include <cmath>

#include "formlink/errors.h"

namespace formlink {

std::optional<DistanceMode> ParseDistanceMode(std::string_view name) {
  if (name == "center" || name == "center-euclidean") {
    return DistanceMode::kCenterEuclidean;
  }
  if (name == "edge" || name == "closest-edge") {
    return DistanceMode::kClosestEdge;
  }
  return std::nullopt;
}

std::string_view DistanceModeName(DistanceMode mode) {
  return mode == DistanceMode::kCenterEuclidean ? "center" : "edge";
}

double BoxDistance(const BBox& a, const BBox& b, DistanceMode mode) {
  if (mode == DistanceMode::kCenterEuclidean) {
    return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
  }
  double dx = std::max({0.0, a.x_min - b.x_max, b.x_min - a.x_max});
  double dy = std::max({0.0, a.y_min - b.y_max, b.y_min - a.y_max});
  return std::hypot(dx, dy);
}

bool CandidateSet::Contains(EntityId question_id) const {
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const Candidate& c) {
                       return c.question_id == question_id;
                     });
}

void CandidateParams::Validate() const {
  if (k.has_value() && *k == 0) throw ConfigError("k must be positive");
  if (std::isnan(radius) || radius < 0) {
    throw ConfigError("radius must be non-negative");
  }
}

CandidateSet CandidatesFor(const Form& form, EntityId answer_id,
                           const CandidateParams& params) {
  const Entity* answer = form.Find(answer_id);
  if (answer == nullptr) {
    throw UnknownId(form.name() + ": no entity with id " +
                    std::to_string(answer_id));
  }
  if (answer->label != EntityLabel::kAnswer) {
    throw NotAnAnswer(form.name() + ": entity " + std::to_string(answer_id) +
                      " is a " + std::string(LabelName(answer->label)));
  }

  CandidateSet out;
  out.answer_id = answer_id;
  for (const Entity& e : form.entities()) {
    if (e.label != EntityLabel::kQuestion) continue;
    double d = BoxDistance(e.box, answer->box, params.mode);
    if (d <= params.radius) out.candidates.push_back({e.id, d});
  }
  auto by_key = [](const Candidate& x, const Candidate& y) {
    if (x.distance != y.distance) return x.distance < y.distance;
    return x.question_id < y.question_id;
  };
  if (params.k && *params.k < out.candidates.size()) {
    std::partial_sort(out.candidates.begin(),
                      out.candidates.begin() +
                          static_cast<std::ptrdiff_t>(*params.k),
                      out.candidates.end(), by_key);
    out.candidates.resize(*params.k);
  } else {
    std::sort(out.candidates.begin(), out.candidates.end(), by_key);
  }
  return out;
}

std::vector<CandidateSet> AllCandidates(const Form& form,
                                        const CandidateParams& params) {
  std::vector<CandidateSet> sets;
  for (const Entity& e : form.entities()) {
    if (e.label == EntityLabel::kAnswer) {
      sets.push_back(CandidatesFor(form, e.id, params));
    }
  }
  return sets;
}

CandidateRecall MeasureCandidateRecall(std::span<const Form> forms,
                                       const CandidateParams& params) {
  CandidateRecall recall;
  for (const Form& form : forms) {
    GoldLinkSet gold = GoldLinks(form);
    for (const CandidateSet& set : AllCandidates(form, params)) {
      for (EntityId q : gold.QuestionsFor(set.answer_id)) {
        ++recall.gold_links;
        if (set.Contains(q)) ++recall.covered;
      }
    }
  }
  return recall;
}

}  // namespace formlink
