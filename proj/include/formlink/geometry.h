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

#ifndef FORMLINK_GEOMETRY_H_
#define FORMLINK_GEOMETRY_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "formlink/funsd.h"

namespace formlink {

enum class DistanceMode {
  kCenterEuclidean,  // distance between box centers
  kClosestEdge,      // minimum distance between the rectangles, 0 on overlap
};

std::optional<DistanceMode> ParseDistanceMode(std::string_view name);
std::string_view DistanceModeName(DistanceMode mode);

// Symmetric, non-negative. ClosestEdge never exceeds CenterEuclidean.
double BoxDistance(const BBox& a, const BBox& b, DistanceMode mode);

struct Candidate {
  EntityId question_id = 0;
  double distance = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Candidate questions of one answer, ascending by (distance, question_id).
struct CandidateSet {
  EntityId answer_id = 0;
  std::vector<Candidate> candidates;

  bool Contains(EntityId question_id) const;
};

struct CandidateParams {
  // nullopt keeps every question in range.
  std::optional<std::size_t> k = 10;
  double radius = std::numeric_limits<double>::infinity();
  DistanceMode mode = DistanceMode::kCenterEuclidean;

  // Throws ConfigError for k == 0 or a negative / NaN radius.
  void Validate() const;
};

// The k nearest Question entities within `radius` of the answer.
// Throws UnknownId or NotAnAnswer.
CandidateSet CandidatesFor(const Form& form, EntityId answer_id,
                           const CandidateParams& params);

// Candidate sets for every Answer entity of the form, in file order.
std::vector<CandidateSet> AllCandidates(const Form& form,
                                        const CandidateParams& params);

struct CandidateRecall {
  std::size_t gold_links = 0;
  std::size_t covered = 0;  // gold question present in the candidate set

  // 1.0 when there are no gold links.
  double recall() const {
    return gold_links == 0 ? 1.0
                           : static_cast<double>(covered) /
                                 static_cast<double>(gold_links);
  }
};

// Fraction of gold question->answer links whose question is among the
// answer's candidates.
CandidateRecall MeasureCandidateRecall(std::span<const Form> forms,
                                       const CandidateParams& params);

}  // namespace formlink

#endif  // FORMLINK_GEOMETRY_H_
