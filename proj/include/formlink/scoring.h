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

#ifndef FORMLINK_SCORING_H_
#define FORMLINK_SCORING_H_

#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "formlink/funsd.h"
#include "formlink/pairs.h"

namespace formlink {

struct PairScore {
  std::string form_name;
  EntityId question_id = 0;
  EntityId answer_id = 0;
  double score = 0;  // in [0, 1]

  friend bool operator==(const PairScore&, const PairScore&) = default;
};

// Maps question/answer pairs to a validity confidence in [0, 1].
class Scorer {
 public:
  virtual ~Scorer() = default;

  // One confidence per example, same order.
  virtual std::vector<double> Score(std::span<const PairExample> examples) = 0;

  // Short description echoed into run artifacts.
  virtual std::string Describe() const = 0;

  // Whether Score may be called from several threads at once.
  virtual bool concurrent() const { return true; }
};

// Scores `examples` and checks every score is finite and within [0, 1].
std::vector<PairScore> ScorePairs(Scorer& scorer,
                                  std::span<const PairExample> examples);

// 1.0 for gold question->answer pairs, 0.0 otherwise.
class OracleScorer : public Scorer {
 public:
  explicit OracleScorer(std::span<const GoldLinkSet> gold);

  std::vector<double> Score(std::span<const PairExample> examples) override;
  std::string Describe() const override { return "oracle"; }

 private:
  std::set<std::tuple<std::string, EntityId, EntityId>> gold_;
};

// The same score for every pair.
class ConstantScorer : public Scorer {
 public:
  explicit ConstantScorer(double value);

  std::vector<double> Score(std::span<const PairExample> examples) override;
  std::string Describe() const override;

 private:
  double value_;
};

}  // namespace formlink

#endif  // FORMLINK_SCORING_H_
