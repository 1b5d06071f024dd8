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

#include "formlink/scoring.h"

#include <cmath>
#include <sstream>

#include "formlink/errors.h"

namespace formlink {

std::vector<PairScore> ScorePairs(Scorer& scorer,
                                  std::span<const PairExample> examples) {
  std::vector<double> raw = scorer.Score(examples);
  if (raw.size() != examples.size()) {
    throw Error(scorer.Describe() + " returned " + std::to_string(raw.size()) +
                " scores for " + std::to_string(examples.size()) + " pairs");
  }
  std::vector<PairScore> scores;
  scores.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const PairExample& ex = examples[i];
    if (!std::isfinite(raw[i]) || raw[i] < 0 || raw[i] > 1) {
      std::ostringstream msg;
      msg << scorer.Describe() << ": score " << raw[i] << " for "
          << ex.form_name << " (" << ex.question_id << ", " << ex.answer_id
          << ") is outside [0, 1]";
      throw Error(msg.str());
    }
    scores.push_back({ex.form_name, ex.question_id, ex.answer_id, raw[i]});
  }
  return scores;
}

OracleScorer::OracleScorer(std::span<const GoldLinkSet> gold) {
  for (const GoldLinkSet& set : gold) {
    for (const QaLink& link : set.links) {
      gold_.emplace(set.form_name, link.question_id, link.answer_id);
    }
  }
}

std::vector<double> OracleScorer::Score(std::span<const PairExample> examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const PairExample& ex : examples) {
    bool hit = gold_.contains({ex.form_name, ex.question_id, ex.answer_id});
    out.push_back(hit ? 1.0 : 0.0);
  }
  return out;
}

ConstantScorer::ConstantScorer(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0 || value > 1) {
    throw ConfigError("constant score must lie in [0, 1]");
  }
}

std::vector<double> ConstantScorer::Score(
    std::span<const PairExample> examples) {
  return std::vector<double>(examples.size(), value_);
}

std::string ConstantScorer::Describe() const {
  std::ostringstream out;
  out << "constant:" << value_;
  return out.str();
}

}  // namespace formlink
