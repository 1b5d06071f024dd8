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

// Decoding pair scores into question->answer links.
//
// For each answer, candidates scoring at least `threshold` are valid; the
// `max_links` valid candidates nearest to the answer, by (distance,
// question id), become links. Questions may serve any number of answers.
//
// Predictions file: UTF-8 JSON lines, optional {"meta": {...}} header,
// then one object per form:
//   {"form": str,
//    "links":   [{"qid": int, "aid": int, "score": float, "distance": float}],
//    "answers": [{"aid": int,
//                 "candidates": [{"qid": int, "score": float,
//                                 "distance": float}]}]}
// `answers` keeps the whole score vector of every answer.

#ifndef FORMLINK_LINKING_H_
#define FORMLINK_LINKING_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "formlink/funsd.h"
#include "formlink/geometry.h"
#include "formlink/scoring.h"
#include "json.hpp"

namespace formlink {

struct PredictedLink {
  EntityId question_id = 0;
  EntityId answer_id = 0;
  double score = 0;
  double distance = 0;

  friend bool operator==(const PredictedLink&, const PredictedLink&) = default;
};

struct ScoredCandidate {
  EntityId question_id = 0;
  double score = 0;
  double distance = 0;

  friend bool operator==(const ScoredCandidate&,
                         const ScoredCandidate&) = default;
};

// One answer's candidates with their scores, in candidate (distance) order.
struct AnswerCandidates {
  EntityId answer_id = 0;
  std::vector<ScoredCandidate> candidates;

  friend bool operator==(const AnswerCandidates&,
                         const AnswerCandidates&) = default;
};

struct LinkPrediction {
  std::string form_name;
  std::vector<PredictedLink> links;
  std::vector<AnswerCandidates> answers;

  friend bool operator==(const LinkPrediction&,
                         const LinkPrediction&) = default;
};

struct DecodeOptions {
  double threshold = 0.5;
  std::size_t max_links = 1;

  // Throws ConfigError on a threshold outside [0, 1] or max_links == 0.
  void Validate() const;
};

// `scores` must hold exactly one score per (answer, candidate) pair of
// `candidates`; extra scores are ignored. Throws MissingScore.
LinkPrediction Decode(const std::string& form_name,
                      std::span<const CandidateSet> candidates,
                      std::span<const PairScore> scores,
                      const DecodeOptions& options);

struct CorpusDecodeOptions {
  CandidateParams candidates;
  DecodeOptions decode;
  // Record per-form failures and continue instead of throwing.
  bool keep_going = false;
  // Forms processed in parallel when the scorer allows it. Output order is
  // the input order regardless.
  std::size_t jobs = 1;
};

struct CorpusDecodeResult {
  std::vector<LinkPrediction> predictions;
  std::vector<FileError> errors;
};

// candidates -> unlabeled pairs -> scores -> Decode, per form.
CorpusDecodeResult DecodeCorpus(std::span<const Form> forms, Scorer& scorer,
                                const CorpusDecodeOptions& options);

nlohmann::ordered_json PredictionToJson(const LinkPrediction& prediction);
// Throws SchemaViolation.
LinkPrediction PredictionFromJson(const nlohmann::json& obj);

void WritePredictions(std::ostream& out,
                      std::span<const LinkPrediction> predictions,
                      const nlohmann::ordered_json* meta = nullptr);

struct PredictionsFile {
  nlohmann::json meta;  // null when the file has no header
  std::vector<LinkPrediction> predictions;
};

// Throws MalformedJson or SchemaViolation.
PredictionsFile ReadPredictions(std::istream& in);

}  // namespace formlink

#endif  // FORMLINK_LINKING_H_
