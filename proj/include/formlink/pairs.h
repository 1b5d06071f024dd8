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

// Question/answer pair examples for the pair classifier.
//
// Pairs file format: UTF-8, LF-terminated, one JSON object per line:
//   {"form": str, "qid": int, "aid": int, "question": str, "answer": str,
//    "distance": float, "label": "valid" | "invalid" | "unlabeled",
//    "same_row": bool}
// An optional first line {"meta": {...}} records the run configuration;
// readers skip it.

#ifndef FORMLINK_PAIRS_H_
#define FORMLINK_PAIRS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "formlink/funsd.h"
#include "formlink/geometry.h"
#include "json.hpp"

namespace formlink {

enum class PairLabel { kValid, kInvalid, kUnlabeled };

std::string_view PairLabelName(PairLabel label);
std::optional<PairLabel> ParsePairLabel(std::string_view name);

struct PairExample {
  std::string form_name;
  EntityId question_id = 0;
  EntityId answer_id = 0;
  std::string question_text;
  std::string answer_text;
  double distance = 0;
  // Vertical center offset smaller than the answer box height.
  bool same_row = false;
  PairLabel label = PairLabel::kUnlabeled;

  friend bool operator==(const PairExample&, const PairExample&) = default;
};

// NFC, whitespace runs collapsed to one space, trimmed. Case preserved.
std::string NormalizeText(std::string_view text);

bool IsSameRow(const BBox& question, const BBox& answer);

// Negatives kept per answer: all non-gold candidates, or at most
// `ratio` per gold question of that answer, nearest first.
struct NegativePolicy {
  std::optional<std::size_t> balanced_ratio;

  static NegativePolicy All() { return {}; }
  static NegativePolicy Balanced(std::size_t ratio) { return {ratio}; }

  // "all" or "balanced:R".
  static std::optional<NegativePolicy> Parse(std::string_view spec);
  std::string ToString() const;
};

struct PairBuildStats {
  // Valid examples drawn from the candidate sets.
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Gold pairs whose question is not in the answer's candidate set. They
  // are appended as Valid examples with their true distance.
  std::size_t gold_missed_by_candidates = 0;

  PairBuildStats& operator+=(const PairBuildStats& other);
};

// Labeled training pairs for every answer of the form, in answer file
// order then candidate order; appended gold pairs follow the candidates of
// their answer.
std::vector<PairExample> BuildPairs(const Form& form,
                                    const CandidateParams& params,
                                    const NegativePolicy& policy,
                                    PairBuildStats* stats = nullptr);

// Unlabeled pairs, exactly one per candidate, in candidate order.
std::vector<PairExample> BuildInferencePairs(
    const Form& form, std::span<const CandidateSet> candidates);

nlohmann::ordered_json PairToJson(const PairExample& pair);
// Throws SchemaViolation on a missing or mistyped field.
PairExample PairFromJson(const nlohmann::json& obj);

void WritePairs(std::ostream& out, std::span<const PairExample> pairs,
                const nlohmann::ordered_json* meta = nullptr);
// Throws MalformedJson (offset within the line) or SchemaViolation.
std::vector<PairExample> ReadPairs(std::istream& in);

}  // namespace formlink

#endif  // FORMLINK_PAIRS_H_
