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

#include "formlink/pairs.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "formlink/errors.h"

namespace formlink {

std::string_view PairLabelName(PairLabel label) {
  switch (label) {
    case PairLabel::kValid:
      return "valid";
    case PairLabel::kInvalid:
      return "invalid";
    case PairLabel::kUnlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

std::optional<PairLabel> ParsePairLabel(std::string_view name) {
  if (name == "valid") return PairLabel::kValid;
  if (name == "invalid") return PairLabel::kInvalid;
  if (name == "unlabeled") return PairLabel::kUnlabeled;
  return std::nullopt;
}

std::string NormalizeText(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");

  icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString composed = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(' '));
    pending_space = false;
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

bool IsSameRow(const BBox& question, const BBox& answer) {
  return std::fabs(question.center_y() - answer.center_y()) < answer.height();
}

std::optional<NegativePolicy> NegativePolicy::Parse(std::string_view spec) {
  if (spec == "all") return All();
  constexpr std::string_view kPrefix = "balanced:";
  if (spec.starts_with(kPrefix)) {
    std::string_view digits = spec.substr(kPrefix.size());
    std::size_t ratio = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), ratio);
    if (ec == std::errc() && ptr == digits.data() + digits.size() &&
        !digits.empty()) {
      return Balanced(ratio);
    }
  }
  return std::nullopt;
}

std::string NegativePolicy::ToString() const {
  return balanced_ratio ? "balanced:" + std::to_string(*balanced_ratio)
                        : "all";
}

PairBuildStats& PairBuildStats::operator+=(const PairBuildStats& other) {
  positives += other.positives;
  negatives += other.negatives;
  gold_missed_by_candidates += other.gold_missed_by_candidates;
  return *this;
}

namespace {

PairExample MakePair(const Form& form, const Entity& question,
                     const Entity& answer, double distance, PairLabel label) {
  return PairExample{form.name(),
                     question.id,
                     answer.id,
                     NormalizeText(question.Text()),
                     NormalizeText(answer.Text()),
                     distance,
                     IsSameRow(question.box, answer.box),
                     label};
}

}  // namespace

std::vector<PairExample> BuildPairs(const Form& form,
                                    const CandidateParams& params,
                                    const NegativePolicy& policy,
                                    PairBuildStats* stats) {
  GoldLinkSet gold = GoldLinks(form);
  PairBuildStats local;
  std::vector<PairExample> out;
  for (const CandidateSet& set : AllCandidates(form, params)) {
    const Entity& answer = *form.Find(set.answer_id);
    std::vector<EntityId> gold_questions = gold.QuestionsFor(set.answer_id);

    std::size_t negative_budget = SIZE_MAX;
    if (policy.balanced_ratio) {
      negative_budget = *policy.balanced_ratio * gold_questions.size();
    }
    std::size_t negatives = 0;
    for (const Candidate& c : set.candidates) {
      bool valid = gold.Contains(c.question_id, set.answer_id);
      if (!valid) {
        if (negatives >= negative_budget) continue;
        ++negatives;
      }
      out.push_back(MakePair(form, *form.Find(c.question_id), answer,
                             c.distance,
                             valid ? PairLabel::kValid : PairLabel::kInvalid));
      ++(valid ? local.positives : local.negatives);
    }

    std::vector<PairExample> missed;
    for (EntityId q : gold_questions) {
      if (set.Contains(q)) continue;
      const Entity& question = *form.Find(q);
      missed.push_back(MakePair(form, question, answer,
                                BoxDistance(question.box, answer.box,
                                            params.mode),
                                PairLabel::kValid));
    }
    std::sort(missed.begin(), missed.end(),
              [](const PairExample& a, const PairExample& b) {
                if (a.distance != b.distance) return a.distance < b.distance;
                return a.question_id < b.question_id;
              });
    local.gold_missed_by_candidates += missed.size();
    for (PairExample& p : missed) out.push_back(std::move(p));
  }
  if (stats != nullptr) *stats += local;
  return out;
}

std::vector<PairExample> BuildInferencePairs(
    const Form& form, std::span<const CandidateSet> candidates) {
  std::vector<PairExample> out;
  for (const CandidateSet& set : candidates) {
    const Entity* answer = form.Find(set.answer_id);
    if (answer == nullptr) {
      throw UnknownId(form.name() + ": no entity with id " +
                      std::to_string(set.answer_id));
    }
    for (const Candidate& c : set.candidates) {
      const Entity* question = form.Find(c.question_id);
      if (question == nullptr) {
        throw UnknownId(form.name() + ": no entity with id " +
                        std::to_string(c.question_id));
      }
      out.push_back(
          MakePair(form, *question, *answer, c.distance, PairLabel::kUnlabeled));
    }
  }
  return out;
}

nlohmann::ordered_json PairToJson(const PairExample& pair) {
  nlohmann::ordered_json obj;
  obj["form"] = pair.form_name;
  obj["qid"] = pair.question_id;
  obj["aid"] = pair.answer_id;
  obj["question"] = pair.question_text;
  obj["answer"] = pair.answer_text;
  obj["distance"] = pair.distance;
  obj["label"] = std::string(PairLabelName(pair.label));
  obj["same_row"] = pair.same_row;
  return obj;
}

namespace {

template <typename T>
T Required(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaViolation(std::string("pair: missing '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaViolation(std::string("pair: '") + key + "' has the wrong type");
  }
}

}  // namespace

PairExample PairFromJson(const nlohmann::json& obj) {
  if (!obj.is_object()) throw SchemaViolation("pair: expected an object");
  PairExample pair;
  pair.form_name = Required<std::string>(obj, "form");
  pair.question_id = Required<EntityId>(obj, "qid");
  pair.answer_id = Required<EntityId>(obj, "aid");
  pair.question_text = Required<std::string>(obj, "question");
  pair.answer_text = Required<std::string>(obj, "answer");
  pair.distance = Required<double>(obj, "distance");
  auto label = ParsePairLabel(Required<std::string>(obj, "label"));
  if (!label) throw SchemaViolation("pair: unknown label");
  pair.label = *label;
  if (auto it = obj.find("same_row"); it != obj.end()) {
    if (!it->is_boolean()) throw SchemaViolation("pair: 'same_row' not bool");
    pair.same_row = it->get<bool>();
  }
  return pair;
}

void WritePairs(std::ostream& out, std::span<const PairExample> pairs,
                const nlohmann::ordered_json* meta) {
  if (meta != nullptr) {
    out << nlohmann::ordered_json{{"meta", *meta}}.dump() << '\n';
  }
  for (const PairExample& p : pairs) out << PairToJson(p).dump() << '\n';
}

std::vector<PairExample> ReadPairs(std::istream& in) {
  std::vector<PairExample> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedJson("pairs line " + std::to_string(line_no) + ": " +
                              e.what(),
                          e.byte);
    }
    if (obj.is_object() && obj.contains("meta")) continue;
    pairs.push_back(PairFromJson(obj));
  }
  return pairs;
}

}  // namespace formlink
