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

#include "formlink/linking.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <utility>

#include "formlink/errors.h"
#include "formlink/pairs.h"
#include "formlink/parallel.h"

namespace formlink {

void DecodeOptions::Validate() const {
  if (!(threshold >= 0 && threshold <= 1)) {
    throw ConfigError("threshold must lie in [0, 1]");
  }
  if (max_links == 0) throw ConfigError("max_links must be positive");
}

LinkPrediction Decode(const std::string& form_name,
                      std::span<const CandidateSet> candidates,
                      std::span<const PairScore> scores,
                      const DecodeOptions& options) {
  options.Validate();
  std::map<std::pair<EntityId, EntityId>, double> by_pair;
  for (const PairScore& s : scores) {
    by_pair.emplace(std::make_pair(s.answer_id, s.question_id), s.score);
  }

  LinkPrediction out;
  out.form_name = form_name;
  for (const CandidateSet& set : candidates) {
    AnswerCandidates answer{set.answer_id, {}};
    std::vector<PredictedLink> valid;
    for (const Candidate& c : set.candidates) {
      auto it = by_pair.find({set.answer_id, c.question_id});
      if (it == by_pair.end()) {
        throw MissingScore(form_name + ": no score for question " +
                           std::to_string(c.question_id) + " / answer " +
                           std::to_string(set.answer_id));
      }
      answer.candidates.push_back({c.question_id, it->second, c.distance});
      if (it->second >= options.threshold) {
        valid.push_back({c.question_id, set.answer_id, it->second, c.distance});
      }
    }
    std::stable_sort(valid.begin(), valid.end(),
                     [](const PredictedLink& a, const PredictedLink& b) {
                       if (a.distance != b.distance) {
                         return a.distance < b.distance;
                       }
                       return a.question_id < b.question_id;
                     });
    if (valid.size() > options.max_links) valid.resize(options.max_links);
    out.links.insert(out.links.end(), valid.begin(), valid.end());
    out.answers.push_back(std::move(answer));
  }
  return out;
}

namespace {

LinkPrediction DecodeForm(const Form& form, Scorer& scorer,
                          const CorpusDecodeOptions& options) {
  std::vector<CandidateSet> sets = AllCandidates(form, options.candidates);
  std::vector<PairExample> pairs = BuildInferencePairs(form, sets);
  std::vector<PairScore> scores = ScorePairs(scorer, pairs);
  return Decode(form.name(), sets, scores, options.decode);
}

}  // namespace

CorpusDecodeResult DecodeCorpus(std::span<const Form> forms, Scorer& scorer,
                                const CorpusDecodeOptions& options) {
  options.candidates.Validate();
  options.decode.Validate();

  std::vector<std::optional<LinkPrediction>> results(forms.size());
  std::vector<std::optional<FileError>> failures(forms.size());
  std::vector<std::exception_ptr> exceptions(forms.size());

  auto run = [&](std::size_t i) {
    try {
      results[i] = DecodeForm(forms[i], scorer, options);
    } catch (const Error& e) {
      failures[i] = FileError{forms[i].name(), e.kind(), e.what()};
      exceptions[i] = std::current_exception();
    }
  };

  if (scorer.concurrent() && options.jobs > 1) {
    ParallelFor(forms.size(), options.jobs, run);
  } else {
    for (std::size_t i = 0; i < forms.size(); ++i) {
      run(i);
      if (failures[i] && !options.keep_going) break;
    }
  }

  CorpusDecodeResult out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (failures[i]) {
      if (!options.keep_going) std::rethrow_exception(exceptions[i]);
      out.errors.push_back(std::move(*failures[i]));
    } else if (results[i]) {
      out.predictions.push_back(std::move(*results[i]));
    }
  }
  return out;
}

nlohmann::ordered_json PredictionToJson(const LinkPrediction& prediction) {
  using nlohmann::ordered_json;
  ordered_json links = ordered_json::array();
  for (const PredictedLink& l : prediction.links) {
    links.push_back({{"qid", l.question_id},
                     {"aid", l.answer_id},
                     {"score", l.score},
                     {"distance", l.distance}});
  }
  ordered_json answers = ordered_json::array();
  for (const AnswerCandidates& a : prediction.answers) {
    ordered_json candidates = ordered_json::array();
    for (const ScoredCandidate& c : a.candidates) {
      candidates.push_back(
          {{"qid", c.question_id}, {"score", c.score}, {"distance", c.distance}});
    }
    answers.push_back({{"aid", a.answer_id}, {"candidates", candidates}});
  }
  ordered_json obj;
  obj["form"] = prediction.form_name;
  obj["links"] = std::move(links);
  obj["answers"] = std::move(answers);
  return obj;
}

namespace {

double Real(const nlohmann::json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    throw SchemaViolation(std::string("predictions: '") + key +
                          "' must be a number");
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw SchemaViolation(std::string("predictions: non-finite '") + key + "'");
  }
  return d;
}

EntityId Id(const nlohmann::json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw SchemaViolation(std::string("predictions: '") + key +
                          "' must be an integer");
  }
  return v.get<EntityId>();
}

}  // namespace

LinkPrediction PredictionFromJson(const nlohmann::json& obj) {
  try {
    LinkPrediction p;
    p.form_name = obj.at("form").get<std::string>();
    for (const auto& l : obj.at("links")) {
      p.links.push_back(
          {Id(l, "qid"), Id(l, "aid"), Real(l, "score"), Real(l, "distance")});
    }
    if (auto it = obj.find("answers"); it != obj.end()) {
      for (const auto& a : *it) {
        AnswerCandidates answer{Id(a, "aid"), {}};
        for (const auto& c : a.at("candidates")) {
          answer.candidates.push_back(
              {Id(c, "qid"), Real(c, "score"), Real(c, "distance")});
        }
        p.answers.push_back(std::move(answer));
      }
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation(std::string("predictions: ") + e.what());
  }
}

void WritePredictions(std::ostream& out,
                      std::span<const LinkPrediction> predictions,
                      const nlohmann::ordered_json* meta) {
  if (meta != nullptr) {
    out << nlohmann::ordered_json{{"meta", *meta}}.dump() << '\n';
  }
  for (const LinkPrediction& p : predictions) {
    out << PredictionToJson(p).dump() << '\n';
  }
}

PredictionsFile ReadPredictions(std::istream& in) {
  PredictionsFile file;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedJson("predictions line " + std::to_string(line_no) +
                              ": " + e.what(),
                          e.byte);
    }
    if (!obj.is_object()) {
      throw SchemaViolation("predictions line " + std::to_string(line_no) +
                            ": expected an object");
    }
    if (obj.contains("meta")) {
      file.meta = obj["meta"];
      continue;
    }
    file.predictions.push_back(PredictionFromJson(obj));
  }
  return file;
}

}  // namespace formlink
