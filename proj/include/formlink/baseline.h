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

// Logistic-regression pair classifier over hashed character n-grams.
//
// Features of a pair (all hashed into 2^hash_bits slots with FNV-1a):
//   q:<ngram>      character n-grams of the lower-cased question text
//   a:<ngram>      character n-grams of the lower-cased answer text
//   x:<tok>|<shp>  question word x answer shape, e.g. "date|9/9/9"
// Each block is L2-normalized. With `geometric` set, two dense features
// follow the hashed slots: min(distance / 1000, 2) and the same-row flag.
//
// Model file (JSON):
//   {"format": "formlink-baseline", "version": 1,
//    "config": {"ngram_sizes": [2, 3], "hash_bits": 18, "geometric": true,
//               "cross_features": true},
//    "training": {...echo of TrainOptions...},
//    "bias": float, "weights": [[index, value], ...]}   // non-zero only

#ifndef FORMLINK_BASELINE_H_
#define FORMLINK_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "formlink/pairs.h"
#include "formlink/scoring.h"
#include "json.hpp"

namespace formlink {

struct FeatureConfig {
  std::vector<int> ngram_sizes = {2, 3};
  int hash_bits = 18;
  bool geometric = true;
  bool cross_features = true;

  std::size_t hashed_dim() const { return std::size_t{1} << hash_bits; }
  // Hashed slots plus the dense geometric slots.
  std::size_t dim() const { return hashed_dim() + (geometric ? 2 : 0); }

  void Validate() const;
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

struct Feature {
  std::uint32_t index = 0;
  double value = 0;
};

// Sorted by index, duplicates merged.
std::vector<Feature> ExtractFeatures(const FeatureConfig& config,
                                     const PairExample& example);

// Character-class signature: A upper, a lower, 9 digit, repeats collapsed.
std::string TextShape(std::string_view text);

struct TrainOptions {
  int epochs = 10;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
  // Reweights the log-loss so both classes carry equal total weight.
  bool balance_classes = true;

  void Validate() const;
  friend bool operator==(const TrainOptions&, const TrainOptions&) = default;
};

class BaselineModel {
 public:
  BaselineModel() = default;
  explicit BaselineModel(FeatureConfig config);

  const FeatureConfig& config() const { return config_; }
  const TrainOptions& training() const { return training_; }
  void set_training(const TrainOptions& t) { training_ = t; }

  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  void set_bias(double b) { bias_ = b; }

  double Logit(std::span<const Feature> features) const;
  double Logit(const PairExample& example) const;
  // Positive-class probability, in [0, 1].
  double Predict(const PairExample& example) const;

  nlohmann::ordered_json ToJson() const;
  // Throws SchemaViolation on an unsupported or inconsistent blob.
  static BaselineModel FromJson(const nlohmann::json& blob);

  void Save(const std::filesystem::path& path) const;
  static BaselineModel Load(const std::filesystem::path& path);

  friend bool operator==(const BaselineModel&, const BaselineModel&) = default;

 private:
  FeatureConfig config_;
  TrainOptions training_;
  std::vector<double> weights_;
  double bias_ = 0;
};

// Per-example weights of the log-loss; all 1.0 unless balance_classes.
std::vector<double> ClassWeights(std::span<const PairExample> examples,
                                 bool balance_classes);

// Weighted mean log-loss. `weights` may be empty (all 1.0).
double LogLoss(const BaselineModel& model,
               std::span<const PairExample> examples,
               std::span<const double> weights = {});

struct LossGradient {
  std::vector<double> weights;  // dense, model.config().dim() entries
  double bias = 0;
};

// Analytic gradient of LogLoss with respect to weights and bias.
LossGradient LogLossGradient(const BaselineModel& model,
                             std::span<const PairExample> examples,
                             std::span<const double> weights = {});

// SGD on the (optionally class-balanced) log-loss. The visiting order is
// reshuffled each epoch from `options.seed`, so identical inputs give a
// bit-identical model. Throws DegenerateDataset unless both labels occur.
// `epoch_losses`, when given, receives the training loss after each epoch.
BaselineModel TrainBaseline(std::span<const PairExample> examples,
                            const FeatureConfig& config,
                            const TrainOptions& options,
                            std::vector<double>* epoch_losses = nullptr);

// Fraction of labeled examples whose thresholded prediction matches.
double PairAccuracy(const BaselineModel& model,
                    std::span<const PairExample> examples,
                    double threshold = 0.5);

class BaselineScorer : public Scorer {
 public:
  explicit BaselineScorer(BaselineModel model) : model_(std::move(model)) {}

  std::vector<double> Score(std::span<const PairExample> examples) override;
  std::string Describe() const override { return "baseline"; }

  const BaselineModel& model() const { return model_; }

 private:
  BaselineModel model_;
};

}  // namespace formlink

#endif  // FORMLINK_BASELINE_H_
