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

#include "formlink/baseline.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "formlink/errors.h"

namespace formlink {

namespace {

constexpr double kDistanceScale = 1000.0;
constexpr double kDistanceCap = 2.0;
constexpr std::size_t kShapeLimit = 16;

std::uint64_t Fnv1a(std::string_view prefix, std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::string_view part : {prefix, text}) {
    for (unsigned char c : part) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

std::string AsciiLower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// Splits UTF-8 into code points (as byte strings).
std::vector<std::string_view> CodePoints(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i + 1;
    while (j < text.size() &&
           (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) {
      ++j;
    }
    out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : AsciiLower(text)) {
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      current += c;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

// Adds an L2-normalized block of hashed string features.
void AddBlock(const std::vector<std::string>& keys, std::string_view prefix,
              std::uint64_t mask, std::vector<Feature>& out) {
  if (keys.empty()) return;
  double value = 1.0 / std::sqrt(static_cast<double>(keys.size()));
  for (const std::string& key : keys) {
    out.push_back({static_cast<std::uint32_t>(Fnv1a(prefix, key) & mask),
                   value});
  }
}

std::vector<std::string> Ngrams(std::string_view text,
                                const std::vector<int>& sizes) {
  std::string marked = "^" + AsciiLower(text) + "$";
  std::vector<std::string_view> cps = CodePoints(marked);
  std::vector<std::string> grams;
  for (int n : sizes) {
    auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= cps.size(); ++i) {
      std::string gram;
      for (std::size_t j = i; j < i + len; ++j) gram += cps[j];
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Target(const PairExample& ex) {
  return ex.label == PairLabel::kValid ? 1.0 : 0.0;
}

void CheckLabeled(std::span<const PairExample> examples) {
  std::size_t valid = 0;
  std::size_t invalid = 0;
  for (const PairExample& ex : examples) {
    if (ex.label == PairLabel::kValid) ++valid;
    if (ex.label == PairLabel::kInvalid) ++invalid;
    if (ex.label == PairLabel::kUnlabeled) {
      throw DegenerateDataset("training pairs must be labeled");
    }
  }
  if (valid == 0 || invalid == 0) {
    throw DegenerateDataset("training pairs need both labels (valid=" +
                            std::to_string(valid) +
                            ", invalid=" + std::to_string(invalid) + ")");
  }
}

// Uniform draw in [0, bound) from a 64-bit engine, independent of the
// standard library's distribution implementations.
std::size_t Draw(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace

void FeatureConfig::Validate() const {
  if (hash_bits < 1 || hash_bits > 30) {
    throw ConfigError("hash_bits must lie in [1, 30]");
  }
  if (ngram_sizes.empty()) throw ConfigError("at least one n-gram size");
  for (int n : ngram_sizes) {
    if (n < 1 || n > 8) throw ConfigError("n-gram sizes must lie in [1, 8]");
  }
}

void TrainOptions::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (!std::isfinite(learning_rate) || learning_rate <= 0) {
    throw ConfigError("learning rate must be positive");
  }
}

std::string TextShape(std::string_view text) {
  std::string shape;
  for (unsigned char c : text) {
    char s;
    if (c >= 'A' && c <= 'Z') {
      s = 'A';
    } else if (c >= 'a' && c <= 'z') {
      s = 'a';
    } else if (c >= '0' && c <= '9') {
      s = '9';
    } else if (c >= 0x80) {
      s = 'u';
    } else {
      s = static_cast<char>(c);
    }
    if (shape.empty() || shape.back() != s) shape += s;
    if (shape.size() >= kShapeLimit) break;
  }
  return shape;
}

std::vector<Feature> ExtractFeatures(const FeatureConfig& config,
                                     const PairExample& example) {
  const std::uint64_t mask = config.hashed_dim() - 1;
  std::vector<Feature> features;
  AddBlock(Ngrams(example.question_text, config.ngram_sizes), "q:", mask,
           features);
  AddBlock(Ngrams(example.answer_text, config.ngram_sizes), "a:", mask,
           features);
  if (config.cross_features) {
    std::vector<std::string> crosses;
    std::string shape = TextShape(example.answer_text);
    for (const std::string& token : WordTokens(example.question_text)) {
      crosses.push_back(token + "|" + shape);
    }
    AddBlock(crosses, "x:", mask, features);
  }

  std::sort(features.begin(), features.end(),
            [](const Feature& a, const Feature& b) { return a.index < b.index; });
  std::vector<Feature> merged;
  for (const Feature& f : features) {
    if (!merged.empty() && merged.back().index == f.index) {
      merged.back().value += f.value;
    } else {
      merged.push_back(f);
    }
  }
  if (config.geometric) {
    auto base = static_cast<std::uint32_t>(config.hashed_dim());
    merged.push_back(
        {base, std::min(example.distance / kDistanceScale, kDistanceCap)});
    merged.push_back({base + 1, example.same_row ? 1.0 : 0.0});
  }
  return merged;
}

BaselineModel::BaselineModel(FeatureConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  weights_.assign(config_.dim(), 0.0);
}

double BaselineModel::Logit(std::span<const Feature> features) const {
  double z = bias_;
  for (const Feature& f : features) z += weights_[f.index] * f.value;
  return z;
}

double BaselineModel::Logit(const PairExample& example) const {
  return Logit(ExtractFeatures(config_, example));
}

double BaselineModel::Predict(const PairExample& example) const {
  return Sigmoid(Logit(example));
}

nlohmann::ordered_json BaselineModel::ToJson() const {
  nlohmann::ordered_json blob;
  blob["format"] = "formlink-baseline";
  blob["version"] = 1;
  blob["config"] = {{"ngram_sizes", config_.ngram_sizes},
                    {"hash_bits", config_.hash_bits},
                    {"geometric", config_.geometric},
                    {"cross_features", config_.cross_features}};
  blob["training"] = {{"epochs", training_.epochs},
                      {"learning_rate", training_.learning_rate},
                      {"seed", training_.seed},
                      {"balance_classes", training_.balance_classes}};
  blob["bias"] = bias_;
  nlohmann::ordered_json weights = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) weights.push_back({i, weights_[i]});
  }
  blob["weights"] = std::move(weights);
  return blob;
}

BaselineModel BaselineModel::FromJson(const nlohmann::json& blob) {
  try {
    if (blob.at("format") != "formlink-baseline") {
      throw SchemaViolation("model: not a formlink baseline model");
    }
    if (blob.at("version") != 1) {
      throw SchemaViolation("model: unsupported version " +
                            blob.at("version").dump());
    }
    const auto& c = blob.at("config");
    FeatureConfig config;
    config.ngram_sizes = c.at("ngram_sizes").get<std::vector<int>>();
    config.hash_bits = c.at("hash_bits").get<int>();
    config.geometric = c.at("geometric").get<bool>();
    config.cross_features = c.at("cross_features").get<bool>();
    try {
      config.Validate();
    } catch (const ConfigError& e) {
      throw SchemaViolation(std::string("model: ") + e.what());
    }

    BaselineModel model(config);
    const auto& t = blob.at("training");
    TrainOptions training;
    training.epochs = t.at("epochs").get<int>();
    training.learning_rate = t.at("learning_rate").get<double>();
    training.seed = t.at("seed").get<std::uint64_t>();
    training.balance_classes = t.at("balance_classes").get<bool>();
    model.set_training(training);
    model.set_bias(blob.at("bias").get<double>());
    if (!std::isfinite(model.bias())) {
      throw SchemaViolation("model: non-finite bias");
    }
    for (const auto& entry : blob.at("weights")) {
      auto index = entry.at(0).get<std::size_t>();
      double value = entry.at(1).get<double>();
      if (index >= model.weights().size() || !std::isfinite(value)) {
        throw SchemaViolation("model: bad weight entry " + entry.dump());
      }
      model.weights()[index] = value;
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaViolation(std::string("model: ") + e.what());
  }
}

void BaselineModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << ToJson().dump() << '\n';
}

BaselineModel BaselineModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json blob;
  try {
    blob = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedJson(path.string() + ": " + e.what(), e.byte);
  }
  return FromJson(blob);
}

std::vector<double> ClassWeights(std::span<const PairExample> examples,
                                 bool balance_classes) {
  std::vector<double> weights(examples.size(), 1.0);
  if (!balance_classes) return weights;
  double positives = 0;
  for (const PairExample& ex : examples) positives += Target(ex);
  double negatives = static_cast<double>(examples.size()) - positives;
  if (positives == 0 || negatives == 0) return weights;
  double n = static_cast<double>(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    weights[i] = Target(examples[i]) == 1.0 ? n / (2 * positives)
                                            : n / (2 * negatives);
  }
  return weights;
}

double LogLoss(const BaselineModel& model,
               std::span<const PairExample> examples,
               std::span<const double> weights) {
  double total = 0;
  double weight_sum = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    double w = weights.empty() ? 1.0 : weights[i];
    double z = model.Logit(examples[i]);
    total += w * (Softplus(z) - Target(examples[i]) * z);
    weight_sum += w;
  }
  return weight_sum == 0 ? 0 : total / weight_sum;
}

LossGradient LogLossGradient(const BaselineModel& model,
                             std::span<const PairExample> examples,
                             std::span<const double> weights) {
  LossGradient grad;
  grad.weights.assign(model.config().dim(), 0.0);
  double weight_sum = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    double w = weights.empty() ? 1.0 : weights[i];
    std::vector<Feature> features = ExtractFeatures(model.config(), examples[i]);
    double residual = w * (Sigmoid(model.Logit(features)) - Target(examples[i]));
    for (const Feature& f : features) grad.weights[f.index] += residual * f.value;
    grad.bias += residual;
    weight_sum += w;
  }
  if (weight_sum > 0) {
    for (double& g : grad.weights) g /= weight_sum;
    grad.bias /= weight_sum;
  }
  return grad;
}

BaselineModel TrainBaseline(std::span<const PairExample> examples,
                            const FeatureConfig& config,
                            const TrainOptions& options,
                            std::vector<double>* epoch_losses) {
  options.Validate();
  CheckLabeled(examples);

  BaselineModel model(config);
  model.set_training(options);

  std::vector<std::vector<Feature>> features;
  features.reserve(examples.size());
  for (const PairExample& ex : examples) {
    features.push_back(ExtractFeatures(config, ex));
  }
  std::vector<double> weights = ClassWeights(examples, options.balance_classes);

  std::mt19937_64 rng(options.seed);
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double>& w = model.weights();
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[Draw(rng, i)]);
    }
    double rate = options.learning_rate / std::sqrt(1.0 + epoch);
    for (std::size_t idx : order) {
      double p = Sigmoid(model.Logit(features[idx]));
      double step = rate * weights[idx] * (p - Target(examples[idx]));
      for (const Feature& f : features[idx]) w[f.index] -= step * f.value;
      model.set_bias(model.bias() - step);
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(LogLoss(model, examples, weights));
    }
  }
  return model;
}

double PairAccuracy(const BaselineModel& model,
                    std::span<const PairExample> examples, double threshold) {
  std::size_t labeled = 0;
  std::size_t correct = 0;
  for (const PairExample& ex : examples) {
    if (ex.label == PairLabel::kUnlabeled) continue;
    ++labeled;
    bool predicted = model.Predict(ex) >= threshold;
    if (predicted == (ex.label == PairLabel::kValid)) ++correct;
  }
  return labeled == 0 ? 0 : static_cast<double>(correct) /
                                static_cast<double>(labeled);
}

std::vector<double> BaselineScorer::Score(
    std::span<const PairExample> examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const PairExample& ex : examples) out.push_back(model_.Predict(ex));
  return out;
}

}  // namespace formlink
