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

// formlink: form entity-linking toolkit.
//
//   formlink validate DIR
//   formlink pairs --data DIR --out pairs.jsonl
//   formlink train-baseline --data DIR --out model.json
//   formlink link --data DIR --scorer baseline:model.json --out pred.jsonl
//   formlink evaluate --predictions pred.jsonl --gold DIR --out report.json
//   formlink candidate-recall --data DIR
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "formlink/baseline.h"
#include "formlink/errors.h"
#include "formlink/external_scorer.h"
#include "formlink/fixtures.h"
#include "formlink/funsd.h"
#include "formlink/geometry.h"
#include "formlink/linking.h"
#include "formlink/metrics.h"
#include "formlink/pairs.h"
#include "formlink/parallel.h"
#include "formlink/scoring.h"
#include "json.hpp"

namespace formlink {
namespace {

using nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

// Every flag of every subcommand; echoed in full into each artifact.
struct RunConfig {
  std::string command;
  std::string data_dir;
  bool fixtures = false;
  std::string split;
  std::string pairs_path;
  std::string predictions_path;
  std::string k = "10";
  std::string radius = "inf";
  std::string distance = "center";
  std::string scorer;
  double threshold = 0.5;
  std::size_t max_links = 1;
  std::string negatives = "all";
  bool unlabeled = false;
  std::uint64_t seed = 0;
  int epochs = 10;
  double learning_rate = 0.5;
  int hash_bits = 18;
  bool no_balance = false;
  bool no_geometry = false;
  std::size_t batch_size = 64;
  int timeout_ms = 60000;
  std::size_t jobs = 1;
  bool keep_going = false;
  std::string ks = "1,3,5,10,inf";
  std::string out;
  std::string json_out;
  bool error_json = false;

  ordered_json ToJson() const {
    return {{"command", command},
            {"data", data_dir},
            {"fixtures", fixtures},
            {"split", split},
            {"pairs", pairs_path},
            {"predictions", predictions_path},
            {"k", k},
            {"radius", radius},
            {"distance", distance},
            {"scorer", scorer},
            {"threshold", threshold},
            {"max_links", max_links},
            {"negatives", negatives},
            {"unlabeled", unlabeled},
            {"seed", seed},
            {"epochs", epochs},
            {"learning_rate", learning_rate},
            {"hash_bits", hash_bits},
            {"balance_classes", !no_balance},
            {"geometric_features", !no_geometry},
            {"batch_size", batch_size},
            {"timeout_ms", timeout_ms},
            {"jobs", jobs},
            {"keep_going", keep_going},
            {"ks", ks},
            {"out", out},
            {"json", json_out}};
  }

  ordered_json Meta() const {
    return {{"tool", "formlink"},
            {"version", FORMLINK_VERSION},
            {"config", ToJson()}};
  }
};

std::optional<std::size_t> ParseK(const std::string& text) {
  if (text == "inf" || text == "all" || text == "unbounded") return std::nullopt;
  std::size_t pos = 0;
  unsigned long long k = 0;
  try {
    k = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("k must be a positive integer or 'inf', got '" + text + "'");
  }
  if (pos != text.size() || k == 0) {
    throw ConfigError("k must be a positive integer or 'inf', got '" + text + "'");
  }
  return static_cast<std::size_t>(k);
}

double ParseRadius(const std::string& text) {
  if (text == "inf" || text == "unbounded") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t pos = 0;
  double r = 0;
  try {
    r = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("radius must be a number or 'inf', got '" + text + "'");
  }
  if (pos != text.size() || !(r >= 0)) {
    throw ConfigError("radius must be a non-negative number or 'inf'");
  }
  return r;
}

CandidateParams Candidates(const RunConfig& cfg) {
  CandidateParams params;
  params.k = ParseK(cfg.k);
  params.radius = ParseRadius(cfg.radius);
  auto mode = ParseDistanceMode(cfg.distance);
  if (!mode) throw ConfigError("distance must be 'center' or 'edge'");
  params.mode = *mode;
  params.Validate();
  return params;
}

NegativePolicy Negatives(const RunConfig& cfg) {
  auto policy = NegativePolicy::Parse(cfg.negatives);
  if (!policy) {
    throw ConfigError("negatives must be 'all' or 'balanced:R', got '" +
                      cfg.negatives + "'");
  }
  return *policy;
}

DecodeOptions Decoding(const RunConfig& cfg) {
  DecodeOptions options{cfg.threshold, cfg.max_links};
  options.Validate();
  return options;
}

std::string DescribeErrors(const std::vector<FileError>& errors) {
  std::string out;
  for (const FileError& e : errors) {
    out += "  " + e.path + ": " + e.kind + ": " + e.message + "\n";
  }
  return out;
}

// Forms of the selected split. Parse failures are fatal unless
// --keep-going, in which case they are reported and skipped.
std::vector<Form> LoadForms(const RunConfig& cfg,
                            const std::string& default_split) {
  if (cfg.fixtures) {
    SyntheticSplits splits = FixtureSplits();
    std::string split = cfg.split.empty() ? default_split : cfg.split;
    if (split == "train") return std::move(splits.train);
    if (split == "test") return std::move(splits.test);
    throw ConfigError("split must be 'train' or 'test'");
  }
  if (cfg.data_dir.empty()) throw ConfigError("--data DIR or --fixtures is required");
  CorpusLoad load = LoadCorpus(cfg.data_dir);
  if (!load.errors.empty()) {
    std::cerr << load.errors.size() << " annotation file(s) failed to parse:\n"
              << DescribeErrors(load.errors);
    // Re-parse the first failure so its typed error propagates.
    if (!cfg.keep_going) LoadForm(load.errors.front().path);
  }
  return std::move(load.forms);
}

std::vector<GoldLinkSet> Gold(const std::vector<Form>& forms) {
  std::vector<GoldLinkSet> gold;
  gold.reserve(forms.size());
  for (const Form& f : forms) gold.push_back(GoldLinks(f));
  return gold;
}

std::unique_ptr<Scorer> MakeScorer(const RunConfig& cfg,
                                   const std::vector<Form>& forms) {
  const std::string& spec = cfg.scorer;
  if (spec == "oracle") {
    std::vector<GoldLinkSet> gold = Gold(forms);
    return std::make_unique<OracleScorer>(gold);
  }
  if (spec.starts_with("baseline:")) {
    return std::make_unique<BaselineScorer>(
        BaselineModel::Load(spec.substr(std::string("baseline:").size())));
  }
  if (spec.starts_with("const:")) {
    std::string value = spec.substr(std::string("const:").size());
    try {
      return std::make_unique<ConstantScorer>(std::stod(value));
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad constant score '" + value + "'");
    }
  }
  ExternalScorerOptions options;
  options.batch_size = cfg.batch_size;
  options.timeout = std::chrono::milliseconds(cfg.timeout_ms);
  if (spec.starts_with("cmd:")) {
    return ExternalScorer::Open(spec.substr(4), options);
  }
  if (spec.starts_with("tcp://")) return ExternalScorer::Open(spec, options);
  throw ConfigError(
      "scorer must be oracle, baseline:PATH, const:X, cmd:COMMAND or "
      "tcp://HOST:PORT");
}

// "-" writes to stdout.
template <typename WriteFn>
void WriteOutput(const std::string& path, WriteFn&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  write(out);
  if (!out) throw IoError("failed writing " + path);
}

void RequireOut(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("--out is required");
}

// --- validate -------------------------------------------------------------

ordered_json StatsToJson(const CorpusStats& s, const RunConfig& cfg) {
  ordered_json labels;
  for (auto label : {EntityLabel::kQuestion, EntityLabel::kAnswer,
                     EntityLabel::kHeader, EntityLabel::kOther}) {
    labels[std::string(LabelName(label))] =
        s.label_counts[static_cast<std::size_t>(label)];
  }
  ordered_json errors = ordered_json::array();
  for (const FileError& e : s.errors) {
    errors.push_back({{"path", e.path}, {"kind", e.kind}, {"message", e.message}});
  }
  ordered_json out = cfg.Meta();
  out["files"] = s.files;
  out["entities"] = s.entities;
  out["words"] = s.words;
  out["gold_links"] = s.gold_links;
  out["discarded_links"] = s.discarded_links;
  out["labels"] = labels;
  out["answers_by_multiplicity"] = {{"0", s.answers_by_multiplicity[0]},
                                    {"1", s.answers_by_multiplicity[1]},
                                    {"2", s.answers_by_multiplicity[2]},
                                    {">2", s.answers_by_multiplicity[3]}};
  out["warnings"] = s.warnings;
  out["errors"] = errors;
  return out;
}

int CmdValidate(const RunConfig& cfg) {
  CorpusStats stats;
  if (cfg.fixtures) {
    stats = ComputeStats(LoadForms(cfg, "test"));
  } else {
    if (cfg.data_dir.empty()) throw ConfigError("a directory is required");
    stats = ValidateCorpus(cfg.data_dir);
  }
  if (!cfg.json_out.empty()) {
    WriteOutput(cfg.json_out, [&](std::ostream& out) {
      out << StatsToJson(stats, cfg).dump(2) << '\n';
    });
  }
  if (cfg.json_out != "-") {
    const auto& m = stats.answers_by_multiplicity;
    std::printf(
        "files %zu\nentities %zu\nwords %zu\nquestion->answer links %zu\n"
        "discarded links %zu\n"
        "labels: question %zu, answer %zu, header %zu, other %zu\n"
        "answers by gold multiplicity: 0:%zu 1:%zu 2:%zu >2:%zu\n"
        "warnings %zu\nerrors %zu\n",
        stats.files, stats.entities, stats.words, stats.gold_links,
        stats.discarded_links, stats.label_counts[0], stats.label_counts[1],
        stats.label_counts[2], stats.label_counts[3], m[0], m[1], m[2], m[3],
        stats.warnings.size(), stats.errors.size());
  }
  if (!stats.errors.empty()) {
    std::cerr << DescribeErrors(stats.errors);
    return kDataError;
  }
  return kOk;
}

// --- pairs / train-baseline ------------------------------------------------

std::vector<PairExample> BuildCorpusPairs(const RunConfig& cfg,
                                          const std::vector<Form>& forms,
                                          PairBuildStats& stats) {
  CandidateParams params = Candidates(cfg);
  NegativePolicy policy = Negatives(cfg);
  std::vector<std::vector<PairExample>> per_form(forms.size());
  std::vector<PairBuildStats> per_stats(forms.size());
  ParallelFor(forms.size(), cfg.jobs, [&](std::size_t i) {
    if (cfg.unlabeled) {
      std::vector<CandidateSet> sets = AllCandidates(forms[i], params);
      per_form[i] = BuildInferencePairs(forms[i], sets);
    } else {
      per_form[i] = BuildPairs(forms[i], params, policy, &per_stats[i]);
    }
  });
  std::vector<PairExample> all;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    stats += per_stats[i];
    for (PairExample& p : per_form[i]) all.push_back(std::move(p));
  }
  return all;
}

int CmdPairs(const RunConfig& cfg) {
  RequireOut(cfg);
  std::vector<Form> forms = LoadForms(cfg, "train");
  PairBuildStats stats;
  std::vector<PairExample> pairs = BuildCorpusPairs(cfg, forms, stats);
  ordered_json meta = cfg.Meta();
  WriteOutput(cfg.out, [&](std::ostream& out) { WritePairs(out, pairs, &meta); });
  std::fprintf(stderr,
               "%zu pairs from %zu forms (valid %zu, invalid %zu, "
               "gold missed by candidates %zu)\n",
               pairs.size(), forms.size(),
               stats.positives + stats.gold_missed_by_candidates,
               stats.negatives, stats.gold_missed_by_candidates);
  return kOk;
}

int CmdTrainBaseline(const RunConfig& cfg) {
  RequireOut(cfg);
  std::vector<PairExample> pairs;
  if (!cfg.pairs_path.empty()) {
    std::ifstream in(cfg.pairs_path, std::ios::binary);
    if (!in) throw IoError("cannot read " + cfg.pairs_path);
    pairs = ReadPairs(in);
  } else {
    PairBuildStats stats;
    pairs = BuildCorpusPairs(cfg, LoadForms(cfg, "train"), stats);
  }

  FeatureConfig features;
  features.hash_bits = cfg.hash_bits;
  features.geometric = !cfg.no_geometry;
  features.Validate();
  TrainOptions options;
  options.epochs = cfg.epochs;
  options.learning_rate = cfg.learning_rate;
  options.seed = cfg.seed;
  options.balance_classes = !cfg.no_balance;
  options.Validate();

  std::vector<double> losses;
  BaselineModel model = TrainBaseline(pairs, features, options, &losses);
  ordered_json blob = model.ToJson();
  blob["run"] = cfg.Meta();
  WriteOutput(cfg.out, [&](std::ostream& out) { out << blob.dump() << '\n'; });

  for (std::size_t e = 0; e < losses.size(); ++e) {
    std::fprintf(stderr, "epoch %zu  loss %.6f\n", e + 1, losses[e]);
  }
  std::fprintf(stderr, "trained on %zu pairs, training accuracy %.4f\n",
               pairs.size(), PairAccuracy(model, pairs));
  return kOk;
}

// --- link / evaluate -------------------------------------------------------

int CmdLink(const RunConfig& cfg) {
  RequireOut(cfg);
  if (cfg.scorer.empty()) throw ConfigError("--scorer is required");
  CorpusDecodeOptions options;
  options.candidates = Candidates(cfg);
  options.decode = Decoding(cfg);
  options.keep_going = cfg.keep_going;
  options.jobs = cfg.jobs;
  std::vector<Form> forms = LoadForms(cfg, "test");
  std::unique_ptr<Scorer> scorer = MakeScorer(cfg, forms);

  CorpusDecodeResult result = DecodeCorpus(forms, *scorer, options);
  ordered_json meta = cfg.Meta();
  meta["scorer"] = scorer->Describe();
  WriteOutput(cfg.out, [&](std::ostream& out) {
    WritePredictions(out, result.predictions, &meta);
  });
  std::size_t links = 0;
  for (const LinkPrediction& p : result.predictions) links += p.links.size();
  std::fprintf(stderr, "%zu links predicted over %zu forms\n", links,
               result.predictions.size());
  if (!result.errors.empty()) {
    std::cerr << result.errors.size() << " form(s) failed:\n"
              << DescribeErrors(result.errors);
    return kDataError;
  }
  return kOk;
}

int CmdEvaluate(const RunConfig& cfg) {
  if (cfg.predictions_path.empty()) throw ConfigError("--predictions is required");
  std::ifstream in(cfg.predictions_path, std::ios::binary);
  if (!in) throw IoError("cannot read " + cfg.predictions_path);
  PredictionsFile predictions = ReadPredictions(in);
  std::vector<Form> forms = LoadForms(cfg, "test");
  std::vector<GoldLinkSet> gold = Gold(forms);

  MetricsReport report = Evaluate(predictions.predictions, gold);
  ordered_json run = cfg.ToJson();
  run["predictions_meta"] = predictions.meta;
  if (!cfg.out.empty()) {
    WriteOutput(cfg.out, [&](std::ostream& out) {
      out << ReportToJson(report, run).dump(2) << '\n';
    });
  }
  if (cfg.out != "-") std::cout << FormatReport(report);
  return kOk;
}

// --- candidate-recall / fixtures --------------------------------------------

int CmdCandidateRecall(const RunConfig& cfg) {
  std::vector<Form> forms = LoadForms(cfg, "test");
  CandidateParams base = Candidates(cfg);
  ordered_json rows = ordered_json::array();
  std::stringstream list(cfg.ks);
  std::string item;
  if (cfg.out != "-") std::printf("%-8s %-10s %s\n", "k", "recall", "covered/gold");
  while (std::getline(list, item, ',')) {
    CandidateParams params = base;
    params.k = ParseK(item);
    CandidateRecall recall = MeasureCandidateRecall(forms, params);
    rows.push_back({{"k", item},
                    {"recall", recall.recall()},
                    {"covered", recall.covered},
                    {"gold_links", recall.gold_links}});
    if (cfg.out != "-") {
      std::printf("%-8s %-10.4f %zu/%zu\n", item.c_str(), recall.recall(),
                  recall.covered, recall.gold_links);
    }
  }
  if (!cfg.out.empty()) {
    ordered_json out = cfg.Meta();
    out["recall"] = rows;
    WriteOutput(cfg.out, [&](std::ostream& o) { o << out.dump(2) << '\n'; });
  }
  return kOk;
}

int CmdFixtures(const RunConfig& cfg) {
  RequireOut(cfg);
  SyntheticSplits splits = FixtureSplits();
  WriteCorpus(std::filesystem::path(cfg.out) / "train", splits.train);
  WriteCorpus(std::filesystem::path(cfg.out) / "test", splits.test);
  std::fprintf(stderr, "wrote %zu training and %zu test forms under %s\n",
               splits.train.size(), splits.test.size(), cfg.out.c_str());
  return kOk;
}

// --- option wiring -----------------------------------------------------------

void AddDataOptions(CLI::App* cmd, RunConfig& cfg, const char* env) {
  cmd->add_option("--data", cfg.data_dir, "Directory of annotation files")
      ->envname(env);
  cmd->add_flag("--fixtures", cfg.fixtures, "Use the bundled synthetic forms");
  cmd->add_option("--split", cfg.split, "Fixture split: train or test");
  cmd->add_flag("--keep-going", cfg.keep_going,
                "Skip files or forms that fail instead of stopping");
  cmd->add_option("--jobs", cfg.jobs, "Forms processed in parallel")
      ->check(CLI::PositiveNumber);
}

void AddCandidateOptions(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--k", cfg.k, "Candidate questions per answer, or 'inf'")
      ->capture_default_str();
  cmd->add_option("--radius", cfg.radius, "Candidate radius in pixels, or 'inf'")
      ->capture_default_str();
  cmd->add_option("--distance", cfg.distance, "center or edge")
      ->capture_default_str();
}

void AddTrainingOptions(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--negatives", cfg.negatives, "all or balanced:R")
      ->capture_default_str();
}

int Report(const Error& e, bool as_json, int code) {
  if (as_json) {
    ordered_json err = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
  } else {
    std::cerr << "formlink: " << e.kind() << ": " << e.what() << '\n';
  }
  return code;
}

int Main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Form entity linking: candidates, pair scoring, decoding, metrics"};
  app.set_version_flag("--version", FORMLINK_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--error-json", cfg.error_json,
               "Print errors as JSON on stderr");

  auto* validate = app.add_subcommand("validate", "Parse and summarize a corpus");
  validate->add_option("dir", cfg.data_dir, "Directory of annotation files")
      ->envname("FORMLINK_TEST_DIR");
  validate->add_flag("--fixtures", cfg.fixtures, "Use the bundled synthetic forms");
  validate->add_option("--split", cfg.split, "Fixture split: train or test");
  validate->add_option("--json", cfg.json_out, "Write statistics as JSON ('-' for stdout)");

  auto* pairs = app.add_subcommand("pairs", "Build question/answer pair files");
  AddDataOptions(pairs, cfg, "FORMLINK_TRAIN_DIR");
  AddCandidateOptions(pairs, cfg);
  AddTrainingOptions(pairs, cfg);
  pairs->add_flag("--unlabeled", cfg.unlabeled, "Inference pairs, no labels");
  pairs->add_option("--out", cfg.out, "Output pairs file ('-' for stdout)");

  auto* train = app.add_subcommand("train-baseline", "Train the baseline pair scorer");
  AddDataOptions(train, cfg, "FORMLINK_TRAIN_DIR");
  AddCandidateOptions(train, cfg);
  AddTrainingOptions(train, cfg);
  train->add_option("--pairs", cfg.pairs_path, "Train from a labeled pairs file");
  train->add_option("--epochs", cfg.epochs)->capture_default_str();
  train->add_option("--lr", cfg.learning_rate, "Learning rate")->capture_default_str();
  train->add_option("--seed", cfg.seed)->capture_default_str();
  train->add_option("--hash-bits", cfg.hash_bits)->capture_default_str();
  train->add_flag("--no-balance", cfg.no_balance, "Unweighted log-loss");
  train->add_flag("--no-geometry", cfg.no_geometry, "Text features only");
  train->add_option("--out", cfg.out, "Output model file");

  auto* link = app.add_subcommand("link", "Predict links for a corpus");
  AddDataOptions(link, cfg, "FORMLINK_TEST_DIR");
  AddCandidateOptions(link, cfg);
  link->add_option("--scorer", cfg.scorer,
                   "oracle | baseline:PATH | const:X | cmd:COMMAND | tcp://HOST:PORT");
  link->add_option("--threshold", cfg.threshold)->capture_default_str();
  link->add_option("--max-links", cfg.max_links)->capture_default_str();
  link->add_option("--batch-size", cfg.batch_size, "External scorer batch size")
      ->capture_default_str();
  link->add_option("--timeout-ms", cfg.timeout_ms, "External scorer batch timeout")
      ->capture_default_str();
  link->add_option("--out", cfg.out, "Output predictions file ('-' for stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Score a predictions file");
  evaluate->add_option("--predictions", cfg.predictions_path, "Predictions file");
  evaluate->add_option("--gold", cfg.data_dir, "Directory of gold annotations")
      ->envname("FORMLINK_TEST_DIR");
  evaluate->add_flag("--fixtures", cfg.fixtures, "Gold from the synthetic forms");
  evaluate->add_option("--split", cfg.split, "Fixture split: train or test");
  evaluate->add_option("--out", cfg.out, "Write the JSON report ('-' for stdout)");

  auto* recall = app.add_subcommand("candidate-recall",
                                    "Gold-question coverage of candidate sets");
  AddDataOptions(recall, cfg, "FORMLINK_TEST_DIR");
  AddCandidateOptions(recall, cfg);
  recall->add_option("--ks", cfg.ks, "Comma-separated k values")->capture_default_str();
  recall->add_option("--out", cfg.out, "Write JSON ('-' for stdout)");

  auto* fixtures = app.add_subcommand("fixtures", "Write the synthetic corpus to disk");
  fixtures->add_option("--out", cfg.out, "Output directory");

  bool error_json = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--error-json") error_json = true;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "validate") return CmdValidate(cfg);
    if (cfg.command == "pairs") return CmdPairs(cfg);
    if (cfg.command == "train-baseline") return CmdTrainBaseline(cfg);
    if (cfg.command == "link") return CmdLink(cfg);
    if (cfg.command == "evaluate") return CmdEvaluate(cfg);
    if (cfg.command == "candidate-recall") return CmdCandidateRecall(cfg);
    if (cfg.command == "fixtures") return CmdFixtures(cfg);
  } catch (const ConfigError& e) {
    return Report(e, error_json, kUsageError);
  } catch (const Error& e) {
    return Report(e, error_json, kDataError);
  } catch (const std::exception& e) {
    return Report(Error(e.what()), error_json, kDataError);
  }
  return kUsageError;
}

}  // namespace
}  // namespace formlink

int main(int argc, char** argv) { return formlink::Main(argc, argv); }
