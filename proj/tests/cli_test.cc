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

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "formlink/linking.h"
#include "formlink/pairs.h"
#include "json.hpp"
#include "test_util.h"

namespace formlink {
namespace {

using testing::DataPath;
using testing::ReadFile;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::TempDir("cli"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  Result Run(const std::string& args) const { return RunIn(dir_, args); }

  // Runs from `cwd`, so relative output paths resolve there.
  Result RunIn(const std::filesystem::path& cwd, const std::string& args) const {
    std::string err_path = Path("stderr.txt");
    std::string cmd = "cd '" + cwd.string() + "' && '" + FORMLINK_CLI + "' " + args +
                      " 2>'" + err_path + "'";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = ReadFile(err_path);
    return r;
  }

  std::filesystem::path dir_;
};

std::string Quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

TEST_F(CliTest, ValidateBundledCorpus) {
  Result r = Run("validate " + Quote(DataPath("corpus")) + " --json " + Path("s.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("files 3"), std::string::npos) << r.out;
  auto stats = nlohmann::json::parse(ReadFile(Path("s.json")));
  EXPECT_EQ(stats["files"], 3);
  EXPECT_EQ(stats["gold_links"], 3);
  EXPECT_EQ(stats["discarded_links"], 1);
  EXPECT_EQ(stats["config"]["command"], "validate");
  EXPECT_EQ(stats["version"], FORMLINK_VERSION);
}

TEST_F(CliTest, ValidateEmptyDirectory) {
  std::filesystem::create_directories(dir_ / "empty");
  Result r = Run("validate " + Quote(dir_ / "empty"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("files 0"), std::string::npos);
}

TEST_F(CliTest, ValidateMalformedFile) {
  Result r = Run("validate " + Quote(DataPath("bad")));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("broken.json"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("MalformedJson"), std::string::npos) << r.err;
}

TEST_F(CliTest, PairsHasOneValidLinePerGoldLink) {
  Result r = Run("pairs --data " + Quote(DataPath("corpus")) +
                 " --k inf --negatives all --out " + Path("p.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(Path("p.jsonl"));
  auto pairs = ReadPairs(in);
  int valid = 0;
  for (const auto& p : pairs) valid += p.label == PairLabel::kValid;
  EXPECT_EQ(valid, 3);
  // Every question of a form pairs with every answer of that form.
  EXPECT_EQ(pairs.size(), 2u * 1 + 2u * 2 + 0u);

  std::string first = ReadFile(Path("p.jsonl"));
  auto meta = nlohmann::json::parse(first.substr(0, first.find('\n')));
  EXPECT_EQ(meta["meta"]["config"]["k"], "inf");
  EXPECT_EQ(meta["meta"]["config"]["negatives"], "all");
  EXPECT_EQ(meta["meta"]["tool"], "formlink");
}

TEST_F(CliTest, PairsRerunIsByteIdentical) {
  std::string args = "pairs --fixtures --negatives balanced:2 --jobs 3 --out p.jsonl";
  std::filesystem::create_directories(dir_ / "r1");
  std::filesystem::create_directories(dir_ / "r2");
  ASSERT_EQ(RunIn(dir_ / "r1", args).code, 0);
  ASSERT_EQ(RunIn(dir_ / "r2", args).code, 0);
  std::string a = ReadFile(dir_ / "r1" / "p.jsonl");
  EXPECT_GT(a.size(), 1000u);
  EXPECT_EQ(a, ReadFile(dir_ / "r2" / "p.jsonl"));
}

TEST_F(CliTest, UnknownLabelIsDataError) {
  std::filesystem::create_directories(dir_ / "in");
  std::filesystem::copy_file(DataPath("unknown_label.json"), dir_ / "in" / "x.json");
  Result r = Run("pairs --data " + Quote(dir_ / "in") + " --out " + Path("p.jsonl") +
                 " --error-json");
  EXPECT_EQ(r.code, 1);
  auto err = nlohmann::json::parse(r.err.substr(r.err.find("{\"error\"")));
  EXPECT_EQ(err["error"]["kind"], "SchemaViolation") << r.err;
}

TEST_F(CliTest, OracleRunReportsPerfectF1) {
  ASSERT_EQ(Run("link --fixtures --scorer oracle --k inf --max-links 2 --out " +
                Path("pred.jsonl"))
                .code,
            0);
  Result r = Run("evaluate --fixtures --predictions " + Path("pred.jsonl") +
                 " --out " + Path("report.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto report = nlohmann::json::parse(ReadFile(Path("report.json")));
  EXPECT_EQ(report["f1"], 1.0);
  EXPECT_EQ(report["map"], 1.0);
  EXPECT_EQ(report["mrank"], 0.0);
  EXPECT_EQ(report["config"]["predictions_meta"]["config"]["scorer"], "oracle");
  EXPECT_EQ(report["config"]["predictions_meta"]["config"]["max_links"], 2);
  EXPECT_NE(r.out.find("F1         1.0000"), std::string::npos) << r.out;
}

TEST_F(CliTest, ThresholdOutOfRangeIsUsageError) {
  Result r = Run("link --fixtures --scorer oracle --threshold 1.1 --out " +
                 Path("x.jsonl") + " --error-json");
  EXPECT_EQ(r.code, 2);
  auto err = nlohmann::json::parse(r.err);
  EXPECT_EQ(err["error"]["kind"], "ConfigError");
  EXPECT_FALSE(std::filesystem::exists(Path("x.jsonl")));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Run("").code, 2);
  EXPECT_EQ(Run("frobnicate").code, 2);
  EXPECT_EQ(Run("link --fixtures --out x --no-such-flag").code, 2);
  EXPECT_EQ(Run("link --fixtures --scorer bogus --out " + Path("x")).code, 2);
  EXPECT_EQ(Run("pairs --fixtures --k zero --out " + Path("x")).code, 2);
  EXPECT_EQ(Run("pairs --fixtures --negatives some --out " + Path("x")).code, 2);
  EXPECT_EQ(Run("pairs --fixtures").code, 2);
  EXPECT_EQ(Run("--help").code, 0);
  EXPECT_EQ(Run("--version").out, std::string(FORMLINK_VERSION) + "\n");
}

TEST_F(CliTest, ExternalEchoScorerPipeline) {
  std::string scorer = std::string("cmd:'") + FORMLINK_SCORER_DOUBLE + "' echo";
  Result r = Run("link --fixtures --scorer \"" + scorer + "\" --batch-size 16 --out " +
                 Path("pred.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(Path("pred.jsonl"));
  PredictionsFile file = ReadPredictions(in);
  std::size_t scored = 0;
  for (const auto& p : file.predictions) {
    for (const auto& a : p.answers) {
      for (const auto& c : a.candidates) {
        EXPECT_EQ(c.score, 0.5);
        ++scored;
      }
    }
  }
  EXPECT_GT(scored, 100u);
  EXPECT_EQ(Run("evaluate --fixtures --predictions " + Path("pred.jsonl")).code, 0);
}

TEST_F(CliTest, ExternalScorerFailureIsDataError) {
  std::string scorer = std::string("cmd:'") + FORMLINK_SCORER_DOUBLE + "' crash";
  Result r = Run("link --fixtures --scorer \"" + scorer + "\" --out " + Path("p.jsonl"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("model weights not found"), std::string::npos) << r.err;
}

TEST_F(CliTest, TrainLinkEvaluateIsDeterministic) {
  auto run_all = [&](const std::string& tag) {
    EXPECT_EQ(Run("train-baseline --fixtures --epochs 3 --hash-bits 14 --out " +
                  Path(tag + ".model"))
                  .code,
              0);
    EXPECT_EQ(Run("link --fixtures --jobs 4 --scorer baseline:" + Path(tag + ".model") +
                  " --out " + Path(tag + ".pred"))
                  .code,
              0);
    EXPECT_EQ(Run("evaluate --fixtures --predictions " + Path(tag + ".pred") +
                  " --out " + Path(tag + ".report"))
                  .code,
              0);
  };
  run_all("a");
  run_all("b");
  auto strip = [&](std::string text, const std::string& tag) {
    // Output paths are echoed into the artifacts; neutralize them.
    std::string path = Path(tag + ".");
    for (std::size_t p; (p = text.find(path)) != std::string::npos;) {
      text.replace(p, path.size(), "X.");
    }
    return text;
  };
  for (const char* ext : {".model", ".pred", ".report"}) {
    EXPECT_EQ(strip(ReadFile(Path(std::string("a") + ext)), "a"),
              strip(ReadFile(Path(std::string("b") + ext)), "b"))
        << ext;
  }
  auto model = nlohmann::json::parse(ReadFile(Path("a.model")));
  EXPECT_EQ(model["run"]["config"]["epochs"], 3);
  EXPECT_EQ(model["config"]["hash_bits"], 14);
}

TEST_F(CliTest, TrainFromPairsFile) {
  ASSERT_EQ(Run("pairs --fixtures --out " + Path("p.jsonl")).code, 0);
  Result r = Run("train-baseline --pairs " + Path("p.jsonl") + " --epochs 2 --out " +
                 Path("m.json"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("training accuracy"), std::string::npos);
}

TEST_F(CliTest, CandidateRecallTable) {
  Result r = Run("candidate-recall --fixtures --out " + Path("r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  auto out = nlohmann::json::parse(ReadFile(Path("r.json")));
  ASSERT_EQ(out["recall"].size(), 5u);
  EXPECT_EQ(out["recall"][4]["k"], "inf");
  EXPECT_EQ(out["recall"][4]["recall"], 1.0);
}

TEST_F(CliTest, EnvironmentSuppliesDefaultDataDir) {
  Result r = Run("candidate-recall --ks 1,inf");
  EXPECT_EQ(r.code, 2);  // no data and no fixtures
  std::string cmd = "FORMLINK_TEST_DIR=" + Quote(DataPath("corpus")) + " '" +
                    FORMLINK_CLI + "' candidate-recall --ks inf";
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[512] = {};
  std::size_t n = fread(buf, 1, sizeof buf - 1, pipe);
  EXPECT_EQ(pclose(pipe), 0);
  EXPECT_NE(std::string(buf, n).find("3/3"), std::string::npos) << buf;
}

TEST_F(CliTest, FixturesCommandWritesCorpus) {
  ASSERT_EQ(Run("fixtures --out " + Path("fx")).code, 0);
  Result r = Run("validate " + Path("fx/train"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("files 60"), std::string::npos);
  // The on-disk copy links exactly like the in-memory one.
  ASSERT_EQ(Run("link --data " + Path("fx/test") + " --scorer const:1 --out " +
                Path("disk.jsonl"))
                .code,
            0);
  ASSERT_EQ(Run("link --fixtures --scorer const:1 --out " + Path("mem.jsonl")).code, 0);
  std::ifstream disk(Path("disk.jsonl")), mem(Path("mem.jsonl"));
  EXPECT_EQ(ReadPredictions(disk).predictions, ReadPredictions(mem).predictions);
}

}  // namespace
}  // namespace formlink
