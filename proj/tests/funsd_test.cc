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

#include "formlink/funsd.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "formlink/errors.h"
#include "formlink/fixtures.h"
#include "test_util.h"

namespace formlink {
namespace {

using testing::A;
using testing::Centered;
using testing::DataPath;
using testing::Linked;
using testing::MakeEntity;
using testing::Q;
using testing::ReadFile;

TEST(FunsdParseTest, MinimalTwoEntityFile) {
  Form form = LoadForm(DataPath("minimal.json"));
  EXPECT_EQ(form.name(), "minimal");
  ASSERT_EQ(form.entities().size(), 2u);
  const Entity& q = form.entities()[0];
  EXPECT_EQ(q.id, 0);
  EXPECT_EQ(q.label, EntityLabel::kQuestion);
  EXPECT_EQ(q.box, (BBox{10, 10, 50, 20}));
  ASSERT_EQ(q.words.size(), 1u);
  EXPECT_EQ(q.words[0].text, "NAME:");
  ASSERT_EQ(q.links.size(), 1u);
  EXPECT_EQ(q.links[0], (Link{0, 1}));
  EXPECT_EQ(form.entities()[1].label, EntityLabel::kAnswer);
}

TEST(FunsdParseTest, EmptyEntityList) {
  Form form = LoadForm(DataPath("empty.json"));
  EXPECT_TRUE(form.entities().empty());
}

TEST(FunsdParseTest, DanglingLinkIsInvariantViolation) {
  EXPECT_THROW(LoadForm(DataPath("dangling.json")), InvariantViolation);
}

TEST(FunsdParseTest, DuplicateIdIsInvariantViolation) {
  EXPECT_THROW(ParseForm(R"({"form": [
      {"id": 3, "label": "question", "box": [0,0,1,1], "words": [], "linking": []},
      {"id": 3, "label": "answer", "box": [0,0,1,1], "words": [], "linking": []}]})",
                         "dup"),
               InvariantViolation);
}

TEST(FunsdParseTest, LinkWithoutOwnerIdIsInvariantViolation) {
  EXPECT_THROW(ParseForm(R"({"form": [
      {"id": 0, "label": "question", "box": [0,0,1,1], "words": [], "linking": [[1, 2]]},
      {"id": 1, "label": "answer", "box": [0,0,1,1], "words": [], "linking": []},
      {"id": 2, "label": "answer", "box": [0,0,1,1], "words": [], "linking": []}]})",
                         "owner"),
               InvariantViolation);
}

TEST(FunsdParseTest, InvertedBoxIsRejected) {
  EXPECT_THROW(ParseForm(R"({"form": [
      {"id": 0, "label": "question", "box": [5,0,1,1], "words": [], "linking": []}]})",
                         "box"),
               InvariantViolation);
}

TEST(FunsdParseTest, MalformedJsonCarriesByteOffset) {
  std::string raw = ReadFile(DataPath("malformed.json"));
  try {
    ParseForm(raw, "malformed");
    FAIL() << "expected MalformedJson";
  } catch (const MalformedJson& e) {
    // The doubled comma is the first offending byte.
    std::size_t comma = raw.find(",,") + 1;
    EXPECT_GE(e.byte_offset(), comma);
    EXPECT_LE(e.byte_offset(), comma + 1);
  }
}

TEST(FunsdParseTest, UnknownLabelIsSchemaViolation) {
  EXPECT_THROW(LoadForm(DataPath("unknown_label.json")), SchemaViolation);
}

TEST(FunsdParseTest, SchemaViolations) {
  const char* cases[] = {
      R"([])",
      R"({"entities": []})",
      R"({"form": {}})",
      R"({"form": [{"label": "question", "box": [0,0,1,1], "words": [], "linking": []}]})",
      R"({"form": [{"id": "0", "label": "question", "box": [0,0,1,1], "words": [], "linking": []}]})",
      R"({"form": [{"id": 0, "label": 3, "box": [0,0,1,1], "words": [], "linking": []}]})",
      R"({"form": [{"id": 0, "label": "question", "box": [0,0,1], "words": [], "linking": []}]})",
      R"({"form": [{"id": 0, "label": "question", "box": [0,0,1,1], "linking": []}]})",
      R"({"form": [{"id": 0, "label": "question", "box": [0,0,1,1], "words": [{"box": [0,0,1,1]}], "linking": []}]})",
      R"({"form": [{"id": 0, "label": "question", "box": [0,0,1,1], "words": [], "linking": [[0]]}]})",
      R"({"form": [{"id": 0, "label": "question", "box": [0,0,1,1], "words": [], "linking": [[0, 1.5]]}]})",
      R"({"form": [{"id": 0, "text": 7, "label": "question", "box": [0,0,1,1], "words": [], "linking": []}]})",
  };
  for (const char* raw : cases) {
    EXPECT_THROW(ParseForm(raw, "schema"), SchemaViolation) << raw;
  }
}

TEST(FunsdLabelTest, CaseInsensitive) {
  EXPECT_EQ(ParseEntityLabel("QUESTION"), EntityLabel::kQuestion);
  EXPECT_EQ(ParseEntityLabel("Answer"), EntityLabel::kAnswer);
  EXPECT_EQ(ParseEntityLabel("header"), EntityLabel::kHeader);
  EXPECT_EQ(ParseEntityLabel("oThEr"), EntityLabel::kOther);
  EXPECT_FALSE(ParseEntityLabel("key").has_value());
  EXPECT_FALSE(ParseEntityLabel("").has_value());
  for (auto label : {EntityLabel::kQuestion, EntityLabel::kAnswer,
                     EntityLabel::kHeader, EntityLabel::kOther}) {
    EXPECT_EQ(ParseEntityLabel(LabelName(label)), label);
  }
}

TEST(FunsdEntityTest, TextPrefersEntityField) {
  Entity e = MakeEntity(0, EntityLabel::kAnswer, {0, 0, 10, 10}, "a b");
  e.words = {{"x", {}}, {"y", {}}};
  EXPECT_EQ(e.Text(), "a b");
  e.text.reset();
  EXPECT_EQ(e.Text(), "x y");
  e.words.clear();
  EXPECT_EQ(e.Text(), "");
}

TEST(FunsdParseTest, MissingTextFieldFallsBackToWords) {
  Form form = ParseForm(R"({"form": [{"id": 0, "label": "answer", "box": [0,0,9,9],
      "words": [{"text": "New", "box": [0,0,4,9]}, {"text": "York", "box": [5,0,9,9]}],
      "linking": []}]})",
                        "noText");
  EXPECT_FALSE(form.entities()[0].text.has_value());
  EXPECT_EQ(form.entities()[0].Text(), "New York");
}

// Random forms with arbitrary unicode text, degenerate boxes and links.
Form RandomForm(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<int> count(0, 12);
  std::uniform_int_distribution<int> coord(0, 1000);
  std::uniform_int_distribution<int> label(0, 3);
  const char* pieces[] = {"", "a", "Ä", "caf\xC3\xA9", "\xE2\x82\xAC", " ",
                          "\"q\"", "\\", "\n", "TOTAL:", "\xF0\x9F\x93\x84"};
  std::uniform_int_distribution<int> piece(0, std::size(pieces) - 1);
  auto text = [&] {
    std::string s;
    for (int i = piece(rng) % 4; i > 0; --i) s += pieces[piece(rng)];
    return s;
  };
  auto box = [&] {
    double x0 = coord(rng), y0 = coord(rng);
    double x1 = x0 + coord(rng) % 50, y1 = y0 + coord(rng) % 5;
    return BBox{x0, y0, x1, y1};
  };
  std::vector<Entity> entities;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Entity e;
    e.id = i * 3 + 1;
    e.label = static_cast<EntityLabel>(label(rng));
    e.box = box();
    if (rng() % 4 != 0) e.text = text();
    for (int w = static_cast<int>(rng() % 4); w > 0; --w) {
      e.words.push_back({text(), box()});
    }
    entities.push_back(std::move(e));
  }
  std::vector<std::pair<EntityId, EntityId>> pairs;
  for (int i = 0; n > 1 && i < n / 2; ++i) {
    EntityId a = entities[rng() % n].id, b = entities[rng() % n].id;
    if (a != b) pairs.emplace_back(a, b);
  }
  return Linked("random_" + std::to_string(index), std::move(entities), pairs);
}

TEST(FunsdRoundTripTest, RandomForms) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Form form = RandomForm(rng, i);
    std::string raw = SerializeForm(form);
    Form again = ParseForm(raw, form.name());
    ASSERT_EQ(again, form) << raw;
    EXPECT_EQ(SerializeForm(again), raw);
  }
}

TEST(FunsdRoundTripTest, FixtureAndDataForms) {
  for (const Form& form : SyntheticForms(10, 99)) {
    EXPECT_EQ(ParseForm(SerializeForm(form), form.name()), form);
  }
  for (const char* name : {"minimal.json", "empty.json", "corpus/form_a.json",
                           "corpus/form_b.json", "corpus/form_c.json"}) {
    Form form = LoadForm(DataPath(name));
    EXPECT_EQ(ParseForm(SerializeForm(form), form.name()), form) << name;
  }
}

TEST(GoldLinksTest, LabelFilterDiscardsHeaderLink) {
  Form form = Linked("f",
                     {Q(0, Centered(0, 0)), A(1, Centered(50, 0)),
                      MakeEntity(2, EntityLabel::kHeader, Centered(0, -50))},
                     {{0, 1}, {2, 0}});
  GoldLinkSet gold = GoldLinks(form);
  ASSERT_EQ(gold.links.size(), 1u);
  EXPECT_EQ(gold.links[0], (QaLink{0, 1}));
  EXPECT_EQ(gold.discarded, 1u);
}

TEST(GoldLinksTest, NoLinks) {
  Form form("f", {Q(0, Centered(0, 0)), A(1, Centered(50, 0))});
  GoldLinkSet gold = GoldLinks(form);
  EXPECT_TRUE(gold.links.empty());
  EXPECT_EQ(gold.discarded, 0u);
  EXPECT_EQ(gold.Multiplicity(1), 0u);
}

TEST(GoldLinksTest, MultiplicityTwo) {
  Form form = Linked("f",
                     {Q(1, Centered(0, 0)), Q(2, Centered(0, 20)),
                      A(3, Centered(50, 10))},
                     {{1, 3}, {2, 3}});
  GoldLinkSet gold = GoldLinks(form);
  EXPECT_EQ(gold.links, (std::vector<QaLink>{{1, 3}, {2, 3}}));
  EXPECT_EQ(gold.Multiplicity(3), 2u);
  EXPECT_EQ(gold.QuestionsFor(3), (std::vector<EntityId>{1, 2}));
}

TEST(GoldLinksTest, AnswerFirstOrientationIsNormalized) {
  Form form = Linked("f", {Q(4, Centered(0, 0)), A(5, Centered(50, 0))},
                     {{5, 4}});
  GoldLinkSet gold = GoldLinks(form);
  EXPECT_EQ(gold.links, (std::vector<QaLink>{{4, 5}}));
  EXPECT_TRUE(gold.Contains(4, 5));
  EXPECT_FALSE(gold.Contains(5, 4));
}

TEST(GoldLinksTest, AnswerAnswerAndQuestionQuestionAreDiscarded) {
  Form form = Linked("f",
                     {Q(0, Centered(0, 0)), Q(1, Centered(0, 20)),
                      A(2, Centered(50, 0)), A(3, Centered(50, 20))},
                     {{0, 1}, {2, 3}, {0, 2}});
  GoldLinkSet gold = GoldLinks(form);
  EXPECT_EQ(gold.links, (std::vector<QaLink>{{0, 2}}));
  EXPECT_EQ(gold.discarded, 2u);
}

// Independent re-derivation over every fixture form: distinct unordered raw
// pairs split into question/answer links and the discard tally.
TEST(GoldLinksTest, PropertiesOnFixtures) {
  SyntheticSplits splits = FixtureSplits();
  std::vector<Form> forms = splits.train;
  forms.insert(forms.end(), splits.test.begin(), splits.test.end());
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) forms.push_back(RandomForm(rng, i));
  for (const Form& form : forms) {
    std::set<std::pair<EntityId, EntityId>> raw;
    for (const Entity& e : form.entities()) {
      for (const Link& l : e.links) {
        raw.insert({std::min(l.from, l.to), std::max(l.from, l.to)});
      }
    }
    std::set<QaLink> expected;
    std::size_t other = 0;
    for (const auto& [a, b] : raw) {
      EntityLabel la = form.Find(a)->label, lb = form.Find(b)->label;
      if (la == EntityLabel::kQuestion && lb == EntityLabel::kAnswer) {
        expected.insert({a, b});
      } else if (lb == EntityLabel::kQuestion && la == EntityLabel::kAnswer) {
        expected.insert({b, a});
      } else {
        ++other;
      }
    }
    GoldLinkSet gold = GoldLinks(form);
    EXPECT_EQ(gold.links, std::vector<QaLink>(expected.begin(), expected.end()));
    EXPECT_EQ(gold.discarded, other);
    EXPECT_EQ(gold.links.size() + gold.discarded, raw.size());
    for (const QaLink& l : gold.links) {
      EXPECT_EQ(form.Find(l.question_id)->label, EntityLabel::kQuestion);
      EXPECT_EQ(form.Find(l.answer_id)->label, EntityLabel::kAnswer);
    }
  }
}

TEST(ValidateCorpusTest, EmptyDirectory) {
  auto dir = testing::TempDir("empty");
  CorpusStats stats = ValidateCorpus(dir);
  EXPECT_EQ(stats.files, 0u);
  EXPECT_EQ(stats.entities, 0u);
  EXPECT_TRUE(stats.errors.empty());
  std::filesystem::remove_all(dir);
}

TEST(ValidateCorpusTest, NotADirectory) {
  EXPECT_THROW(ValidateCorpus(DataPath("minimal.json")), IoError);
}

TEST(ValidateCorpusTest, BundledCorpusCounts) {
  CorpusStats stats = ValidateCorpus(DataPath("corpus"));
  EXPECT_EQ(stats.files, 3u);
  EXPECT_EQ(stats.entities, 10u);
  EXPECT_EQ(stats.words, 12u);
  EXPECT_EQ(stats.gold_links, 3u);
  EXPECT_EQ(stats.discarded_links, 1u);
  EXPECT_EQ(stats.label_counts[static_cast<int>(EntityLabel::kQuestion)], 4u);
  EXPECT_EQ(stats.label_counts[static_cast<int>(EntityLabel::kAnswer)], 4u);
  EXPECT_EQ(stats.label_counts[static_cast<int>(EntityLabel::kHeader)], 1u);
  EXPECT_EQ(stats.label_counts[static_cast<int>(EntityLabel::kOther)], 1u);
  EXPECT_EQ(stats.answers_by_multiplicity, (std::array<std::size_t, 4>{1, 3, 0, 0}));
  EXPECT_TRUE(stats.errors.empty());
}

TEST(ValidateCorpusTest, ContinuesPastBrokenFile) {
  CorpusStats stats = ValidateCorpus(DataPath("bad"));
  EXPECT_EQ(stats.files, 1u);
  ASSERT_EQ(stats.errors.size(), 1u);
  EXPECT_EQ(stats.errors[0].kind, "MalformedJson");
  EXPECT_NE(stats.errors[0].path.find("broken.json"), std::string::npos);
  EXPECT_EQ(stats.gold_links, 1u);
}

TEST(ValidateCorpusTest, WarnsOnDegenerateBoxesEmptyWordsAndHighMultiplicity) {
  Entity flat = A(3, {10, 10, 10, 20});
  flat.words[0].text = "";
  Form form = Linked("warn",
                     {Q(0, Centered(0, 0)), Q(1, Centered(0, 20)),
                      Q(2, Centered(0, 40)), flat},
                     {{0, 3}, {1, 3}, {2, 3}});
  CorpusStats stats = ComputeStats({form});
  EXPECT_EQ(stats.answers_by_multiplicity[3], 1u);
  auto has = [&](const std::string& needle) {
    return std::any_of(stats.warnings.begin(), stats.warnings.end(),
                       [&](const std::string& w) {
                         return w.find(needle) != std::string::npos;
                       });
  };
  EXPECT_TRUE(has("degenerate box"));
  EXPECT_TRUE(has("empty word"));
  EXPECT_TRUE(has("3 gold questions"));
}

// The validator never raises on anything the parser accepted.
TEST(ValidateCorpusTest, NeverThrowsOnParsedForms) {
  std::mt19937_64 rng(11);
  auto dir = testing::TempDir("random");
  std::vector<Form> forms;
  for (int i = 0; i < 50; ++i) forms.push_back(RandomForm(rng, i));
  WriteCorpus(dir, forms);
  CorpusStats stats;
  EXPECT_NO_THROW(stats = ValidateCorpus(dir));
  EXPECT_EQ(stats.files, 50u);
  EXPECT_TRUE(stats.errors.empty());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace formlink
