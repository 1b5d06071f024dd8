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

// Data model for FUNSD-style form annotations.
//
// An annotation file is a JSON object {"form": [entity, ...]} where each
// entity carries an integer id, a label (question/answer/header/other), a
// bounding box [x_min, y_min, x_max, y_max], its words and a list of
// [id, id] link pairs. Forms are immutable once constructed; the Form
// constructor enforces id uniqueness and link resolvability.

#ifndef FORMLINK_FUNSD_H_
#define FORMLINK_FUNSD_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace formlink {

using EntityId = std::int64_t;

// Axis-aligned box in image coordinates (y grows downward).
struct BBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }
  bool degenerate() const { return width() == 0 || height() == 0; }

  // Finite, non-negative and min <= max on both axes.
  bool valid() const;

  friend bool operator==(const BBox&, const BBox&) = default;
};

enum class EntityLabel { kQuestion, kAnswer, kHeader, kOther };

// Case-insensitive on the four label names.
std::optional<EntityLabel> ParseEntityLabel(std::string_view name);
// Lower-case name as written in annotation files.
std::string_view LabelName(EntityLabel label);

struct Word {
  std::string text;
  BBox box;

  friend bool operator==(const Word&, const Word&) = default;
};

struct Link {
  EntityId from = 0;
  EntityId to = 0;

  friend bool operator==(const Link&, const Link&) = default;
};

struct Entity {
  EntityId id = 0;
  EntityLabel label = EntityLabel::kOther;
  BBox box;
  // Entity-level text field; absent in some schema variants.
  std::optional<std::string> text;
  std::vector<Word> words;
  std::vector<Link> links;

  // The text field when present, else the space-joined word texts.
  std::string Text() const;

  friend bool operator==(const Entity&, const Entity&) = default;
};

class Form {
 public:
  Form() = default;
  // Throws InvariantViolation on duplicate ids, dangling link references,
  // link pairs that do not contain their owner's id, or invalid boxes.
  Form(std::string name, std::vector<Entity> entities);

  const std::string& name() const { return name_; }
  const std::vector<Entity>& entities() const { return entities_; }

  // nullptr when no entity has this id.
  const Entity* Find(EntityId id) const;

  friend bool operator==(const Form& a, const Form& b) {
    return a.name_ == b.name_ && a.entities_ == b.entities_;
  }

 private:
  std::string name_;
  std::vector<Entity> entities_;
  std::unordered_map<EntityId, std::size_t> index_;
};

// Parses one annotation file. Entities keep file order.
// Throws MalformedJson, SchemaViolation or InvariantViolation.
Form ParseForm(std::string_view raw, std::string name);

// Reads and parses `path`; the form is named after the file stem.
Form LoadForm(const std::filesystem::path& path);

// Serializes to the annotation schema. ParseForm(SerializeForm(f)) == f.
std::string SerializeForm(const Form& form);

// Question->answer link, normalized so the first id is the question.
struct QaLink {
  EntityId question_id = 0;
  EntityId answer_id = 0;

  friend auto operator<=>(const QaLink&, const QaLink&) = default;
};

// Gold question->answer links of one form, plus the Q/A entity inventory
// needed to count true negatives.
struct GoldLinkSet {
  std::string form_name;
  std::vector<QaLink> links;            // sorted, unique
  std::vector<EntityId> question_ids;   // file order
  std::vector<EntityId> answer_ids;     // file order
  // Distinct raw link pairs that are not question/answer pairs.
  std::size_t discarded = 0;

  bool Contains(EntityId question_id, EntityId answer_id) const;
  // Gold questions of an answer, ascending id.
  std::vector<EntityId> QuestionsFor(EntityId answer_id) const;
  std::size_t Multiplicity(EntityId answer_id) const;
};

// A raw pair (a, b) yields a gold link when one endpoint is a Question and
// the other an Answer, in either order. Each pair normally appears on both
// of its entities; duplicates are collapsed before counting.
GoldLinkSet GoldLinks(const Form& form);

struct FileError {
  std::string path;
  std::string kind;
  std::string message;
};

struct CorpusStats {
  std::size_t files = 0;
  std::size_t entities = 0;
  std::size_t words = 0;
  std::size_t gold_links = 0;
  std::size_t discarded_links = 0;
  // Indexed by EntityLabel.
  std::array<std::size_t, 4> label_counts{};
  // Answers by gold multiplicity: m = 0, 1, 2, > 2.
  std::array<std::size_t, 4> answers_by_multiplicity{};
  std::vector<std::string> warnings;
  std::vector<FileError> errors;
};

// Annotation files (*.json) in `dir`, sorted by file name.
std::vector<std::filesystem::path> ListAnnotationFiles(
    const std::filesystem::path& dir);

struct CorpusLoad {
  std::vector<Form> forms;
  std::vector<FileError> errors;
};

// Parses every annotation file in `dir`, continuing past failures.
CorpusLoad LoadCorpus(const std::filesystem::path& dir);

// Statistics and warnings over already-parsed forms.
CorpusStats ComputeStats(const std::vector<Form>& forms);

// Parses every file in `dir` and collects statistics. Parse failures are
// recorded in `errors`; nothing is thrown for per-file problems.
CorpusStats ValidateCorpus(const std::filesystem::path& dir);

}  // namespace formlink

#endif  // FORMLINK_FUNSD_H_
