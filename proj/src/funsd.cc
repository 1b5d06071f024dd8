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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "formlink/errors.h"
#include "json.hpp"

namespace formlink {

using nlohmann::json;

bool BBox::valid() const {
  for (double v : {x_min, y_min, x_max, y_max}) {
    if (!std::isfinite(v) || v < 0) return false;
  }
  return x_min <= x_max && y_min <= y_max;
}

std::optional<EntityLabel> ParseEntityLabel(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (lower == "question") return EntityLabel::kQuestion;
  if (lower == "answer") return EntityLabel::kAnswer;
  if (lower == "header") return EntityLabel::kHeader;
  if (lower == "other") return EntityLabel::kOther;
  return std::nullopt;
}

std::string_view LabelName(EntityLabel label) {
  switch (label) {
    case EntityLabel::kQuestion:
      return "question";
    case EntityLabel::kAnswer:
      return "answer";
    case EntityLabel::kHeader:
      return "header";
    case EntityLabel::kOther:
      return "other";
  }
  return "other";
}

std::string Entity::Text() const {
  if (text.has_value()) return *text;
  std::string joined;
  for (const Word& w : words) {
    if (!joined.empty()) joined += ' ';
    joined += w.text;
  }
  return joined;
}

Form::Form(std::string name, std::vector<Entity> entities)
    : name_(std::move(name)), entities_(std::move(entities)) {
  index_.reserve(entities_.size());
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const Entity& e = entities_[i];
    if (!index_.emplace(e.id, i).second) {
      throw InvariantViolation(name_ + ": duplicate entity id " +
                               std::to_string(e.id));
    }
    if (!e.box.valid()) {
      throw InvariantViolation(name_ + ": entity " + std::to_string(e.id) +
                               " has an invalid box");
    }
    for (const Word& w : e.words) {
      if (!w.box.valid()) {
        throw InvariantViolation(name_ + ": a word of entity " +
                                 std::to_string(e.id) +
                                 " has an invalid box");
      }
    }
  }
  for (const Entity& e : entities_) {
    for (const Link& link : e.links) {
      if (link.from != e.id && link.to != e.id) {
        throw InvariantViolation(
            name_ + ": link [" + std::to_string(link.from) + "," +
            std::to_string(link.to) + "] on entity " + std::to_string(e.id) +
            " does not include that entity");
      }
      for (EntityId endpoint : {link.from, link.to}) {
        if (!index_.contains(endpoint)) {
          throw InvariantViolation(name_ + ": link on entity " +
                                   std::to_string(e.id) +
                                   " references unknown id " +
                                   std::to_string(endpoint));
        }
      }
    }
  }
}

const Entity* Form::Find(EntityId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &entities_[it->second];
}

namespace {

[[noreturn]] void Schema(const std::string& form, const std::string& where,
                         const std::string& what) {
  throw SchemaViolation(form + ": " + where + ": " + what);
}

const json& Field(const json& obj, const char* key, const std::string& form,
                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) Schema(form, where, std::string("missing '") + key + "'");
  return *it;
}

EntityId ParseId(const json& v, const std::string& form,
                 const std::string& where) {
  if (v.is_number_integer()) return v.get<EntityId>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d)) return static_cast<EntityId>(d);
  }
  Schema(form, where, "expected an integer id");
}

BBox ParseBox(const json& v, const std::string& form,
              const std::string& where) {
  if (!v.is_array() || v.size() != 4) {
    Schema(form, where, "box must be an array of 4 numbers");
  }
  std::array<double, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!v[i].is_number()) Schema(form, where, "box must be numeric");
    c[i] = v[i].get<double>();
  }
  return BBox{c[0], c[1], c[2], c[3]};
}

Entity ParseEntity(const json& obj, const std::string& form,
                   std::size_t position) {
  std::string where = "entity #" + std::to_string(position);
  if (!obj.is_object()) Schema(form, where, "expected an object");

  Entity e;
  e.id = ParseId(Field(obj, "id", form, where), form, where + ".id");

  const json& label = Field(obj, "label", form, where);
  if (!label.is_string()) Schema(form, where, "label must be a string");
  auto parsed = ParseEntityLabel(label.get_ref<const std::string&>());
  if (!parsed) {
    Schema(form, where,
           "unknown label '" + label.get_ref<const std::string&>() + "'");
  }
  e.label = *parsed;

  e.box = ParseBox(Field(obj, "box", form, where), form, where + ".box");

  if (auto it = obj.find("text"); it != obj.end()) {
    if (!it->is_string()) Schema(form, where, "text must be a string");
    e.text = it->get<std::string>();
  }

  const json& words = Field(obj, "words", form, where);
  if (!words.is_array()) Schema(form, where, "words must be an array");
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string wwhere = where + ".words[" + std::to_string(i) + "]";
    const json& w = words[i];
    if (!w.is_object()) Schema(form, wwhere, "expected an object");
    const json& text = Field(w, "text", form, wwhere);
    if (!text.is_string()) Schema(form, wwhere, "text must be a string");
    e.words.push_back(
        Word{text.get<std::string>(),
             ParseBox(Field(w, "box", form, wwhere), form, wwhere + ".box")});
  }

  const json& links = Field(obj, "linking", form, where);
  if (!links.is_array()) Schema(form, where, "linking must be an array");
  for (const json& pair : links) {
    if (!pair.is_array() || pair.size() != 2) {
      Schema(form, where, "each linking entry must be an [id, id] pair");
    }
    e.links.push_back(Link{ParseId(pair[0], form, where + ".linking"),
                           ParseId(pair[1], form, where + ".linking")});
  }
  return e;
}

json Number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

json BoxJson(const BBox& b) {
  return json::array({Number(b.x_min), Number(b.y_min), Number(b.x_max),
                      Number(b.y_max)});
}

}  // namespace

Form ParseForm(std::string_view raw, std::string name) {
  json doc;
  try {
    doc = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw MalformedJson(name + ": " + e.what(), e.byte);
  }
  if (!doc.is_object()) Schema(name, "document", "expected a top-level object");
  const json& entities = Field(doc, "form", name, "document");
  if (!entities.is_array()) Schema(name, "form", "expected an array");

  std::vector<Entity> parsed;
  parsed.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    parsed.push_back(ParseEntity(entities[i], name, i));
  }
  return Form(std::move(name), std::move(parsed));
}

Form LoadForm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseForm(buf.str(), path.stem().string());
}

std::string SerializeForm(const Form& form) {
  json entities = json::array();
  for (const Entity& e : form.entities()) {
    json obj;
    obj["id"] = e.id;
    if (e.text) obj["text"] = *e.text;
    obj["label"] = std::string(LabelName(e.label));
    obj["box"] = BoxJson(e.box);
    json words = json::array();
    for (const Word& w : e.words) {
      words.push_back({{"text", w.text}, {"box", BoxJson(w.box)}});
    }
    obj["words"] = std::move(words);
    json links = json::array();
    for (const Link& l : e.links) links.push_back(json::array({l.from, l.to}));
    obj["linking"] = std::move(links);
    entities.push_back(std::move(obj));
  }
  return json{{"form", std::move(entities)}}.dump();
}

bool GoldLinkSet::Contains(EntityId question_id, EntityId answer_id) const {
  return std::binary_search(links.begin(), links.end(),
                            QaLink{question_id, answer_id});
}

std::vector<EntityId> GoldLinkSet::QuestionsFor(EntityId answer_id) const {
  std::vector<EntityId> out;
  for (const QaLink& l : links) {
    if (l.answer_id == answer_id) out.push_back(l.question_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t GoldLinkSet::Multiplicity(EntityId answer_id) const {
  return static_cast<std::size_t>(
      std::count_if(links.begin(), links.end(), [&](const QaLink& l) {
        return l.answer_id == answer_id;
      }));
}

GoldLinkSet GoldLinks(const Form& form) {
  GoldLinkSet gold;
  gold.form_name = form.name();
  std::set<std::pair<EntityId, EntityId>> seen;
  std::set<QaLink> links;
  for (const Entity& e : form.entities()) {
    if (e.label == EntityLabel::kQuestion) gold.question_ids.push_back(e.id);
    if (e.label == EntityLabel::kAnswer) gold.answer_ids.push_back(e.id);
    for (const Link& l : e.links) {
      auto key = std::minmax(l.from, l.to);
      if (!seen.insert(key).second) continue;
      const Entity* a = form.Find(l.from);
      const Entity* b = form.Find(l.to);
      if (a->label == EntityLabel::kQuestion &&
          b->label == EntityLabel::kAnswer) {
        links.insert({a->id, b->id});
      } else if (a->label == EntityLabel::kAnswer &&
                 b->label == EntityLabel::kQuestion) {
        links.insert({b->id, a->id});
      } else {
        ++gold.discarded;
      }
    }
  }
  gold.links.assign(links.begin(), links.end());
  return gold;
}

std::vector<std::filesystem::path> ListAnnotationFiles(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

CorpusLoad LoadCorpus(const std::filesystem::path& dir) {
  CorpusLoad load;
  for (const auto& path : ListAnnotationFiles(dir)) {
    try {
      load.forms.push_back(LoadForm(path));
    } catch (const Error& e) {
      load.errors.push_back({path.string(), e.kind(), e.what()});
    }
  }
  return load;
}

CorpusStats ComputeStats(const std::vector<Form>& forms) {
  CorpusStats stats;
  for (const Form& form : forms) {
    ++stats.files;
    stats.entities += form.entities().size();
    for (const Entity& e : form.entities()) {
      stats.words += e.words.size();
      ++stats.label_counts[static_cast<std::size_t>(e.label)];
      if (e.box.degenerate()) {
        stats.warnings.push_back(form.name() + ": entity " +
                                 std::to_string(e.id) + " has a degenerate box");
      }
      for (const Word& w : e.words) {
        if (w.text.empty()) {
          stats.warnings.push_back(form.name() + ": entity " +
                                   std::to_string(e.id) +
                                   " contains an empty word");
        }
        if (w.box.degenerate()) {
          stats.warnings.push_back(form.name() + ": a word of entity " +
                                   std::to_string(e.id) +
                                   " has a degenerate box");
        }
      }
    }
    GoldLinkSet gold = GoldLinks(form);
    stats.gold_links += gold.links.size();
    stats.discarded_links += gold.discarded;
    for (EntityId answer : gold.answer_ids) {
      std::size_t m = gold.Multiplicity(answer);
      ++stats.answers_by_multiplicity[std::min<std::size_t>(m, 3)];
      if (m > 2) {
        stats.warnings.push_back(form.name() + ": answer " +
                                 std::to_string(answer) + " has " +
                                 std::to_string(m) + " gold questions");
      }
    }
  }
  return stats;
}

CorpusStats ValidateCorpus(const std::filesystem::path& dir) {
  CorpusLoad load = LoadCorpus(dir);
  CorpusStats stats = ComputeStats(load.forms);
  stats.errors = std::move(load.errors);
  return stats;
}

}  // namespace formlink
