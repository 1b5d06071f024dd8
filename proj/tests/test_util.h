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

#ifndef FORMLINK_TESTS_TEST_UTIL_H_
#define FORMLINK_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "formlink/funsd.h"

namespace formlink::testing {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(FORMLINK_TEST_DATA) / name;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Box of size w x h centered at (cx, cy).
// Shifted well inside the page; only relative positions matter to callers.
constexpr double kOrigin = 500;

inline BBox Centered(double cx, double cy, double w = 20, double h = 10) {
  cx += kOrigin;
  cy += kOrigin;
  return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
}

inline Entity MakeEntity(EntityId id, EntityLabel label, BBox box,
                         std::string text = "") {
  Entity e;
  e.id = id;
  e.label = label;
  e.box = box;
  e.text = text;
  e.words.push_back({std::move(text), box});
  return e;
}

inline Entity Q(EntityId id, BBox box, std::string text = "Q:") {
  return MakeEntity(id, EntityLabel::kQuestion, box, std::move(text));
}
inline Entity A(EntityId id, BBox box, std::string text = "a") {
  return MakeEntity(id, EntityLabel::kAnswer, box, std::move(text));
}

// Adds each raw pair to the links of both endpoints, as annotation files do.
inline Form Linked(std::string name, std::vector<Entity> entities,
                   const std::vector<std::pair<EntityId, EntityId>>& pairs) {
  for (const auto& [from, to] : pairs) {
    for (Entity& e : entities) {
      if (e.id == from || e.id == to) e.links.push_back({from, to});
    }
  }
  return Form(std::move(name), std::move(entities));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("formlink_" + tag + "_" + std::to_string(rng() % 1000000000));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace formlink::testing

#endif  // FORMLINK_TESTS_TEST_UTIL_H_
