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

// Synthetic FUNSD-style forms for running the pipeline without the real
// dataset. Forms mix inline and stacked key/value fields, questions with
// no answer, stray unlinked answers, header->question links and small
// tables whose cells have two gold questions (row and column). Output is
// a pure function of (count, seed).

#ifndef FORMLINK_FIXTURES_H_
#define FORMLINK_FIXTURES_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "formlink/funsd.h"

namespace formlink {

// Forms named "<prefix>_000", "<prefix>_001", ...
std::vector<Form> SyntheticForms(std::size_t count, std::uint64_t seed,
                                 const std::string& prefix = "synthetic");

struct SyntheticSplits {
  std::vector<Form> train;
  std::vector<Form> test;
};

// The corpus used by --fixtures runs: 60 training and 20 test forms.
SyntheticSplits FixtureSplits();

// Writes each form as <dir>/<name>.json, creating `dir` if needed.
void WriteCorpus(const std::filesystem::path& dir,
                 const std::vector<Form>& forms);

}  // namespace formlink

#endif  // FORMLINK_FIXTURES_H_
