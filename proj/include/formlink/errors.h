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

#ifndef FORMLINK_ERRORS_H_
#define FORMLINK_ERRORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace formlink {

// Root of every error raised by the library. The CLI maps subclasses onto
// exit codes: ConfigError is a usage error, everything else a data error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define FORMLINK_DECLARE_ERROR(Name)                         \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(what) {}  \
    const char* kind() const noexcept override { return #Name; } \
  }

// Annotation files.
class MalformedJson : public Error {
 public:
  MalformedJson(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  const char* kind() const noexcept override { return "MalformedJson"; }
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};
FORMLINK_DECLARE_ERROR(SchemaViolation);
FORMLINK_DECLARE_ERROR(InvariantViolation);

// Geometry.
FORMLINK_DECLARE_ERROR(UnknownId);
FORMLINK_DECLARE_ERROR(NotAnAnswer);

// Scoring.
FORMLINK_DECLARE_ERROR(DegenerateDataset);

class ExternalScorerFailure : public Error {
 public:
  ExternalScorerFailure(const std::string& what,
                        std::optional<std::int64_t> request_id = std::nullopt)
      : Error(what), request_id_(request_id) {}
  const char* kind() const noexcept override {
    return "ExternalScorerFailure";
  }
  // Id of the request the failure is attributed to, when there is one.
  std::optional<std::int64_t> request_id() const { return request_id_; }

 private:
  std::optional<std::int64_t> request_id_;
};

// Linking and metrics.
FORMLINK_DECLARE_ERROR(MissingScore);
FORMLINK_DECLARE_ERROR(FormMismatch);
FORMLINK_DECLARE_ERROR(NoGold);

// Invalid run parameters (threshold out of range, k = 0, ...).
FORMLINK_DECLARE_ERROR(ConfigError);

// File-system level failures (unreadable file, missing directory).
FORMLINK_DECLARE_ERROR(IoError);

#undef FORMLINK_DECLARE_ERROR

}  // namespace formlink

#endif  // FORMLINK_ERRORS_H_
