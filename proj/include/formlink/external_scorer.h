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

// Client side of the external scorer wire protocol.
//
// Line-delimited JSON (UTF-8, LF) over a child process's stdin/stdout or
// a TCP stream:
//   request   {"id": int, "question": str, "answer": str}
//   response  {"id": int, "score": float}
// Responses may arrive in any order and are matched back by id. A
// response carrying an "error" member fails the batch. Closing the
// request stream ends the session.

#ifndef FORMLINK_EXTERNAL_SCORER_H_
#define FORMLINK_EXTERNAL_SCORER_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "formlink/scoring.h"

namespace formlink {

struct ExternalScorerOptions {
  std::size_t batch_size = 64;
  // Deadline for all responses of one batch.
  std::chrono::milliseconds timeout{60000};
};

// A stateful session with one external scorer. Not safe for concurrent
// use; open one session per consumer.
class ExternalScorer : public Scorer {
 public:
  // `endpoint` is "tcp://host:port" or a shell command line run with
  // /bin/sh -c. Throws ExternalScorerFailure if the process cannot be
  // started or the connection fails. Ignores SIGPIPE process-wide.
  static std::unique_ptr<ExternalScorer> Open(
      const std::string& endpoint, ExternalScorerOptions options = {});

  ~ExternalScorer() override;
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  // Throws ExternalScorerFailure on a protocol violation, timeout,
  // premature end of stream or out-of-range score.
  std::vector<double> Score(std::span<const PairExample> examples) override;
  std::string Describe() const override { return "external:" + endpoint_; }
  bool concurrent() const override { return false; }

  // Closes the request stream and reaps the child. Returns the child's
  // exit status (0 for TCP sessions). Idempotent.
  int Close();

  // Pipe or socket transport, defined in the implementation file.
  class Channel;

 private:
  ExternalScorer(std::string endpoint, ExternalScorerOptions options,
                 std::unique_ptr<Channel> channel);

  std::vector<double> ScoreBatch(std::span<const PairExample> batch);

  std::string endpoint_;
  ExternalScorerOptions options_;
  std::unique_ptr<Channel> channel_;
  std::int64_t next_id_ = 0;
};

}  // namespace formlink

#endif  // FORMLINK_EXTERNAL_SCORER_H_
