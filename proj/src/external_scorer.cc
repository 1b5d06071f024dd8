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

#include "formlink/external_scorer.h"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <map>
#include <thread>
#include <utility>

#include "formlink/errors.h"
#include "json.hpp"

extern char** environ;

namespace formlink {

namespace {

constexpr std::size_t kMaxDiagnostic = 4096;

void SetNonBlocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

void CloseFd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

std::string Errno(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

}  // namespace

// File descriptors of one session. For TCP, read_fd == write_fd.
class ExternalScorer::Channel {
 public:
  ~Channel() { Close(); }

  int read_fd = -1;
  int write_fd = -1;
  int err_fd = -1;
  pid_t pid = -1;
  bool socket = false;
  std::string err_tail;  // last bytes of the child's stderr
  std::string inbuf;
  int exit_status = 0;

  void AppendDiagnostic(const char* data, std::size_t n) {
    err_tail.append(data, n);
    if (err_tail.size() > kMaxDiagnostic) {
      err_tail.erase(0, err_tail.size() - kMaxDiagnostic);
    }
  }

  void DrainStderr() {
    if (err_fd < 0) return;
    char buf[1024];
    for (;;) {
      ssize_t n = ::read(err_fd, buf, sizeof buf);
      if (n > 0) {
        AppendDiagnostic(buf, static_cast<std::size_t>(n));
        continue;
      }
      if (n == 0) CloseFd(err_fd);
      break;
    }
  }

  // Empty when the child wrote nothing to stderr.
  std::string Diagnostic() {
    DrainStderr();
    if (err_tail.empty()) return "";
    return "; scorer stderr: " + err_tail;
  }

  int Close() {
    if (socket) {
      CloseFd(read_fd);
      write_fd = -1;
      return 0;
    }
    CloseFd(write_fd);
    if (pid > 0) {
      // Give the child a moment to exit on end-of-input, then kill it.
      int raw = 0;
      pid_t done = 0;
      for (int i = 0; i < 200; ++i) {
        done = ::waitpid(pid, &raw, WNOHANG);
        if (done != 0) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      if (done == 0) {
        ::kill(pid, SIGKILL);
        done = ::waitpid(pid, &raw, 0);
      }
      if (done > 0) {
        exit_status = WIFEXITED(raw) ? WEXITSTATUS(raw) : 128 + WTERMSIG(raw);
      }
      pid = -1;
    }
    CloseFd(read_fd);
    CloseFd(err_fd);
    return exit_status;
  }
};

namespace {

std::unique_ptr<ExternalScorer::Channel> SpawnProcess(
    const std::string& command) {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw ExternalScorerFailure(Errno("pipe"));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);

  const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
  pid_t pid = -1;
  int rc = ::posix_spawn(&pid, "/bin/sh", &actions, nullptr,
                         const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(err_pipe[0]);
    throw ExternalScorerFailure("cannot start scorer '" + command +
                                "': " + std::strerror(rc));
  }

  auto channel = std::make_unique<ExternalScorer::Channel>();
  channel->pid = pid;
  channel->write_fd = in_pipe[1];
  channel->read_fd = out_pipe[0];
  channel->err_fd = err_pipe[0];
  SetNonBlocking(channel->write_fd);
  SetNonBlocking(channel->read_fd);
  SetNonBlocking(channel->err_fd);
  return channel;
}

std::unique_ptr<ExternalScorer::Channel> ConnectTcp(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) {
    throw ExternalScorerFailure("expected tcp://host:port, got tcp://" +
                                address);
  }
  std::string host = address.substr(0, colon);
  std::string port = address.substr(colon + 1);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &results);
  if (rc != 0) {
    throw ExternalScorerFailure("cannot resolve " + address + ": " +
                                gai_strerror(rc));
  }
  int fd = -1;
  std::string last_error = "no addresses";
  for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC,
                  ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(results);
  if (fd < 0) {
    throw ExternalScorerFailure("cannot connect to " + address + ": " +
                                last_error);
  }
  auto channel = std::make_unique<ExternalScorer::Channel>();
  channel->socket = true;
  channel->read_fd = fd;
  channel->write_fd = fd;
  SetNonBlocking(fd);
  return channel;
}

}  // namespace

std::unique_ptr<ExternalScorer> ExternalScorer::Open(
    const std::string& endpoint, ExternalScorerOptions options) {
  if (options.batch_size == 0) throw ConfigError("batch size must be positive");
  if (options.timeout.count() <= 0) {
    throw ConfigError("scorer timeout must be positive");
  }
  ::signal(SIGPIPE, SIG_IGN);
  constexpr std::string_view kTcp = "tcp://";
  std::unique_ptr<Channel> channel =
      endpoint.starts_with(kTcp) ? ConnectTcp(endpoint.substr(kTcp.size()))
                                 : SpawnProcess(endpoint);
  return std::unique_ptr<ExternalScorer>(
      new ExternalScorer(endpoint, options, std::move(channel)));
}

ExternalScorer::ExternalScorer(std::string endpoint,
                               ExternalScorerOptions options,
                               std::unique_ptr<Channel> channel)
    : endpoint_(std::move(endpoint)),
      options_(options),
      channel_(std::move(channel)) {}

ExternalScorer::~ExternalScorer() { Close(); }

int ExternalScorer::Close() { return channel_ ? channel_->Close() : 0; }

std::vector<double> ExternalScorer::Score(
    std::span<const PairExample> examples) {
  std::vector<double> scores;
  scores.reserve(examples.size());
  for (std::size_t start = 0; start < examples.size();
       start += options_.batch_size) {
    std::size_t n = std::min(options_.batch_size, examples.size() - start);
    std::vector<double> batch = ScoreBatch(examples.subspan(start, n));
    scores.insert(scores.end(), batch.begin(), batch.end());
  }
  return scores;
}

std::vector<double> ExternalScorer::ScoreBatch(
    std::span<const PairExample> batch) {
  Channel& ch = *channel_;
  if (ch.write_fd < 0 || ch.read_fd < 0) {
    throw ExternalScorerFailure("scorer session is closed");
  }

  std::map<std::int64_t, std::size_t> pending;  // request id -> position
  std::string outbuf;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    std::int64_t id = next_id_++;
    pending.emplace(id, i);
    nlohmann::ordered_json request = {{"id", id},
                                      {"question", batch[i].question_text},
                                      {"answer", batch[i].answer_text}};
    outbuf += request.dump(-1, ' ', false,
                           nlohmann::json::error_handler_t::replace);
    outbuf += '\n';
  }
  const std::int64_t first_id = pending.begin()->first;

  std::vector<double> scores(batch.size(), 0.0);
  std::size_t written = 0;
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;

  auto fail = [&](const std::string& what, std::optional<std::int64_t> id) {
    throw ExternalScorerFailure(Describe() + ": " + what + ch.Diagnostic(), id);
  };

  auto handle_line = [&](const std::string& line) {
    if (line.empty()) return;
    nlohmann::json response;
    try {
      response = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      fail("malformed response line '" + line + "'", pending.begin()->first);
    }
    if (!response.is_object() || !response.contains("id") ||
        !response["id"].is_number_integer()) {
      fail("response without an integer id: " + line, pending.begin()->first);
    }
    auto id = response["id"].get<std::int64_t>();
    auto it = pending.find(id);
    if (it == pending.end()) {
      fail("response for unknown or already answered id " + std::to_string(id),
           id);
    }
    if (response.contains("error")) {
      fail("scorer reported an error: " + response["error"].dump(), id);
    }
    if (!response.contains("score") || !response["score"].is_number()) {
      fail("response without a numeric score: " + line, id);
    }
    double score = response["score"].get<double>();
    if (!std::isfinite(score) || score < 0 || score > 1) {
      fail("score " + response["score"].dump() + " outside [0, 1] (range)", id);
    }
    scores[it->second] = score;
    pending.erase(it);
  };

  while (!pending.empty()) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      fail("timed out after " + std::to_string(options_.timeout.count()) +
               " ms with " + std::to_string(pending.size()) +
               " responses outstanding",
           pending.begin()->first);
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count()) + 1;

    pollfd fds[3];
    nfds_t nfds = 0;
    int read_slot = -1, write_slot = -1, err_slot = -1;
    bool want_write = written < outbuf.size();
    if (ch.socket) {
      fds[nfds] = {ch.read_fd,
                   static_cast<short>(POLLIN | (want_write ? POLLOUT : 0)), 0};
      read_slot = write_slot = static_cast<int>(nfds++);
    } else {
      fds[nfds] = {ch.read_fd, POLLIN, 0};
      read_slot = static_cast<int>(nfds++);
      if (want_write) {
        fds[nfds] = {ch.write_fd, POLLOUT, 0};
        write_slot = static_cast<int>(nfds++);
      }
      if (ch.err_fd >= 0) {
        fds[nfds] = {ch.err_fd, POLLIN, 0};
        err_slot = static_cast<int>(nfds++);
      }
    }
    int ready = ::poll(fds, nfds, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(Errno("poll"), first_id);
    }
    if (ready == 0) continue;

    if (err_slot >= 0 && fds[err_slot].revents != 0) ch.DrainStderr();

    if (want_write && write_slot >= 0 &&
        (fds[write_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t n = ch.socket
                      ? ::send(ch.write_fd, outbuf.data() + written,
                               outbuf.size() - written, MSG_NOSIGNAL)
                      : ::write(ch.write_fd, outbuf.data() + written,
                                outbuf.size() - written);
      if (n > 0) {
        written += static_cast<std::size_t>(n);
      } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK &&
                 errno != EINTR) {
        fail("scorer stopped reading requests (" +
                 std::string(std::strerror(errno)) + ")",
             first_id);
      }
    }

    if (fds[read_slot].revents & (POLLIN | POLLERR | POLLHUP)) {
      char buf[4096];
      ssize_t n = ::read(ch.read_fd, buf, sizeof buf);
      if (n > 0) {
        ch.inbuf.append(buf, static_cast<std::size_t>(n));
        std::size_t pos;
        while ((pos = ch.inbuf.find('\n')) != std::string::npos) {
          std::string line = ch.inbuf.substr(0, pos);
          ch.inbuf.erase(0, pos + 1);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          handle_line(line);
        }
      } else if (n == 0) {
        // Give a dying child a moment to flush stderr.
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        fail("scorer closed its output with " +
                 std::to_string(pending.size()) + " responses outstanding",
             pending.begin()->first);
      } else if (errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
        fail(Errno("read"), pending.begin()->first);
      }
    }
  }
  return scores;
}

}  // namespace formlink
