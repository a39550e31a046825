// Copyright 2026 The rexl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rexl/classifier/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "rexl/core/encoding.hpp"
#include "rexl/core/error.hpp"

extern char** environ;

namespace rexl {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction action {};
    action.sa_handler = SIG_IGN;
    sigemptyset(&action.sa_mask);
    sigaction(SIGPIPE, &action, nullptr);
  });
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left <= 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

void set_nonblocking(int fd) {
  const int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

std::vector<std::string> split_command_line(const std::string& line) {
  std::vector<std::string> out;
  std::string current;
  bool in_token = false;
  char quote = 0;
  for (char ch : line) {
    if (quote != 0) {
      if (ch == quote) {
        quote = 0;
      } else {
        current.push_back(ch);
      }
      continue;
    }
    if (ch == '\'' || ch == '"') {
      quote = ch;
      in_token = true;
    } else if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
      if (in_token) {
        out.push_back(std::move(current));
        current.clear();
        in_token = false;
      }
    } else {
      current.push_back(ch);
      in_token = true;
    }
  }
  if (quote != 0) throw ConfigError("command line has an unterminated quote: " + line);
  if (in_token) out.push_back(std::move(current));
  return out;
}

SubprocessClassifier::SubprocessClassifier(SubprocessOptions options) : options_(std::move(options)) {
  if (options_.command.empty()) throw TransportError(TransportError::Kind::kSpawn, "subprocess: empty command");
  ignore_sigpipe();

  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw TransportError(TransportError::Kind::kSpawn, "subprocess: pipe() failed");
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw TransportError(TransportError::Kind::kSpawn, "subprocess: pipe() failed");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

  std::vector<char*> argv;
  for (auto& arg : options_.command) argv.push_back(arg.data());
  argv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    throw TransportError(TransportError::Kind::kSpawn,
                         "subprocess: cannot start " + options_.command[0] + ": " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  set_nonblocking(to_child_);
  set_nonblocking(from_child_);

  const std::string line = read_line(Clock::now() + options_.timeout);
  json hello;
  try {
    hello = json::parse(line);
  } catch (const json::exception&) {
    fail(TransportError::Kind::kMalformed, "subprocess: handshake is not JSON: " + line);
  }
  try {
    if (hello.at("protocol").get<std::string>() != kSubprocessProtocol) {
      fail(TransportError::Kind::kMalformed,
           "subprocess: unsupported protocol " + hello.at("protocol").dump());
    }
    classes_ = hello.at("classes").get<int>();
    shape_ = {hello.at("height").get<int>(), hello.at("width").get<int>(), hello.at("channels").get<int>()};
    if (hello.contains("kind")) {
      const auto kind = hello.at("kind").get<std::string>();
      if (kind == "softmax") {
        kind_ = ScoreKind::kSoftmax;
      } else if (kind != "multilabel") {
        fail(TransportError::Kind::kMalformed, "subprocess: unknown score kind " + kind);
      }
    }
  } catch (const json::exception& e) {
    fail(TransportError::Kind::kMalformed, std::string("subprocess: bad handshake: ") + e.what());
  }
  if (classes_ < 1 || shape_.height < 1 || shape_.width < 1 || shape_.channels < 1) {
    fail(TransportError::Kind::kMalformed, "subprocess: handshake declares an invalid shape");
  }
}

SubprocessClassifier::~SubprocessClassifier() { terminate_child(); }

void SubprocessClassifier::terminate_child() noexcept {
  if (to_child_ >= 0) {
    close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ >= 0) {
    close(from_child_);
    from_child_ = -1;
  }
  if (pid_ > 0) {
    // Closing stdin asks a well-behaved child to exit; give it a moment.
    for (int i = 0; i < 50; ++i) {
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::string SubprocessClassifier::exit_description() {
  if (pid_ <= 0) return "child already reaped";
  int status = 0;
  // The child closed its end; it is exiting or has exited.
  for (int i = 0; i < 100; ++i) {
    const pid_t r = waitpid(pid_, &status, WNOHANG);
    if (r == pid_) {
      pid_ = -1;
      if (WIFEXITED(status)) return "child exited with status " + std::to_string(WEXITSTATUS(status));
      if (WIFSIGNALED(status)) return "child killed by signal " + std::to_string(WTERMSIG(status));
      return "child terminated";
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return "child closed its output";
}

void SubprocessClassifier::fail(TransportError::Kind kind, const std::string& message) {
  broken_ = true;
  std::string full = message;
  if (kind == TransportError::Kind::kProcessExit) full += " (" + exit_description() + ")";
  terminate_child();
  throw TransportError(kind, full);
}

std::string SubprocessClassifier::read_line(Clock::time_point deadline) {
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = poll(&pfd, 1, remaining_ms(deadline));
    if (ready < 0) {
      if (errno == EINTR) continue;
      fail(TransportError::Kind::kProcessExit, std::string("subprocess: poll failed: ") + std::strerror(errno));
    }
    if (ready == 0) {
      fail(TransportError::Kind::kTimeout, "subprocess: no response within " +
                                               std::to_string(options_.timeout.count()) + " ms");
    }
    char chunk[65536];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n > 0) {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    } else if (n == 0) {
      fail(TransportError::Kind::kProcessExit, "subprocess: child closed its output");
    } else if (errno != EAGAIN && errno != EINTR) {
      fail(TransportError::Kind::kProcessExit, std::string("subprocess: read failed: ") + std::strerror(errno));
    }
  }
}

void SubprocessClassifier::write_all(const std::string& data, Clock::time_point deadline) {
  std::size_t offset = 0;
  while (offset < data.size()) {
    const ssize_t n = write(to_child_, data.data() + offset, data.size() - offset);
    if (n > 0) {
      offset += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EPIPE) fail(TransportError::Kind::kProcessExit, "subprocess: child closed its input");
    if (n < 0 && errno != EAGAIN && errno != EINTR) {
      fail(TransportError::Kind::kProcessExit, std::string("subprocess: write failed: ") + std::strerror(errno));
    }
    pollfd pfd{to_child_, POLLOUT, 0};
    const int ready = poll(&pfd, 1, remaining_ms(deadline));
    if (ready == 0) {
      fail(TransportError::Kind::kTimeout, "subprocess: request not consumed within " +
                                               std::to_string(options_.timeout.count()) + " ms");
    }
    if (ready > 0 && (pfd.revents & (POLLERR | POLLHUP)) != 0) {
      fail(TransportError::Kind::kProcessExit, "subprocess: child closed its input");
    }
  }
}

ClassScores SubprocessClassifier::request(const ImageTensor& image) {
  if (broken_) throw TransportError(TransportError::Kind::kProcessExit, "subprocess: adapter is no longer usable");
  check_input(image);
  const auto deadline = Clock::now() + options_.timeout;
  const std::uint64_t id = next_id_++;
  std::string line = json{{"id", id}, {"pixels", encode_floats_base64(image.data())}}.dump();
  line.push_back('\n');
  write_all(line, deadline);

  const std::string reply = read_line(deadline);
  json response;
  try {
    response = json::parse(reply);
  } catch (const json::exception&) {
    fail(TransportError::Kind::kMalformed, "subprocess: response is not JSON: " + reply.substr(0, 200));
  }
  ClassScores out;
  out.kind = kind_;
  try {
    if (response.at("id").get<std::uint64_t>() != id) {
      fail(TransportError::Kind::kMalformed, "subprocess: response id does not match request " + std::to_string(id));
    }
    out.scores = response.at("scores").get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail(TransportError::Kind::kMalformed, std::string("subprocess: bad response: ") + e.what());
  }
  if (out.size() != classes_) {
    fail(TransportError::Kind::kInvalidScores, "subprocess: expected " + std::to_string(classes_) +
                                                   " scores, got " + std::to_string(out.size()));
  }
  try {
    out.validate();
  } catch (const ContractError& e) {
    // The pipe itself is still in sync, so the adapter stays usable.
    throw TransportError(TransportError::Kind::kInvalidScores, std::string("subprocess: ") + e.what());
  }
  return out;
}

ClassScores SubprocessClassifier::score(const ImageTensor& image) { return request(image); }

ClassScores SubprocessClassifier::score(const ImageTensor& image, std::span<const int> class_filter) {
  ClassScores all = request(image);
  ClassScores out;
  out.kind = ScoreKind::kMultilabel;
  for (int c : class_filter) {
    require(c >= 0 && c < classes_, "subprocess_score: class filter index out of range");
    out.scores.push_back(all.scores[static_cast<std::size_t>(c)]);
  }
  return out;
}

ClassScores subprocess_score(SubprocessClassifier& adapter, const ImageTensor& image,
                             std::optional<std::span<const int>> class_filter) {
  if (class_filter) return adapter.score(image, *class_filter);
  return adapter.score(image);
}

SubprocessPool::SubprocessPool(const SubprocessOptions& options, int size) {
  require(size >= 1, "SubprocessPool: size must be >= 1");
  for (int i = 0; i < size; ++i) {
    workers_.push_back(std::make_unique<SubprocessClassifier>(options));
    idle_.push_back(static_cast<std::size_t>(i));
  }
  for (const auto& w : workers_) {
    if (w->input_shape() != workers_.front()->input_shape() || w->num_classes() != workers_.front()->num_classes()) {
      throw TransportError(TransportError::Kind::kMalformed, "SubprocessPool: children disagree on their handshake");
    }
  }
}

ClassScores SubprocessPool::score(const ImageTensor& image) {
  std::size_t slot = 0;
  {
    std::unique_lock lock(mutex_);
    available_.wait(lock, [&] { return !idle_.empty(); });
    slot = idle_.back();
    idle_.pop_back();
  }
  struct Return {
    SubprocessPool& pool;
    std::size_t slot;
    ~Return() {
      {
        std::lock_guard lock(pool.mutex_);
        pool.idle_.push_back(slot);
      }
      pool.available_.notify_one();
    }
  } release{*this, slot};
  return workers_[slot]->score(image);
}

}  // namespace rexl
