// Copyright 2026 The Arena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arena/extern_player.h"

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

extern char** environ;

namespace arena::ext {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr std::chrono::milliseconds kReapGrace{2000};

[[noreturn]] void Malformed(const std::string& what) {
  throw ProtocolError(ErrorKind::kMalformed, what);
}

const json& Field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) Malformed(std::string("missing field '") + key + "'");
  return *it;
}

std::string StringField(const json& j, const char* key) {
  const json& v = Field(j, key);
  if (!v.is_string()) Malformed(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

int IntField(const json& j, const char* key) {
  const json& v = Field(j, key);
  if (!v.is_number_integer()) {
    Malformed(std::string("field '") + key + "' must be an integer");
  }
  const auto value = v.get<std::int64_t>();
  if (v.is_number_unsigned() &&
      v.get<std::uint64_t>() >
          static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
    Malformed(std::string("field '") + key + "' is out of range");
  }
  if (value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max()) {
    Malformed(std::string("field '") + key + "' is out of range");
  }
  return static_cast<int>(value);
}

std::vector<double> NumberArray(const json& v, const char* what) {
  if (!v.is_array()) Malformed(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) {
    if (!x.is_number()) Malformed(std::string(what) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> SampleArray(const json& v) {
  if (!v.is_array()) Malformed("field 'data' must be an array of vectors");
  std::vector<std::vector<double>> out;
  out.reserve(v.size());
  for (const json& row : v) {
    out.push_back(NumberArray(row, "sample"));
    if (out.back().size() != out.front().size()) {
      Malformed("samples have differing lengths");
    }
  }
  return out;
}

void CheckFinite(const std::vector<double>& values) {
  for (double x : values) {
    if (!std::isfinite(x)) Malformed("non-finite number cannot be serialized");
  }
}

void CloseFd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kSpawnFailed:
      return "SpawnFailed";
    case ErrorKind::kHandshakeFailed:
      return "HandshakeFailed";
    case ErrorKind::kRoleMismatch:
      return "RoleMismatch";
    case ErrorKind::kTimeout:
      return "Timeout";
    case ErrorKind::kMalformed:
      return "Malformed";
    case ErrorKind::kBatchSizeMismatch:
      return "BatchSizeMismatch";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kScoreOutOfRange:
      return "ScoreOutOfRange";
    case ErrorKind::kRemoteError:
      return "RemoteError";
    case ErrorKind::kClosed:
      return "Closed";
  }
  return "Unknown";
}

ProtocolError::ProtocolError(ErrorKind kind, const std::string& message)
    : MatchError(std::string(ToString(kind)) + ": " + message), kind_(kind) {}

std::string_view ToString(MessageType type) {
  switch (type) {
    case MessageType::kHello:
      return "hello";
    case MessageType::kGenerate:
      return "generate";
    case MessageType::kSamples:
      return "samples";
    case MessageType::kJudge:
      return "judge";
    case MessageType::kScores:
      return "scores";
    case MessageType::kError:
      return "error";
    case MessageType::kShutdown:
      return "shutdown";
  }
  return "unknown";
}

std::string Serialize(const Message& message) {
  nlohmann::ordered_json j;
  j["type"] = ToString(message.type);
  switch (message.type) {
    case MessageType::kHello:
      j["role"] = ToString(message.role);
      j["name"] = message.name;
      j["dim"] = message.dim;
      j["protocol"] = message.protocol;
      break;
    case MessageType::kGenerate:
      j["count"] = message.count;
      j["seed"] = message.seed;
      break;
    case MessageType::kSamples:
    case MessageType::kJudge:
      for (const auto& row : message.data) CheckFinite(row);
      j["data"] = message.data;
      break;
    case MessageType::kScores:
      CheckFinite(message.values);
      j["values"] = message.values;
      break;
    case MessageType::kError:
      j["message"] = message.message;
      break;
    case MessageType::kShutdown:
      break;
  }
  return j.dump();
}

Message Parse(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    Malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) Malformed("message must be a JSON object");
  const std::string type = StringField(j, "type");
  Message m;
  if (type == "hello") {
    m.type = MessageType::kHello;
    try {
      m.role = ParseRole(StringField(j, "role"));
    } catch (const ConfigError& e) {
      Malformed(e.what());
    }
    m.name = j.contains("name") ? StringField(j, "name") : "";
    m.dim = j.contains("dim") ? IntField(j, "dim") : 0;
    m.protocol = IntField(j, "protocol");
  } else if (type == "generate") {
    m.type = MessageType::kGenerate;
    m.count = IntField(j, "count");
    const json& seed = Field(j, "seed");
    if (!seed.is_number_unsigned()) {
      Malformed("field 'seed' must be a non-negative integer");
    }
    m.seed = seed.get<std::uint64_t>();
  } else if (type == "samples" || type == "judge") {
    m.type = type == "samples" ? MessageType::kSamples : MessageType::kJudge;
    m.data = SampleArray(Field(j, "data"));
  } else if (type == "scores") {
    m.type = MessageType::kScores;
    m.values = NumberArray(Field(j, "values"), "field 'values'");
  } else if (type == "error") {
    m.type = MessageType::kError;
    m.message = j.contains("message") ? StringField(j, "message") : "";
  } else if (type == "shutdown") {
    m.type = MessageType::kShutdown;
  } else {
    Malformed("unknown message type '" + type + "'");
  }
  return m;
}

Batch ToBatch(const std::vector<std::vector<double>>& rows, int dim) {
  Batch batch(static_cast<Eigen::Index>(rows.size()), dim);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != dim) {
      throw ProtocolError(ErrorKind::kDimensionMismatch,
                          "sample has " + std::to_string(rows[r].size()) +
                              " coordinates, expected " + std::to_string(dim));
    }
    for (int c = 0; c < dim; ++c) batch(static_cast<Eigen::Index>(r), c) = rows[r][c];
  }
  return batch;
}

std::vector<std::vector<double>> FromBatch(const Batch& batch) {
  std::vector<std::vector<double>> rows(batch.rows());
  for (Eigen::Index r = 0; r < batch.rows(); ++r) {
    rows[r].assign(batch.cols(), 0.0);
    for (Eigen::Index c = 0; c < batch.cols(); ++c) rows[r][c] = batch(r, c);
  }
  return rows;
}

std::unique_ptr<Session> Session::Spawn(const SpawnOptions& options) {
  IgnoreSigpipe();
  if (options.command.empty()) {
    throw ProtocolError(ErrorKind::kSpawnFailed, "empty command");
  }

  // Everything the child needs is prepared before fork; only
  // async-signal-safe calls run between fork and exec.
  std::vector<std::string> argv_storage{options.command};
  argv_storage.insert(argv_storage.end(), options.args.begin(),
                      options.args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_storage) argv.push_back(s.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_storage;
  for (char** e = environ; e && *e; ++e) {
    std::string entry(*e);
    const std::string key = entry.substr(0, entry.find('='));
    if (!options.env.contains(key)) env_storage.push_back(std::move(entry));
  }
  for (const auto& [key, value] : options.env) {
    env_storage.push_back(key + "=" + value);
  }
  std::vector<char*> envp;
  for (std::string& s : env_storage) envp.push_back(s.data());
  envp.push_back(nullptr);

  int to_child[2], from_child[2], exec_status[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) {
    throw ProtocolError(ErrorKind::kSpawnFailed, std::strerror(errno));
  }
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProtocolError(ErrorKind::kSpawnFailed, std::strerror(errno));
  }
  if (::pipe2(exec_status, O_CLOEXEC) != 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
      ::close(fd);
    }
    throw ProtocolError(ErrorKind::kSpawnFailed, std::strerror(errno));
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1],
                   exec_status[0], exec_status[1]}) {
      ::close(fd);
    }
    throw ProtocolError(ErrorKind::kSpawnFailed, std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::signal(SIGPIPE, SIG_DFL);
    ::execvpe(argv[0], argv.data(), envp.data());
    const int err = errno;
    [[maybe_unused]] auto n = ::write(exec_status[1], &err, sizeof(err));
    ::_exit(127);
  }

  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(exec_status[1]);
  int exec_errno = 0;
  ssize_t n;
  do {
    n = ::read(exec_status[0], &exec_errno, sizeof(exec_errno));
  } while (n < 0 && errno == EINTR);
  ::close(exec_status[0]);

  std::unique_ptr<Session> session(new Session());
  session->pid_ = pid;
  session->to_child_ = to_child[1];
  session->from_child_ = from_child[0];
  session->request_timeout_ = options.request_timeout;
  session->label_ = options.command;
  ::fcntl(session->to_child_, F_SETFL, O_NONBLOCK);

  if (n > 0) {
    session->Kill();
    throw ProtocolError(ErrorKind::kSpawnFailed, "cannot execute '" +
                                                     options.command +
                                                     "': " + std::strerror(exec_errno));
  }

  Message hello;
  try {
    hello = session->Receive(options.handshake_timeout, /*handshake=*/true);
  } catch (const ProtocolError& e) {
    session->Kill();
    if (e.kind() == ErrorKind::kTimeout || e.kind() == ErrorKind::kHandshakeFailed) {
      throw;
    }
    throw ProtocolError(ErrorKind::kHandshakeFailed, e.what());
  }
  if (hello.type != MessageType::kHello) {
    session->Kill();
    throw ProtocolError(ErrorKind::kHandshakeFailed,
                        "expected hello, got '" +
                            std::string(ToString(hello.type)) + "'");
  }
  if (hello.protocol != kProtocolVersion) {
    session->Kill();
    throw ProtocolError(ErrorKind::kHandshakeFailed,
                        "unsupported protocol version " +
                            std::to_string(hello.protocol));
  }
  if (hello.dim < 0) {
    session->Kill();
    throw ProtocolError(ErrorKind::kHandshakeFailed, "negative dimension");
  }
  if (options.expected_role && *options.expected_role != hello.role) {
    session->Kill();
    throw ProtocolError(ErrorKind::kRoleMismatch,
                        "'" + options.command + "' declared role " +
                            std::string(ToString(hello.role)) + ", expected " +
                            std::string(ToString(*options.expected_role)));
  }
  session->role_ = hello.role;
  session->name_ = hello.name;
  session->dim_ = hello.dim;
  if (!hello.name.empty()) session->label_ = hello.name;
  return session;
}

Session::~Session() { Shutdown(); }

void Session::Send(const Message& message) {
  std::string line = Serialize(message);
  line.push_back('\n');
  const auto deadline = Clock::now() + request_timeout_;
  size_t offset = 0;
  while (offset < line.size()) {
    const ssize_t n =
        ::write(to_child_, line.data() + offset, line.size() - offset);
    if (n > 0) {
      offset += static_cast<size_t>(n);
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (left.count() <= 0) {
        broken_ = true;
        throw ProtocolError(ErrorKind::kTimeout,
                            label_ + " did not read its input in time");
      }
      pollfd pfd{to_child_, POLLOUT, 0};
      ::poll(&pfd, 1, static_cast<int>(left.count()));
      continue;
    }
    broken_ = true;
    throw ProtocolError(ErrorKind::kClosed,
                        label_ + " closed its input: " + std::strerror(errno));
  }
}

Message Session::Receive(std::chrono::milliseconds timeout, bool handshake) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const size_t newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      return Parse(line);
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      broken_ = true;
      throw ProtocolError(ErrorKind::kTimeout,
                          label_ + (handshake ? " sent no hello" : " did not respond") +
                              " within " + std::to_string(timeout.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    char chunk[65536];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      broken_ = true;
      throw ProtocolError(handshake ? ErrorKind::kHandshakeFailed : ErrorKind::kClosed,
                          label_ + " exited" +
                              (handshake ? " before sending hello" : " mid-request"));
    }
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

Message Session::Request(const Message& message) {
  if (broken_ || pid_ < 0) {
    throw ProtocolError(ErrorKind::kClosed, label_ + " is no longer running");
  }
  Send(message);
  Message reply;
  try {
    reply = Receive(request_timeout_, /*handshake=*/false);
  } catch (const ProtocolError& e) {
    if (e.kind() == ErrorKind::kMalformed) broken_ = true;
    throw;
  }
  if (reply.type == MessageType::kError) {
    throw ProtocolError(ErrorKind::kRemoteError, label_ + ": " + reply.message);
  }
  return reply;
}

Batch Session::Generate(int count, std::uint64_t seed) {
  std::lock_guard<std::mutex> lock(mu_);
  if (role_ != Role::kGenerator) {
    throw ProtocolError(ErrorKind::kRoleMismatch, label_ + " is not a generator");
  }
  if (count < 0) throw std::invalid_argument("negative sample count");
  Message request;
  request.type = MessageType::kGenerate;
  request.count = count;
  request.seed = seed;
  const Message reply = Request(request);
  if (reply.type != MessageType::kSamples) {
    throw ProtocolError(ErrorKind::kMalformed,
                        "expected samples, got '" +
                            std::string(ToString(reply.type)) + "'");
  }
  if (static_cast<int>(reply.data.size()) != count) {
    throw ProtocolError(ErrorKind::kBatchSizeMismatch,
                        label_ + " returned " + std::to_string(reply.data.size()) +
                            " samples, expected " + std::to_string(count));
  }
  int dim = dim_;
  if (dim == 0) dim = reply.data.empty() ? 0 : static_cast<int>(reply.data[0].size());
  return ToBatch(reply.data, dim);
}

std::vector<double> Session::Judge(const Batch& batch) {
  std::lock_guard<std::mutex> lock(mu_);
  if (role_ != Role::kDiscriminator) {
    throw ProtocolError(ErrorKind::kRoleMismatch,
                        label_ + " is not a discriminator");
  }
  if (dim_ > 0 && batch.rows() > 0 && batch.cols() != dim_) {
    throw ProtocolError(ErrorKind::kDimensionMismatch,
                        "batch has dimension " + std::to_string(batch.cols()) +
                            ", " + label_ + " expects " + std::to_string(dim_));
  }
  Message request;
  request.type = MessageType::kJudge;
  request.data = FromBatch(batch);
  const Message reply = Request(request);
  if (reply.type != MessageType::kScores) {
    throw ProtocolError(ErrorKind::kMalformed,
                        "expected scores, got '" +
                            std::string(ToString(reply.type)) + "'");
  }
  if (static_cast<Eigen::Index>(reply.values.size()) != batch.rows()) {
    throw ProtocolError(ErrorKind::kBatchSizeMismatch,
                        label_ + " returned " + std::to_string(reply.values.size()) +
                            " scores for " + std::to_string(batch.rows()) +
                            " samples");
  }
  for (double v : reply.values) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ProtocolError(ErrorKind::kScoreOutOfRange,
                          label_ + " returned score " + std::to_string(v));
    }
  }
  return reply.values;
}

void Session::Kill() {
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    while (::waitpid(pid_, nullptr, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
  }
  CloseFd(to_child_);
  CloseFd(from_child_);
  broken_ = true;
}

void Session::Shutdown() {
  std::lock_guard<std::mutex> lock(mu_);
  if (pid_ <= 0) return;
  if (!broken_) {
    Message bye;
    bye.type = MessageType::kShutdown;
    try {
      Send(bye);
    } catch (const ProtocolError&) {
    }
  }
  CloseFd(to_child_);
  const auto deadline = Clock::now() + kReapGrace;
  while (Clock::now() < deadline) {
    const pid_t done = ::waitpid(pid_, nullptr, WNOHANG);
    if (done == pid_ || (done < 0 && errno != EINTR)) {
      pid_ = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  Kill();
}

ExternalGenerator::ExternalGenerator(std::shared_ptr<Session> session)
    : session_(std::move(session)) {
  if (!session_ || session_->role() != Role::kGenerator) {
    throw ConfigError("ExternalGenerator needs a generator session");
  }
}

int ExternalGenerator::dim() const {
  return session_->dim() > 0 ? session_->dim() : -1;
}

Batch ExternalGenerator::Generate(int count, std::uint64_t seed) {
  return session_->Generate(count, seed);
}

ExternalDiscriminator::ExternalDiscriminator(std::shared_ptr<Session> session)
    : session_(std::move(session)) {
  if (!session_ || session_->role() != Role::kDiscriminator) {
    throw ConfigError("ExternalDiscriminator needs a discriminator session");
  }
}

std::vector<double> ExternalDiscriminator::Judge(const Batch& batch,
                                                 std::uint64_t /*seed*/) {
  return session_->Judge(batch);
}

}  // namespace arena::ext
