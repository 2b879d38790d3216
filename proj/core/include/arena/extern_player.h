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

#ifndef ARENA_EXTERN_PLAYER_H_
#define ARENA_EXTERN_PLAYER_H_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/error.h"
#include "arena/records.h"
#include "arena/tournament.h"

// Runs an external process as a tournament player. Host and child exchange
// one JSON object per line over the child's stdin/stdout:
//
//   child -> host  {"type":"hello","role":"generator","name":"g","dim":50,"protocol":1}
//   host -> child  {"type":"generate","count":64,"seed":123}
//                  {"type":"judge","data":[[...],...]}
//                  {"type":"shutdown"}
//   child -> host  {"type":"samples","data":[[...],...]}
//                  {"type":"scores","values":[0.73,...]}
//                  {"type":"error","message":"..."}
//
// Numbers travel as decimal doubles; values survive to ~1e-12 relative but
// bit-exactness across the boundary is not promised.
namespace arena::ext {

inline constexpr int kProtocolVersion = 1;

enum class ErrorKind {
  kSpawnFailed,
  kHandshakeFailed,
  kRoleMismatch,
  kTimeout,
  kMalformed,
  kBatchSizeMismatch,
  kDimensionMismatch,
  kScoreOutOfRange,
  kRemoteError,
  kClosed,
};

std::string_view ToString(ErrorKind kind);

class ProtocolError : public MatchError {
 public:
  ProtocolError(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

enum class MessageType {
  kHello,
  kGenerate,
  kSamples,
  kJudge,
  kScores,
  kError,
  kShutdown,
};

std::string_view ToString(MessageType type);

struct Message {
  MessageType type = MessageType::kShutdown;
  // hello
  Role role = Role::kGenerator;
  std::string name;
  int dim = 0;
  int protocol = kProtocolVersion;
  // generate
  int count = 0;
  std::uint64_t seed = 0;
  // samples, judge
  std::vector<std::vector<double>> data;
  // scores
  std::vector<double> values;
  // error
  std::string message;

  friend bool operator==(const Message&, const Message&) = default;
};

// One line of JSON without the trailing newline.
std::string Serialize(const Message& message);
// Throws ProtocolError(kMalformed) on bad JSON, unknown types, missing or
// mistyped fields, and ragged sample arrays.
Message Parse(std::string_view line);

Batch ToBatch(const std::vector<std::vector<double>>& rows, int dim);
std::vector<std::vector<double>> FromBatch(const Batch& batch);

struct SpawnOptions {
  std::string command;
  std::vector<std::string> args;
  // Added to (or overriding) the host environment.
  std::map<std::string, std::string> env;
  // If set, a child declaring a different role is rejected.
  std::optional<Role> expected_role;
  std::chrono::milliseconds handshake_timeout{30000};
  std::chrono::milliseconds request_timeout{60000};
};

// A running child process. At most one request is in flight; concurrent
// callers are serialized. A timeout or broken pipe leaves the session
// unusable and every later request fails with kClosed.
class Session {
 public:
  // Starts the child and waits for its hello.
  static std::unique_ptr<Session> Spawn(const SpawnOptions& options);
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  Role role() const { return role_; }
  const std::string& name() const { return name_; }
  // Declared sample dimension; 0 if the child did not declare one.
  int dim() const { return dim_; }
  pid_t pid() const { return pid_; }

  Batch Generate(int count, std::uint64_t seed);
  std::vector<double> Judge(const Batch& batch);

  // Sends shutdown, closes the pipes, and reaps the child (killing it if it
  // does not exit promptly). Idempotent.
  void Shutdown();

 private:
  Session() = default;

  void Send(const Message& message);
  Message Receive(std::chrono::milliseconds timeout, bool handshake);
  Message Request(const Message& message);
  void Kill();

  std::mutex mu_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool broken_ = false;
  Role role_ = Role::kGenerator;
  std::string name_;
  int dim_ = 0;
  std::string label_;
  std::chrono::milliseconds request_timeout_{60000};
};

class ExternalGenerator : public Generator {
 public:
  explicit ExternalGenerator(std::shared_ptr<Session> session);
  int dim() const override;
  Batch Generate(int count, std::uint64_t seed) override;

 private:
  std::shared_ptr<Session> session_;
};

class ExternalDiscriminator : public Discriminator {
 public:
  explicit ExternalDiscriminator(std::shared_ptr<Session> session);
  std::vector<double> Judge(const Batch& batch, std::uint64_t seed) override;

 private:
  std::shared_ptr<Session> session_;
};

}  // namespace arena::ext

#endif  // ARENA_EXTERN_PLAYER_H_
