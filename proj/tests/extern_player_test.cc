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

#include <sys/wait.h>

#include <cerrno>
#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "arena/rng.h"
#include "arena/tournament.h"
#include "gtest/gtest.h"

namespace arena::ext {
namespace {

using std::chrono::milliseconds;

SpawnOptions Echo(const std::string& role, std::vector<std::string> extra = {}) {
  SpawnOptions o;
  o.command = ARENA_ECHO_PLAYER;
  o.args = {"--role", role, "--dim", "3"};
  o.args.insert(o.args.end(), extra.begin(), extra.end());
  o.handshake_timeout = milliseconds(5000);
  o.request_timeout = milliseconds(5000);
  return o;
}

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const ProtocolError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no ProtocolError raised";
  return ErrorKind::kClosed;
}

bool Reaped(pid_t pid) {
  errno = 0;
  return waitpid(pid, nullptr, WNOHANG) == -1 && errno == ECHILD;
}

TEST(SessionTest, HandshakeAndGenerate) {
  auto session = Session::Spawn(Echo("generator", {"--name", "echo"}));
  EXPECT_EQ(session->role(), Role::kGenerator);
  EXPECT_EQ(session->name(), "echo");
  EXPECT_EQ(session->dim(), 3);
  const Batch b = session->Generate(64, 11);
  EXPECT_EQ(b.rows(), 64);
  EXPECT_EQ(b.cols(), 3);
  EXPECT_EQ(session->Generate(64, 11), b);
  const Batch empty = session->Generate(0, 1);
  EXPECT_EQ(empty.rows(), 0);
  EXPECT_EQ(empty.cols(), 3);
  const pid_t pid = session->pid();
  session->Shutdown();
  EXPECT_TRUE(Reaped(pid));
}

TEST(SessionTest, Judge) {
  auto session = Session::Spawn(Echo("discriminator", {"--value", "0.25"}));
  const std::vector<double> s = session->Judge(Batch::Zero(10, 3));
  ASSERT_EQ(s.size(), 10u);
  for (double v : s) EXPECT_EQ(v, 0.25);
}

TEST(SessionTest, RoleMismatch) {
  SpawnOptions o = Echo("discriminator");
  o.expected_role = Role::kGenerator;
  EXPECT_EQ(KindOf([&] { Session::Spawn(o); }), ErrorKind::kRoleMismatch);
}

TEST(SessionTest, ExitBeforeHello) {
  EXPECT_EQ(KindOf([] { Session::Spawn(Echo("generator", {"--mode", "exit-before-hello"})); }),
            ErrorKind::kHandshakeFailed);
}

TEST(SessionTest, HandshakeTimeout) {
  SpawnOptions o = Echo("generator", {"--mode", "no-hello"});
  o.handshake_timeout = milliseconds(200);
  const auto start = std::chrono::steady_clock::now();
  const ErrorKind kind = KindOf([&] { Session::Spawn(o); });
  EXPECT_TRUE(kind == ErrorKind::kTimeout || kind == ErrorKind::kHandshakeFailed);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(4));
}

TEST(SessionTest, ProtocolVersionMismatch) {
  EXPECT_EQ(KindOf([] { Session::Spawn(Echo("generator", {"--protocol", "99"})); }),
            ErrorKind::kHandshakeFailed);
}

TEST(SessionTest, MissingExecutable) {
  SpawnOptions o;
  o.command = "/nonexistent/arena-player";
  EXPECT_EQ(KindOf([&] { Session::Spawn(o); }), ErrorKind::kSpawnFailed);
}

TEST(SessionTest, ShortBatch) {
  auto session = Session::Spawn(Echo("generator", {"--mode", "short-batch"}));
  EXPECT_EQ(KindOf([&] { session->Generate(64, 1); }), ErrorKind::kBatchSizeMismatch);
}

TEST(SessionTest, WrongDimension) {
  auto session = Session::Spawn(Echo("generator", {"--mode", "wrong-dim"}));
  EXPECT_EQ(KindOf([&] { session->Generate(4, 1); }), ErrorKind::kDimensionMismatch);
}

TEST(SessionTest, ScoreOutOfRange) {
  auto session = Session::Spawn(Echo("discriminator", {"--mode", "out-of-range"}));
  EXPECT_EQ(KindOf([&] { session->Judge(Batch::Zero(5, 3)); }),
            ErrorKind::kScoreOutOfRange);
}

TEST(SessionTest, GarbageAndRemoteErrors) {
  auto garbage = Session::Spawn(Echo("generator", {"--mode", "garbage"}));
  EXPECT_EQ(KindOf([&] { garbage->Generate(2, 1); }), ErrorKind::kMalformed);
  EXPECT_EQ(KindOf([&] { garbage->Generate(2, 1); }), ErrorKind::kClosed);
  auto refusing = Session::Spawn(Echo("generator", {"--mode", "error"}));
  EXPECT_EQ(KindOf([&] { refusing->Generate(2, 1); }), ErrorKind::kRemoteError);
}

TEST(SessionTest, RequestTimeoutKillsChild) {
  SpawnOptions o = Echo("generator", {"--mode", "hang"});
  o.request_timeout = milliseconds(200);
  auto session = Session::Spawn(o);
  const pid_t pid = session->pid();
  EXPECT_EQ(KindOf([&] { session->Generate(2, 1); }), ErrorKind::kTimeout);
  session.reset();
  EXPECT_TRUE(Reaped(pid));
}

TEST(SessionTest, CrashIsReportedAsClosed) {
  auto session = Session::Spawn(Echo("generator", {"--crash-after", "1"}));
  EXPECT_NO_THROW(session->Generate(2, 1));
  EXPECT_EQ(KindOf([&] { session->Generate(2, 1); }), ErrorKind::kClosed);
}

TEST(SessionTest, DestructorReapsChildren) {
  std::vector<pid_t> pids;
  for (int i = 0; i < 5; ++i) {
    auto s = Session::Spawn(Echo(i % 2 ? "generator" : "discriminator"));
    pids.push_back(s->pid());
  }
  for (pid_t pid : pids) EXPECT_TRUE(Reaped(pid));
}

Message RandomMessage(MessageType type, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> real(-1e6, 1e6);
  std::uniform_int_distribution<int> small(0, 6);
  auto text = [&] {
    const std::vector<std::string> alphabet = {"a", "b", " ", "\"", "\\",
                                               "\n", "\t", "{", ":", "\xc3\xa9"};
    std::string s;
    for (int i = small(rng); i > 0; --i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  Message m;
  m.type = type;
  switch (type) {
    case MessageType::kHello:
      m.role = rng() % 2 ? Role::kGenerator : Role::kDiscriminator;
      m.name = text();
      m.dim = small(rng);
      m.protocol = small(rng);
      break;
    case MessageType::kGenerate:
      m.count = small(rng) * 10;
      m.seed = rng();
      break;
    case MessageType::kSamples:
    case MessageType::kJudge: {
      const int dim = 1 + small(rng);
      m.data.resize(small(rng));
      for (auto& row : m.data) {
        row.resize(dim);
        for (double& v : row) v = real(rng) * std::ldexp(1.0, small(rng) - 40);
      }
      break;
    }
    case MessageType::kScores:
      m.values.resize(small(rng));
      for (double& v : m.values) v = std::generate_canonical<double, 53>(rng);
      break;
    case MessageType::kError:
      m.message = text();
      break;
    case MessageType::kShutdown:
      break;
  }
  return m;
}

TEST(ProtocolTest, SerializeParseRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    for (MessageType type :
         {MessageType::kHello, MessageType::kGenerate, MessageType::kSamples,
          MessageType::kJudge, MessageType::kScores, MessageType::kError,
          MessageType::kShutdown}) {
      const Message m = RandomMessage(type, rng);
      const std::string line = Serialize(m);
      EXPECT_EQ(line.find('\n'), std::string::npos);
      EXPECT_EQ(Parse(line), m) << line;
    }
  }
}

TEST(ProtocolTest, MalformedLines) {
  for (const char* line :
       {"", "[]", "{\"type\":\"nope\"}", "{\"type\":\"generate\",\"count\":1}",
        "{\"type\":\"generate\",\"count\":1,\"seed\":-4}",
        "{\"type\":\"scores\",\"values\":[\"x\"]}", "{\"type\":\"hello\"}"}) {
    EXPECT_EQ(KindOf([&] { Parse(line); }), ErrorKind::kMalformed) << line;
  }
}

// Data source for the isolation test: standard normal, dimension 3.
class Normal3 : public Generator {
 public:
  int dim() const override { return 3; }
  Batch Generate(int count, std::uint64_t seed) override {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    Batch b(count, 3);
    for (int i = 0; i < b.size(); ++i) b.data()[i] = normal(rng);
    return b;
  }
};

Player External(const std::string& id, const SpawnOptions& options) {
  std::shared_ptr<Session> session = Session::Spawn(options);
  Player p;
  p.spec.id = id;
  p.spec.role = session->role();
  p.spec.kind = PlayerKind::kExternal;
  if (session->role() == Role::kGenerator) {
    p.generator = std::make_shared<ExternalGenerator>(session);
  } else {
    p.discriminator = std::make_shared<ExternalDiscriminator>(session);
  }
  return p;
}

TEST(ExternalPlayersTest, CrashFailsOnlyItsOwnMatches) {
  auto population = [](bool with_crasher) {
    Population pop;
    pop.Add(External("G1", Echo("generator", {"--mean", "0.5"})));
    pop.Add(External("G2", Echo("generator", {"--mean", "1.5"})));
    if (with_crasher) pop.Add(External("G3", Echo("generator", {"--crash-after", "1"})));
    pop.Add(External("D1", Echo("discriminator", {"--value", "0.3"})));
    pop.Add(External("D2", Echo("discriminator", {"--value", "0.7"})));
    return pop;
  };
  Normal3 data;
  RunSettings settings;
  settings.seed = 5;
  settings.threads = 3;
  settings.failure_mode = FailureMode::kSkip;

  const Population clean = population(false);
  const RunResult base = RunTournament(
      RoundRobin(clean.generators(), clean.discriminators(), 2), clean, data, settings);
  ASSERT_EQ(base.records.size(), 8u);

  const Population crashing = population(true);
  const RunResult result = RunTournament(
      RoundRobin(crashing.generators(), crashing.discriminators(), 2), crashing,
      data, settings);
  std::vector<MatchRecord> others;
  int crasher_records = 0;
  for (const MatchRecord& r : result.records) {
    if (r.generator_id == "G3") {
      ++crasher_records;
    } else {
      others.push_back(r);
    }
  }
  EXPECT_EQ(others, base.records);
  EXPECT_EQ(crasher_records, 1);
  EXPECT_EQ(result.failures.size(), 3u);
  for (const MatchFailure& f : result.failures) EXPECT_EQ(f.match.generator_id, "G3");
}

}  // namespace
}  // namespace arena::ext
