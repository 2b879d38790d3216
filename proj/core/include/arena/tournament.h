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

#ifndef ARENA_TOURNAMENT_H_
#define ARENA_TOURNAMENT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arena/records.h"

namespace arena {

// A batch of samples, one sample per row.
using Batch = Eigen::MatrixXd;

class Generator {
 public:
  virtual ~Generator() = default;
  // Sample dimension, or -1 if not known until the first batch.
  virtual int dim() const = 0;
  // Returns `count` samples. Must be a pure function of `seed` for
  // in-process players.
  virtual Batch Generate(int count, std::uint64_t seed) = 0;
};

class Discriminator {
 public:
  virtual ~Discriminator() = default;
  // One score in [0, 1] per row; high means "judged real".
  virtual std::vector<double> Judge(const Batch& batch, std::uint64_t seed) = 0;
};

// A tournament participant: its identity plus the implementation of its
// role. Exactly one of `generator` / `discriminator` is set.
struct Player {
  PlayerSpec spec;
  std::shared_ptr<Generator> generator;
  std::shared_ptr<Discriminator> discriminator;
};

class Population {
 public:
  // Throws ConfigError on duplicate ids or a player whose implementation
  // does not match its role.
  void Add(Player player);
  const Player& at(const std::string& id) const;
  const Player* find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }

  const std::vector<Player>& players() const { return players_; }
  std::vector<PlayerSpec> specs() const;
  std::vector<PlayerSpec> generators() const;
  std::vector<PlayerSpec> discriminators() const;

 private:
  std::vector<Player> players_;
  std::map<std::string, size_t> index_;
};

enum class ScheduleKind { kRoundRobin, kBand, kExplicit };

std::string_view ToString(ScheduleKind kind);
ScheduleKind ParseScheduleKind(std::string_view text);

struct ScheduledMatch {
  std::string generator_id;
  std::string discriminator_id;
  int repeat = 0;

  friend bool operator==(const ScheduledMatch&, const ScheduledMatch&) =
      default;
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::kExplicit;
  std::optional<int> band_width;
  std::vector<ScheduledMatch> matches;
};

// Every generator against every discriminator, `repeats` times, ordered by
// generator id, discriminator id, then repeat. Throws ConfigError on an
// empty pool or repeats < 1.
Schedule RoundRobin(std::span<const PlayerSpec> generators,
                    std::span<const PlayerSpec> discriminators,
                    int repeats = 1);

// Round-robin restricted to pairs whose checkpoint iterations differ by at
// most `width`. Every player needs iteration metadata.
Schedule Band(std::span<const PlayerSpec> generators,
              std::span<const PlayerSpec> discriminators, int width,
              int repeats = 1);

struct ScheduleDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  int components = 0;

  bool ok() const { return errors.empty(); }
};

// Reports unknown ids, role violations, and the number of connected
// components of the bipartite match graph. Disconnected components rate on
// mutually incomparable scales, so they produce a warning.
ScheduleDiagnostics Validate(const Schedule& schedule,
                             std::span<const PlayerSpec> players);

// Checkpoint indices in [0, total) that sample early iterations more densely.
std::vector<int> EarlyDenseCheckpoints(int total, int count);

struct MatchSettings {
  int batch_size = 64;
  double threshold = 0.5;
};

// Plays one match. The discriminator judges a fake batch from `generator`
// and a real batch from `data`. A fake sample with score >= threshold and a
// real sample with score <= threshold are generator wins.
MatchRecord PlayMatch(const Player& generator, const Player& discriminator,
                      Generator& data, const MatchSettings& settings,
                      std::uint64_t match_seed);

enum class FailureMode { kFatal, kSkip };

std::string_view ToString(FailureMode mode);
FailureMode ParseFailureMode(std::string_view text);

struct RunSettings {
  MatchSettings match;
  std::uint64_t seed = 0;
  FailureMode failure_mode = FailureMode::kFatal;
  int threads = 0;  // 0 = hardware concurrency
};

struct MatchFailure {
  ScheduledMatch match;
  std::string message;
};

struct RunResult {
  std::vector<MatchRecord> records;
  std::vector<MatchFailure> failures;
};

// Called once per finished match, in schedule order.
using RecordSink = std::function<void(const MatchRecord&)>;

// Plays every scheduled match. Records are a pure function of the schedule,
// the player definitions, and the tournament seed; they are delivered to
// `sink` in schedule order even when matches run concurrently.
RunResult RunTournament(const Schedule& schedule, const Population& players,
                        Generator& data, const RunSettings& settings,
                        const RecordSink& sink = nullptr);

}  // namespace arena

#endif  // ARENA_TOURNAMENT_H_
