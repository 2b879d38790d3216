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

#ifndef ARENA_STORE_H_
#define ARENA_STORE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/error.h"
#include "arena/glicko.h"
#include "arena/records.h"
#include "arena/tournament.h"
#include "arena/toy_players.h"

namespace arena {

// ---------------------------------------------------------------------------
// Configuration
//
// Configs are JSON documents; // and /* */ comments are allowed and unknown
// keys are rejected. Example:
//
//   {
//     "seed": 7,
//     "task": {"dim": 50, "seed": 1, "rows": 100},
//     "players": [
//       {"type": "trajectory", "name": "toy", "checkpoints": 20,
//        "discriminators": "oracle"},
//       {"type": "real_data", "id": "real"}
//     ],
//     "schedule": {"kind": "round_robin"}
//   }

struct TaskConfig {
  int dim = 50;
  std::uint64_t seed = 0;
  int rows = 0;  // 0 = dim
};

struct ExternalConfig {
  std::string command;
  std::vector<std::string> args;
  std::map<std::string, std::string> env;
  double handshake_timeout_s = 30.0;
  double request_timeout_s = 60.0;
};

enum class PlayerType { kTrajectory, kRealData, kTransform, kOracle, kConstant, kExternal };

std::string_view ToString(PlayerType type);

// One entry of the "players" list. Which fields apply depends on `type`.
struct PlayerConfig {
  PlayerType type = PlayerType::kRealData;
  std::string id;  // trajectory: the name prefix for its checkpoint ids
  std::optional<std::string> experiment;
  std::optional<int> iteration;

  // trajectory
  int checkpoints = 20;
  double mastery_fraction = 1.0;
  double reach = 1.0;
  std::uint64_t seed = 0;
  bool generators = true;
  std::optional<toy::DiscriminatorKind> discriminators =
      toy::DiscriminatorKind::kOracle;
  std::optional<std::vector<int>> include;
  int reservoir_capacity = toy::kChekhovReservoir;
  std::uint64_t reservoir_seed = 0;

  // transform
  std::string base;
  toy::TransformKind transform = toy::TransformKind::kAdditiveNoise;
  int severity = 1;

  // oracle: fake model is a trajectory checkpoint or a transformed data
  // distribution.
  std::string against_trajectory;
  int against_checkpoint = 0;
  std::optional<toy::TransformKind> against_transform;
  int against_severity = 1;

  // constant
  double value = 0.0;

  // external
  Role role = Role::kGenerator;
  ExternalConfig external;
};

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::kRoundRobin;
  std::optional<int> band_width;
  int repeats = 1;
  std::vector<ScheduledMatch> matches;  // explicit schedules
};

struct OutputConfig {
  std::string dir = "arena_out";
  std::string log = "matches.jsonl";
  bool svg = true;
};

struct TournamentConfig {
  std::uint64_t seed = 0;
  int batch_size = 64;
  double threshold = 0.5;
  int threads = 0;
  FailureMode failure_mode = FailureMode::kFatal;
  std::optional<TaskConfig> task;
  std::optional<ExternalConfig> data;  // real-data source; default: the task
  std::vector<PlayerConfig> players;
  ScheduleConfig schedule;
  RatingConfig rating;
  OutputConfig outputs;
  // The effective document, after overrides.
  nlohmann::json document;
};

// Reads a config file, allowing comments. Throws ConfigError.
nlohmann::json ReadConfigJson(const std::filesystem::path& path);
// Validates the document and every value in it. Throws ConfigError.
TournamentConfig ParseConfig(const nlohmann::json& document);
// FNV-1a of the canonical (sorted-key, compact) serialization of the parts
// that determine match outcomes (everything but "rating", "outputs" and
// "threads"), as 16 hex digits.
std::string ConfigHash(const nlohmann::json& document);

// Player identities a config defines, without constructing any player.
std::vector<PlayerSpec> PlayerSpecs(const TournamentConfig& config);
// Checkpoint ids are "<name>/G07" and "<name>/D07", zero-padded to the
// width of the largest index (at least 2).
std::string CheckpointId(const std::string& name, Role role, int checkpoint,
                         int n_checkpoints);

// Live players plus the real-data source they are judged against.
struct BuiltTournament {
  Population population;
  std::shared_ptr<Generator> data;
  std::optional<toy::GaussianTask> task;
  // Trajectories by name, for ground-truth lookups.
  std::map<std::string, std::vector<toy::ToyGenerator>> trajectories;
};

// Constructs every player (spawning external processes). Throws
// ConfigError or ext::ProtocolError.
BuiltTournament BuildTournament(const TournamentConfig& config);

Schedule BuildSchedule(const ScheduleConfig& config,
                       std::span<const PlayerSpec> players);

// ---------------------------------------------------------------------------
// Match log: one JSON header line followed by one JSON line per record.

inline constexpr std::string_view kLogFormat = "arena-log/1";

struct LogHeader {
  std::string format{kLogFormat};
  std::string config_hash;
  std::uint64_t seed = 0;

  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

class LogError : public Error {
 public:
  using Error::Error;
};

std::string SerializeHeader(const LogHeader& header);
std::string SerializeRecord(const MatchRecord& record);
// Throw LogError on malformed input.
LogHeader ParseHeader(std::string_view line);
MatchRecord ParseRecord(std::string_view line);

struct LogContents {
  std::optional<LogHeader> header;
  std::vector<MatchRecord> records;
  // "line N: reason" for every skipped line (lenient reads only).
  std::vector<std::string> skipped;
};

// Strict reads throw LogError at the first bad line, naming its number;
// lenient reads skip bad record lines. A missing or bad header is always an
// error unless the file is empty.
LogContents ReadLog(const std::filesystem::path& path, bool strict);

// Writes a whole log, replacing any existing file.
void WriteLog(const std::filesystem::path& path, const LogHeader& header,
              std::span<const MatchRecord> records);

// Appends records one at a time, flushing each line.
class LogWriter {
 public:
  // Creates or truncates `path` and writes the header.
  static LogWriter Create(const std::filesystem::path& path,
                          const LogHeader& header);
  // Opens an existing log for appending.
  static LogWriter Append(const std::filesystem::path& path);

  void Write(const MatchRecord& record);

 private:
  explicit LogWriter(std::ofstream out) : out_(std::move(out)) {}
  std::ofstream out_;
};

}  // namespace arena

#endif  // ARENA_STORE_H_
