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

#ifndef ARENA_APP_H_
#define ARENA_APP_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arena/glicko.h"
#include "arena/store.h"
#include "arena/summarize.h"
#include "arena/tournament.h"

// The operations behind the `arena` command line tool.
namespace arena::app {

// Command-line values that replace config entries.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> batch_size;
  std::optional<double> threshold;
  std::optional<std::string> schedule;
  std::optional<int> band_width;
  std::optional<int> passes;
  std::optional<double> tau;
  std::optional<std::string> outcome_mode;
  std::optional<std::string> out_dir;
};

// Returns `document` with the overrides written into it.
nlohmann::json ApplyOverrides(nlohmann::json document, const Overrides& overrides);

// The rating overrides alone, for commands that run without a config.
// Throws ConfigError on invalid values.
RatingConfig ApplyRatingOverrides(RatingConfig rating, const Overrides& overrides);

// Reads, overrides, and validates a config file.
TournamentConfig LoadConfig(const std::filesystem::path& path,
                            const Overrides& overrides);

struct Outcome {
  TournamentConfig config;
  std::vector<PlayerSpec> players;
  std::vector<MatchRecord> records;
  std::vector<MatchFailure> failures;
  TournamentRatings ratings;
  TournamentSummary summary;
  std::filesystem::path out_dir;
  std::filesystem::path log_path;
};

// Writes summary.csv, heatmap.csv and, if enabled, heatmap.svg and
// curves.svg into `dir`.
void WriteArtifacts(const TournamentSummary& summary,
                    const std::filesystem::path& dir, bool svg,
                    const std::string& title);

// validate -> play -> rate -> summarize. The log is written as matches
// finish. Progress and the summary table go to `out`.
Outcome Run(const TournamentConfig& config, std::ostream& out);

// Re-rates a stored log without replaying any match. `players` supplies
// metadata; if empty, players are inferred from the records. Artifacts go
// to `out_dir`.
Outcome Rate(const std::filesystem::path& log_path, const RatingConfig& rating,
             std::span<const PlayerSpec> players,
             const std::filesystem::path& out_dir, bool strict, bool svg,
             std::ostream& out);

// Adds the players of `additions` (a document with a "players" list) to the
// population of `config`, plays only the matches involving them (each new
// generator against every existing discriminator and each new
// discriminator against every existing generator), appends them to the log,
// and re-rates everything. Refuses a log whose config hash differs from
// `config` unless `force` is set.
Outcome Extend(const std::filesystem::path& log_path,
               const TournamentConfig& config, const nlohmann::json& additions,
               bool force, std::ostream& out);

// The schedule a config would play, after validation.
Schedule PlanSchedule(const TournamentConfig& config,
                      ScheduleDiagnostics* diagnostics = nullptr);

}  // namespace arena::app

#endif  // ARENA_APP_H_
