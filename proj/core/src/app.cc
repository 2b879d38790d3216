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

#include "arena/app.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <utility>

#include "arena/rng.h"

namespace arena::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json& Child(json& document, const char* key) {
  if (!document.contains(key)) document[key] = json::object();
  return document[key];
}

void WriteFile(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  body(out);
}

std::string Join(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += (out.empty() ? "" : "; ") + l;
  return out;
}

RunSettings Settings(const TournamentConfig& config, std::uint64_t seed) {
  RunSettings s;
  s.match.batch_size = config.batch_size;
  s.match.threshold = config.threshold;
  s.seed = seed;
  s.failure_mode = config.failure_mode;
  s.threads = config.threads;
  return s;
}

void Report(const std::vector<MatchFailure>& failures, std::ostream& out) {
  for (const MatchFailure& f : failures) {
    out << "skipped match " << f.match.generator_id << " vs "
        << f.match.discriminator_id << " (repeat " << f.match.repeat
        << "): " << f.message << '\n';
  }
}

void Finish(Outcome& o, bool svg, std::ostream& out) {
  // Without a roster (rate from a bare log) every id in the log is a player.
  std::optional<std::span<const PlayerSpec>> roster;
  if (!o.players.empty()) roster = o.players;
  o.ratings = RateTournament(o.records, o.config.rating, roster);
  o.summary = Summarize(o.records, o.ratings, o.players);
  WriteArtifacts(o.summary, o.out_dir, svg, o.log_path.stem().string());
  WriteSummaryTable(out, o.summary);
}

}  // namespace

json ApplyOverrides(json document, const Overrides& o) {
  if (!document.is_object()) throw ConfigError("config must be a JSON object");
  if (o.seed) document["seed"] = *o.seed;
  if (o.batch_size) document["batch_size"] = *o.batch_size;
  if (o.threshold) document["threshold"] = *o.threshold;
  if (o.schedule) Child(document, "schedule")["kind"] = *o.schedule;
  if (o.band_width) Child(document, "schedule")["band_width"] = *o.band_width;
  if (o.passes) Child(document, "rating")["passes"] = *o.passes;
  if (o.tau) Child(document, "rating")["tau"] = *o.tau;
  if (o.outcome_mode) Child(document, "rating")["outcome_mode"] = *o.outcome_mode;
  if (o.out_dir) Child(document, "outputs")["dir"] = *o.out_dir;
  return document;
}

RatingConfig ApplyRatingOverrides(RatingConfig rating, const Overrides& o) {
  if (o.passes) rating.max_passes = *o.passes;
  if (o.tau) rating.tau = *o.tau;
  if (o.outcome_mode) rating.outcome_mode = ParseOutcomeMode(*o.outcome_mode);
  rating.Validate();
  return rating;
}

TournamentConfig LoadConfig(const fs::path& path, const Overrides& overrides) {
  return ParseConfig(ApplyOverrides(ReadConfigJson(path), overrides));
}

void WriteArtifacts(const TournamentSummary& summary, const fs::path& dir,
                    bool svg, const std::string& title) {
  fs::create_directories(dir);
  WriteFile(dir / "summary.csv",
            [&](std::ostream& out) { WriteSummaryCsv(out, summary); });
  WriteFile(dir / "heatmap.csv", [&](std::ostream& out) {
    WriteHeatmapCsv(out, summary.heatmap, summary.players);
  });
  if (svg) {
    WriteFile(dir / "heatmap.svg", [&](std::ostream& out) {
      WriteHeatmapSvg(out, summary.heatmap, title);
    });
    WriteFile(dir / "curves.svg", [&](std::ostream& out) {
      WriteCurvesSvg(out, summary.curves, title);
    });
  }
}

Schedule PlanSchedule(const TournamentConfig& config,
                      ScheduleDiagnostics* diagnostics) {
  const std::vector<PlayerSpec> players = PlayerSpecs(config);
  Schedule schedule = BuildSchedule(config.schedule, players);
  ScheduleDiagnostics diag = Validate(schedule, players);
  if (diagnostics != nullptr) {
    *diagnostics = diag;
  } else if (!diag.ok()) {
    throw ConfigError("invalid schedule: " + Join(diag.errors));
  }
  return schedule;
}

Outcome Run(const TournamentConfig& config, std::ostream& out) {
  Outcome o;
  o.config = config;
  o.players = PlayerSpecs(config);
  ScheduleDiagnostics diag;
  const Schedule schedule = PlanSchedule(config, &diag);
  if (!diag.ok()) throw ConfigError("invalid schedule: " + Join(diag.errors));
  for (const std::string& w : diag.warnings) out << "warning: " << w << '\n';

  BuiltTournament built = BuildTournament(config);
  o.out_dir = config.outputs.dir;
  o.log_path = o.out_dir / config.outputs.log;
  LogWriter log = LogWriter::Create(
      o.log_path, {std::string(kLogFormat), ConfigHash(config.document), config.seed});
  RunResult result =
      RunTournament(schedule, built.population, *built.data,
                    Settings(config, config.seed),
                    [&](const MatchRecord& r) { log.Write(r); });
  o.records = std::move(result.records);
  o.failures = std::move(result.failures);
  Report(o.failures, out);
  out << "played " << o.records.size() << " matches, log: " << o.log_path.string()
      << '\n';
  Finish(o, config.outputs.svg, out);
  return o;
}

Outcome Rate(const fs::path& log_path, const RatingConfig& rating,
             std::span<const PlayerSpec> players, const fs::path& out_dir,
             bool strict, bool svg, std::ostream& out) {
  LogContents log = ReadLog(log_path, strict);
  for (const std::string& s : log.skipped) out << "warning: skipped " << s << '\n';
  Outcome o;
  o.config.rating = rating;
  o.players.assign(players.begin(), players.end());
  o.records = std::move(log.records);
  o.out_dir = out_dir;
  o.log_path = log_path;
  if (!log.header) out << "warning: log is empty\n";
  Finish(o, svg, out);
  return o;
}

Outcome Extend(const fs::path& log_path, const TournamentConfig& config,
               const json& additions, bool force, std::ostream& out) {
  const LogContents log = ReadLog(log_path, /*strict=*/true);
  if (!log.header) throw LogError("log '" + log_path.string() + "' is empty");
  const std::string hash = ConfigHash(config.document);
  if (log.header->config_hash != hash) {
    if (!force) {
      throw ConfigError("config hash " + hash + " does not match the log's " +
                        log.header->config_hash +
                        "; the population may have changed (use --force to "
                        "extend anyway)");
    }
    out << "warning: config hash differs from the log header\n";
  }

  if (!additions.is_object() || !additions.contains("players") ||
      !additions.at("players").is_array()) {
    throw ConfigError("additions must be an object with a 'players' list");
  }
  for (const auto& [key, value] : additions.items()) {
    if (key != "players") throw ConfigError("additions: unknown key '" + key + "'");
  }

  json only_new = config.document;
  only_new["players"] = additions.at("players");
  const std::vector<PlayerSpec> fresh = PlayerSpecs(ParseConfig(only_new));
  const std::vector<PlayerSpec> existing = PlayerSpecs(config);
  std::set<std::string> taken;
  for (const PlayerSpec& p : existing) taken.insert(p.id);
  for (const MatchRecord& r : log.records) {
    taken.insert(r.generator_id);
    taken.insert(r.discriminator_id);
  }
  for (const PlayerSpec& p : fresh) {
    if (taken.contains(p.id)) {
      throw ConfigError("player id '" + p.id + "' already exists");
    }
  }

  json merged = config.document;
  for (const json& p : additions.at("players")) merged["players"].push_back(p);
  Outcome o;
  o.config = ParseConfig(merged);
  o.config.outputs = config.outputs;
  o.players = PlayerSpecs(o.config);

  std::vector<PlayerSpec> old_gens, old_discs;
  for (const PlayerSpec& p : existing) {
    (p.role == Role::kGenerator ? old_gens : old_discs).push_back(p);
  }
  auto by_id = [](const PlayerSpec& a, const PlayerSpec& b) { return a.id < b.id; };
  std::sort(old_gens.begin(), old_gens.end(), by_id);
  std::sort(old_discs.begin(), old_discs.end(), by_id);
  Schedule schedule;
  for (const PlayerSpec& p : fresh) {
    const auto& opponents = p.role == Role::kGenerator ? old_discs : old_gens;
    for (const PlayerSpec& q : opponents) {
      for (int r = 0; r < config.schedule.repeats; ++r) {
        if (p.role == Role::kGenerator) {
          schedule.matches.push_back({p.id, q.id, r});
        } else {
          schedule.matches.push_back({q.id, p.id, r});
        }
      }
    }
  }
  const ScheduleDiagnostics diag = Validate(schedule, o.players);
  if (!diag.ok()) throw ConfigError("invalid extension: " + Join(diag.errors));

  BuiltTournament built = BuildTournament(o.config);
  LogWriter writer = LogWriter::Append(log_path);
  RunResult result = RunTournament(schedule, built.population, *built.data,
                                   Settings(config, log.header->seed),
                                   [&](const MatchRecord& r) { writer.Write(r); });
  out << "played " << result.records.size() << " new matches\n";
  o.failures = std::move(result.failures);
  Report(o.failures, out);
  o.records = log.records;
  o.records.insert(o.records.end(), result.records.begin(), result.records.end());
  o.out_dir = config.outputs.dir;
  o.log_path = log_path;
  Finish(o, config.outputs.svg, out);
  return o;
}

}  // namespace arena::app
