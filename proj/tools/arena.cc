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

// Command-line front end: arena run|rate|extend|simulate|schedule.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "arena/app.h"
#include "arena/error.h"
#include "arena/experiments.h"
#include "arena/extern_player.h"
#include "arena/store.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config;
  std::string log;
  std::string add;
  std::string experiment;
  bool strict = false;
  bool force = false;
  arena::app::Overrides overrides;
};

template <typename T>
void AddOptional(CLI::App* app, const std::string& name, std::optional<T>& slot,
                 const std::string& help) {
  app->add_option_function<T>(name, [&slot](const T& v) { slot = v; }, help);
}

void AddRunFlags(CLI::App* cmd, Flags& f) {
  AddOptional(cmd, "--seed", f.overrides.seed, "tournament seed");
  AddOptional(cmd, "--batch-size", f.overrides.batch_size, "samples per batch");
  AddOptional(cmd, "--threshold", f.overrides.threshold, "real/fake threshold");
  AddOptional(cmd, "--schedule", f.overrides.schedule,
              "round_robin | band | explicit");
  AddOptional(cmd, "--band-width", f.overrides.band_width,
              "max checkpoint distance for band schedules");
}

void AddRatingFlags(CLI::App* cmd, Flags& f) {
  AddOptional(cmd, "--passes", f.overrides.passes, "max rating passes");
  AddOptional(cmd, "--tau", f.overrides.tau, "Glicko2 volatility constraint");
  AddOptional(cmd, "--outcome-mode", f.overrides.outcome_mode,
              "per-sample | per-match");
}

void AddOutDir(CLI::App* cmd, Flags& f) {
  AddOptional(cmd, "--out-dir", f.overrides.out_dir, "output directory");
}

void RequireFile(const std::string& path, const char* what) {
  if (path.empty()) throw arena::ConfigError(std::string("missing ") + what);
  if (!fs::exists(path)) {
    throw arena::ConfigError(std::string(what) + " '" + path + "' does not exist");
  }
}

int CmdRun(Flags& f) {
  RequireFile(f.config, "config file");
  arena::app::Run(arena::app::LoadConfig(f.config, f.overrides), std::cout);
  return 0;
}

int CmdRate(Flags& f) {
  RequireFile(f.log, "match log");
  arena::RatingConfig rating;
  std::vector<arena::PlayerSpec> players;
  fs::path out_dir = fs::path(f.log).parent_path();
  bool svg = true;
  if (!f.config.empty()) {
    RequireFile(f.config, "config file");
    const arena::TournamentConfig config = arena::app::LoadConfig(f.config, f.overrides);
    rating = config.rating;
    players = arena::PlayerSpecs(config);
    out_dir = config.outputs.dir;
    svg = config.outputs.svg;
  } else {
    rating = arena::app::ApplyRatingOverrides(rating, f.overrides);
  }
  if (f.overrides.out_dir) out_dir = *f.overrides.out_dir;
  arena::app::Rate(f.log, rating, players, out_dir, f.strict, svg, std::cout);
  return 0;
}

int CmdExtend(Flags& f) {
  RequireFile(f.log, "match log");
  RequireFile(f.config, "config file");
  RequireFile(f.add, "additions file");
  arena::app::Extend(f.log, arena::app::LoadConfig(f.config, f.overrides),
                     arena::ReadConfigJson(f.add), f.force, std::cout);
  return 0;
}

int CmdSimulate(Flags& f) {
  const std::uint64_t seed = f.overrides.seed.value_or(1);
  const fs::path out = f.overrides.out_dir.value_or("arena_out");
  const nlohmann::ordered_json verdict =
      arena::experiments::Simulate(f.experiment, seed, out, std::cout);
  std::cout << verdict.dump(2) << '\n';
  return 0;
}

int CmdSchedule(Flags& f) {
  RequireFile(f.config, "config file");
  const arena::TournamentConfig config = arena::app::LoadConfig(f.config, f.overrides);
  arena::ScheduleDiagnostics diag;
  const arena::Schedule schedule = arena::app::PlanSchedule(config, &diag);
  for (const arena::ScheduledMatch& m : schedule.matches) {
    std::cout << m.generator_id << '\t' << m.discriminator_id << '\t' << m.repeat
              << '\n';
  }
  std::cerr << schedule.matches.size() << " matches, " << diag.components
            << " connected component(s)\n";
  for (const std::string& w : diag.warnings) std::cerr << "warning: " << w << '\n';
  for (const std::string& e : diag.errors) std::cerr << "error: " << e << '\n';
  return diag.ok() ? 0 : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skill-rating tournaments between generators and discriminators"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* run = app.add_subcommand("run", "play a tournament from a config");
  run->add_option("--config", f.config, "tournament config")->required();
  AddRunFlags(run, f);
  AddRatingFlags(run, f);
  AddOutDir(run, f);

  CLI::App* rate = app.add_subcommand("rate", "re-rate a stored match log");
  rate->add_option("--log", f.log, "match log (JSONL)")->required();
  rate->add_option("--config", f.config, "config supplying player metadata");
  rate->add_flag("--strict", f.strict, "abort on the first corrupt line");
  AddRatingFlags(rate, f);
  AddOutDir(rate, f);

  CLI::App* extend = app.add_subcommand("extend", "add players to a rated log");
  extend->add_option("--log", f.log, "existing match log")->required();
  extend->add_option("--config", f.config, "config the log was produced from")
      ->required();
  extend->add_option("--add", f.add, "file with a \"players\" list to add")
      ->required();
  extend->add_flag("--force", f.force, "extend even if the config hash differs");
  AddRatingFlags(extend, f);
  AddOutDir(extend, f);

  CLI::App* simulate = app.add_subcommand("simulate", "run a bundled experiment");
  simulate->add_option("experiment", f.experiment,
                       "within | banded | chekhov | distortion | multi")
      ->required();
  AddOptional(simulate, "--seed", f.overrides.seed, "experiment seed");
  AddOutDir(simulate, f);

  CLI::App* schedule = app.add_subcommand("schedule", "print a config's schedule");
  schedule->add_option("--config", f.config, "tournament config")->required();
  AddRunFlags(schedule, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return CmdRun(f);
    if (*rate) return CmdRate(f);
    if (*extend) return CmdExtend(f);
    if (*simulate) return CmdSimulate(f);
    if (*schedule) return CmdSchedule(f);
  } catch (const arena::ConfigError& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "arena: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
