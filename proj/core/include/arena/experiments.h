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

#ifndef ARENA_EXPERIMENTS_H_
#define ARENA_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arena/app.h"

// Canned toy-domain experiments. Each writes its tournaments (logs,
// summaries, heatmaps) under `<out_dir>/<name>/` and returns a verdict that
// is also saved as `<out_dir>/<name>/verdict.json`.
//
//   within      one trajectory, full round-robin of its checkpoints
//   banded      the same population, full vs banded schedule
//   chekhov     forgetting vs Chekhov-style discriminator panels past mastery
//   distortion  additive-noise players at severities 1..9 vs an oracle panel
//   multi       three trajectories of differing quality, real data, and a
//               distorted real-data player in one tournament
namespace arena::experiments {

const std::vector<std::string>& Names();

struct Options {
  int dim = 50;
  int rows = 100;  // rows of the task's random factor; 0 = dim
  int checkpoints = 20;
  int batch_size = 64;
  int band_width = 4;
  double chekhov_mastery_fraction = 0.5;
  int distortion_repeats = 3;
  int distortion_dim = 4;  // at dim 50 every oracle detects severity >= 5 outright
  // Called with every tournament an experiment plays.
  std::function<void(const app::Outcome&)> observer;
};

// Config document for one toy tournament of an experiment, as `run` would
// read it from disk.
nlohmann::json WithinConfig(std::uint64_t seed, const Options& options);

// Throws ConfigError for an unknown name.
nlohmann::ordered_json Simulate(const std::string& name, std::uint64_t seed,
                                const std::filesystem::path& out_dir,
                                std::ostream& log, const Options& options = {});

}  // namespace arena::experiments

#endif  // ARENA_EXPERIMENTS_H_
