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

#include <random>
#include <string>
#include <vector>

#include "arena/glicko.h"
#include "arena/records.h"
#include "arena/tournament.h"
#include "arena/toy_players.h"
#include "benchmark/benchmark.h"

namespace arena {
namespace {

std::vector<MatchRecord> RoundRobinRecords(int n, int batch) {
  std::mt19937_64 rng(1);
  std::vector<MatchRecord> out;
  for (int g = 0; g < n; ++g) {
    for (int d = 0; d < n; ++d) {
      MatchRecord r;
      r.generator_id = "G" + std::to_string(g);
      r.discriminator_id = "D" + std::to_string(d);
      r.n_fake = r.n_real = batch;
      const double p = 1.0 / (1.0 + std::exp(-0.3 * (g - d)));
      std::binomial_distribution<int> fake(batch, p), real(batch, p);
      r.fake_wins = fake(rng);
      r.real_wins = real(rng);
      out.push_back(r);
    }
  }
  return out;
}

void BM_UpdatePlayer(benchmark::State& state) {
  const std::vector<GameResult> games = {
      {{1400, 30, 0.06}, 1.0}, {{1550, 100, 0.06}, 0.0}, {{1700, 300, 0.06}, 0.0}};
  const RatingConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(UpdatePlayer({1500, 200, 0.06}, games, config));
  }
}
BENCHMARK(BM_UpdatePlayer);

void BM_RateTournament(benchmark::State& state) {
  const auto records = RoundRobinRecords(static_cast<int>(state.range(0)), 64);
  const RatingConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RateTournament(records, config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(records.size()));
}
BENCHMARK(BM_RateTournament)->Arg(5)->Arg(20)->Arg(50);

void BM_OracleJudge(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const toy::GaussianTask task = toy::MakeTask(dim, 1, 2 * dim);
  const auto traj = toy::Trajectory(task, 4, 1.0, 2);
  auto discs = toy::TrajectoryDiscriminators(task, traj, toy::DiscriminatorKind::kOracle, 3);
  const Batch batch = toy::RealDataPlayer(task)->Generate(64, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discs[1]->Judge(batch, 0));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_OracleJudge)->Arg(4)->Arg(50);

void BM_ChekhovJudge(benchmark::State& state) {
  const toy::GaussianTask task = toy::MakeTask(50, 1, 100);
  const auto traj = toy::Trajectory(task, 20, 0.5, 2);
  auto discs = toy::TrajectoryDiscriminators(task, traj, toy::DiscriminatorKind::kChekhov,
                                             10, toy::kChekhovReservoir, 5);
  const Batch batch = toy::RealDataPlayer(task)->Generate(64, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(discs.back()->Judge(batch, 0));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_ChekhovJudge);

void BM_PlayMatch(benchmark::State& state) {
  const toy::GaussianTask task = toy::MakeTask(50, 1, 100);
  const auto traj = toy::Trajectory(task, 20, 1.0, 2);
  auto discs = toy::TrajectoryDiscriminators(task, traj, toy::DiscriminatorKind::kOracle, 19);
  Player g{{"G", Role::kGenerator}, toy::CheckpointPlayer(traj[5]), nullptr};
  Player d{{"D", Role::kDiscriminator}, nullptr, discs[8]};
  auto data = toy::RealDataPlayer(task);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(PlayMatch(g, d, *data, {64, 0.5}, ++seed));
  }
}
BENCHMARK(BM_PlayMatch);

void BM_GaussianFrechet(benchmark::State& state) {
  const toy::GaussianTask task = toy::MakeTask(50, 1, 100);
  const auto traj = toy::Trajectory(task, 20, 1.0, 2);
  const Eigen::MatrixXd cov = traj[5].Covariance() + 1e-3 * Eigen::MatrixXd::Identity(50, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        toy::GaussianFrechet(traj[5].b, cov, task.mu_star, task.sigma_star));
  }
}
BENCHMARK(BM_GaussianFrechet);

}  // namespace
}  // namespace arena

BENCHMARK_MAIN();
