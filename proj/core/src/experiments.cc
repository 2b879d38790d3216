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

#include "arena/experiments.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "arena/app.h"
#include "arena/rng.h"
#include "arena/store.h"
#include "arena/summarize.h"
#include "arena/toy_players.h"

namespace arena::experiments {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kTrajectory = "toy";

std::uint64_t TrajectorySeed(std::uint64_t seed) { return MixSeed(seed, "trajectory"); }

json BaseConfig(std::uint64_t seed, const Options& o) {
  return {{"seed", seed},
          {"batch_size", o.batch_size},
          {"task", {{"dim", o.dim}, {"seed", seed}, {"rows", o.rows}}},
          {"players", json::array()},
          {"schedule", {{"kind", "round_robin"}}}};
}

json TrajectoryEntry(const std::string& name, std::uint64_t seed, const Options& o,
                     double mastery_fraction, const std::string& discriminators,
                     bool generators = true) {
  return {{"type", "trajectory"},
          {"name", name},
          {"checkpoints", o.checkpoints},
          {"mastery_fraction", mastery_fraction},
          {"seed", TrajectorySeed(seed)},
          {"generators", generators},
          {"discriminators", discriminators},
          {"reservoir_seed", MixSeed(seed, "reservoir")}};
}

app::Outcome RunDocument(json document, const fs::path& dir, std::ostream& log,
                         const Options& o) {
  document["outputs"] = {{"dir", dir.string()}};
  log << "== " << dir.string() << '\n';
  app::Outcome outcome = app::Run(ParseConfig(document), log);
  if (o.observer) o.observer(outcome);
  return outcome;
}

std::vector<double> GeneratorRatings(const app::Outcome& o, const std::string& name,
                                     int checkpoints) {
  std::vector<double> out;
  for (int k = 0; k < checkpoints; ++k) {
    out.push_back(
        o.ratings.ratings.at(CheckpointId(name, Role::kGenerator, k, checkpoints))
            .rating);
  }
  return out;
}

std::vector<double> GeneratorWinRates(const app::Outcome& o, const std::string& name,
                                      int checkpoints) {
  std::vector<double> out;
  for (int k = 0; k < checkpoints; ++k) {
    out.push_back(
        o.summary.win_rate.at(CheckpointId(name, Role::kGenerator, k, checkpoints)));
  }
  return out;
}

std::vector<double> Indices(int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = k;
  return out;
}

std::vector<double> Negated(std::vector<double> xs) {
  for (double& x : xs) x = -x;
  return xs;
}

ordered_json Within(std::uint64_t seed, const fs::path& dir, std::ostream& log,
                    const Options& o) {
  const app::Outcome run = RunDocument(WithinConfig(seed, o), dir, log, o);
  const std::vector<double> ratings = GeneratorRatings(run, kTrajectory, o.checkpoints);
  const std::vector<double> win = GeneratorWinRates(run, kTrajectory, o.checkpoints);
  const std::vector<double> idx = Indices(o.checkpoints);
  ordered_json v;
  v["experiment"] = "within";
  v["seed"] = seed;
  v["matches"] = run.records.size();
  v["rating_passes"] = run.ratings.passes;
  v["rating_converged"] = run.ratings.converged;
  v["spearman_rating_vs_checkpoint"] = Spearman(idx, ratings);
  v["spearman_win_rate_vs_checkpoint"] = Spearman(idx, win);
  v["ratings"] = ratings;
  v["win_rates"] = win;
  return v;
}

ordered_json Banded(std::uint64_t seed, const fs::path& dir, std::ostream& log,
                    const Options& o) {
  const json full_doc = WithinConfig(seed, o);
  json band_doc = full_doc;
  band_doc["schedule"] = {{"kind", "band"}, {"band_width", o.band_width}};
  const app::Outcome full = RunDocument(full_doc, dir / "full", log, o);
  const app::Outcome band = RunDocument(band_doc, dir / "band", log, o);
  const std::vector<double> full_ratings =
      GeneratorRatings(full, kTrajectory, o.checkpoints);
  const std::vector<double> band_ratings =
      GeneratorRatings(band, kTrajectory, o.checkpoints);
  const std::vector<double> band_win =
      GeneratorWinRates(band, kTrajectory, o.checkpoints);
  ordered_json v;
  v["experiment"] = "banded";
  v["seed"] = seed;
  v["band_width"] = o.band_width;
  v["full_matches"] = full.records.size();
  v["banded_matches"] = band.records.size();
  v["match_fraction"] =
      static_cast<double>(band.records.size()) / static_cast<double>(full.records.size());
  v["spearman_banded_rating_vs_full"] = Spearman(full_ratings, band_ratings);
  v["spearman_banded_win_rate_vs_full"] = Spearman(full_ratings, band_win);
  v["spearman_full_rating_vs_checkpoint"] =
      Spearman(Indices(o.checkpoints), full_ratings);
  v["banded_win_rate_warning"] = !band.summary.full_round_robin;
  v["full_ratings"] = full_ratings;
  v["banded_ratings"] = band_ratings;
  v["banded_win_rates"] = band_win;
  return v;
}

ordered_json Chekhov(std::uint64_t seed, const fs::path& dir, std::ostream& log,
                     const Options& o) {
  const double mf = o.chekhov_mastery_fraction;
  const int mastery = toy::MasteryIndex(o.checkpoints, mf);
  std::vector<int> post;
  for (int k = mastery; k < o.checkpoints; ++k) post.push_back(k);

  const toy::GaussianTask task = toy::MakeTask(o.dim, seed, o.rows);
  const auto traj = toy::Trajectory(task, o.checkpoints, mf, TrajectorySeed(seed));
  std::vector<double> cov_error, frechet;
  for (const toy::ToyGenerator& g : traj) {
    cov_error.push_back(toy::CovError(g, task));
    frechet.push_back(toy::GaussianFrechet(g.b, g.Covariance(), task.mu_star,
                                           task.sigma_star));
  }
  const std::vector<double> truth = Negated(cov_error);

  auto panel = [&](const std::string& kind, bool post_only) {
    json doc = BaseConfig(seed, o);
    doc["players"].push_back(TrajectoryEntry(kTrajectory, seed, o, mf, "none"));
    json discs = TrajectoryEntry(kTrajectory, seed, o, mf, kind, false);
    if (post_only) discs["include"] = post;
    doc["players"].push_back(discs);
    return RunDocument(doc, dir / (kind + (post_only ? "_post" : "_full")), log, o);
  };
  const app::Outcome forget_full = panel("forgetting", false);
  const app::Outcome chek_full = panel("chekhov", false);
  const app::Outcome forget_post = panel("forgetting", true);
  const app::Outcome chek_post = panel("chekhov", true);

  auto pearson = [&](const app::Outcome& out) {
    return Pearson(GeneratorRatings(out, kTrajectory, o.checkpoints), truth);
  };
  ordered_json v;
  v["experiment"] = "chekhov";
  v["seed"] = seed;
  v["mastery_index"] = mastery;
  v["forgetting_post_pearson"] = pearson(forget_post);
  v["chekhov_post_pearson"] = pearson(chek_post);
  v["forgetting_full_pearson"] = pearson(forget_full);
  v["chekhov_full_pearson"] = pearson(chek_full);
  v["post_mastery_gap"] = v["chekhov_post_pearson"].get<double>() -
                          std::abs(v["forgetting_post_pearson"].get<double>());
  v["cov_error"] = cov_error;
  v["frechet"] = frechet;
  v["forgetting_post_ratings"] = GeneratorRatings(forget_post, kTrajectory, o.checkpoints);
  v["chekhov_post_ratings"] = GeneratorRatings(chek_post, kTrajectory, o.checkpoints);
  v["chekhov_full_ratings"] = GeneratorRatings(chek_full, kTrajectory, o.checkpoints);

  std::ofstream truth_csv(dir / "ground_truth.csv");
  truth_csv << "checkpoint,cov_error,frechet\n";
  for (int k = 0; k < o.checkpoints; ++k) {
    truth_csv << k << ',' << cov_error[k] << ',' << frechet[k] << '\n';
  }
  return v;
}

ordered_json Distortion(std::uint64_t seed, const fs::path& dir, std::ostream& log,
                        const Options& o) {
  Options small = o;
  small.dim = o.distortion_dim;
  small.rows = o.rows == 0 ? 0 : 2 * o.distortion_dim;
  json doc = BaseConfig(seed, small);
  doc["schedule"]["repeats"] = o.distortion_repeats;
  doc["players"].push_back({{"type", "real_data"}, {"id", "real"}});
  for (int s = 1; s <= 9; ++s) {
    doc["players"].push_back({{"type", "transform"},
                              {"id", "noise/s" + std::to_string(s)},
                              {"base", "real"},
                              {"transform", "additive_noise"},
                              {"severity", s}});
  }
  for (int s = 1; s <= 9; ++s) {
    doc["players"].push_back(
        {{"type", "oracle"},
         {"id", "oracle/s" + std::to_string(s)},
         {"experiment", "oracle"},
         {"iteration", s},
         {"against", {{"transform", "additive_noise"}, {"severity", s}}}});
  }
  const app::Outcome run = RunDocument(doc, dir, log, o);
  std::vector<double> ratings, deviations;
  for (int s = 1; s <= 9; ++s) {
    const Rating& r = run.ratings.ratings.at("noise/s" + std::to_string(s));
    ratings.push_back(r.rating);
    deviations.push_back(r.deviation);
  }
  int inversions = 0, within = 0;
  for (int i = 0; i + 1 < 9; ++i) {
    if (ratings[i + 1] > ratings[i]) {
      ++inversions;
      const double band = 2.0 * std::hypot(deviations[i], deviations[i + 1]);
      if (ratings[i + 1] - ratings[i] <= band) ++within;
    }
  }
  ordered_json v;
  v["experiment"] = "distortion";
  v["seed"] = seed;
  v["repeats"] = o.distortion_repeats;
  v["severities"] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  v["ratings"] = ratings;
  v["deviations"] = deviations;
  v["inversions"] = inversions;
  v["inversions_within_two_deviations"] = within;
  v["real_data_rating"] = run.ratings.ratings.at("real").rating;
  return v;
}

ordered_json Multi(std::uint64_t seed, const fs::path& dir, std::ostream& log,
                   const Options& o) {
  const std::vector<std::pair<std::string, double>> runs = {
      {"strong", 1.0}, {"medium", 0.8}, {"weak", 0.6}};
  const int n = std::max(2, o.checkpoints / 2);
  json doc = BaseConfig(seed, o);
  for (size_t i = 0; i < runs.size(); ++i) {
    doc["players"].push_back({{"type", "trajectory"},
                              {"name", runs[i].first},
                              {"checkpoints", n},
                              {"reach", runs[i].second},
                              {"seed", MixSeed(seed, runs[i].first)},
                              {"discriminators", "oracle"}});
  }
  doc["players"].push_back({{"type", "real_data"}, {"id", "real"}});
  doc["players"].push_back({{"type", "transform"},
                            {"id", "real+noise3"},
                            {"base", "real"},
                            {"transform", "additive_noise"},
                            {"severity", 3}});
  const app::Outcome run = RunDocument(doc, dir, log, o);
  ordered_json v;
  v["experiment"] = "multi";
  v["seed"] = seed;
  ordered_json finals;
  std::vector<double> reach, final_ratings;
  for (const auto& [name, r] : runs) {
    const double rating =
        run.ratings.ratings.at(CheckpointId(name, Role::kGenerator, n - 1, n)).rating;
    finals[name] = rating;
    reach.push_back(r);
    final_ratings.push_back(rating);
  }
  v["final_checkpoint_ratings"] = finals;
  v["spearman_final_rating_vs_reach"] = Spearman(reach, final_ratings);
  v["real_data_rating"] = run.ratings.ratings.at("real").rating;
  v["noisy_real_data_rating"] = run.ratings.ratings.at("real+noise3").rating;
  return v;
}

}  // namespace

const std::vector<std::string>& Names() {
  static const std::vector<std::string> names = {"within", "banded", "chekhov",
                                                 "distortion", "multi"};
  return names;
}

json WithinConfig(std::uint64_t seed, const Options& o) {
  json doc = BaseConfig(seed, o);
  doc["players"].push_back(TrajectoryEntry(kTrajectory, seed, o, 1.0, "oracle"));
  return doc;
}

ordered_json Simulate(const std::string& name, std::uint64_t seed,
                      const fs::path& out_dir, std::ostream& log,
                      const Options& options) {
  const fs::path dir = out_dir / name;
  ordered_json verdict;
  if (name == "within") {
    verdict = Within(seed, dir, log, options);
  } else if (name == "banded") {
    verdict = Banded(seed, dir, log, options);
  } else if (name == "chekhov") {
    fs::create_directories(dir);
    verdict = Chekhov(seed, dir, log, options);
  } else if (name == "distortion") {
    verdict = Distortion(seed, dir, log, options);
  } else if (name == "multi") {
    verdict = Multi(seed, dir, log, options);
  } else {
    std::string valid;
    for (const std::string& n : Names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown experiment '" + name + "' (valid: " + valid + ")");
  }
  fs::create_directories(dir);
  std::ofstream(dir / "verdict.json") << verdict.dump(2) << '\n';
  return verdict;
}

}  // namespace arena::experiments
