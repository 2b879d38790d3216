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

#include "arena/tournament.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>
#include <utility>

#include "arena/error.h"
#include "arena/rng.h"

namespace arena {
namespace {

std::vector<PlayerSpec> SortedById(std::span<const PlayerSpec> specs) {
  std::vector<PlayerSpec> sorted(specs.begin(), specs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const PlayerSpec& a, const PlayerSpec& b) { return a.id < b.id; });
  return sorted;
}

void RequireNonEmpty(std::span<const PlayerSpec> generators,
                     std::span<const PlayerSpec> discriminators) {
  if (generators.empty() || discriminators.empty()) {
    throw ConfigError("schedule needs at least one generator and one "
                      "discriminator");
  }
}

int CountWins(const std::vector<double>& scores, double threshold,
              bool fake_batch) {
  int wins = 0;
  for (double s : scores) {
    if (fake_batch ? s >= threshold : s <= threshold) ++wins;
  }
  return wins;
}

void CheckScores(const std::vector<double>& scores, Eigen::Index expected,
                 const std::string& who) {
  if (static_cast<Eigen::Index>(scores.size()) != expected) {
    throw MatchError(who + " returned " + std::to_string(scores.size()) +
                     " scores for a batch of " + std::to_string(expected));
  }
  for (double s : scores) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw MatchError(who + " returned score " + std::to_string(s) +
                       " outside [0, 1]");
    }
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  size_t Find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void Union(size_t a, size_t b) { parent_[Find(a)] = Find(b); }

 private:
  std::vector<size_t> parent_;
};

}  // namespace

void Population::Add(Player player) {
  const std::string& id = player.spec.id;
  if (id.empty()) throw ConfigError("player id must not be empty");
  if (index_.count(id)) throw ConfigError("duplicate player id '" + id + "'");
  const bool is_generator = player.spec.role == Role::kGenerator;
  if (is_generator ? !player.generator : !player.discriminator) {
    throw ConfigError("player '" + id + "' has no " +
                      std::string(ToString(player.spec.role)) +
                      " implementation");
  }
  index_.emplace(id, players_.size());
  players_.push_back(std::move(player));
}

const Player* Population::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &players_[it->second];
}

const Player& Population::at(const std::string& id) const {
  const Player* p = find(id);
  if (p == nullptr) throw ConfigError("unknown player '" + id + "'");
  return *p;
}

std::vector<PlayerSpec> Population::specs() const {
  std::vector<PlayerSpec> out;
  for (const Player& p : players_) out.push_back(p.spec);
  return out;
}

std::vector<PlayerSpec> Population::generators() const {
  std::vector<PlayerSpec> out;
  for (const Player& p : players_) {
    if (p.spec.role == Role::kGenerator) out.push_back(p.spec);
  }
  return out;
}

std::vector<PlayerSpec> Population::discriminators() const {
  std::vector<PlayerSpec> out;
  for (const Player& p : players_) {
    if (p.spec.role == Role::kDiscriminator) out.push_back(p.spec);
  }
  return out;
}

std::string_view ToString(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kRoundRobin:
      return "round_robin";
    case ScheduleKind::kBand:
      return "band";
    case ScheduleKind::kExplicit:
      return "explicit";
  }
  return "explicit";
}

ScheduleKind ParseScheduleKind(std::string_view text) {
  if (text == "round_robin" || text == "round-robin") {
    return ScheduleKind::kRoundRobin;
  }
  if (text == "band" || text == "banded") return ScheduleKind::kBand;
  if (text == "explicit") return ScheduleKind::kExplicit;
  throw ConfigError("unknown schedule kind '" + std::string(text) + "'");
}

std::string_view ToString(FailureMode mode) {
  return mode == FailureMode::kFatal ? "fatal" : "skip";
}

FailureMode ParseFailureMode(std::string_view text) {
  if (text == "fatal") return FailureMode::kFatal;
  if (text == "skip") return FailureMode::kSkip;
  throw ConfigError("unknown failure mode '" + std::string(text) + "'");
}

Schedule RoundRobin(std::span<const PlayerSpec> generators,
                    std::span<const PlayerSpec> discriminators, int repeats) {
  RequireNonEmpty(generators, discriminators);
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  Schedule schedule;
  schedule.kind = ScheduleKind::kRoundRobin;
  for (const PlayerSpec& g : SortedById(generators)) {
    for (const PlayerSpec& d : SortedById(discriminators)) {
      for (int r = 0; r < repeats; ++r) {
        schedule.matches.push_back({g.id, d.id, r});
      }
    }
  }
  return schedule;
}

Schedule Band(std::span<const PlayerSpec> generators,
              std::span<const PlayerSpec> discriminators, int width,
              int repeats) {
  RequireNonEmpty(generators, discriminators);
  if (width < 0) throw ConfigError("band width must be >= 0");
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  auto require_iteration = [](const PlayerSpec& p) {
    if (!p.iteration) {
      throw ConfigError("banded schedule: player '" + p.id +
                        "' has no iteration metadata");
    }
  };
  for (const PlayerSpec& p : generators) require_iteration(p);
  for (const PlayerSpec& p : discriminators) require_iteration(p);

  Schedule schedule;
  schedule.kind = ScheduleKind::kBand;
  schedule.band_width = width;
  for (const PlayerSpec& g : SortedById(generators)) {
    for (const PlayerSpec& d : SortedById(discriminators)) {
      if (std::abs(*g.iteration - *d.iteration) > width) continue;
      for (int r = 0; r < repeats; ++r) {
        schedule.matches.push_back({g.id, d.id, r});
      }
    }
  }
  return schedule;
}

ScheduleDiagnostics Validate(const Schedule& schedule,
                             std::span<const PlayerSpec> players) {
  ScheduleDiagnostics diag;
  std::map<std::string, size_t> index;
  for (const PlayerSpec& p : players) index.emplace(p.id, index.size());

  DisjointSets sets(players.size());
  std::set<size_t> touched;
  std::set<std::string> reported;
  auto lookup = [&](const std::string& id, Role expected) -> std::optional<size_t> {
    auto it = index.find(id);
    if (it == index.end()) {
      if (reported.insert(id).second) {
        diag.errors.push_back("unknown player '" + id + "'");
      }
      return std::nullopt;
    }
    if (players[it->second].role != expected) {
      if (reported.insert(id).second) {
        diag.errors.push_back("player '" + id + "' scheduled as " +
                              std::string(ToString(expected)) + " but is a " +
                              std::string(ToString(players[it->second].role)));
      }
      return std::nullopt;
    }
    return it->second;
  };
  for (const ScheduledMatch& m : schedule.matches) {
    auto g = lookup(m.generator_id, Role::kGenerator);
    auto d = lookup(m.discriminator_id, Role::kDiscriminator);
    if (g && d) {
      sets.Union(*g, *d);
      touched.insert(*g);
      touched.insert(*d);
    }
  }
  std::set<size_t> roots;
  for (size_t i : touched) roots.insert(sets.Find(i));
  diag.components = static_cast<int>(roots.size());
  if (diag.components > 1) {
    diag.warnings.push_back(
        "match graph has " + std::to_string(diag.components) +
        " components; ratings across components are not comparable");
  }
  for (const PlayerSpec& p : players) {
    if (!touched.count(index.at(p.id))) {
      diag.warnings.push_back("player '" + p.id + "' has no scheduled matches");
    }
  }
  return diag;
}

std::vector<int> EarlyDenseCheckpoints(int total, int count) {
  if (total < 1 || count < 1 || count > total) {
    throw ConfigError("EarlyDenseCheckpoints needs 1 <= count <= total");
  }
  std::vector<int> idx(count, 0);
  for (int i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    idx[i] = static_cast<int>(std::lround(std::pow(u, 1.5) * (total - 1)));
  }
  for (int i = 1; i < count; ++i) idx[i] = std::max(idx[i], idx[i - 1] + 1);
  for (int i = count - 1; i >= 0; --i) {
    idx[i] = std::min(idx[i], total - count + i);
    if (i + 1 < count) idx[i] = std::min(idx[i], idx[i + 1] - 1);
  }
  return idx;
}

MatchRecord PlayMatch(const Player& generator, const Player& discriminator,
                      Generator& data, const MatchSettings& settings,
                      std::uint64_t match_seed) {
  if (generator.spec.role != Role::kGenerator || !generator.generator) {
    throw MatchError("'" + generator.spec.id + "' is not a generator");
  }
  if (discriminator.spec.role != Role::kDiscriminator ||
      !discriminator.discriminator) {
    throw MatchError("'" + discriminator.spec.id + "' is not a discriminator");
  }
  const int n = settings.batch_size;
  if (n < 1) throw ConfigError("batch size must be >= 1");

  const Batch fake =
      generator.generator->Generate(n, StreamSeed(match_seed, Stream::kFakeBatch));
  if (fake.rows() != n) {
    throw MatchError("generator '" + generator.spec.id + "' returned " +
                     std::to_string(fake.rows()) + " samples, expected " +
                     std::to_string(n));
  }
  const Batch real = data.Generate(n, StreamSeed(match_seed, Stream::kRealBatch));
  if (real.rows() != n) {
    throw MatchError("real-data source returned " +
                     std::to_string(real.rows()) + " samples, expected " +
                     std::to_string(n));
  }
  if (fake.cols() != real.cols()) {
    throw MatchError("generator '" + generator.spec.id + "' produced dimension " +
                     std::to_string(fake.cols()) + ", real data has " +
                     std::to_string(real.cols()));
  }

  Discriminator& judge = *discriminator.discriminator;
  const std::string who = "discriminator '" + discriminator.spec.id + "'";
  const std::vector<double> fake_scores =
      judge.Judge(fake, StreamSeed(match_seed, Stream::kJudgeFake));
  CheckScores(fake_scores, fake.rows(), who);
  const std::vector<double> real_scores =
      judge.Judge(real, StreamSeed(match_seed, Stream::kJudgeReal));
  CheckScores(real_scores, real.rows(), who);

  MatchRecord record;
  record.generator_id = generator.spec.id;
  record.discriminator_id = discriminator.spec.id;
  record.n_fake = n;
  record.fake_wins = CountWins(fake_scores, settings.threshold, true);
  record.n_real = n;
  record.real_wins = CountWins(real_scores, settings.threshold, false);
  record.seed = match_seed;
  record.threshold = settings.threshold;
  return record;
}

RunResult RunTournament(const Schedule& schedule, const Population& players,
                        Generator& data, const RunSettings& settings,
                        const RecordSink& sink) {
  struct Outcome {
    std::optional<MatchRecord> record;
    std::exception_ptr error;
    std::string message;
  };
  const size_t total = schedule.matches.size();
  auto play = [&](size_t i) {
    Outcome out;
    const ScheduledMatch& m = schedule.matches[i];
    try {
      const std::uint64_t seed = MatchSeed(settings.seed, m.generator_id,
                                           m.discriminator_id, m.repeat);
      out.record = PlayMatch(players.at(m.generator_id),
                             players.at(m.discriminator_id), data,
                             settings.match, seed);
    } catch (const std::exception& e) {
      out.error = std::current_exception();
      out.message = e.what();
    }
    return out;
  };

  RunResult result;
  auto consume = [&](size_t i, Outcome& out) {
    if (out.record) {
      if (sink) sink(*out.record);
      result.records.push_back(std::move(*out.record));
      return true;
    }
    if (settings.failure_mode == FailureMode::kFatal) return false;
    result.failures.push_back({schedule.matches[i], out.message});
    return true;
  };

  unsigned threads = settings.threads > 0
                         ? static_cast<unsigned>(settings.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, total));
  if (threads <= 1) {
    for (size_t i = 0; i < total; ++i) {
      Outcome out = play(i);
      if (!consume(i, out)) std::rethrow_exception(out.error);
    }
    return result;
  }

  std::vector<std::optional<Outcome>> slots(total);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= total || stop.load()) return;
        Outcome out = play(i);
        std::lock_guard<std::mutex> lock(mu);
        slots[i] = std::move(out);
        ready.notify_all();
      }
    });
  }
  std::exception_ptr fatal;
  for (size_t i = 0; i < total && !fatal; ++i) {
    Outcome out;
    {
      std::unique_lock<std::mutex> lock(mu);
      ready.wait(lock, [&] { return slots[i].has_value(); });
      out = std::move(*slots[i]);
      slots[i].reset();
    }
    if (!consume(i, out)) {
      fatal = out.error;
      stop.store(true);
    }
  }
  for (std::thread& w : workers) w.join();
  if (fatal) std::rethrow_exception(fatal);
  return result;
}

}  // namespace arena
