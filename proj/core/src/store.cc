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

#include "arena/store.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "arena/extern_player.h"
#include "arena/rng.h"

namespace arena {
namespace {

using nlohmann::json;

// Typed, key-whitelisted view of one JSON object.
class Section {
 public:
  Section(const json& j, std::string where, std::set<std::string> allowed)
      : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    for (const auto& [key, value] : j_.items()) {
      if (!allowed.contains(key)) {
        throw ConfigError(where_ + ": unknown key '" + key + "'");
      }
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const { return j_.at(key); }
  std::string where(const char* key) const { return where_ + "." + key; }

  std::string String(const char* key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string RequiredString(const char* key) const {
    if (!has(key)) throw ConfigError(where_ + ": missing '" + key + "'");
    return String(key, "");
  }
  bool Bool(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true/false");
    return v.get<bool>();
  }
  double Double(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }
  int Int(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    return ToInt(j_.at(key), where(key));
  }
  std::uint64_t Seed(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() &&
        !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(where(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  static int ToInt(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
    if (v.is_number_unsigned()
            ? v.get<std::uint64_t>() >
                  static_cast<std::uint64_t>(std::numeric_limits<int>::max())
            : (v.get<std::int64_t>() < std::numeric_limits<int>::min() ||
               v.get<std::int64_t>() > std::numeric_limits<int>::max())) {
      throw ConfigError(where + ": integer out of range");
    }
    return v.get<int>();
  }

 private:
  const json& j_;
  std::string where_;
};

const std::set<std::string> kExternalKeys = {
    "command", "args", "env", "handshake_timeout_s", "request_timeout_s"};

std::set<std::string> With(std::set<std::string> a,
                           const std::set<std::string>& b) {
  a.insert(b.begin(), b.end());
  return a;
}

ExternalConfig ParseExternal(const Section& s) {
  ExternalConfig e;
  e.command = s.RequiredString("command");
  if (s.has("args")) {
    const json& args = s.raw("args");
    if (!args.is_array()) throw ConfigError(s.where("args") + ": expected a list");
    for (const json& a : args) {
      if (!a.is_string()) throw ConfigError(s.where("args") + ": expected strings");
      e.args.push_back(a.get<std::string>());
    }
  }
  if (s.has("env")) {
    const json& env = s.raw("env");
    if (!env.is_object()) throw ConfigError(s.where("env") + ": expected an object");
    for (const auto& [key, value] : env.items()) {
      if (!value.is_string()) {
        throw ConfigError(s.where("env") + "." + key + ": expected a string");
      }
      e.env[key] = value.get<std::string>();
    }
  }
  e.handshake_timeout_s = s.Double("handshake_timeout_s", e.handshake_timeout_s);
  e.request_timeout_s = s.Double("request_timeout_s", e.request_timeout_s);
  if (!(e.handshake_timeout_s > 0) || !(e.request_timeout_s > 0)) {
    throw ConfigError(s.where("command") + ": timeouts must be positive");
  }
  return e;
}

PlayerConfig ParsePlayer(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(where + ": every player needs a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  const std::set<std::string> common = {"type", "id", "experiment", "iteration"};
  PlayerConfig p;
  auto metadata = [&](const Section& s) {
    if (s.has("experiment")) p.experiment = s.String("experiment", "");
    if (s.has("iteration")) p.iteration = s.Int("iteration", 0);
  };

  if (type == "trajectory") {
    Section s(j, where,
              {"type", "name", "experiment", "checkpoints", "mastery_fraction",
               "reach", "seed", "generators", "discriminators", "include",
               "reservoir_capacity", "reservoir_seed"});
    p.type = PlayerType::kTrajectory;
    p.id = s.RequiredString("name");
    p.experiment = s.String("experiment", p.id);
    p.checkpoints = s.Int("checkpoints", p.checkpoints);
    p.mastery_fraction = s.Double("mastery_fraction", p.mastery_fraction);
    p.reach = s.Double("reach", p.reach);
    p.seed = s.Seed("seed", p.seed);
    p.generators = s.Bool("generators", p.generators);
    const std::string kind = s.String("discriminators", "oracle");
    if (kind == "none") {
      p.discriminators.reset();
    } else {
      p.discriminators = toy::ParseDiscriminatorKind(kind);
    }
    if (s.has("include")) {
      const json& inc = s.raw("include");
      if (!inc.is_array()) throw ConfigError(s.where("include") + ": expected a list");
      std::vector<int> idx;
      for (const json& k : inc) idx.push_back(Section::ToInt(k, s.where("include")));
      p.include = idx;
    }
    p.reservoir_capacity = s.Int("reservoir_capacity", p.reservoir_capacity);
    p.reservoir_seed = s.Seed("reservoir_seed", p.reservoir_seed);
    if (p.checkpoints < 2) throw ConfigError(where + ": checkpoints must be >= 2");
    if (!(p.mastery_fraction > 0 && p.mastery_fraction <= 1)) {
      throw ConfigError(where + ": mastery_fraction must lie in (0, 1]");
    }
    if (!(p.reach >= 0 && p.reach <= 1)) {
      throw ConfigError(where + ": reach must lie in [0, 1]");
    }
    if (p.include) {
      for (int k : *p.include) {
        if (k < 0 || k >= p.checkpoints) {
          throw ConfigError(where + ": include index " + std::to_string(k) +
                            " is out of range");
        }
      }
      std::set<int> unique(p.include->begin(), p.include->end());
      if (unique.size() != p.include->size()) {
        throw ConfigError(where + ": include lists a checkpoint twice");
      }
    }
    if (p.reservoir_capacity < 1) {
      throw ConfigError(where + ": reservoir_capacity must be >= 1");
    }
  } else if (type == "real_data") {
    Section s(j, where, common);
    p.type = PlayerType::kRealData;
    p.id = s.String("id", "real");
    metadata(s);
  } else if (type == "transform") {
    Section s(j, where, With(common, {"base", "transform", "severity"}));
    p.type = PlayerType::kTransform;
    p.id = s.RequiredString("id");
    p.base = s.RequiredString("base");
    p.transform = toy::ParseTransformKind(s.RequiredString("transform"));
    p.severity = s.Int("severity", 1);
    if (p.severity < 1 || p.severity > 9) {
      throw ConfigError(where + ": severity must lie in 1..9");
    }
    p.experiment = std::string(toy::ToString(p.transform));
    p.iteration = p.severity;
    metadata(s);
  } else if (type == "oracle") {
    Section s(j, where, With(common, {"against"}));
    p.type = PlayerType::kOracle;
    p.role = Role::kDiscriminator;
    p.id = s.RequiredString("id");
    metadata(s);
    if (!s.has("against")) throw ConfigError(where + ": missing 'against'");
    const json& against = s.raw("against");
    if (against.is_object() && against.contains("trajectory")) {
      Section a(against, s.where("against"), {"trajectory", "checkpoint"});
      p.against_trajectory = a.RequiredString("trajectory");
      p.against_checkpoint = a.Int("checkpoint", 0);
    } else {
      Section a(against, s.where("against"), {"transform", "severity"});
      p.against_transform = toy::ParseTransformKind(a.RequiredString("transform"));
      p.against_severity = a.Int("severity", 1);
      if (p.against_severity < 1 || p.against_severity > 9) {
        throw ConfigError(s.where("against") + ": severity must lie in 1..9");
      }
    }
  } else if (type == "constant") {
    Section s(j, where, With(common, {"value"}));
    p.type = PlayerType::kConstant;
    p.role = Role::kDiscriminator;
    p.id = s.RequiredString("id");
    p.value = s.Double("value", 0.0);
    if (!(p.value >= 0.0 && p.value <= 1.0)) {
      throw ConfigError(where + ": value must lie in [0, 1]");
    }
    metadata(s);
  } else if (type == "external") {
    Section s(j, where, With(With(common, {"role"}), kExternalKeys));
    p.type = PlayerType::kExternal;
    p.id = s.RequiredString("id");
    p.role = ParseRole(s.RequiredString("role"));
    p.external = ParseExternal(s);
    metadata(s);
  } else {
    throw ConfigError(where + ": unknown player type '" + type + "'");
  }
  if (p.id.empty()) throw ConfigError(where + ": empty id");
  return p;
}

RatingConfig ParseRating(const json& j) {
  Section s(j, "rating",
            {"tau", "passes", "pass_tolerance", "convergence_eps", "outcome_mode",
             "idle_inflation", "default_rating", "default_deviation",
             "default_volatility"});
  RatingConfig r;
  r.tau = s.Double("tau", r.tau);
  r.max_passes = s.Int("passes", r.max_passes);
  r.pass_tolerance = s.Double("pass_tolerance", r.pass_tolerance);
  r.convergence_eps = s.Double("convergence_eps", r.convergence_eps);
  r.outcome_mode = ParseOutcomeMode(s.String("outcome_mode", "per-sample"));
  r.idle_inflation = s.Bool("idle_inflation", r.idle_inflation);
  r.default_rating = s.Double("default_rating", r.default_rating);
  r.default_deviation = s.Double("default_deviation", r.default_deviation);
  r.default_volatility = s.Double("default_volatility", r.default_volatility);
  r.Validate();
  return r;
}

ScheduleConfig ParseSchedule(const json& j) {
  Section s(j, "schedule", {"kind", "band_width", "repeats", "matches"});
  ScheduleConfig c;
  c.kind = ParseScheduleKind(s.String("kind", "round_robin"));
  if (s.has("band_width")) c.band_width = s.Int("band_width", 0);
  c.repeats = s.Int("repeats", 1);
  if (c.repeats < 1) throw ConfigError("schedule.repeats must be >= 1");
  if (c.band_width && *c.band_width < 0) {
    throw ConfigError("schedule.band_width must be >= 0");
  }
  if (s.has("matches")) {
    const json& list = s.raw("matches");
    if (!list.is_array()) throw ConfigError("schedule.matches: expected a list");
    for (size_t i = 0; i < list.size(); ++i) {
      Section m(list[i], "schedule.matches[" + std::to_string(i) + "]",
                {"generator", "discriminator", "repeat"});
      c.matches.push_back({m.RequiredString("generator"),
                           m.RequiredString("discriminator"), m.Int("repeat", 0)});
    }
  }
  if (c.kind == ScheduleKind::kBand && !c.band_width) {
    throw ConfigError("schedule: band schedules need band_width");
  }
  if (c.kind == ScheduleKind::kExplicit && c.matches.empty()) {
    throw ConfigError("schedule: explicit schedules need a matches list");
  }
  return c;
}

std::vector<int> IncludedCheckpoints(const PlayerConfig& p) {
  if (p.include) {
    std::vector<int> idx = *p.include;
    std::sort(idx.begin(), idx.end());
    return idx;
  }
  std::vector<int> idx(p.checkpoints);
  for (int k = 0; k < p.checkpoints; ++k) idx[k] = k;
  return idx;
}

PlayerKind KindOf(const PlayerConfig& p) {
  switch (p.type) {
    case PlayerType::kTrajectory:
      return PlayerKind::kToyCheckpoint;
    case PlayerType::kRealData:
      return PlayerKind::kRealData;
    case PlayerType::kTransform:
      return PlayerKind::kTransform;
    case PlayerType::kExternal:
      return PlayerKind::kExternal;
    default:
      return PlayerKind::kCustom;
  }
}

class ConstantDiscriminator : public Discriminator {
 public:
  explicit ConstantDiscriminator(double value) : value_(value) {}
  std::vector<double> Judge(const Batch& batch, std::uint64_t) override {
    return std::vector<double>(batch.rows(), value_);
  }

 private:
  double value_;
};

std::chrono::milliseconds Millis(double seconds) {
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

std::shared_ptr<ext::Session> SpawnExternal(const ExternalConfig& e,
                                            std::optional<Role> role) {
  ext::SpawnOptions options;
  options.command = e.command;
  options.args = e.args;
  options.env = e.env;
  options.expected_role = role;
  options.handshake_timeout = Millis(e.handshake_timeout_s);
  options.request_timeout = Millis(e.request_timeout_s);
  return ext::Session::Spawn(options);
}

[[noreturn]] void BadLine(const std::string& what) { throw LogError(what); }

}  // namespace

std::string_view ToString(PlayerType type) {
  switch (type) {
    case PlayerType::kTrajectory:
      return "trajectory";
    case PlayerType::kRealData:
      return "real_data";
    case PlayerType::kTransform:
      return "transform";
    case PlayerType::kOracle:
      return "oracle";
    case PlayerType::kConstant:
      return "constant";
    case PlayerType::kExternal:
      return "external";
  }
  return "unknown";
}

json ReadConfigJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, /*allow_exceptions=*/true,
                       /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
}

TournamentConfig ParseConfig(const json& document) {
  Section s(document, "config",
            {"seed", "batch_size", "threshold", "threads", "failure_mode", "task",
             "data", "players", "schedule", "rating", "outputs"});
  TournamentConfig c;
  c.document = document;
  c.seed = s.Seed("seed", 0);
  c.batch_size = s.Int("batch_size", c.batch_size);
  c.threshold = s.Double("threshold", c.threshold);
  c.threads = s.Int("threads", c.threads);
  c.failure_mode = ParseFailureMode(s.String("failure_mode", "fatal"));
  if (c.batch_size < 1) throw ConfigError("config.batch_size must be >= 1");
  if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) {
    throw ConfigError("config.threshold must lie in [0, 1]");
  }
  if (c.threads < 0) throw ConfigError("config.threads must be >= 0");

  if (s.has("task")) {
    Section t(s.raw("task"), "task", {"dim", "seed", "rows"});
    TaskConfig task;
    task.dim = t.Int("dim", task.dim);
    task.seed = t.Seed("seed", task.seed);
    task.rows = t.Int("rows", task.rows);
    if (task.dim < 1) throw ConfigError("task.dim must be >= 1");
    if (task.rows < 0) throw ConfigError("task.rows must be >= 0");
    c.task = task;
  }
  if (s.has("data")) {
    Section d(s.raw("data"), "data", With({"type"}, kExternalKeys));
    const std::string type = d.String("type", "task");
    if (type == "external") {
      c.data = ParseExternal(d);
    } else if (type != "task") {
      throw ConfigError("data.type must be 'task' or 'external'");
    } else if (d.has("command")) {
      throw ConfigError("data: 'command' needs type 'external'");
    }
  }
  if (!s.has("players") || !s.raw("players").is_array()) {
    throw ConfigError("config: 'players' must be a list");
  }
  const json& players = s.raw("players");
  for (size_t i = 0; i < players.size(); ++i) {
    c.players.push_back(ParsePlayer(players[i], "players[" + std::to_string(i) + "]"));
  }
  if (s.has("schedule")) c.schedule = ParseSchedule(s.raw("schedule"));
  if (s.has("rating")) c.rating = ParseRating(s.raw("rating"));
  if (s.has("outputs")) {
    Section o(s.raw("outputs"), "outputs", {"dir", "log", "svg"});
    c.outputs.dir = o.String("dir", c.outputs.dir);
    c.outputs.log = o.String("log", c.outputs.log);
    c.outputs.svg = o.Bool("svg", c.outputs.svg);
  }

  bool needs_task = !c.data.has_value();
  for (const PlayerConfig& p : c.players) {
    if (p.type != PlayerType::kExternal && p.type != PlayerType::kConstant) {
      needs_task = true;
    }
  }
  if (needs_task && !c.task) {
    throw ConfigError("config: toy players and task-backed data need a 'task'");
  }
  std::set<std::string> ids;
  for (const PlayerSpec& spec : PlayerSpecs(c)) {
    if (!ids.insert(spec.id).second) {
      throw ConfigError("config: duplicate player id '" + spec.id + "'");
    }
  }
  return c;
}

std::string ConfigHash(const json& document) {
  json relevant = document;
  if (relevant.is_object()) {
    for (const char* key : {"rating", "outputs", "threads"}) relevant.erase(key);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(relevant.dump())));
  return buf;
}

std::string CheckpointId(const std::string& name, Role role, int checkpoint,
                         int n_checkpoints) {
  const int width =
      std::max<int>(2, static_cast<int>(std::to_string(n_checkpoints - 1).size()));
  std::string digits = std::to_string(checkpoint);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return name + (role == Role::kGenerator ? "/G" : "/D") + digits;
}

std::vector<PlayerSpec> PlayerSpecs(const TournamentConfig& config) {
  std::vector<PlayerSpec> specs;
  for (const PlayerConfig& p : config.players) {
    if (p.type == PlayerType::kTrajectory) {
      const std::vector<int> idx = IncludedCheckpoints(p);
      if (p.generators) {
        for (int k : idx) {
          specs.push_back({CheckpointId(p.id, Role::kGenerator, k, p.checkpoints),
                           Role::kGenerator, PlayerKind::kToyCheckpoint, k,
                           p.experiment});
        }
      }
      if (p.discriminators) {
        for (int k : idx) {
          specs.push_back(
              {CheckpointId(p.id, Role::kDiscriminator, k, p.checkpoints),
               Role::kDiscriminator, PlayerKind::kToyCheckpoint, k, p.experiment});
        }
      }
      continue;
    }
    const Role role = (p.type == PlayerType::kRealData ||
                       p.type == PlayerType::kTransform)
                          ? Role::kGenerator
                          : p.role;
    specs.push_back({p.id, role, KindOf(p), p.iteration, p.experiment});
  }
  return specs;
}

BuiltTournament BuildTournament(const TournamentConfig& config) {
  BuiltTournament built;
  if (config.task) {
    built.task = toy::MakeTask(config.task->dim, config.task->seed, config.task->rows);
  }
  // A name may appear in several entries (e.g. different checkpoint subsets)
  // as long as they describe the same trajectory.
  std::map<std::string, const PlayerConfig*> first;
  for (const PlayerConfig& p : config.players) {
    if (p.type != PlayerType::kTrajectory) continue;
    auto [it, added] = first.emplace(p.id, &p);
    if (!added) {
      const PlayerConfig& q = *it->second;
      if (q.checkpoints != p.checkpoints || q.mastery_fraction != p.mastery_fraction ||
          q.seed != p.seed || q.reach != p.reach) {
        throw ConfigError("trajectory '" + p.id +
                          "' is defined twice with different parameters");
      }
      continue;
    }
    built.trajectories[p.id] =
        toy::Trajectory(*built.task, p.checkpoints, p.mastery_fraction, p.seed, p.reach);
  }

  if (config.data) {
    auto session = SpawnExternal(*config.data, Role::kGenerator);
    built.data = std::make_shared<ext::ExternalGenerator>(std::move(session));
  } else {
    built.data = toy::RealDataPlayer(*built.task);
  }

  std::optional<toy::GaussianModel> data_model;
  auto data = [&]() -> const toy::GaussianModel& {
    if (!data_model) {
      data_model = toy::GaussianModel::FromFactor(built.task->mu_star,
                                                  built.task->chol_star);
    }
    return *data_model;
  };

  for (const PlayerConfig& p : config.players) {
    switch (p.type) {
      case PlayerType::kTrajectory: {
        const auto& traj = built.trajectories.at(p.id);
        const std::vector<int> idx = IncludedCheckpoints(p);
        if (p.generators) {
          for (int k : idx) {
            built.population.Add(
                {{CheckpointId(p.id, Role::kGenerator, k, p.checkpoints),
                  Role::kGenerator, PlayerKind::kToyCheckpoint, k, p.experiment},
                 toy::CheckpointPlayer(traj[k]),
                 nullptr});
          }
        }
        if (p.discriminators) {
          const int mastery = toy::MasteryIndex(p.checkpoints, p.mastery_fraction);
          auto discs = toy::TrajectoryDiscriminators(
              *built.task, traj, *p.discriminators, mastery, p.reservoir_capacity,
              p.reservoir_seed);
          for (int k : idx) {
            built.population.Add(
                {{CheckpointId(p.id, Role::kDiscriminator, k, p.checkpoints),
                  Role::kDiscriminator, PlayerKind::kToyCheckpoint, k,
                  p.experiment},
                 nullptr,
                 discs[k]});
          }
        }
        break;
      }
      case PlayerType::kRealData:
        built.population.Add({{p.id, Role::kGenerator, PlayerKind::kRealData,
                               p.iteration, p.experiment},
                              toy::RealDataPlayer(*built.task),
                              nullptr});
        break;
      case PlayerType::kTransform: {
        const Player* base = built.population.find(p.base);
        if (base == nullptr || !base->generator) {
          throw ConfigError("transform '" + p.id + "': base '" + p.base +
                            "' must be a generator defined earlier");
        }
        built.population.Add(
            {{p.id, Role::kGenerator, PlayerKind::kTransform, p.iteration,
              p.experiment},
             std::make_shared<toy::TransformGenerator>(
                 base->generator, p.transform, p.severity,
                 toy::TransformScale(*built.task)),
             nullptr});
        break;
      }
      case PlayerType::kOracle: {
        std::vector<toy::GaussianModel> refs;
        if (p.against_transform) {
          refs.push_back(toy::TransformedDataModel(*built.task, *p.against_transform,
                                                   p.against_severity));
        } else {
          auto it = built.trajectories.find(p.against_trajectory);
          if (it == built.trajectories.end()) {
            throw ConfigError("oracle '" + p.id + "': unknown trajectory '" +
                              p.against_trajectory + "'");
          }
          if (p.against_checkpoint < 0 ||
              p.against_checkpoint >= static_cast<int>(it->second.size())) {
            throw ConfigError("oracle '" + p.id + "': checkpoint out of range");
          }
          refs.push_back(it->second[p.against_checkpoint].Model());
        }
        built.population.Add(
            {{p.id, Role::kDiscriminator, PlayerKind::kCustom, p.iteration,
              p.experiment},
             nullptr,
             std::make_shared<toy::ToyDiscriminator>(data(), std::move(refs))});
        break;
      }
      case PlayerType::kConstant:
        built.population.Add({{p.id, Role::kDiscriminator, PlayerKind::kCustom,
                               p.iteration, p.experiment},
                              nullptr,
                              std::make_shared<ConstantDiscriminator>(p.value)});
        break;
      case PlayerType::kExternal: {
        auto session = SpawnExternal(p.external, p.role);
        Player player{{p.id, p.role, PlayerKind::kExternal, p.iteration,
                       p.experiment},
                      nullptr,
                      nullptr};
        if (p.role == Role::kGenerator) {
          player.generator = std::make_shared<ext::ExternalGenerator>(session);
        } else {
          player.discriminator = std::make_shared<ext::ExternalDiscriminator>(session);
        }
        built.population.Add(std::move(player));
        break;
      }
    }
  }
  return built;
}

Schedule BuildSchedule(const ScheduleConfig& config,
                       std::span<const PlayerSpec> players) {
  std::vector<PlayerSpec> gens, discs;
  for (const PlayerSpec& p : players) {
    (p.role == Role::kGenerator ? gens : discs).push_back(p);
  }
  switch (config.kind) {
    case ScheduleKind::kRoundRobin:
      return RoundRobin(gens, discs, config.repeats);
    case ScheduleKind::kBand:
      if (!config.band_width) throw ConfigError("band schedule needs band_width");
      return Band(gens, discs, *config.band_width, config.repeats);
    case ScheduleKind::kExplicit: {
      Schedule s;
      s.kind = ScheduleKind::kExplicit;
      s.matches = config.matches;
      return s;
    }
  }
  throw ConfigError("unknown schedule kind");
}

std::string SerializeHeader(const LogHeader& header) {
  nlohmann::ordered_json j;
  j["format"] = header.format;
  j["config_hash"] = header.config_hash;
  j["seed"] = header.seed;
  return j.dump();
}

std::string SerializeRecord(const MatchRecord& r) {
  nlohmann::ordered_json j;
  j["generator_id"] = r.generator_id;
  j["discriminator_id"] = r.discriminator_id;
  j["n_fake"] = r.n_fake;
  j["fake_wins"] = r.fake_wins;
  j["n_real"] = r.n_real;
  j["real_wins"] = r.real_wins;
  j["seed"] = r.seed;
  j["threshold"] = r.threshold;
  return j.dump();
}

LogHeader ParseHeader(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) BadLine("header is not a JSON object");
  LogHeader h;
  try {
    Section s(j, "header", {"format", "config_hash", "seed"});
    h.format = s.RequiredString("format");
    h.config_hash = s.RequiredString("config_hash");
    if (!s.has("seed")) BadLine("header has no seed");
    h.seed = s.Seed("seed", 0);
  } catch (const ConfigError& e) {
    BadLine(e.what());
  }
  if (h.format != kLogFormat) {
    BadLine("unsupported log format '" + h.format + "'");
  }
  return h;
}

MatchRecord ParseRecord(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) BadLine("record is not a JSON object");
  MatchRecord r;
  try {
    Section s(j, "record",
              {"generator_id", "discriminator_id", "n_fake", "fake_wins", "n_real",
               "real_wins", "seed", "threshold"});
    for (const char* key : {"generator_id", "discriminator_id", "n_fake",
                            "fake_wins", "n_real", "real_wins", "seed",
                            "threshold"}) {
      if (!s.has(key)) BadLine(std::string("record has no '") + key + "'");
    }
    r.generator_id = s.RequiredString("generator_id");
    r.discriminator_id = s.RequiredString("discriminator_id");
    r.n_fake = s.Int("n_fake", 0);
    r.fake_wins = s.Int("fake_wins", 0);
    r.n_real = s.Int("n_real", 0);
    r.real_wins = s.Int("real_wins", 0);
    r.seed = s.Seed("seed", 0);
    r.threshold = s.Double("threshold", 0.5);
  } catch (const ConfigError& e) {
    BadLine(e.what());
  }
  try {
    r.Validate();
  } catch (const MatchError& e) {
    BadLine(e.what());
  }
  return r;
}

LogContents ReadLog(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogError("cannot open log '" + path.string() + "'");
  LogContents out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = path.string() + ":" + std::to_string(number) + ": ";
    if (number == 1) {
      try {
        out.header = ParseHeader(line);
      } catch (const LogError& e) {
        throw LogError(where + e.what());
      }
      continue;
    }
    try {
      if (line.empty()) BadLine("empty line");
      out.records.push_back(ParseRecord(line));
    } catch (const LogError& e) {
      if (strict) throw LogError(where + e.what());
      out.skipped.push_back("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

void WriteLog(const std::filesystem::path& path, const LogHeader& header,
              std::span<const MatchRecord> records) {
  LogWriter writer = LogWriter::Create(path, header);
  for (const MatchRecord& r : records) writer.Write(r);
}

LogWriter LogWriter::Create(const std::filesystem::path& path,
                            const LogHeader& header) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LogError("cannot write log '" + path.string() + "'");
  out << SerializeHeader(header) << '\n';
  out.flush();
  return LogWriter(std::move(out));
}

LogWriter LogWriter::Append(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw LogError("log '" + path.string() + "' does not exist");
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw LogError("cannot append to log '" + path.string() + "'");
  return LogWriter(std::move(out));
}

void LogWriter::Write(const MatchRecord& record) {
  out_ << SerializeRecord(record) << '\n';
  out_.flush();
  if (!out_) throw LogError("write to match log failed");
}

}  // namespace arena
