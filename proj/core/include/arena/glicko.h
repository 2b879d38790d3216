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

#ifndef ARENA_GLICKO_H_
#define ARENA_GLICKO_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arena/records.h"

namespace arena {

// Conversion factor between the public (Elo-like) scale and the internal
// Glicko2 scale.
inline constexpr double kGlickoScale = 173.7178;
inline constexpr double kDefaultRating = 1500.0;
inline constexpr double kDefaultDeviation = 350.0;
inline constexpr double kDefaultVolatility = 0.06;

// A player's Glicko2 state on the public scale.
struct Rating {
  double rating = kDefaultRating;
  double deviation = kDefaultDeviation;
  double volatility = kDefaultVolatility;

  friend bool operator==(const Rating&, const Rating&) = default;
};

struct InternalRating {
  double mu = 0.0;
  double phi = 0.0;
};

InternalRating ToInternal(const Rating& rating);
Rating FromInternal(double mu, double phi, double volatility);

// Glicko2 opponent weighting 1/sqrt(1 + 3 phi^2 / pi^2).
double GlickoG(double phi);

// Expected score of a player at `mu` against an opponent at (mu_j, phi_j).
double ExpectedScore(double mu, double mu_j, double phi_j);

// Iterative volatility update (Glickman 2013, step 5) using the
// Illinois-modified regula falsi. Throws NumericError if the bracket search
// or the root finder exceeds its iteration cap.
double UpdateVolatility(double sigma, double delta, double phi, double v,
                        double tau, double eps);

// One game seen from the rated player's side.
struct GameResult {
  Rating opponent;
  double score = 0.0;
};

enum class OutcomeMode {
  kPerSample,  // every judged sample is one binary game
  kPerMatch,   // one fractional game per match, score = match win rate
};

std::string_view ToString(OutcomeMode mode);
OutcomeMode ParseOutcomeMode(std::string_view text);

struct RatingConfig {
  double tau = 0.5;
  double default_rating = kDefaultRating;
  double default_deviation = kDefaultDeviation;
  double default_volatility = kDefaultVolatility;
  double convergence_eps = 1e-6;
  int max_passes = 64;
  double pass_tolerance = 0.01;  // public-scale points
  // Frozen snapshots never go stale, so idle players keep their deviation.
  bool idle_inflation = false;
  OutcomeMode outcome_mode = OutcomeMode::kPerSample;

  Rating default_player() const {
    return {default_rating, default_deviation, default_volatility};
  }
  // Throws ConfigError on out-of-range constants.
  void Validate() const;
};

// One full Glicko2 rating-period update (steps 2-8). With no games and
// idle_inflation off the input is returned unchanged.
Rating UpdatePlayer(const Rating& rating, std::span<const GameResult> games,
                    const RatingConfig& config);

struct TournamentRatings {
  std::map<std::string, Rating> ratings;
  int passes = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Rates every player in `records` (both generators and discriminators)
// by treating the whole record set as one rating period and iterating to a
// fixed point. If `players` is given, records naming other ids are rejected
// and listed players without matches are reported at their defaults.
TournamentRatings RateTournament(
    std::span<const MatchRecord> records, const RatingConfig& config,
    std::optional<std::span<const PlayerSpec>> players = std::nullopt);

}  // namespace arena

#endif  // ARENA_GLICKO_H_
