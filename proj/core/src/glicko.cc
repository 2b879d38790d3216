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

#include "arena/glicko.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "arena/error.h"

namespace arena {
namespace {

constexpr int kMaxVolatilityIterations = 1000;
constexpr double kMaxNewtonStep = 2.0;  // internal units, ~350 points
constexpr int kMaxBacktracks = 20;
constexpr double kMinInformation = 1e-12;

// Aggregated games between one player and one opponent.
struct Edge {
  int opponent = 0;
  double games = 0.0;
  double score = 0.0;
};

struct PassTerms {
  std::vector<double> information;  // sum of n g^2 E (1 - E), i.e. 1/v
  std::vector<double> score_residual;  // sum of g (s - n E)
};

PassTerms ComputeTerms(const std::vector<std::vector<Edge>>& edges,
                       const std::vector<double>& mu,
                       const std::vector<double>& phi) {
  PassTerms terms;
  terms.information.assign(edges.size(), 0.0);
  terms.score_residual.assign(edges.size(), 0.0);
  for (size_t i = 0; i < edges.size(); ++i) {
    for (const Edge& e : edges[i]) {
      const double g = GlickoG(phi[e.opponent]);
      const double expected = ExpectedScore(mu[i], mu[e.opponent],
                                            phi[e.opponent]);
      terms.information[i] += e.games * g * g * expected * (1.0 - expected);
      terms.score_residual[i] += g * (e.score - e.games * expected);
    }
  }
  return terms;
}

double MaxAbsResidual(const std::vector<std::vector<Edge>>& edges,
                      const std::vector<int>& active,
                      const std::vector<double>& mu,
                      const std::vector<double>& phi, double prior_mu,
                      const std::vector<double>& phi_star_sq) {
  const PassTerms terms = ComputeTerms(edges, mu, phi);
  double worst = 0.0;
  for (int i : active) {
    const double f =
        terms.score_residual[i] - (mu[i] - prior_mu) / phi_star_sq[i];
    worst = std::max(worst, std::abs(f));
  }
  return worst;
}

}  // namespace

std::string_view ToString(OutcomeMode mode) {
  return mode == OutcomeMode::kPerSample ? "per-sample" : "per-match";
}

OutcomeMode ParseOutcomeMode(std::string_view text) {
  if (text == "per-sample" || text == "per_sample") {
    return OutcomeMode::kPerSample;
  }
  if (text == "per-match" || text == "per_match") {
    return OutcomeMode::kPerMatch;
  }
  throw ConfigError("unknown outcome mode '" + std::string(text) +
                    "' (expected per-sample or per-match)");
}

void RatingConfig::Validate() const {
  if (!(tau > 0.0)) throw ConfigError("rating.tau must be > 0");
  if (!(convergence_eps > 0.0)) {
    throw ConfigError("rating.convergence_eps must be > 0");
  }
  if (max_passes < 1) throw ConfigError("rating.max_passes must be >= 1");
  if (!(pass_tolerance > 0.0)) {
    throw ConfigError("rating.pass_tolerance must be > 0");
  }
  if (!(default_deviation > 0.0) || !(default_volatility > 0.0)) {
    throw ConfigError("default deviation and volatility must be > 0");
  }
  if (!std::isfinite(default_rating)) {
    throw ConfigError("rating.default_rating must be finite");
  }
}

InternalRating ToInternal(const Rating& rating) {
  return {(rating.rating - kDefaultRating) / kGlickoScale,
          rating.deviation / kGlickoScale};
}

Rating FromInternal(double mu, double phi, double volatility) {
  return {mu * kGlickoScale + kDefaultRating, phi * kGlickoScale, volatility};
}

double GlickoG(double phi) {
  constexpr double kPiSquared = std::numbers::pi * std::numbers::pi;
  return 1.0 / std::sqrt(1.0 + 3.0 * phi * phi / kPiSquared);
}

double ExpectedScore(double mu, double mu_j, double phi_j) {
  return 1.0 / (1.0 + std::exp(-GlickoG(phi_j) * (mu - mu_j)));
}

double UpdateVolatility(double sigma, double delta, double phi, double v,
                        double tau, double eps) {
  if (!(sigma > 0.0) || !(phi > 0.0) || !(v > 0.0) || !(tau > 0.0) ||
      !(eps > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument(
        "UpdateVolatility: sigma, phi, v, tau, eps must be positive and "
        "delta finite");
  }
  const double a = std::log(sigma * sigma);
  const double delta_sq = delta * delta;
  const double phi_sq = phi * phi;
  auto f = [&](double x) {
    const double ex = std::exp(x);
    const double denom = phi_sq + v + ex;
    return ex * (delta_sq - phi_sq - v - ex) / (2.0 * denom * denom) -
           (x - a) / (tau * tau);
  };

  double lo = a;
  double hi;
  if (delta_sq > phi_sq + v) {
    hi = std::log(delta_sq - phi_sq - v);
  } else {
    int k = 1;
    while (f(a - k * tau) < 0.0) {
      if (++k > kMaxVolatilityIterations) {
        throw NumericError("volatility bracket search did not terminate");
      }
    }
    hi = a - k * tau;
  }

  double f_lo = f(lo);
  double f_hi = f(hi);
  int iterations = 0;
  while (std::abs(hi - lo) > eps) {
    if (++iterations > kMaxVolatilityIterations) {
      throw NumericError("volatility root finder did not converge");
    }
    const double c = lo + (lo - hi) * f_lo / (f_hi - f_lo);
    const double f_c = f(c);
    if (!std::isfinite(f_c)) {
      throw NumericError("volatility root finder produced a non-finite value");
    }
    if (f_c * f_hi <= 0.0) {
      lo = hi;
      f_lo = f_hi;
    } else {
      f_lo /= 2.0;
    }
    hi = c;
    f_hi = f_c;
  }
  return std::exp(lo / 2.0);
}

Rating UpdatePlayer(const Rating& rating, std::span<const GameResult> games,
                    const RatingConfig& config) {
  config.Validate();
  const InternalRating self = ToInternal(rating);
  if (games.empty()) {
    if (!config.idle_inflation) return rating;
    const double phi_star = std::sqrt(self.phi * self.phi +
                                      rating.volatility * rating.volatility);
    return FromInternal(self.mu, phi_star, rating.volatility);
  }

  double information = 0.0;
  double residual = 0.0;
  for (const GameResult& game : games) {
    if (!(game.score >= 0.0 && game.score <= 1.0)) {
      throw std::invalid_argument("game score must lie in [0, 1]");
    }
    const InternalRating opp = ToInternal(game.opponent);
    const double g = GlickoG(opp.phi);
    const double expected = ExpectedScore(self.mu, opp.mu, opp.phi);
    information += g * g * expected * (1.0 - expected);
    residual += g * (game.score - expected);
  }
  const double v = 1.0 / std::max(information, kMinInformation);
  const double delta = v * residual;
  const double sigma = UpdateVolatility(rating.volatility, delta, self.phi, v,
                                        config.tau, config.convergence_eps);
  const double phi_star = std::sqrt(self.phi * self.phi + sigma * sigma);
  const double phi_new = 1.0 / std::sqrt(1.0 / (phi_star * phi_star) + 1.0 / v);
  const double mu_new = self.mu + phi_new * phi_new * residual;
  return FromInternal(mu_new, phi_new, sigma);
}

TournamentRatings RateTournament(
    std::span<const MatchRecord> records, const RatingConfig& config,
    std::optional<std::span<const PlayerSpec>> players) {
  config.Validate();
  TournamentRatings result;

  // Stable player numbering: sorted ids.
  std::map<std::string, Role> roles;
  if (players) {
    for (const PlayerSpec& spec : *players) {
      if (!roles.emplace(spec.id, spec.role).second) {
        throw ConfigError("duplicate player id '" + spec.id + "'");
      }
    }
  }
  auto note_role = [&](const std::string& id, Role role) {
    auto it = roles.find(id);
    if (it == roles.end()) {
      if (players) throw ConfigError("match record names unknown player '" +
                                     id + "'");
      roles.emplace(id, role);
    } else if (it->second != role) {
      throw ConfigError("player '" + id +
                        "' appears as both generator and discriminator");
    }
  };
  for (const MatchRecord& record : records) {
    record.Validate();
    note_role(record.generator_id, Role::kGenerator);
    note_role(record.discriminator_id, Role::kDiscriminator);
  }

  std::vector<std::string> ids;
  std::map<std::string, int> index;
  for (const auto& [id, role] : roles) {
    index.emplace(id, static_cast<int>(ids.size()));
    ids.push_back(id);
  }
  const int n = static_cast<int>(ids.size());
  const Rating prior = config.default_player();
  for (const std::string& id : ids) result.ratings.emplace(id, prior);

  if (records.empty()) {
    result.converged = true;
    result.warnings.push_back("no match records; every player keeps defaults");
    return result;
  }

  // Aggregate outcomes per (player, opponent). Within a pair the order of
  // accumulation follows record order, so results are a pure function of
  // the record sequence.
  std::vector<std::map<int, Edge>> pair_edges(n);
  for (const MatchRecord& record : records) {
    if (record.samples() == 0) continue;
    const int g = index.at(record.generator_id);
    const int d = index.at(record.discriminator_id);
    double games;
    double g_score;
    if (config.outcome_mode == OutcomeMode::kPerSample) {
      games = record.samples();
      g_score = record.generator_wins();
    } else {
      games = 1.0;
      g_score = record.win_rate();
    }
    Edge& ge = pair_edges[g][d];
    ge.opponent = d;
    ge.games += games;
    ge.score += g_score;
    Edge& de = pair_edges[d][g];
    de.opponent = g;
    de.games += games;
    de.score += games - g_score;
  }
  std::vector<std::vector<Edge>> edges(n);
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    for (const auto& [opp, edge] : pair_edges[i]) edges[i].push_back(edge);
    if (!edges[i].empty()) active.push_back(i);
  }
  // Players with identical outcome lists are interchangeable and share one
  // unknown, so they come out bit-identical rather than differing by the
  // rounding of a pivoted solve.
  std::map<std::vector<std::tuple<int, double, double>>, int> class_of_key;
  std::vector<int> cls(n, -1);
  std::vector<int> representative;
  for (int i : active) {
    std::vector<std::tuple<int, double, double>> key;
    for (const Edge& e : edges[i]) key.emplace_back(e.opponent, e.games, e.score);
    auto [it, added] =
        class_of_key.emplace(std::move(key), static_cast<int>(representative.size()));
    if (added) representative.push_back(i);
    cls[i] = it->second;
  }
  const int m = static_cast<int>(representative.size());

  const InternalRating prior_internal = ToInternal(prior);
  const double prior_phi_sq = prior_internal.phi * prior_internal.phi;
  std::vector<double> mu(n, prior_internal.mu);
  std::vector<double> phi(n, prior_internal.phi);
  std::vector<double> sigma(n, prior.volatility);
  std::vector<double> phi_star_sq(n, prior_phi_sq);

  // Deviation and volatility for every active player given the current
  // means and the deviation snapshot used for opponent weighting.
  auto refresh_uncertainty = [&](const std::vector<double>& phi_snapshot,
                                 std::vector<double>* phi_out) {
    const PassTerms terms = ComputeTerms(edges, mu, phi_snapshot);
    for (int i : active) {
      const double info = std::max(terms.information[i], kMinInformation);
      const double v = 1.0 / info;
      const double delta = v * terms.score_residual[i];
      sigma[i] = UpdateVolatility(prior.volatility, delta,
                                  prior_internal.phi, v, config.tau,
                                  config.convergence_eps);
      phi_star_sq[i] = prior_phi_sq + sigma[i] * sigma[i];
      (*phi_out)[i] = 1.0 / std::sqrt(1.0 / phi_star_sq[i] + info);
    }
    return terms;
  };

  for (int pass = 1; pass <= config.max_passes; ++pass) {
    result.passes = pass;
    const std::vector<double> phi_snapshot = phi;
    std::vector<double> phi_next = phi;
    const PassTerms terms = refresh_uncertainty(phi_snapshot, &phi_next);

    // Newton step on F_i(mu) = sum_j g_j (s_ij - n_ij E_ij) - (mu_i - mu0) /
    // phi*_i^2, with every E/g evaluated at the pass-start snapshot.
    Eigen::MatrixXd jacobian = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd residual(m);
    for (int k = 0; k < m; ++k) {
      const int i = representative[k];
      residual(k) = terms.score_residual[i] -
                    (mu[i] - prior_internal.mu) / phi_star_sq[i];
      jacobian(k, k) = -(terms.information[i] + 1.0 / phi_star_sq[i]);
      for (const Edge& e : edges[i]) {
        const double g = GlickoG(phi_snapshot[e.opponent]);
        const double expected =
            ExpectedScore(mu[i], mu[e.opponent], phi_snapshot[e.opponent]);
        jacobian(k, cls[e.opponent]) +=
            e.games * g * g * expected * (1.0 - expected);
      }
    }
    Eigen::VectorXd step = jacobian.partialPivLu().solve(-residual);
    if (!step.allFinite()) {
      throw NumericError("rating fixed-point step is not finite");
    }
    const double largest = step.cwiseAbs().maxCoeff();
    if (largest > kMaxNewtonStep) step *= kMaxNewtonStep / largest;

    const double start_residual = residual.cwiseAbs().maxCoeff();
    double alpha = 1.0;
    std::vector<double> trial = mu;
    for (int attempt = 0; attempt <= kMaxBacktracks; ++attempt) {
      for (int i : active) trial[i] = mu[i] + alpha * step(cls[i]);
      const double r = MaxAbsResidual(edges, active, trial, phi_snapshot,
                                      prior_internal.mu, phi_star_sq);
      if (r <= start_residual || attempt == kMaxBacktracks) break;
      alpha /= 2.0;
    }
    const double change = alpha * step.cwiseAbs().maxCoeff() * kGlickoScale;
    mu = std::move(trial);
    phi = std::move(phi_next);
    if (change < config.pass_tolerance) {
      result.converged = true;
      break;
    }
  }
  if (!result.converged) {
    result.warnings.push_back("ratings did not converge within " +
                              std::to_string(config.max_passes) + " passes");
  }

  // Report deviation and volatility consistent with the final means.
  std::vector<double> phi_final = phi;
  refresh_uncertainty(phi, &phi_final);
  for (int i : active) {
    result.ratings[ids[i]] = FromInternal(mu[i], phi_final[i], sigma[i]);
  }
  return result;
}

}  // namespace arena
