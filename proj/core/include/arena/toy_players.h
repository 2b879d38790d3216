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

#ifndef ARENA_TOY_PLAYERS_H_
#define ARENA_TOY_PLAYERS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "arena/tournament.h"

// Analytic Gaussian toy domain: a target Gaussian, a synthetic generator
// learning trajectory, likelihood-ratio discriminators, and closed-form
// ground-truth metrics.
namespace arena::toy {

struct GaussianTask {
  int dim = 0;
  Eigen::VectorXd mu_star;
  Eigen::MatrixXd sigma_star;
  // Upper-triangular U with U^T U = sigma_star.
  Eigen::MatrixXd chol_star;
  std::uint64_t seed = 0;
};

// mu_star and a rows x dim matrix A are drawn from a seeded standard normal;
// sigma_star = A^T A + jitter I with jitter = 1e-6 trace(A^T A) / dim.
// rows = 0 means rows = dim.
GaussianTask MakeTask(int dim, std::uint64_t seed, int rows = 0);

// Relative diagonal jitter added to every covariance before factorization.
inline constexpr double kCovarianceJitter = 1e-6;

// Multivariate normal density with a cached Cholesky factor.
class GaussianModel {
 public:
  // Covariance = factor^T factor + jitter.
  static GaussianModel FromFactor(const Eigen::VectorXd& mean,
                                  const Eigen::MatrixXd& factor);
  // Covariance = cov + jitter. Throws NumericError if not positive definite.
  static GaussianModel FromCovariance(const Eigen::VectorXd& mean,
                                      const Eigen::MatrixXd& cov);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& lower() const { return lower_; }
  double log_det() const { return log_det_; }

  double LogDensity(const Eigen::VectorXd& x) const;
  // One log density per row of `batch`.
  Eigen::VectorXd LogDensities(const Batch& batch) const;

 private:
  GaussianModel(Eigen::VectorXd mean, const Eigen::MatrixXd& cov);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd lower_;
  double log_det_ = 0.0;
};

// log N(x; mu, L L^T) for a lower-triangular factor L, via a triangular
// solve. Throws NumericError on non-finite input.
double LogDensity(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& lower);

// Linear generator checkpoint: x = z W + b with z ~ N(0, I), so the sample
// mean is b and the covariance W^T W.
struct ToyGenerator {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
  int checkpoint = 0;

  Eigen::MatrixXd Covariance() const { return w.transpose() * w; }
  GaussianModel Model() const { return GaussianModel::FromFactor(b, w); }
};

inline constexpr double kInitScale = 0.05;

// First checkpoint index whose generator matches the data exactly.
int MasteryIndex(int n_checkpoints, double mastery_fraction);

// Synthetic learning trajectory. W_0 is a seeded random init at scale 0.05;
// checkpoint k interpolates W_k = (1 - t) W_0 + t U and b_k = t mu_star with
// t = reach * min(1, k / (mastery_fraction (n - 1))). A reach below 1 gives
// a trajectory that stalls short of the target.
std::vector<ToyGenerator> Trajectory(const GaussianTask& task,
                                     int n_checkpoints,
                                     double mastery_fraction,
                                     std::uint64_t seed, double reach = 1.0);

// Mean absolute entrywise difference between W^T W and sigma_star.
double CovError(const ToyGenerator& generator, const GaussianTask& task);

// Squared Frechet (2-Wasserstein) distance between two Gaussians:
// |mu1 - mu2|^2 + Tr(S1 + S2 - 2 (S1 S2)^{1/2}).
double GaussianFrechet(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                       const Eigen::VectorXd& mu2,
                       const Eigen::MatrixXd& sigma2);

// Samples z W + b.
class LinearGenerator : public Generator {
 public:
  LinearGenerator(Eigen::MatrixXd w, Eigen::VectorXd b);
  int dim() const override { return static_cast<int>(b_.size()); }
  Batch Generate(int count, std::uint64_t seed) override;

 private:
  Eigen::MatrixXd w_;
  Eigen::VectorXd b_;
};

// Emits i.i.d. samples from N(mu_star, sigma_star).
std::shared_ptr<Generator> RealDataPlayer(const GaussianTask& task);
std::shared_ptr<Generator> CheckpointPlayer(const ToyGenerator& generator);

enum class TransformKind { kAdditiveNoise, kScaleShift, kCoordinateMask, kImpulse };

std::string_view ToString(TransformKind kind);
TransformKind ParseTransformKind(std::string_view text);

// sqrt(trace(sigma_star) / dim), the unit for noise and impulse sizes.
double TransformScale(const GaussianTask& task);

// Applies a seeded distortion to a batch:
//   additive_noise  x + N(0, (0.25 severity scale)^2 I)
//   scale_shift     x (1 + 0.1 severity)
//   coordinate_mask zero round(severity / 10 * dim) coordinates per sample
//   impulse         set round(severity / 20 * dim) coordinates per sample to
//                   +-5 scale
Batch ApplyTransform(const Batch& batch, TransformKind kind, int severity,
                     double scale, std::uint64_t seed);

class TransformGenerator : public Generator {
 public:
  // severity must lie in 1..9.
  TransformGenerator(std::shared_ptr<Generator> base, TransformKind kind,
                     int severity, double scale);
  int dim() const override { return base_->dim(); }
  Batch Generate(int count, std::uint64_t seed) override;

 private:
  std::shared_ptr<Generator> base_;
  TransformKind kind_;
  int severity_;
  double scale_;
};

// Closed-form distribution of a transformed data sample, for the
// transforms that keep data Gaussian (additive_noise, scale_shift).
GaussianModel TransformedDataModel(const GaussianTask& task,
                                   TransformKind kind, int severity);

enum class DiscriminatorKind { kOracle, kForgetting, kChekhov };

std::string_view ToString(DiscriminatorKind kind);
DiscriminatorKind ParseDiscriminatorKind(std::string_view text);

// Likelihood-ratio discriminator D(x) = p*(x) / (p*(x) + p_fake(x)). The
// fake density is a uniform mixture over `references`. A forgetting
// discriminator whose checkpoint has reached `mastery_index` emits seeded
// uniform noise instead.
class ToyDiscriminator : public Discriminator {
 public:
  ToyDiscriminator(GaussianModel data, std::vector<GaussianModel> references,
                   DiscriminatorKind kind = DiscriminatorKind::kOracle,
                   int checkpoint = 0, int mastery_index = 0);

  DiscriminatorKind kind() const { return kind_; }
  bool forgotten() const {
    return kind_ == DiscriminatorKind::kForgetting &&
           checkpoint_ >= mastery_index_;
  }

  // Score of a single sample for the deterministic kinds.
  double Score(const Eigen::VectorXd& x) const;
  std::vector<double> Judge(const Batch& batch, std::uint64_t seed) override;

 private:
  Eigen::VectorXd FakeLogDensities(const Batch& batch) const;

  GaussianModel data_;
  std::vector<GaussianModel> references_;
  DiscriminatorKind kind_;
  int checkpoint_;
  int mastery_index_;
};

// Reservoir sampling (Algorithm R) over the stream 0, 1, ..., n - 1.
// Element k of the result is the reservoir content after item k arrived.
std::vector<std::vector<int>> ReservoirHistory(int n, int capacity,
                                               std::uint64_t seed);

inline constexpr int kChekhovReservoir = 10;

// Discriminators for every checkpoint of a trajectory. Oracle and forgetting
// discriminators model their own checkpoint's generator; Chekhov
// discriminators model a reservoir-sampled mixture of past generators.
std::vector<std::shared_ptr<ToyDiscriminator>> TrajectoryDiscriminators(
    const GaussianTask& task, const std::vector<ToyGenerator>& trajectory,
    DiscriminatorKind kind, int mastery_index,
    int reservoir_capacity = kChekhovReservoir,
    std::uint64_t reservoir_seed = 0);

}  // namespace arena::toy

#endif  // ARENA_TOY_PLAYERS_H_
