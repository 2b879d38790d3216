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

#include "arena/toy_players.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "arena/error.h"
#include "arena/rng.h"

namespace arena::toy {
namespace {

Eigen::MatrixXd StandardNormal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) z(r, c) = normal(rng);
  }
  return z;
}

Eigen::MatrixXd Jittered(const Eigen::MatrixXd& cov) {
  const double jitter = kCovarianceJitter * cov.trace() / cov.rows();
  Eigen::MatrixXd out = cov;
  out.diagonal().array() += jitter;
  return out;
}

double LogMeanExp(const std::vector<double>& values) {
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum / static_cast<double>(values.size()));
}

}  // namespace

GaussianTask MakeTask(int dim, std::uint64_t seed, int rows) {
  if (dim < 1) throw ConfigError("task dimension must be >= 1");
  if (rows == 0) rows = dim;
  if (rows < 1) throw ConfigError("task rows must be >= 1");
  Rng rng(seed);
  GaussianTask task;
  task.dim = dim;
  task.seed = seed;
  task.mu_star = StandardNormal(dim, 1, rng).col(0);
  const Eigen::MatrixXd a = StandardNormal(rows, dim, rng);
  const Eigen::MatrixXd cov = Jittered(a.transpose() * a);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("target covariance is not positive definite");
  }
  task.chol_star = llt.matrixU();
  // Define the target covariance through its factor so that a generator with
  // W = chol_star matches it bit for bit.
  task.sigma_star = task.chol_star.transpose() * task.chol_star;
  return task;
}

GaussianModel::GaussianModel(Eigen::VectorXd mean, const Eigen::MatrixXd& cov)
    : mean_(std::move(mean)) {
  if (cov.rows() != mean_.size() || cov.cols() != mean_.size()) {
    throw std::invalid_argument("covariance shape does not match the mean");
  }
  if (!cov.allFinite() || !mean_.allFinite()) {
    throw NumericError("non-finite Gaussian parameters");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(Jittered(cov));
  if (llt.info() != Eigen::Success) {
    throw NumericError("covariance is degenerate even after jitter");
  }
  lower_ = llt.matrixL();
  log_det_ = 2.0 * lower_.diagonal().array().log().sum();
}

GaussianModel GaussianModel::FromFactor(const Eigen::VectorXd& mean,
                                        const Eigen::MatrixXd& factor) {
  return GaussianModel(mean, factor.transpose() * factor);
}

GaussianModel GaussianModel::FromCovariance(const Eigen::VectorXd& mean,
                                            const Eigen::MatrixXd& cov) {
  return GaussianModel(mean, cov);
}

double GaussianModel::LogDensity(const Eigen::VectorXd& x) const {
  return toy::LogDensity(x, mean_, lower_);
}

Eigen::VectorXd GaussianModel::LogDensities(const Batch& batch) const {
  if (batch.cols() != mean_.size()) {
    throw MatchError("sample dimension " + std::to_string(batch.cols()) +
                     " does not match model dimension " +
                     std::to_string(mean_.size()));
  }
  const Eigen::MatrixXd centered =
      (batch.rowwise() - mean_.transpose()).transpose();
  const Eigen::MatrixXd z =
      lower_.triangularView<Eigen::Lower>().solve(centered);
  const double constant =
      log_det_ + static_cast<double>(dim()) * std::log(2.0 * std::numbers::pi);
  return (-0.5 * (z.colwise().squaredNorm().array() + constant)).matrix().transpose();
}

double LogDensity(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& lower) {
  if (!x.allFinite() || !mu.allFinite() || !lower.allFinite()) {
    throw NumericError("non-finite input to LogDensity");
  }
  const Eigen::VectorXd z =
      lower.triangularView<Eigen::Lower>().solve(x - mu);
  const double log_det = 2.0 * lower.diagonal().array().log().sum();
  return -0.5 * (z.squaredNorm() + log_det +
                 static_cast<double>(x.size()) * std::log(2.0 * std::numbers::pi));
}

int MasteryIndex(int n_checkpoints, double mastery_fraction) {
  const double span = mastery_fraction * (n_checkpoints - 1);
  for (int k = 0; k < n_checkpoints; ++k) {
    if (static_cast<double>(k) / span >= 1.0) return k;
  }
  return n_checkpoints - 1;
}

std::vector<ToyGenerator> Trajectory(const GaussianTask& task,
                                     int n_checkpoints,
                                     double mastery_fraction,
                                     std::uint64_t seed, double reach) {
  if (n_checkpoints < 2) throw ConfigError("trajectory needs >= 2 checkpoints");
  if (!(mastery_fraction > 0.0 && mastery_fraction <= 1.0)) {
    throw ConfigError("mastery_fraction must lie in (0, 1]");
  }
  if (!(reach >= 0.0 && reach <= 1.0)) {
    throw ConfigError("reach must lie in [0, 1]");
  }
  Rng rng(seed);
  const Eigen::MatrixXd w0 = kInitScale * StandardNormal(task.dim, task.dim, rng);
  const double span = mastery_fraction * (n_checkpoints - 1);
  std::vector<ToyGenerator> out;
  out.reserve(n_checkpoints);
  for (int k = 0; k < n_checkpoints; ++k) {
    const double t = reach * std::min(1.0, static_cast<double>(k) / span);
    ToyGenerator g;
    g.w = (1.0 - t) * w0 + t * task.chol_star;
    g.b = t * task.mu_star;
    g.checkpoint = k;
    out.push_back(std::move(g));
  }
  return out;
}

double CovError(const ToyGenerator& generator, const GaussianTask& task) {
  return (generator.Covariance() - task.sigma_star).cwiseAbs().mean();
}

double GaussianFrechet(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
                       const Eigen::VectorXd& mu2,
                       const Eigen::MatrixXd& sigma2) {
  const Eigen::Index d = mu1.size();
  if (mu2.size() != d || sigma1.rows() != d || sigma1.cols() != d ||
      sigma2.rows() != d || sigma2.cols() != d) {
    throw std::invalid_argument("GaussianFrechet: shape mismatch");
  }
  for (const Eigen::MatrixXd* s : {&sigma1, &sigma2}) {
    if (!s->isApprox(s->transpose(), 1e-10) ||
        Eigen::LLT<Eigen::MatrixXd>(*s).info() != Eigen::Success) {
      throw std::invalid_argument("GaussianFrechet: covariance is not SPD");
    }
  }
  if (mu1 == mu2 && sigma1 == sigma2) return 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig1(sigma1);
  const Eigen::MatrixXd root1 = eig1.operatorSqrt();
  const Eigen::MatrixXd inner = root1 * sigma2 * root1;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_inner(
      0.5 * (inner + inner.transpose()), Eigen::EigenvaluesOnly);
  const double cross =
      eig_inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double value = (mu1 - mu2).squaredNorm() + sigma1.trace() +
                       sigma2.trace() - 2.0 * cross;
  return std::max(0.0, value);
}

LinearGenerator::LinearGenerator(Eigen::MatrixXd w, Eigen::VectorXd b)
    : w_(std::move(w)), b_(std::move(b)) {
  if (w_.cols() != b_.size()) {
    throw std::invalid_argument("LinearGenerator: W and b shapes disagree");
  }
}

Batch LinearGenerator::Generate(int count, std::uint64_t seed) {
  Rng rng(seed);
  Batch x = StandardNormal(count, w_.rows(), rng) * w_;
  x.rowwise() += b_.transpose();
  return x;
}

std::shared_ptr<Generator> RealDataPlayer(const GaussianTask& task) {
  return std::make_shared<LinearGenerator>(task.chol_star, task.mu_star);
}

std::shared_ptr<Generator> CheckpointPlayer(const ToyGenerator& generator) {
  return std::make_shared<LinearGenerator>(generator.w, generator.b);
}

std::string_view ToString(TransformKind kind) {
  switch (kind) {
    case TransformKind::kAdditiveNoise:
      return "additive_noise";
    case TransformKind::kScaleShift:
      return "scale_shift";
    case TransformKind::kCoordinateMask:
      return "coordinate_mask";
    case TransformKind::kImpulse:
      return "impulse";
  }
  return "additive_noise";
}

TransformKind ParseTransformKind(std::string_view text) {
  for (TransformKind kind :
       {TransformKind::kAdditiveNoise, TransformKind::kScaleShift,
        TransformKind::kCoordinateMask, TransformKind::kImpulse}) {
    if (ToString(kind) == text) return kind;
  }
  throw ConfigError("unknown transform '" + std::string(text) + "'");
}

double TransformScale(const GaussianTask& task) {
  return std::sqrt(task.sigma_star.trace() / task.dim);
}

Batch ApplyTransform(const Batch& batch, TransformKind kind, int severity,
                     double scale, std::uint64_t seed) {
  Rng rng(seed);
  Batch out = batch;
  const Eigen::Index dim = batch.cols();
  auto pick = [&](double fraction) {
    return static_cast<Eigen::Index>(std::lround(fraction * dim));
  };
  switch (kind) {
    case TransformKind::kAdditiveNoise: {
      const double sigma = 0.25 * severity * scale;
      if (sigma != 0.0) out += sigma * StandardNormal(out.rows(), dim, rng);
      break;
    }
    case TransformKind::kScaleShift:
      out *= 1.0 + 0.1 * severity;
      break;
    case TransformKind::kCoordinateMask:
    case TransformKind::kImpulse: {
      const bool mask = kind == TransformKind::kCoordinateMask;
      const Eigen::Index k = pick(mask ? severity / 10.0 : severity / 20.0);
      std::vector<Eigen::Index> coords(dim);
      std::bernoulli_distribution sign;
      for (Eigen::Index r = 0; r < out.rows(); ++r) {
        std::iota(coords.begin(), coords.end(), 0);
        std::shuffle(coords.begin(), coords.end(), rng);
        for (Eigen::Index i = 0; i < k; ++i) {
          out(r, coords[i]) = mask ? 0.0 : (sign(rng) ? 5.0 : -5.0) * scale;
        }
      }
      break;
    }
  }
  return out;
}

TransformGenerator::TransformGenerator(std::shared_ptr<Generator> base,
                                       TransformKind kind, int severity,
                                       double scale)
    : base_(std::move(base)), kind_(kind), severity_(severity), scale_(scale) {
  if (!base_) throw std::invalid_argument("TransformGenerator needs a base");
  if (severity < 1 || severity > 9) {
    throw ConfigError("transform severity must lie in 1..9");
  }
}

Batch TransformGenerator::Generate(int count, std::uint64_t seed) {
  const Batch base = base_->Generate(count, MixSeed(seed, 1));
  return ApplyTransform(base, kind_, severity_, scale_, MixSeed(seed, 2));
}

GaussianModel TransformedDataModel(const GaussianTask& task,
                                   TransformKind kind, int severity) {
  switch (kind) {
    case TransformKind::kAdditiveNoise: {
      const double sigma = 0.25 * severity * TransformScale(task);
      Eigen::MatrixXd cov = task.sigma_star;
      cov.diagonal().array() += sigma * sigma;
      return GaussianModel::FromCovariance(task.mu_star, cov);
    }
    case TransformKind::kScaleShift: {
      const double c = 1.0 + 0.1 * severity;
      return GaussianModel::FromFactor(c * task.mu_star, c * task.chol_star);
    }
    default:
      throw ConfigError("transform '" + std::string(ToString(kind)) +
                        "' has no closed-form distribution");
  }
}

std::string_view ToString(DiscriminatorKind kind) {
  switch (kind) {
    case DiscriminatorKind::kOracle:
      return "oracle";
    case DiscriminatorKind::kForgetting:
      return "forgetting";
    case DiscriminatorKind::kChekhov:
      return "chekhov";
  }
  return "oracle";
}

DiscriminatorKind ParseDiscriminatorKind(std::string_view text) {
  for (DiscriminatorKind kind :
       {DiscriminatorKind::kOracle, DiscriminatorKind::kForgetting,
        DiscriminatorKind::kChekhov}) {
    if (ToString(kind) == text) return kind;
  }
  throw ConfigError("unknown discriminator kind '" + std::string(text) + "'");
}

ToyDiscriminator::ToyDiscriminator(GaussianModel data,
                                   std::vector<GaussianModel> references,
                                   DiscriminatorKind kind, int checkpoint,
                                   int mastery_index)
    : data_(std::move(data)),
      references_(std::move(references)),
      kind_(kind),
      checkpoint_(checkpoint),
      mastery_index_(mastery_index) {
  if (references_.empty()) {
    throw std::invalid_argument("ToyDiscriminator needs a fake-density model");
  }
  for (const GaussianModel& ref : references_) {
    if (ref.dim() != data_.dim()) {
      throw std::invalid_argument("reference dimension differs from data");
    }
  }
}

Eigen::VectorXd ToyDiscriminator::FakeLogDensities(const Batch& batch) const {
  if (references_.size() == 1) return references_.front().LogDensities(batch);
  std::vector<Eigen::VectorXd> per_ref;
  per_ref.reserve(references_.size());
  for (const GaussianModel& ref : references_) {
    per_ref.push_back(ref.LogDensities(batch));
  }
  Eigen::VectorXd out(batch.rows());
  std::vector<double> column(references_.size());
  for (Eigen::Index i = 0; i < batch.rows(); ++i) {
    for (size_t r = 0; r < per_ref.size(); ++r) column[r] = per_ref[r](i);
    out(i) = LogMeanExp(column);
  }
  return out;
}

double ToyDiscriminator::Score(const Eigen::VectorXd& x) const {
  const Batch row = x.transpose();
  return 1.0 / (1.0 + std::exp(FakeLogDensities(row)(0) -
                               data_.LogDensities(row)(0)));
}

std::vector<double> ToyDiscriminator::Judge(const Batch& batch,
                                            std::uint64_t seed) {
  std::vector<double> scores(batch.rows());
  if (forgotten()) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (double& s : scores) s = uniform(rng);
    return scores;
  }
  const Eigen::VectorXd log_data = data_.LogDensities(batch);
  const Eigen::VectorXd log_fake = FakeLogDensities(batch);
  for (Eigen::Index i = 0; i < batch.rows(); ++i) {
    scores[i] = 1.0 / (1.0 + std::exp(log_fake(i) - log_data(i)));
  }
  return scores;
}

std::vector<std::vector<int>> ReservoirHistory(int n, int capacity,
                                               std::uint64_t seed) {
  if (capacity < 1) throw ConfigError("reservoir capacity must be >= 1");
  Rng rng(seed);
  std::vector<int> reservoir;
  std::vector<std::vector<int>> history;
  history.reserve(n);
  for (int item = 0; item < n; ++item) {
    if (static_cast<int>(reservoir.size()) < capacity) {
      reservoir.push_back(item);
    } else {
      std::uniform_int_distribution<int> slot(0, item);
      const int j = slot(rng);
      if (j < capacity) reservoir[j] = item;
    }
    history.push_back(reservoir);
  }
  return history;
}

std::vector<std::shared_ptr<ToyDiscriminator>> TrajectoryDiscriminators(
    const GaussianTask& task, const std::vector<ToyGenerator>& trajectory,
    DiscriminatorKind kind, int mastery_index, int reservoir_capacity,
    std::uint64_t reservoir_seed) {
  const GaussianModel data =
      GaussianModel::FromFactor(task.mu_star, task.chol_star);
  std::vector<GaussianModel> models;
  models.reserve(trajectory.size());
  for (const ToyGenerator& g : trajectory) models.push_back(g.Model());

  std::vector<std::vector<int>> reservoirs;
  if (kind == DiscriminatorKind::kChekhov) {
    reservoirs = ReservoirHistory(static_cast<int>(trajectory.size()),
                                  reservoir_capacity, reservoir_seed);
  }
  std::vector<std::shared_ptr<ToyDiscriminator>> out;
  for (size_t k = 0; k < trajectory.size(); ++k) {
    std::vector<GaussianModel> refs;
    if (kind == DiscriminatorKind::kChekhov) {
      for (int idx : reservoirs[k]) refs.push_back(models[idx]);
    } else {
      refs.push_back(models[k]);
    }
    out.push_back(std::make_shared<ToyDiscriminator>(
        data, std::move(refs), kind, trajectory[k].checkpoint, mastery_index));
  }
  return out;
}

}  // namespace arena::toy
