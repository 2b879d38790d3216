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
#include <random>
#include <set>
#include <vector>

#include "arena/error.h"
#include "arena/rng.h"
#include "gtest/gtest.h"

namespace arena::toy {
namespace {

Eigen::MatrixXd RandomMatrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

Eigen::MatrixXd RandomSpd(int d, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = RandomMatrix(d + 2, d, rng);
  return a.transpose() * a + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

// Dense-inverse multivariate normal log density.
double BruteLogDensity(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                       const Eigen::MatrixXd& cov) {
  const Eigen::VectorXd r = x - mu;
  const double quad = r.dot(cov.inverse() * r);
  return -0.5 * (quad + std::log(cov.determinant()) +
                 x.size() * std::log(2.0 * std::numbers::pi));
}

double BruteScore(const Eigen::VectorXd& x, const Eigen::VectorXd& mu_data,
                  const Eigen::MatrixXd& cov_data, const Eigen::VectorXd& mu_fake,
                  const Eigen::MatrixXd& cov_fake) {
  const double lp = BruteLogDensity(x, mu_data, cov_data);
  const double lf = BruteLogDensity(x, mu_fake, cov_fake);
  return 1.0 / (1.0 + std::exp(lf - lp));
}

Eigen::MatrixXd ModelCovariance(const GaussianModel& m) {
  return m.lower() * m.lower().transpose();
}

TEST(LogDensityTest, StandardNormalPeak) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  EXPECT_NEAR(LogDensity(zero, zero, one), -0.5 * std::log(2 * std::numbers::pi),
              1e-15);
  EXPECT_NEAR(LogDensity(zero, zero, one), -0.9189, 1e-4);
}

TEST(LogDensityTest, TranslationInvariance) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    const Eigen::MatrixXd lower = RandomSpd(d, rng).llt().matrixL();
    const Eigen::VectorXd x = RandomMatrix(d, 1, rng);
    const Eigen::VectorXd mu = RandomMatrix(d, 1, rng);
    const Eigen::VectorXd shift = 10.0 * RandomMatrix(d, 1, rng);
    EXPECT_NEAR(LogDensity(x, mu, lower), LogDensity(x + shift, mu + shift, lower),
                1e-9);
  }
}

TEST(LogDensityTest, MatchesDenseInverseAtDimThree) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd cov = RandomSpd(3, rng);
    const Eigen::MatrixXd lower = cov.llt().matrixL();
    const Eigen::VectorXd x = RandomMatrix(3, 1, rng);
    const Eigen::VectorXd mu = RandomMatrix(3, 1, rng);
    EXPECT_NEAR(LogDensity(x, mu, lower), BruteLogDensity(x, mu, cov), 1e-9);
  }
}

TEST(LogDensityTest, NonFiniteInputThrows) {
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  const Eigen::MatrixXd lower = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd x(2);
  x << 0.0, NAN;
  EXPECT_THROW(LogDensity(x, mu, lower), NumericError);
}

TEST(GaussianModelTest, BatchAgreesWithScalar) {
  std::mt19937_64 rng(5);
  const GaussianModel m =
      GaussianModel::FromCovariance(RandomMatrix(4, 1, rng), RandomSpd(4, rng));
  const Batch batch = RandomMatrix(10, 4, rng);
  const Eigen::VectorXd all = m.LogDensities(batch);
  for (int r = 0; r < 10; ++r) {
    EXPECT_NEAR(all(r), m.LogDensity(batch.row(r).transpose()), 1e-12);
    EXPECT_NEAR(all(r),
                BruteLogDensity(batch.row(r).transpose(), m.mean(),
                                ModelCovariance(m)),
                1e-9);
  }
}

TEST(MakeTaskTest, Basics) {
  const GaussianTask one = MakeTask(1, 9);
  EXPECT_GT(one.sigma_star(0, 0), 0.0);
  const GaussianTask a = MakeTask(6, 123);
  const GaussianTask b = MakeTask(6, 123);
  EXPECT_EQ(a.mu_star, b.mu_star);
  EXPECT_EQ(a.sigma_star, b.sigma_star);
  EXPECT_NE(a.mu_star, MakeTask(6, 124).mu_star);
  EXPECT_THROW(MakeTask(0, 1), ConfigError);
}

TEST(MakeTaskTest, FactorReconstructsAtDimFifty) {
  for (int rows : {0, 100}) {
    const GaussianTask t = MakeTask(50, 1, rows);
    EXPECT_LT((t.chol_star.transpose() * t.chol_star - t.sigma_star)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-8);
    EXPECT_TRUE(t.chol_star.isUpperTriangular());
    EXPECT_LT((t.sigma_star - t.sigma_star.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(CovErrorTest, ScalarExample) {
  GaussianTask task;
  task.dim = 1;
  task.mu_star = Eigen::VectorXd::Zero(1);
  task.sigma_star = Eigen::MatrixXd::Constant(1, 1, 1.0);
  task.chol_star = task.sigma_star;
  ToyGenerator g;
  g.w = Eigen::MatrixXd::Constant(1, 1, 2.0);
  g.b = Eigen::VectorXd::Zero(1);
  EXPECT_EQ(CovError(g, task), 3.0);
}

TEST(CovErrorTest, MatchesEntrywiseBruteForce) {
  const GaussianTask task = MakeTask(8, 4);
  const ToyGenerator g0 = Trajectory(task, 10, 0.5, 77)[0];
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      double cov = 0.0;
      for (int k = 0; k < 8; ++k) cov += g0.w(k, i) * g0.w(k, j);
      sum += std::abs(cov - task.sigma_star(i, j));
    }
  }
  EXPECT_NEAR(CovError(g0, task), sum / 64.0, 1e-12);
}

TEST(TrajectoryTest, InitScaleAndEndpoint) {
  const GaussianTask task = MakeTask(8, 2);
  const auto traj = Trajectory(task, 20, 1.0, 3);
  ASSERT_EQ(traj.size(), 20u);
  EXPECT_EQ(traj[0].b, Eigen::VectorXd::Zero(8));
  // Entries of a 0.05-scaled standard normal matrix.
  const double rms = std::sqrt(traj[0].w.squaredNorm() / 64.0);
  EXPECT_GT(rms, 0.03);
  EXPECT_LT(rms, 0.07);
  EXPECT_EQ(traj.back().Covariance(), task.sigma_star);
  EXPECT_EQ(traj.back().b, task.mu_star);
  EXPECT_EQ(CovError(traj.back(), task), 0.0);
}

TEST(TrajectoryTest, ErrorStrictlyDecreasesThenStaysZero) {
  const GaussianTask task = MakeTask(8, 21);
  const int n = 20;
  const double fraction = 0.5;
  const auto traj = Trajectory(task, n, fraction, 8);
  const int mastery = MasteryIndex(n, fraction);
  EXPECT_EQ(mastery, 10);
  for (int k = 1; k < n; ++k) {
    const double prev = CovError(traj[k - 1], task);
    const double cur = CovError(traj[k], task);
    if (k <= mastery) {
      EXPECT_LT(cur, prev) << k;
    } else {
      EXPECT_EQ(cur, 0.0) << k;
    }
    const Eigen::MatrixXd cov = traj[k].Covariance();
    EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(cov + 1e-12 * Eigen::MatrixXd::Identity(8, 8))
                  .info(),
              Eigen::Success);
  }
  for (int k = mastery; k < n; ++k) {
    EXPECT_EQ(GaussianFrechet(traj[k].b, traj[k].Covariance(), task.mu_star,
                              task.sigma_star),
              0.0);
  }
  for (int k = 0; k < mastery; ++k) {
    EXPECT_GT(CovError(traj[k], task), 0.0);
    EXPECT_GT(GaussianFrechet(traj[k].b, traj[k].Covariance(), task.mu_star,
                              task.sigma_star),
              0.0);
  }
}

TEST(TrajectoryTest, ReachStallsShortOfTarget) {
  const GaussianTask task = MakeTask(4, 2);
  const auto traj = Trajectory(task, 5, 1.0, 3, 0.5);
  EXPECT_GT(CovError(traj.back(), task), 0.0);
  EXPECT_THROW(Trajectory(task, 1, 1.0, 3), ConfigError);
  EXPECT_THROW(Trajectory(task, 5, 0.0, 3), ConfigError);
}

TEST(FrechetTest, ClosedFormExamples) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd one_v = Eigen::VectorXd::Ones(1);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd four = 4.0 * one;
  EXPECT_NEAR(GaussianFrechet(zero, one, one_v, one), 1.0, 1e-12);
  EXPECT_NEAR(GaussianFrechet(zero, four, zero, one), 1.0, 1e-12);
  EXPECT_EQ(GaussianFrechet(one_v, four, one_v, four), 0.0);
}

TEST(FrechetTest, SymmetricAndMatchesDiagonalFormula) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 5;
    const Eigen::VectorXd m1 = RandomMatrix(d, 1, rng);
    const Eigen::VectorXd m2 = RandomMatrix(d, 1, rng);
    const Eigen::MatrixXd s1 = RandomSpd(d, rng);
    const Eigen::MatrixXd s2 = RandomSpd(d, rng);
    const double ab = GaussianFrechet(m1, s1, m2, s2);
    EXPECT_NEAR(ab, GaussianFrechet(m2, s2, m1, s1), 1e-8 * (1.0 + ab));
    EXPECT_GT(ab, 0.0);

    // Diagonal covariances reduce to sum (sqrt(a) - sqrt(b))^2.
    const Eigen::VectorXd a = s1.diagonal();
    const Eigen::VectorXd b = s2.diagonal();
    double expected = (m1 - m2).squaredNorm();
    for (int i = 0; i < d; ++i) {
      expected += std::pow(std::sqrt(a(i)) - std::sqrt(b(i)), 2);
    }
    EXPECT_NEAR(GaussianFrechet(m1, a.asDiagonal().toDenseMatrix(), m2,
                                b.asDiagonal().toDenseMatrix()),
                expected, 1e-9 * (1.0 + expected));
  }
}

TEST(FrechetTest, RejectsNonSpd) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(GaussianFrechet(zero, bad, zero, Eigen::MatrixXd::Identity(2, 2)),
               std::invalid_argument);
}

TEST(OracleTest, PerfectGeneratorScoresExactlyHalf) {
  const GaussianTask task = MakeTask(5, 31);
  const auto traj = Trajectory(task, 6, 1.0, 2);
  const auto discs =
      TrajectoryDiscriminators(task, traj, DiscriminatorKind::kOracle, 5);
  const Batch samples = CheckpointPlayer(traj.back())->Generate(200, 4);
  for (double s : discs.back()->Judge(samples, 0)) EXPECT_EQ(s, 0.5);
  const Batch real = RealDataPlayer(task)->Generate(200, 5);
  for (double s : discs.back()->Judge(real, 0)) EXPECT_EQ(s, 0.5);
}

TEST(OracleTest, MatchesBruteForceLikelihoodRatio) {
  std::mt19937_64 rng(13);
  for (int d = 1; d <= 3; ++d) {
    const Eigen::VectorXd mp = RandomMatrix(d, 1, rng);
    const Eigen::VectorXd mf = RandomMatrix(d, 1, rng);
    const GaussianModel data = GaussianModel::FromCovariance(mp, RandomSpd(d, rng));
    const GaussianModel fake = GaussianModel::FromCovariance(mf, RandomSpd(d, rng));
    const ToyDiscriminator disc(data, {fake});
    for (int i = 0; i < 20; ++i) {
      const Eigen::VectorXd x = RandomMatrix(d, 1, rng);
      EXPECT_NEAR(disc.Score(x),
                  BruteScore(x, mp, ModelCovariance(data), mf, ModelCovariance(fake)),
                  1e-9);
    }
  }
}

TEST(OracleTest, AffineInvariance) {
  // The likelihood ratio is invariant exactly; the implementation adds a
  // relative 1e-6 diagonal jitter, which bounds how closely it can follow.
  std::mt19937_64 rng(21);
  for (int d = 1; d <= 3; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd mp = RandomMatrix(d, 1, rng);
      const Eigen::VectorXd mf = RandomMatrix(d, 1, rng);
      const Eigen::MatrixXd sp = RandomSpd(d, rng);
      const Eigen::MatrixXd sf = RandomSpd(d, rng);
      Eigen::MatrixXd a = RandomMatrix(d, d, rng);
      a += 2.0 * Eigen::MatrixXd::Identity(d, d);
      ASSERT_GT(std::abs(a.determinant()), 1e-3);
      const Eigen::VectorXd c = RandomMatrix(d, 1, rng);
      const ToyDiscriminator before(GaussianModel::FromCovariance(mp, sp),
                                    {GaussianModel::FromCovariance(mf, sf)});
      const ToyDiscriminator after(
          GaussianModel::FromCovariance(a * mp + c, a * sp * a.transpose()),
          {GaussianModel::FromCovariance(a * mf + c, a * sf * a.transpose())});
      for (int i = 0; i < 10; ++i) {
        const Eigen::VectorXd x = mp + RandomMatrix(d, 1, rng);
        const Eigen::VectorXd y = a * x + c;
        EXPECT_NEAR(BruteScore(x, mp, sp, mf, sf),
                    BruteScore(y, a * mp + c, a * sp * a.transpose(), a * mf + c,
                               a * sf * a.transpose()),
                    1e-9);
        EXPECT_NEAR(before.Score(x), after.Score(y), 1e-3);
      }
    }
  }
}

TEST(OracleTest, FarFromWrongGeneratorScoresNearOne) {
  const GaussianTask task = MakeTask(3, 1);
  const auto traj = Trajectory(task, 10, 1.0, 1);
  const auto discs =
      TrajectoryDiscriminators(task, traj, DiscriminatorKind::kOracle, 9);
  const Batch real = RealDataPlayer(task)->Generate(100, 3);
  double mean = 0.0;
  for (double s : discs[0]->Judge(real, 0)) mean += s / 100.0;
  EXPECT_GT(mean, 0.99);
}

TEST(ForgettingTest, NoiseIsSeededAndUninformative) {
  const GaussianTask task = MakeTask(4, 2);
  const int n = 10;
  const auto traj = Trajectory(task, n, 0.5, 3);
  const int mastery = MasteryIndex(n, 0.5);
  const auto discs =
      TrajectoryDiscriminators(task, traj, DiscriminatorKind::kForgetting, mastery);
  EXPECT_FALSE(discs[mastery - 1]->forgotten());
  ASSERT_TRUE(discs[mastery]->forgotten());
  const Batch b = CheckpointPlayer(traj[0])->Generate(64, 1);
  EXPECT_EQ(discs[mastery]->Judge(b, 9), discs[mastery]->Judge(b, 9));
  EXPECT_NE(discs[mastery]->Judge(b, 9), discs[mastery]->Judge(b, 10));

  // Mean score on early and on mastered samples agree within sampling noise.
  const int count = 20000;
  auto mean_score = [&](const ToyGenerator& g) {
    const auto s = discs[n - 1]->Judge(CheckpointPlayer(g)->Generate(count, 4), 5 + g.checkpoint);
    double m = 0.0;
    for (double v : s) m += v / count;
    return m;
  };
  const double sigma = std::sqrt(2.0 / (12.0 * count));
  EXPECT_LT(std::abs(mean_score(traj[0]) - mean_score(traj[n - 1])), 4.0 * sigma);
}

TEST(ReservoirTest, SizesSubsetsAndDeterminism) {
  const auto h = ReservoirHistory(40, 10, 7);
  ASSERT_EQ(h.size(), 40u);
  for (int k = 0; k < 40; ++k) {
    EXPECT_EQ(static_cast<int>(h[k].size()), std::min(k + 1, 10));
    std::set<int> distinct(h[k].begin(), h[k].end());
    EXPECT_EQ(distinct.size(), h[k].size());
    for (int v : h[k]) {
      EXPECT_GE(v, 0);
      EXPECT_LE(v, k);
    }
  }
  EXPECT_EQ(h, ReservoirHistory(40, 10, 7));
  EXPECT_THROW(ReservoirHistory(5, 0, 1), ConfigError);
}

TEST(ReservoirTest, InclusionIsUniform) {
  // Each of n items ends in the final reservoir with probability capacity / n.
  const int n = 30, capacity = 10, trials = 6000;
  std::vector<int> hits(n, 0);
  for (int t = 0; t < trials; ++t) {
    const auto history = ReservoirHistory(n, capacity, t);
    for (int v : history.back()) ++hits[v];
  }
  const double p = static_cast<double>(capacity) / n;
  const double sigma = std::sqrt(trials * p * (1 - p));
  for (int v = 0; v < n; ++v) EXPECT_LT(std::abs(hits[v] - trials * p), 4.5 * sigma) << v;
}

TEST(ChekhovTest, PastWorseGeneratorsScoreBelowHalf) {
  const GaussianTask task = MakeTask(6, 5);
  const int n = 20;
  const auto traj = Trajectory(task, n, 0.5, 6);
  const int mastery = MasteryIndex(n, 0.5);
  const auto history = ReservoirHistory(n, kChekhovReservoir, 77);
  const auto discs = TrajectoryDiscriminators(
      task, traj, DiscriminatorKind::kChekhov, mastery, kChekhovReservoir, 77);
  int checked = 0;
  for (int j = 1; j < n; ++j) {
    for (int k : history[j]) {
      // Clearly worse: at most half way to the target.
      if (2 * k > mastery) continue;
      const auto s = discs[j]->Judge(CheckpointPlayer(traj[k])->Generate(2000, k), 0);
      double mean = 0.0;
      for (double v : s) mean += v / s.size();
      EXPECT_LT(mean, 0.5) << "disc " << j << " gen " << k;
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(RealDataTest, MeanAndCovarianceConverge) {
  const GaussianTask task = MakeTask(3, 44);
  auto real = RealDataPlayer(task);
  EXPECT_EQ(real->Generate(5, 1), real->Generate(5, 1));
  const int n = 100000;
  const Batch big = real->Generate(n, 2);
  const Eigen::VectorXd mean = big.colwise().mean();
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(mean(i) - task.mu_star(i)),
              4.0 * std::sqrt(task.sigma_star(i, i) / n));
  }
  double previous = INFINITY;
  for (int m : {1000, 10000, 100000}) {
    const Batch part = big.topRows(m);
    const Batch centered = part.rowwise() - part.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / (m - 1);
    const double err = (cov - task.sigma_star).norm();
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(TransformTest, Definitions) {
  const int dim = 20;
  const Batch ones = Batch::Ones(8, dim);
  for (int s = 1; s <= 9; ++s) {
    const Batch masked = ApplyTransform(ones, TransformKind::kCoordinateMask, s, 1.0, s);
    const int want = static_cast<int>(std::lround(s / 10.0 * dim));
    for (int r = 0; r < 8; ++r) {
      EXPECT_EQ((masked.row(r).array() == 0.0).count(), want);
    }
    const Batch imp = ApplyTransform(ones, TransformKind::kImpulse, s, 2.0, s);
    for (int r = 0; r < 8; ++r) {
      EXPECT_EQ((imp.row(r).array().abs() == 10.0).count(), s);
    }
    const Batch shifted = ApplyTransform(ones, TransformKind::kScaleShift, s, 1.0, s);
    EXPECT_EQ(shifted, ones * (1.0 + 0.1 * s));
  }
  const Batch mask9 =
      ApplyTransform(Batch::Ones(4, 10), TransformKind::kCoordinateMask, 9, 1.0, 1);
  EXPECT_EQ((mask9.array() == 0.0).count(), 36);
}

TEST(TransformTest, ZeroNoiseIsIdentity) {
  std::mt19937_64 rng(1);
  const Batch b = RandomMatrix(16, 5, rng);
  for (int s = 1; s <= 9; ++s) {
    EXPECT_EQ(ApplyTransform(b, TransformKind::kAdditiveNoise, s, 0.0, s), b);
  }
}

TEST(TransformTest, NoiseModelMatchesSamples) {
  const GaussianTask task = MakeTask(3, 6);
  const double scale = TransformScale(task);
  EXPECT_NEAR(scale * scale * 3, task.sigma_star.trace(), 1e-9);
  TransformGenerator noisy(RealDataPlayer(task), TransformKind::kAdditiveNoise, 4,
                           scale);
  EXPECT_EQ(noisy.Generate(10, 3), noisy.Generate(10, 3));
  const int n = 100000;
  const Batch b = noisy.Generate(n, 1);
  const Batch centered = b.rowwise() - b.colwise().mean();
  const Eigen::MatrixXd sample = centered.transpose() * centered / (n - 1);
  const GaussianModel model =
      TransformedDataModel(task, TransformKind::kAdditiveNoise, 4);
  const Eigen::MatrixXd expected =
      task.sigma_star + std::pow(0.25 * 4 * scale, 2) * Eigen::MatrixXd::Identity(3, 3);
  EXPECT_LT((ModelCovariance(model) - expected).norm(), 1e-5 * expected.norm());
  EXPECT_LT((sample - expected).norm(), 0.05 * expected.norm());
  EXPECT_THROW(TransformedDataModel(task, TransformKind::kImpulse, 3), ConfigError);
}

TEST(TransformTest, NamesAndSeverityRange) {
  for (TransformKind k : {TransformKind::kAdditiveNoise, TransformKind::kScaleShift,
                          TransformKind::kCoordinateMask, TransformKind::kImpulse}) {
    EXPECT_EQ(ParseTransformKind(ToString(k)), k);
  }
  EXPECT_THROW(ParseTransformKind("blur"), ConfigError);
  const GaussianTask task = MakeTask(2, 1);
  EXPECT_THROW(TransformGenerator(RealDataPlayer(task), TransformKind::kImpulse, 0, 1.0),
               ConfigError);
  EXPECT_THROW(TransformGenerator(RealDataPlayer(task), TransformKind::kImpulse, 10, 1.0),
               ConfigError);
}

TEST(TransformTest, NoiseWinRateFallsWithSeverity) {
  // An oracle separating the data from its mildly noised version concedes
  // fewer fake-batch wins as the noise grows.
  const GaussianTask task = MakeTask(4, 12);
  const double scale = TransformScale(task);
  ToyDiscriminator judge(GaussianModel::FromFactor(task.mu_star, task.chol_star),
                         {TransformedDataModel(task, TransformKind::kAdditiveNoise, 1)});
  double previous = 2.0;
  for (int s = 1; s <= 9; s += 2) {
    TransformGenerator g(RealDataPlayer(task), TransformKind::kAdditiveNoise, s, scale);
    int wins = 0;
    for (double v : judge.Judge(g.Generate(4000, s), 0)) wins += v >= 0.5;
    const double rate = wins / 4000.0;
    EXPECT_LT(rate, previous) << s;
    previous = rate;
  }
}

}  // namespace
}  // namespace arena::toy
