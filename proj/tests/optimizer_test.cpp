// Copyright 2026 The latq Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "latq/estimator.hpp"
#include "latq/optimizer.hpp"
#include "test_util.hpp"

namespace latq {
namespace {

using testing::max_abs_diff;
using testing::random_generator;

const std::vector<double> kZ{0.6, 0.6, 0, 0};

TEST(NsmGradient, WorkedExample) {
  const Matrix g = nsm_gradient(GeneratorMatrix::identity(4), kZ).entries;
  const Matrix expected{{0.04, 0, 0, 0}, {0.08, 0.04, 0, 0}, {0, 0, -0.04, 0}, {0, 0, 0, -0.04}};
  EXPECT_LT(max_abs_diff(g, expected), 1e-12);
}

TEST(NsmGradient, ZeroAtLatticePoint) {
  RngStream s(1, 5);
  const GeneratorMatrix b = random_generator(s, 3);
  EXPECT_EQ(nsm_gradient(b, std::vector<double>(3, 0.0)).entries, Matrix(3, 3));
}

TEST(NsmGradient, MatchesFiniteDifferences) {
  RngStream s(2, 5);
  constexpr double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 5;
    const GeneratorMatrix b = random_generator(s, n);
    const std::vector<double> z = uran(s, n);
    const Matrix g = nsm_gradient(b, z).entries;
    double scale = 0.0;
    for (double v : g.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        Matrix plus = b.matrix();
        Matrix minus = b.matrix();
        plus(i, j) += h;
        minus(i, j) -= h;
        const double fd = (g_sample(GeneratorMatrix(plus), z) - g_sample(GeneratorMatrix(minus), z)) / (2 * h);
        ASSERT_LE(std::abs(fd - g(i, j)), 1e-5 * scale) << "instance " << k << " entry " << i << "," << j;
      }
  }
}

TEST(Anneal, Endpoints) {
  TrainConfig cfg = TrainConfig::fast();
  cfg.steps = 1001;
  cfg.reduction_interval = 1;
  EXPECT_EQ(anneal(0, cfg), cfg.mu0);
  EXPECT_NEAR(anneal(1000, cfg), cfg.mu0 / cfg.nu, 1e-18);
  EXPECT_NEAR(anneal(500, cfg), cfg.mu0 / std::sqrt(cfg.nu), 1e-17);
  cfg.steps = 1;
  EXPECT_EQ(anneal(0, cfg), cfg.mu0);
}

TEST(TrainConfig, Profiles) {
  const TrainConfig m = TrainConfig::medium();
  EXPECT_EQ(m.mu0, 0.001);
  EXPECT_EQ(m.nu, 500.0);
  EXPECT_EQ(m.steps, 10'000'000u);
  EXPECT_EQ(m.reduction_interval, 100u);
  EXPECT_EQ(TrainConfig::slow().steps, 100'000'000u);
  EXPECT_FALSE(TrainConfig::profile_named("turbo"));
}

TEST(TrainConfig, Validation) {
  TrainConfig c = TrainConfig::fast();
  c.reduction_interval = 7;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = TrainConfig::fast();
  c.nu = 1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = TrainConfig::fast();
  c.mu0 = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(SgdStep, ZeroStepIsIdentity) {
  RngStream s(3, 5);
  const GeneratorMatrix b = random_generator(s, 4);
  EXPECT_EQ(sgd_step(b, uran(s, 4), 0.0), b);
}

TEST(SgdStep, WorkedExampleFirstOrderDecrease) {
  const GeneratorMatrix b = GeneratorMatrix::identity(4);
  const double mu = 1e-5;
  const GeneratorMatrix b1 = sgd_step(b, kZ, mu);
  const double step = frobenius_norm(b1.matrix() - b.matrix());
  const double slope = (g_sample(b1, kZ) - 0.08) / step;
  EXPECT_NEAR(slope, -0.1131, 1e-4);
  EXPECT_NEAR(volume(b1), std::pow(1 - 0.125 * step * step, 2), 1e-12);
}

TEST(SgdStep, ScalesLinearly) {
  RngStream s(4, 5);
  const GeneratorMatrix b = random_generator(s, 5);
  const std::vector<double> z = uran(s, 5);
  Matrix cb = b.matrix();
  cb *= 3.0;
  Matrix expected = sgd_step(b, z, 0.01).matrix();
  expected *= 3.0;
  EXPECT_LT(max_abs_diff(sgd_step(GeneratorMatrix(cb), z, 0.01).matrix(), expected), 1e-12);
}

TEST(SgdStep, TooLargeStepAborts) {
  EXPECT_THROW(sgd_step(GeneratorMatrix::identity(4), kZ, 100.0), StepTooLargeError);
}

TEST(Train, OneDimensional) {
  RngStream s(7, 0);
  const GeneratorMatrix b = train(1, TrainConfig::fast(), s);
  EXPECT_NEAR(b(0, 0), 1.0, 1e-12);
  RngStream e(7, 1);
  const NsmEstimate est = estimate_nsm(b, 1'000'000, e);
  EXPECT_LE(std::abs(est.g_hat - 1.0 / 12.0), 2 * est.sigma_hat());
}

TEST(Train, UnitVolumeAndReproducible) {
  TrainConfig cfg = TrainConfig::fast();
  cfg.steps = 20000;
  RngStream a(5, 0);
  RngStream c(5, 0);
  const GeneratorMatrix b1 = train(4, cfg, a);
  const GeneratorMatrix b2 = train(4, cfg, c);
  EXPECT_EQ(b1, b2);
  EXPECT_NEAR(volume(b1), 1.0, 1e-9);
}

TEST(Train, DescendsInExpectation) {
  TrainConfig cfg = TrainConfig::fast();
  cfg.steps = 200000;
  std::vector<double> g;
  g.reserve(cfg.steps);
  RngStream s(6, 0);
  train(3, cfg, s, [&](std::uint64_t, double v) { g.push_back(v); });
  ASSERT_EQ(g.size(), cfg.steps);
  const std::size_t w = cfg.steps / 100;
  double first = 0.0;
  double last = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    first += g[i];
    last += g[g.size() - 1 - i];
  }
  EXPECT_LE(last, first);
}

TEST(Train, HugeStepAborts) {
  TrainConfig cfg = TrainConfig::fast();
  cfg.mu0 = 50.0;
  cfg.steps = 1000;
  RngStream s(8, 0);
  EXPECT_THROW(train(4, cfg, s), StepTooLargeError);
}

TEST(ReduceAndNormalize, LowerTriangularUnitVolume) {
  RngStream s(9, 5);
  const GeneratorMatrix b = reduce_and_normalize(gran(s, 6, 6));
  EXPECT_NEAR(volume(b), 1.0, 1e-12);
}

}  // namespace
}  // namespace latq
