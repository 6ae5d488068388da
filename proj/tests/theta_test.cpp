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

#include <gtest/gtest.h>

#include "latq/catalog.hpp"
#include "latq/theta.hpp"
#include "test_util.hpp"

namespace latq {
namespace {

using testing::random_generator;

TEST(EnumerateShells, SquareLattice) {
  const ShellSpectrum s = enumerate_shells(GeneratorMatrix::identity(2), 2.0);
  ASSERT_EQ(s.shells.size(), 3u);
  EXPECT_EQ(s.shells[0].count, 1u);
  EXPECT_EQ(s.shells[1].squared_norm, 1.0);
  EXPECT_EQ(s.shells[1].count, 4u);
  EXPECT_EQ(s.shells[2].squared_norm, 2.0);
  EXPECT_EQ(s.shells[2].count, 4u);
  const auto steps = theta_image(s);
  EXPECT_EQ(steps.back().cumulative, 9u);
  EXPECT_EQ(steps[1].cumulative, 5u);
}

TEST(EnumerateShells, E8) {
  const ShellSpectrum s = enumerate_shells(normalize_volume(get_lattice("E8").generator), 2.1);
  ASSERT_EQ(s.shells.size(), 2u);
  EXPECT_NEAR(s.shells[1].squared_norm, 2.0, 1e-9);
  EXPECT_EQ(s.shells[1].count, 240u);
}

TEST(ThetaImage, D10PlusStaircase) {
  const auto steps = theta_image(normalize_volume(get_lattice("D+", 10).generator), 4.6);
  const std::uint64_t expected[] = {1, 181, 693, 4073, 9193};
  const double norms[] = {0, 2, 2.5, 4, 4.5};
  ASSERT_EQ(steps.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(steps[i].cumulative, expected[i]);
    EXPECT_NEAR(steps[i].r2, norms[i], 1e-9);
  }
}

TEST(EnumerateShells, TotalsSymmetryAndInvariance) {
  RngStream s(1, 6);
  for (int k = 0; k < 10; ++k) {
    const GeneratorMatrix b = normalize_volume(random_generator(s, 2 + k % 4));
    const ShellSpectrum a = enumerate_shells(b, 3.0);
    EXPECT_EQ(a.total(), ball_norms(b, 3.0 + kShellTolerance).size());
    EXPECT_EQ(a.shells.front().count, 1u);
    for (std::size_t i = 1; i < a.shells.size(); ++i) {
      EXPECT_EQ(a.shells[i].count % 2, 0u);
      EXPECT_GT(a.shells[i].squared_norm, a.shells[i - 1].squared_norm);
    }
    const ShellSpectrum r = enumerate_shells(orth(lll(b.matrix()).basis), 3.0);
    ASSERT_EQ(r.shells.size(), a.shells.size());
    for (std::size_t i = 0; i < a.shells.size(); ++i) {
      EXPECT_EQ(r.shells[i].count, a.shells[i].count);
      EXPECT_NEAR(r.shells[i].squared_norm, a.shells[i].squared_norm, 1e-9);
    }
  }
}

TEST(EnumerateShells, CapAndBadRadius) {
  EXPECT_THROW(enumerate_shells(GeneratorMatrix::identity(3), 100.0, 1000), TooManyPointsError);
  EXPECT_THROW(enumerate_shells(GeneratorMatrix::identity(3), -1.0), InvalidArgument);
  EXPECT_THROW(enumerate_shells(GeneratorMatrix::identity(3), INFINITY), InvalidArgument);
}

TEST(Kissing, Examples) {
  const KissingData z3 = kissing(GeneratorMatrix::identity(3));
  EXPECT_EQ(z3.kissing_number, 6u);
  EXPECT_NEAR(z3.packing_radius, 0.5, 1e-12);

  const KissingData e8 = kissing(normalize_volume(get_lattice("E8").generator));
  EXPECT_EQ(e8.kissing_number, 240u);
  EXPECT_NEAR(e8.packing_radius, std::sqrt(2.0) / 2, 1e-9);

  EXPECT_EQ(kissing(normalize_volume(get_lattice("hexagonal").generator)).kissing_number, 6u);
}

TEST(Kissing, RelativeTolerance) {
  const GeneratorMatrix near_hex(Matrix{{1, 0}, {0.5001, 0.8660}});
  EXPECT_EQ(kissing(near_hex).kissing_number, 2u);
  EXPECT_EQ(kissing(near_hex, 0.05).kissing_number, 6u);
  EXPECT_THROW(kissing(near_hex, 1.5), InvalidArgument);
}

TEST(Kissing, SkewedBasis) {
  EXPECT_EQ(kissing(orth(Matrix{{1, 0}, {100, 1}})).kissing_number, 4u);
}

}  // namespace
}  // namespace latq
