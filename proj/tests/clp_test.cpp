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

#include "latq/clp.hpp"
#include "latq/rng.hpp"
#include "test_util.hpp"

namespace latq {
namespace {

using testing::random_generator;

TEST(Clp, CubicExample) {
  const std::vector<double> x{0.6, 0.6, 0, 0};
  EXPECT_EQ(clp(GeneratorMatrix::identity(4), x), (IntegerCoords{1, 1, 0, 0}));
  EXPECT_EQ(clp_bruteforce(GeneratorMatrix::identity(4), x, 2), (IntegerCoords{1, 1, 0, 0}));
}

TEST(Clp, OriginMapsToZero) {
  RngStream s(1, 2);
  const GeneratorMatrix b = random_generator(s, 5);
  EXPECT_EQ(clp(b, std::vector<double>(5, 0.0)), IntegerCoords(5, 0));
}

TEST(Clp, RejectsNonFinite) {
  EXPECT_THROW(clp(GeneratorMatrix::identity(2), std::vector<double>{NAN, 0}), InvalidArgument);
}

TEST(ClpBruteforce, Rounding) {
  EXPECT_EQ(clp_bruteforce(GeneratorMatrix::identity(2), std::vector<double>{0.4, 0.6}, 2), (IntegerCoords{0, 1}));
}

TEST(Clp, HexagonalDeepHole) {
  const GeneratorMatrix b(Matrix{{1, 0}, {0.5, std::sqrt(3.0) / 2}});
  const std::vector<double> x{0.5, 0.2887};
  EXPECT_EQ(clp_bruteforce(b, x, 3), (IntegerCoords{0, 1}));
  EXPECT_EQ(clp(b, x), (IntegerCoords{0, 1}));
  EXPECT_NEAR(lattice_distance_sq(b.matrix(), x, clp(b, x)), 0.3333046218548651, 1e-15);
}

TEST(Clp, MatchesBruteforce) {
  RngStream s(2, 2);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + k % 5;
    const GeneratorMatrix b = random_generator(s, n);
    std::vector<double> x(n);
    for (double& v : x) v = 6.0 * s.next_uniform() - 3.0;
    const double d = lattice_distance_sq(b.matrix(), x, clp(b, x));
    const double d_ref = lattice_distance_sq(b.matrix(), x, clp_bruteforce(b, x, 3));
    ASSERT_NEAR(d, d_ref, 1e-9) << "instance " << k;
  }
}

TEST(Clp, BeatsRandomLatticePoints) {
  RngStream s(3, 2);
  const GeneratorMatrix b = random_generator(s, 4);
  std::vector<double> x(4);
  for (double& v : x) v = 4.0 * s.next_uniform() - 2.0;
  const double d = lattice_distance_sq(b.matrix(), x, clp(b, x));
  for (int k = 0; k < 10000; ++k) {
    std::vector<std::int64_t> v(4);
    for (auto& c : v) c = static_cast<std::int64_t>(s.next_u32() % 9) - 4;
    ASSERT_LE(d, lattice_distance_sq(b.matrix(), x, v) + 1e-12);
  }
}

TEST(Clp, TranslationCovariance) {
  RngStream s(4, 2);
  for (int k = 0; k < 100; ++k) {
    const GeneratorMatrix b = random_generator(s, 4);
    std::vector<double> x(4);
    for (double& v : x) v = 2.0 * s.next_uniform() - 1.0;
    std::vector<std::int64_t> w(4);
    for (auto& c : w) c = static_cast<std::int64_t>(s.next_u32() % 11) - 5;
    std::vector<double> wd(w.begin(), w.end());
    const std::vector<double> shift = row_times(wd, b.matrix());
    std::vector<double> y(4);
    for (std::size_t i = 0; i < 4; ++i) y[i] = x[i] + shift[i];
    IntegerCoords expected = clp(b, x);
    for (std::size_t i = 0; i < 4; ++i) expected[i] += w[i];
    EXPECT_EQ(clp(b, y), expected);
  }
}

TEST(Clp, SolveCoordinatesInvertsProduct) {
  RngStream s(5, 2);
  const GeneratorMatrix b = random_generator(s, 6);
  const std::vector<double> u{1, -2, 0.5, 3, 0, -1};
  const std::vector<double> back = solve_coordinates(b.matrix(), row_times(u, b.matrix()));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(back[i], u[i], 1e-12);
}

}  // namespace
}  // namespace latq
