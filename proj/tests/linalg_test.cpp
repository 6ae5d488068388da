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

#include "latq/linalg.hpp"
#include "latq/rng.hpp"
#include "test_util.hpp"

namespace latq {
namespace {

using testing::max_abs_diff;
using testing::random_generator;

TEST(GeneratorMatrix, RejectsInvalidInput) {
  EXPECT_THROW(GeneratorMatrix(Matrix{{1, 0.5}, {0, 1}}), InvalidArgument);
  EXPECT_THROW(GeneratorMatrix(Matrix{{1, 0}, {0, -1}}), InvalidArgument);
  EXPECT_THROW(GeneratorMatrix(Matrix{{1, 0}, {NAN, 1}}), InvalidArgument);
  EXPECT_THROW(GeneratorMatrix(Matrix(2, 3)), InvalidArgument);
  EXPECT_NO_THROW(GeneratorMatrix(Matrix{{2, 0}, {1, 1}}));
}

TEST(Gram, SmallExamples) {
  EXPECT_EQ(gram(Matrix::identity(2)).matrix(), Matrix::identity(2));
  EXPECT_EQ(gram(Matrix{{2, 0}, {1, 1}}).matrix(), (Matrix{{4, 2}, {2, 2}}));
}

TEST(Gram, ExactlySymmetric) {
  RngStream s(1, 1);
  const GramMatrix a = gram(random_generator(s, 5));
  EXPECT_EQ(a.matrix(), a.matrix().transposed());
}

TEST(Orth, PermutationGivesIdentity) {
  EXPECT_EQ(orth(Matrix{{0, 1}, {1, 0}}).matrix(), Matrix::identity(2));
}

TEST(Orth, LowerTriangularIsFixedPoint) {
  RngStream s(2, 1);
  for (int k = 0; k < 20; ++k) {
    const GeneratorMatrix b = random_generator(s, 6);
    EXPECT_LT(max_abs_diff(orth(b.matrix()).matrix(), b.matrix()), 1e-12 * frobenius_norm(b.matrix()));
  }
}

TEST(Orth, RectangularPreservesGram) {
  RngStream s(3, 1);
  for (int k = 0; k < 20; ++k) {
    const Matrix b = gran(s, 4, 6);
    const GeneratorMatrix l = orth(b);
    const Matrix a = gram(b).matrix();
    EXPECT_LT(frobenius_norm(gram(l).matrix() - a) / frobenius_norm(a), 1e-12);
    EXPECT_LT(max_abs_diff(orth(l.matrix()).matrix(), l.matrix()), 1e-12);
  }
}

TEST(Orth, RotationFactor) {
  RngStream s(4, 1);
  const Matrix b = gran(s, 3, 5);
  const OrthResult r = orth_with_rotation(b);
  EXPECT_LT(max_abs_diff(r.generator.matrix() * r.rotation, b), 1e-12);
  EXPECT_LT(max_abs_diff(r.rotation * r.rotation.transposed(), Matrix::identity(3)), 1e-12);
}

TEST(Orth, RankDeficientThrows) {
  EXPECT_THROW(orth(Matrix{{1, 2}, {2, 4}}), SingularMatrixError);
  EXPECT_THROW(orth(Matrix{{1, 0}, {0, 1}, {1, 1}}), InvalidArgument);
}

TEST(Volume, Products) {
  EXPECT_EQ(volume(GeneratorMatrix::identity(4)), 1.0);
  EXPECT_EQ(volume(GeneratorMatrix(Matrix{{2, 0}, {0, 3}})), 6.0);
}

TEST(Volume, WorkedExampleAfterOneStep) {
  const double eps = 0.1;
  // First step on I4 with z = [0.6, 0.6, 0, 0], expressed with the unit
  // Frobenius step direction.
  const double f = eps / std::sqrt(0.04 * 0.04 * 2 + 0.08 * 0.08 + 0.04 * 0.04 * 2);
  const GeneratorMatrix b1(Matrix{{1 - 0.04 * f, 0, 0, 0},
                                  {-0.08 * f, 1 - 0.04 * f, 0, 0},
                                  {0, 0, 1 + 0.04 * f, 0},
                                  {0, 0, 0, 1 + 0.04 * f}});
  const double expected = std::pow(1 - 0.125 * eps * eps, 2);
  EXPECT_NEAR(volume(b1), expected, 1e-15);
}

TEST(Volume, Scaling) {
  RngStream s(5, 1);
  const GeneratorMatrix b = random_generator(s, 5);
  Matrix c = b.matrix();
  c *= 1.7;
  EXPECT_NEAR(volume(GeneratorMatrix(c)), std::pow(1.7, 5) * volume(b), 1e-12 * volume(GeneratorMatrix(c)));
}

TEST(VolumePower, PowerOfTwoScalingIsExact) {
  RngStream s(6, 1);
  const GeneratorMatrix b = random_generator(s, 7);
  Matrix c = b.matrix();
  c *= 4.0;
  EXPECT_EQ(volume_power(c, -2), volume_power(b.matrix(), -2) / 16.0);
  EXPECT_NEAR(volume_power(b.matrix(), 7), volume(b), 1e-14 * volume(b));
}

TEST(NormalizeVolume, Examples) {
  EXPECT_EQ(normalize_volume(GeneratorMatrix::identity(3)).matrix(), Matrix::identity(3));
  EXPECT_EQ(normalize_volume(GeneratorMatrix(Matrix{{4, 0}, {0, 1}})).matrix(), (Matrix{{2, 0}, {0, 0.5}}));
  RngStream s(7, 1);
  for (int k = 0; k < 50; ++k) {
    const GeneratorMatrix b = random_generator(s, 1 + k % 12);
    EXPECT_NEAR(volume(normalize_volume(b)), 1.0, 1e-12);
  }
}

TEST(NormalizeVolume, UnderflowThrows) {
  Matrix m = Matrix::identity(40);
  for (std::size_t i = 0; i < 40; ++i) m(i, i) = 1e-10;
  EXPECT_THROW(normalize_volume(GeneratorMatrix(m)), VolumeUnderflowError);
}

}  // namespace
}  // namespace latq
