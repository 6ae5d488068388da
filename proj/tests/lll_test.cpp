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
#include "latq/lll.hpp"
#include "latq/rng.hpp"
#include "test_util.hpp"

namespace latq {
namespace {

using testing::max_abs_diff;

double row_norm_product(const Matrix& b) {
  double p = 1.0;
  for (std::size_t i = 0; i < b.rows(); ++i) p *= std::sqrt(squared_norm(b.row(i)));
  return p;
}

double abs_det(const Matrix& b) { return std::abs(volume(orth(b))); }

TEST(Lll, IdentityUnchanged) {
  const LllResult r = lll(Matrix::identity(4));
  EXPECT_EQ(r.basis, Matrix::identity(4));
  EXPECT_EQ(r.transform, UnimodularMatrix::identity(4));
}

TEST(Lll, SizeReducesSkewedBasis) {
  const LllResult r = lll(Matrix{{1, 0}, {100, 1}});
  EXPECT_EQ(r.basis, Matrix::identity(2));
  EXPECT_TRUE(is_unimodular(r.transform));
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(squared_norm(r.basis.row(i)), 2.0);
}

TEST(Lll, GaussianBases) {
  RngStream s(1, 3);
  for (int k = 0; k < 20; ++k) {
    const Matrix b = gran(s, 8, 8);
    const LllResult r = lll(b);
    EXPECT_TRUE(is_unimodular(r.transform));
    const Matrix ub = r.transform.to_matrix() * b;
    EXPECT_LT(max_abs_diff(gram(r.basis).matrix(), gram(ub).matrix()), 1e-9 * frobenius_norm(gram(b).matrix()));
    EXPECT_NEAR(abs_det(r.basis), abs_det(b), 1e-10 * abs_det(b));
    EXPECT_LE(row_norm_product(r.basis), row_norm_product(b) * (1 + 1e-12));
    const LllResult again = lll(r.basis);
    EXPECT_EQ(again.basis, r.basis);
    EXPECT_EQ(again.transform, UnimodularMatrix::identity(8));
  }
}

TEST(Lll, OutputIsReduced) {
  RngStream s(2, 3);
  const Matrix b = gran(s, 6, 6);
  const Matrix r = lll(b).basis;
  Matrix mu(6, 6);
  std::vector<double> bs(6);
  detail::gram_schmidt(r, mu, bs);
  for (std::size_t i = 1; i < 6; ++i) {
    for (std::size_t j = 0; j < i; ++j) EXPECT_LE(std::abs(mu(i, j)), 0.5 + 1e-6);
    EXPECT_GE(bs[i], (0.75 - mu(i, i - 1) * mu(i, i - 1)) * bs[i - 1] * (1 - 1e-9));
  }
}

TEST(Lll, RejectsBadInput) {
  EXPECT_THROW(lll(Matrix::identity(2), 0.2), InvalidArgument);
  EXPECT_THROW(lll(Matrix{{INFINITY, 0}, {0, 1}}), InvalidArgument);
}

TEST(IntegerDeterminant, Examples) {
  EXPECT_EQ(integer_determinant({2, {2, 1, 1, 1}}), 1);
  EXPECT_EQ(integer_determinant({2, {0, 1, 1, 0}}), -1);
  EXPECT_EQ(integer_determinant({3, {2, 0, 0, 0, 3, 0, 0, 0, 5}}), 30);
  EXPECT_FALSE(is_unimodular({2, {2, 0, 0, 1}}));
}

}  // namespace
}  // namespace latq
