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

#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "latq/matrix.hpp"

namespace latq {

/// Square integer matrix; as produced by lll() its determinant is +-1.
struct UnimodularMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> entries;  // row-major

  static UnimodularMatrix identity(std::size_t n) {
    UnimodularMatrix u{n, std::vector<std::int64_t>(n * n, 0)};
    for (std::size_t i = 0; i < n; ++i) u(i, i) = 1;
    return u;
  }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return entries[i * n + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

  Matrix to_matrix() const {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) m.data()[i] = static_cast<double>(entries[i]);
    return m;
  }

  friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;
};

/// Exact determinant of an integer matrix (fraction-free Bareiss elimination).
inline boost::multiprecision::cpp_int integer_determinant(const UnimodularMatrix& u) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = u.n;
  if (n == 0) return 1;
  std::vector<cpp_int> a(u.entries.begin(), u.entries.end());
  auto at = [&](std::size_t i, std::size_t j) -> cpp_int& { return a[i * n + j]; };
  cpp_int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

inline bool is_unimodular(const UnimodularMatrix& u) {
  const auto d = integer_determinant(u);
  return d == 1 || d == -1;
}

struct LllResult {
  Matrix basis;               // U * B
  UnimodularMatrix transform;  // U
};

namespace detail {

// Gram-Schmidt data for the rows of b: mu (strictly lower part) and the
// squared norms of the orthogonalized rows.
inline void gram_schmidt(const Matrix& b, Matrix& mu, std::vector<double>& bstar_sq) {
  const std::size_t n = b.rows();
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < b.cols(); ++c) s += b(i, c) * b(j, c);
      for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * r(i, k);
      r(i, j) = s;
      if (j < i) mu(i, j) = s / r(j, j);
    }
    bstar_sq[i] = r(i, i);
  }
}

}  // namespace detail

/// RED: floating-point LLL reduction with integer bookkeeping of the basis
/// change. A basis that is already delta-reduced comes back unchanged with
/// U = I. Requires 0.25 < delta <= 1.
inline LllResult lll(const Matrix& b_in, double delta = 0.75) {
  if (!(delta > 0.25 && delta <= 1.0)) throw InvalidArgument("lll: delta must lie in (0.25, 1]");
  if (!b_in.all_finite()) throw InvalidArgument("lll: non-finite entries");
  const std::size_t n = b_in.rows();
  const std::size_t m = b_in.cols();
  LllResult res{b_in, UnimodularMatrix::identity(n)};
  if (n < 2) return res;
  Matrix& b = res.basis;
  UnimodularMatrix& u = res.transform;

  Matrix mu(n, n);
  std::vector<double> bstar_sq(n);
  detail::gram_schmidt(b, mu, bstar_sq);

  constexpr double kEta = 0.5 + 1e-9;
  constexpr std::size_t kMaxIterations = 10'000'000;
  std::size_t k = 1;
  for (std::size_t iter = 0; k < n; ++iter) {
    if (iter > kMaxIterations) throw Error("lll: iteration limit exceeded");
    for (std::size_t jj = k; jj-- > 0;) {
      if (std::abs(mu(k, jj)) <= kEta) continue;
      const double q = std::nearbyint(mu(k, jj));
      const auto qi = static_cast<std::int64_t>(q);
      for (std::size_t c = 0; c < m; ++c) b(k, c) -= q * b(jj, c);
      for (std::size_t c = 0; c < n; ++c) u(k, c) -= qi * u(jj, c);
      for (std::size_t i = 0; i < jj; ++i) mu(k, i) -= q * mu(jj, i);
      mu(k, jj) -= q;
    }
    const double lhs = bstar_sq[k];
    const double rhs = (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar_sq[k - 1];
    if (lhs >= rhs * (1.0 - 1e-12)) {
      ++k;
    } else {
      for (std::size_t c = 0; c < m; ++c) std::swap(b(k, c), b(k - 1, c));
      for (std::size_t c = 0; c < n; ++c) std::swap(u(k, c), u(k - 1, c));
      detail::gram_schmidt(b, mu, bstar_sq);
      k = k > 1 ? k - 1 : 1;
    }
  }
  return res;
}

}  // namespace latq
