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
#include <cstdlib>
#include <utility>

#include "latq/error.hpp"
#include "latq/matrix.hpp"

namespace latq {

/// Square, lower-triangular generator matrix with a positive diagonal; the
/// canonical lattice representation. Rows are basis vectors.
class GeneratorMatrix {
 public:
  explicit GeneratorMatrix(Matrix m) : m_(std::move(m)) { validate(m_); }

  static GeneratorMatrix identity(std::size_t n) { return GeneratorMatrix(Matrix::identity(n)); }

  /// Throws InvalidArgument unless `m` satisfies the generator invariants.
  static void validate(const Matrix& m) {
    if (!m.square() || m.rows() == 0) throw InvalidArgument("generator matrix must be square and non-empty");
    if (!m.all_finite()) throw InvalidArgument("generator matrix has non-finite entries");
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (!(m(i, i) > 0.0)) throw InvalidArgument("generator matrix diagonal must be positive");
      for (std::size_t j = i + 1; j < m.cols(); ++j)
        if (m(i, j) != 0.0) throw InvalidArgument("generator matrix must be lower-triangular");
    }
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  friend bool operator==(const GeneratorMatrix&, const GeneratorMatrix&) = default;

 private:
  Matrix m_;
};

/// Symmetric positive-definite matrix of basis inner products.
class GramMatrix {
 public:
  explicit GramMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.square()) throw InvalidArgument("Gram matrix must be square");
    for (std::size_t i = 0; i < m_.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (m_(i, j) != m_(j, i)) throw InvalidArgument("Gram matrix must be symmetric");
  }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// A = B B^T, computed on the lower triangle and mirrored so the result is
/// exactly symmetric.
inline GramMatrix gram(const Matrix& b) {
  const std::size_t n = b.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      const auto bi = b.row(i);
      const auto bj = b.row(j);
      for (std::size_t k = 0; k < b.cols(); ++k) s += bi[k] * bj[k];
      a(i, j) = s;
      a(j, i) = s;
    }
  return GramMatrix(std::move(a));
}

inline GramMatrix gram(const GeneratorMatrix& b) { return gram(b.matrix()); }

/// Lower Cholesky factor L with L L^T = A. A pivot at or below 1e-10 times the
/// largest diagonal entry of A declares A singular.
inline Matrix cholesky(const GramMatrix& a) {
  const std::size_t n = a.dim();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
  const double threshold = 1e-10 * max_diag;
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > threshold)) throw SingularMatrixError();
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / d;
    }
  }
  return l;
}

/// ORTH: rotates/reflects the rows of an n x m generator (m >= n) into the
/// square lower-triangular form with positive diagonal.
inline GeneratorMatrix orth(const Matrix& b) {
  if (b.cols() < b.rows()) throw InvalidArgument("orth: generator needs at least as many columns as rows");
  if (!b.all_finite()) throw InvalidArgument("orth: non-finite entries");
  return GeneratorMatrix(cholesky(gram(b)));
}

struct OrthResult {
  GeneratorMatrix generator;
  /// n x m with orthonormal rows such that B = L * rotation.
  Matrix rotation;
};

/// ORTH together with the semiorthogonal factor Q = L^{-1} B, so that
/// L = B Q^T; Q^T is the right-multiplier in B' = c U B R.
inline OrthResult orth_with_rotation(const Matrix& b) {
  GeneratorMatrix l = orth(b);
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  Matrix q(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < m; ++c) {
      double s = b(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * q(k, c);
      q(i, c) = s / l(i, i);
    }
  }
  return {std::move(l), std::move(q)};
}

/// V = product of the diagonal.
inline double volume(const GeneratorMatrix& b) {
  double v = 1.0;
  for (std::size_t k = 0; k < b.dim(); ++k) v *= b(k, k);
  return v;
}

/// V^(p/n) for a lower-triangular B, computed from the binary mantissas and
/// exponents of the diagonal. Rescaling B by a power of two changes the
/// result by exactly the matching power of two.
inline double volume_power(const Matrix& b, int p) {
  const auto n = static_cast<long>(b.rows());
  double mant = 1.0;
  long exp2 = 0;
  for (long k = 0; k < n; ++k) {
    int e = 0;
    mant *= std::frexp(b(k, k), &e);
    exp2 += e;
    mant = std::frexp(mant, &e);
    exp2 += e;
  }
  const long num = exp2 * p;
  long q = num / n;
  long r = num % n;
  if (r < 0) {
    r += n;
    --q;
  }
  const double frac = std::pow(mant, static_cast<double>(p) / static_cast<double>(n)) *
                      std::exp2(static_cast<double>(r) / static_cast<double>(n));
  return std::ldexp(frac, static_cast<int>(q));
}

/// Rescales B by V^(-1/n) so the result has unit volume.
inline GeneratorMatrix normalize_volume(const GeneratorMatrix& b) {
  const double v = volume(b);
  if (!std::isnormal(v)) throw VolumeUnderflowError();
  Matrix m = b.matrix();
  m *= std::pow(v, -1.0 / static_cast<double>(b.dim()));
  return GeneratorMatrix(std::move(m));
}

}  // namespace latq
