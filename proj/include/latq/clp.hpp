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
#include <limits>
#include <span>
#include <vector>

#include "latq/linalg.hpp"

namespace latq {

/// Integer coordinates u of a lattice point uB.
using IntegerCoords = std::vector<std::int64_t>;

/// Schnorr-Euchner sphere decoder for lower-triangular generators.
///
/// Coordinate j of uB only depends on u_j..u_{n-1}, so the search fixes
/// u_{n-1} first and walks down, visiting candidates at each level in
/// zig-zag order around the projected center. The radius starts at infinity
/// and shrinks to every new best leaf. Buffers are reused across calls, so one
/// instance per thread is the intended use.
class ClosestPointSearch {
 public:
  explicit ClosestPointSearch(std::size_t n)
      : n_(n), residual_(n * n), center_(n), dist_(n + 1), cur_(n), step_(n) {}

  std::size_t dim() const noexcept { return n_; }

  /// Writes argmin_u |x - uB|^2 into `u` and returns the squared distance.
  /// On exact ties the first optimum in enumeration order is kept.
  double operator()(const Matrix& b, std::span<const double> x, std::span<std::int64_t> u) {
    const std::size_t n = n_;
    double best = std::numeric_limits<double>::infinity();
    std::size_t k = n - 1;
    double* top = residual_.data() + k * n;
    for (std::size_t j = 0; j < n; ++j) top[j] = x[j];
    dist_[n] = 0.0;
    start_level(b, k);
    for (;;) {
      if (dist_[k] < best) {
        if (k == 0) {
          best = dist_[0];
          for (std::size_t i = 0; i < n; ++i) u[i] = cur_[i];
          next_sibling(b, 0);
        } else {
          const double* src = residual_.data() + k * n;
          double* dst = residual_.data() + (k - 1) * n;
          const auto uk = static_cast<double>(cur_[k]);
          const auto brow = b.row(k);
          for (std::size_t j = 0; j < k; ++j) dst[j] = src[j] - uk * brow[j];
          --k;
          start_level(b, k);
        }
      } else {
        if (k == n - 1) break;
        ++k;
        next_sibling(b, k);
      }
    }
    return best;
  }

 private:
  void start_level(const Matrix& b, std::size_t k) noexcept {
    const double bkk = b(k, k);
    const double c = residual_[k * n_ + k] / bkk;
    const double r = std::nearbyint(c);
    center_[k] = c;
    cur_[k] = static_cast<std::int64_t>(r);
    const double diff = c - r;
    step_[k] = diff >= 0.0 ? 1 : -1;
    const double y = diff * bkk;
    dist_[k] = dist_[k + 1] + y * y;
  }

  void next_sibling(const Matrix& b, std::size_t k) noexcept {
    cur_[k] += step_[k];
    step_[k] = -step_[k] - (step_[k] > 0 ? 1 : -1);
    const double y = (center_[k] - static_cast<double>(cur_[k])) * b(k, k);
    dist_[k] = dist_[k + 1] + y * y;
  }

  std::size_t n_;
  std::vector<double> residual_;  // row k: x_j - sum_{i>k} u_i B_ij for j <= k
  std::vector<double> center_;
  std::vector<double> dist_;
  std::vector<std::int64_t> cur_;
  std::vector<std::int64_t> step_;
};

/// CLP: integer coordinates of the lattice point closest to x.
inline IntegerCoords clp(const GeneratorMatrix& b, std::span<const double> x) {
  if (x.size() != b.dim()) throw InvalidArgument("clp: target dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidArgument("clp: non-finite target");
  IntegerCoords u(b.dim());
  ClosestPointSearch search(b.dim());
  search(b.matrix(), x, u);
  return u;
}

/// Real solution of uB = x by back substitution (B lower-triangular).
inline std::vector<double> solve_coordinates(const Matrix& b, std::span<const double> x) {
  const std::size_t n = b.rows();
  std::vector<double> u(n);
  for (std::size_t jj = n; jj-- > 0;) {
    double s = x[jj];
    for (std::size_t i = jj + 1; i < n; ++i) s -= u[i] * b(i, jj);
    u[jj] = s / b(jj, jj);
  }
  return u;
}

/// Exhaustive closest-point search over the box of half-width `box` around
/// the rounded real solution; ties go to the lexicographically smallest u.
inline IntegerCoords clp_bruteforce(const GeneratorMatrix& b, std::span<const double> x, int box) {
  const std::size_t n = b.dim();
  if (x.size() != n) throw InvalidArgument("clp_bruteforce: target dimension mismatch");
  if (box < 1) throw InvalidArgument("clp_bruteforce: box must be positive");
  const std::vector<double> real = solve_coordinates(b.matrix(), x);
  IntegerCoords lo(n), u(n), best(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = static_cast<std::int64_t>(std::nearbyint(real[i])) - box;
    u[i] = lo[i];
  }
  std::vector<double> diff(n);
  double best_d = std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = x[j];
      for (std::size_t i = j; i < n; ++i) s -= static_cast<double>(u[i]) * b(i, j);
      diff[j] = s;
    }
    const double d = squared_norm(diff);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
    // Odometer increment, last coordinate fastest: lexicographic order.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (u[i] < lo[i] + 2 * box) {
        ++u[i];
        break;
      }
      u[i] = lo[i];
      if (i == 0) return best;
    }
  }
}

/// |x - uB|^2 for integer u.
inline double lattice_distance_sq(const Matrix& b, std::span<const double> x, std::span<const std::int64_t> u) {
  double d = 0.0;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double s = x[j];
    for (std::size_t i = 0; i < b.rows(); ++i) s -= static_cast<double>(u[i]) * b(i, j);
    d += s * s;
  }
  return d;
}

}  // namespace latq
