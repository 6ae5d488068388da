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
#include <type_traits>
#include <vector>

#include "latq/linalg.hpp"

namespace latq {

namespace detail {

template <class Visitor>
class BallWalker {
 public:
  BallWalker(const Matrix& b, double r2, std::size_t cap, Visitor& visit)
      : b_(b), n_(b.rows()), r2_(r2), cap_(cap), visit_(visit), partial_(n_ * n_, 0.0), u_(n_, 0) {}

  void run() { level(n_ - 1, 0.0); }

 private:
  // partial_ row k holds sum_{i>k} u_i B_ij for j <= k.
  void level(std::size_t k, double dist_above) {
    const double bkk = b_(k, k);
    const double* part = partial_.data() + k * n_;
    const double rem = r2_ - dist_above;
    if (rem < 0.0) return;
    const double center = -part[k] / bkk;
    const double width = std::sqrt(rem) / bkk;
    const auto lo = static_cast<std::int64_t>(std::ceil(center - width));
    const auto hi = static_cast<std::int64_t>(std::floor(center + width));
    const auto brow = b_.row(k);
    for (std::int64_t v = lo; v <= hi; ++v) {
      const double coord = static_cast<double>(v) * bkk + part[k];
      const double dist = dist_above + coord * coord;
      if (dist > r2_) continue;
      u_[k] = v;
      if (k == 0) {
        if (++count_ > cap_) throw TooManyPointsError(cap_);
        visit_(std::span<const std::int64_t>(u_), dist);
      } else {
        double* next = partial_.data() + (k - 1) * n_;
        const auto vd = static_cast<double>(v);
        for (std::size_t j = 0; j < k; ++j) next[j] = part[j] + vd * brow[j];
        level(k - 1, dist);
      }
    }
    u_[k] = 0;
  }

  const Matrix& b_;
  std::size_t n_;
  double r2_;
  std::size_t cap_;
  Visitor& visit_;
  std::vector<double> partial_;
  std::vector<std::int64_t> u_;
  std::size_t count_ = 0;
};

}  // namespace detail

/// Default cap on the number of enumerated lattice points.
inline constexpr std::size_t kDefaultPointCap = 10'000'000;

/// Calls visit(u, |uB|^2) for every integer u with |uB|^2 <= r2_max,
/// including u = 0. B must be lower-triangular with positive diagonal.
/// Throws TooManyPointsError if more than `cap` points qualify.
template <class Visitor>
void enumerate_ball(const Matrix& b, double r2_max, Visitor&& visit, std::size_t cap = kDefaultPointCap) {
  if (!std::isfinite(r2_max)) throw InvalidArgument("enumeration radius must be finite");
  if (b.rows() == 0) return;
  detail::BallWalker<std::remove_reference_t<Visitor>> walker(b, r2_max, cap, visit);
  walker.run();
}

}  // namespace latq
