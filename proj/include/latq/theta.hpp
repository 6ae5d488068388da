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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "latq/enumerate.hpp"
#include "latq/linalg.hpp"
#include "latq/lll.hpp"

namespace latq {

/// Lattice vectors sharing one squared norm.
struct Shell {
  double squared_norm = 0.0;
  std::uint64_t count = 0;
};

/// Discrete theta series: shells sorted by strictly increasing norm, the
/// first one being the origin.
struct ShellSpectrum {
  std::vector<Shell> shells;
  double r2_max = 0.0;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& s : shells) t += s.count;
    return t;
  }
};

/// One corner of the theta image staircase N(B, r) versus r^2.
struct ThetaStep {
  double r2 = 0.0;
  std::uint64_t cumulative = 0;
};

/// Default enumeration bound for theta images, in unit-volume units.
inline constexpr double kDefaultThetaR2 = 5.4;
/// Absolute merge tolerance for squared norms at unit volume.
inline constexpr double kShellTolerance = 1e-9;

/// Squared norms of every lattice vector with |uB|^2 <= r2_max, sorted.
inline std::vector<double> ball_norms(const GeneratorMatrix& b, double r2_max, std::size_t cap = kDefaultPointCap) {
  std::vector<double> norms;
  enumerate_ball(b.matrix(), r2_max, [&](std::span<const std::int64_t>, double d) { norms.push_back(d); }, cap);
  std::sort(norms.begin(), norms.end());
  return norms;
}

/// Groups sorted squared norms into shells. Consecutive norms closer than
/// `abs_tol` merge; a shell reports the mean of its members.
inline std::vector<Shell> group_norms(const std::vector<double>& sorted, double abs_tol) {
  std::vector<Shell> shells;
  double sum = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i] - sorted[i - 1] > abs_tol) {
      if (!shells.empty()) shells.back().squared_norm = sum / static_cast<double>(shells.back().count);
      shells.push_back({sorted[i], 0});
      sum = 0.0;
    }
    ++shells.back().count;
    sum += sorted[i];
  }
  if (!shells.empty()) shells.back().squared_norm = sum / static_cast<double>(shells.back().count);
  return shells;
}

/// All shells with squared norm up to r2_max (in B's own scale). The merge
/// tolerance is `tol` at unit volume, rescaled by V^(2/n).
inline ShellSpectrum enumerate_shells(const GeneratorMatrix& b, double r2_max, std::size_t cap = kDefaultPointCap,
                                      double tol = kShellTolerance) {
  if (!(r2_max > 0.0) || !std::isfinite(r2_max)) throw InvalidArgument("r2_max must be positive and finite");
  const double scale = volume_power(b.matrix(), 2);
  const double abs_tol = tol * scale;
  ShellSpectrum spec;
  spec.r2_max = r2_max;
  spec.shells = group_norms(ball_norms(b, r2_max + abs_tol, cap), abs_tol);
  return spec;
}

/// Cumulative counts at each shell: the corners of the N(B, r) staircase.
inline std::vector<ThetaStep> theta_image(const ShellSpectrum& spec) {
  std::vector<ThetaStep> steps;
  std::uint64_t acc = 0;
  for (const auto& s : spec.shells) {
    acc += s.count;
    steps.push_back({s.squared_norm, acc});
  }
  return steps;
}

inline std::vector<ThetaStep> theta_image(const GeneratorMatrix& b, double r2_max,
                                          std::size_t cap = kDefaultPointCap) {
  return theta_image(enumerate_shells(b, r2_max, cap));
}

struct KissingData {
  double packing_radius = 0.0;  // rho
  std::uint64_t kissing_number = 0;  // tau
  double min_squared_norm = 0.0;
};

/// Packing radius and kissing number from the first nonzero shell. Norms
/// within a factor (1 + rel_tol) of the minimum count as one shell, which
/// lets numerically optimized lattices report their intended kissing number.
inline KissingData kissing(const GeneratorMatrix& b, double rel_tol = kShellTolerance) {
  if (!(rel_tol >= 0.0 && rel_tol < 1.0)) throw InvalidArgument("kissing: rel_tol must lie in [0, 1)");
  const GeneratorMatrix reduced = orth(lll(b.matrix()).basis);
  double r2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reduced.dim(); ++i) r2 = std::min(r2, squared_norm(reduced.matrix().row(i)));
  const std::vector<double> norms = ball_norms(reduced, r2 * (1.0 + rel_tol));
  if (norms.size() < 2) throw Error("kissing: no nonzero vector found");
  const double s = norms[1];
  std::uint64_t count = 0;
  double sum = 0.0;
  for (std::size_t i = 1; i < norms.size() && norms[i] <= s * (1.0 + rel_tol); ++i) {
    ++count;
    sum += norms[i];
  }
  return {std::sqrt(s) / 2.0, count, sum / static_cast<double>(count)};
}

}  // namespace latq
