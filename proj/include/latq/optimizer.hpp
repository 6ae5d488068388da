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
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "latq/clp.hpp"
#include "latq/estimator.hpp"
#include "latq/lll.hpp"
#include "latq/rng.hpp"

namespace latq {

/// Parameters of the iterative construction.
struct TrainConfig {
  double mu0 = 0.005;                    // initial step size
  double nu = 200.0;                     // ratio between initial and final step size
  std::uint64_t steps = 1'000'000;       // T
  std::uint64_t reduction_interval = 100;  // T_r, must divide T
  std::uint64_t seed = 0;
  std::string profile = "fast";

  void validate() const {
    if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw InvalidArgument("mu0 must be positive");
    if (!(nu > 1.0) || !std::isfinite(nu)) throw InvalidArgument("nu must exceed 1");
    if (steps < 1) throw InvalidArgument("steps must be at least 1");
    if (reduction_interval < 1 || reduction_interval > steps)
      throw InvalidArgument("reduction interval must lie in [1, steps]");
    if (steps % reduction_interval != 0) throw InvalidArgument("reduction interval must divide steps");
  }

  static TrainConfig fast() { return {0.005, 200.0, 1'000'000, 100, 0, "fast"}; }
  static TrainConfig medium() { return {0.001, 500.0, 10'000'000, 100, 0, "medium"}; }
  static TrainConfig slow() { return {0.0005, 1000.0, 100'000'000, 100, 0, "slow"}; }

  static std::optional<TrainConfig> profile_named(const std::string& name) {
    if (name == "fast") return fast();
    if (name == "medium") return medium();
    if (name == "slow") return slow();
    return std::nullopt;
  }
};

/// Exponential annealing: mu0 * nu^(-t/(T-1)); mu0 when T = 1.
inline double anneal(std::uint64_t t, const TrainConfig& cfg) {
  if (cfg.steps < 2) return cfg.mu0;
  return cfg.mu0 * std::pow(cfg.nu, -static_cast<double>(t) / static_cast<double>(cfg.steps - 1));
}

/// dg/dB for a lower-triangular B; entries above the diagonal are zero.
struct GradientMatrix {
  Matrix entries;
};

/// The quantities of one sample: y = z - u with uB closest to zB, and e = yB.
struct SampleError {
  std::vector<double> y;
  std::vector<double> e;
  double e_sq = 0.0;
};

inline SampleError sample_error(const GeneratorMatrix& b, std::span<const double> z) {
  const std::size_t n = b.dim();
  if (z.size() != n) throw InvalidArgument("sample dimension mismatch");
  const std::vector<double> x = row_times(z, b.matrix());
  const IntegerCoords u = clp(b, x);
  SampleError s;
  s.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.y[i] = z[i] - static_cast<double>(u[i]);
  s.e = row_times(s.y, b.matrix());
  s.e_sq = squared_norm(s.e);
  return s;
}

/// Gradient of g(B, z): (2/n) V^(-2/n) y_i e_j below the diagonal and
/// (2/n) V^(-2/n) (y_i e_i - |e|^2 / (n B_ii)) on it.
inline GradientMatrix nsm_gradient(const GeneratorMatrix& b, std::span<const double> z) {
  const std::size_t n = b.dim();
  const SampleError s = sample_error(b, z);
  const double nd = static_cast<double>(n);
  const double scale = 2.0 / nd * volume_power(b.matrix(), -2);
  GradientMatrix g{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) g.entries(i, j) = scale * s.y[i] * s.e[j];
    g.entries(i, i) = scale * (s.y[i] * s.e[i] - s.e_sq / (nd * b(i, i)));
  }
  return g;
}

namespace detail {

// In-place scale-free update; returns false if a diagonal entry became
// non-positive.
inline bool apply_update(Matrix& b, std::span<const double> y, std::span<const double> e, double e_sq,
                         double mu) noexcept {
  const std::size_t n = b.rows();
  const double nd = static_cast<double>(n);
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double myi = mu * y[i];
    auto row = b.row(i);
    for (std::size_t j = 0; j < i; ++j) row[j] -= myi * e[j];
    row[i] -= mu * (y[i] * e[i] - e_sq / (nd * row[i]));
    ok = ok && row[i] > 0.0;
  }
  return ok;
}

}  // namespace detail

/// One stochastic gradient step with the scale-free step size mu.
inline GeneratorMatrix sgd_step(const GeneratorMatrix& b, std::span<const double> z, double mu) {
  if (!(mu >= 0.0)) throw InvalidArgument("sgd_step: mu must be non-negative");
  const SampleError s = sample_error(b, z);
  Matrix next = b.matrix();
  if (!detail::apply_update(next, s.y, s.e, s.e_sq, mu)) throw StepTooLargeError(0);
  return GeneratorMatrix(std::move(next));
}

/// RED followed by ORTH and unit-volume normalization.
inline GeneratorMatrix reduce_and_normalize(const Matrix& b) {
  return normalize_volume(orth(lll(b).basis));
}

/// Observer that ignores every step.
struct NoObserver {
  void operator()(std::uint64_t, double) const noexcept {}
};

/// Iterative lattice construction by stochastic gradient descent.
///
/// `observe(t, g)` is called after every step with the sample value
/// g(B_t, z_t) evaluated before the update; pass a no-op to skip.
template <class Observer>
GeneratorMatrix train(std::size_t n, const TrainConfig& cfg, RngStream& stream, Observer&& observe) {
  if (n < 1) throw InvalidArgument("train: dimension must be positive");
  cfg.validate();
  GeneratorMatrix start = reduce_and_normalize(gran(stream, n, n));
  Matrix b = start.matrix();

  ClosestPointSearch search(n);
  std::vector<double> z(n), x(n), y(n), e(n);
  std::vector<std::int64_t> u(n);
  [[maybe_unused]] const double nd = static_cast<double>(n);

  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    const double mu = anneal(t, cfg);
    uran(stream, z);
    row_times(z, b, x);
    search(b, x, u);
    for (std::size_t i = 0; i < n; ++i) y[i] = z[i] - static_cast<double>(u[i]);
    row_times(y, b, e);
    const double e_sq = squared_norm(e);
    if constexpr (!std::is_same_v<std::remove_cvref_t<Observer>, NoObserver>)
      observe(t, e_sq * volume_power(b, -2) / nd);
    if (!detail::apply_update(b, y, e, e_sq, mu)) throw StepTooLargeError(t);
    if (t % cfg.reduction_interval == cfg.reduction_interval - 1) b = reduce_and_normalize(b).matrix();
  }
  return GeneratorMatrix(std::move(b));
}

inline GeneratorMatrix train(std::size_t n, const TrainConfig& cfg, RngStream& stream) {
  return train(n, cfg, stream, NoObserver{});
}

}  // namespace latq
