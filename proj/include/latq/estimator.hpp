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
#include <span>
#include <thread>
#include <vector>

#include "latq/clp.hpp"
#include "latq/rng.hpp"

namespace latq {

/// Monte-Carlo NSM estimate with its estimated variance.
struct NsmEstimate {
  double g_hat = 0.0;
  double sigma_hat_sq = 0.0;
  std::uint64_t samples = 0;

  double sigma_hat() const { return std::sqrt(sigma_hat_sq); }
};

/// Running sums of g and g^2. Shards merge by plain addition.
struct MomentSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  void add(double g) noexcept {
    sum += g;
    sum_sq += g * g;
    ++count;
  }

  MomentSums& operator+=(const MomentSums& o) noexcept {
    sum += o.sum;
    sum_sq += o.sum_sq;
    count += o.count;
    return *this;
  }

  NsmEstimate finish() const {
    if (count < 2) throw InvalidArgument("NSM estimate needs at least two samples");
    const auto t = static_cast<double>(count);
    const double g_hat = sum / t;
    const double var = (sum_sq / t - g_hat * g_hat) / (t - 1.0);
    return {g_hat, std::max(var, 0.0), count};
  }
};

/// Evaluates g(B, z) = V^(-2/n) |e|^2 / n with e = (z - u)B and uB the
/// lattice point closest to zB. Owns the search workspace; one per thread.
class NsmSampler {
 public:
  explicit NsmSampler(const GeneratorMatrix& b)
      : b_(b), search_(b.dim()), x_(b.dim()), y_(b.dim()), u_(b.dim()),
        inv_v2n_(volume_power(b.matrix(), -2)) {}

  double operator()(std::span<const double> z) {
    const Matrix& b = b_.matrix();
    const std::size_t n = b_.dim();
    row_times(z, b, x_);
    search_(b, x_, u_);
    for (std::size_t i = 0; i < n; ++i) y_[i] = z[i] - static_cast<double>(u_[i]);
    row_times(y_, b, x_);
    return squared_norm(x_) * inv_v2n_ / static_cast<double>(n);
  }

  /// Coordinates of the closest point found by the last call.
  std::span<const std::int64_t> last_coords() const noexcept { return u_; }

 private:
  const GeneratorMatrix& b_;
  ClosestPointSearch search_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<std::int64_t> u_;
  double inv_v2n_;
};

inline double g_sample(const GeneratorMatrix& b, std::span<const double> z) {
  if (z.size() != b.dim()) throw InvalidArgument("g_sample: z dimension mismatch");
  for (double v : z)
    if (!std::isfinite(v)) throw InvalidArgument("g_sample: non-finite z");
  NsmSampler sampler(b);
  return sampler(z);
}

/// Draws `samples` uniform points from `stream` and accumulates g and g^2.
inline MomentSums accumulate_nsm(const GeneratorMatrix& b, std::uint64_t samples, RngStream& stream) {
  NsmSampler sampler(b);
  std::vector<double> z(b.dim());
  MomentSums sums;
  for (std::uint64_t t = 0; t < samples; ++t) {
    uran(stream, z);
    sums.add(sampler(z));
  }
  return sums;
}

/// Single-stream estimate of G from T samples.
inline NsmEstimate estimate_nsm(const GeneratorMatrix& b, std::uint64_t samples, RngStream& stream) {
  if (samples < 2) throw InvalidArgument("estimate_nsm: T must be at least 2");
  return accumulate_nsm(b, samples, stream).finish();
}

/// Splits T samples over `workers` shards; shard k draws from stream id
/// base_stream + 1 + k. The result depends only on (seed, base_stream,
/// workers), not on thread scheduling.
inline NsmEstimate estimate_nsm_sharded(const GeneratorMatrix& b, std::uint64_t samples, std::uint64_t seed,
                                        std::uint64_t base_stream, unsigned workers) {
  if (samples < 2) throw InvalidArgument("estimate_nsm: T must be at least 2");
  if (workers == 0) throw InvalidArgument("estimate_nsm: workers must be positive");
  std::vector<MomentSums> parts(workers);
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (unsigned k = 0; k < workers; ++k) {
    const std::uint64_t share = samples / workers + (k < samples % workers ? 1 : 0);
    threads.emplace_back([&, k, share] {
      RngStream stream(seed, base_stream + 1 + k);
      parts[k] = accumulate_nsm(b, share, stream);
    });
  }
  threads.clear();
  MomentSums total;
  for (const auto& p : parts) total += p;
  return total.finish();
}

}  // namespace latq
