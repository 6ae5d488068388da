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
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "latq/matrix.hpp"

namespace latq {

/// PCG-XSH-RR with 64-bit state and 32-bit output, seeded exactly like the
/// reference `pcg32_srandom_r(initstate, initseq)`.
class Pcg32 {
 public:
  Pcg32(std::uint64_t initstate, std::uint64_t initseq) noexcept
      : state_(0), inc_((initseq << 1u) | 1u) {
    next();
    state_ += initstate;
    next();
  }

  std::uint32_t next() noexcept {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
  }

 private:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  std::uint64_t state_;
  std::uint64_t inc_;
};

/// A seeded, single-owner random stream. The stream id selects one of 2^63
/// independent PCG sequences. Copying is disabled: parallel workers must each
/// construct their own stream with a distinct id.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id), gen_(seed, stream_id) {}

  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;
  RngStream(RngStream&&) noexcept = default;
  RngStream& operator=(RngStream&&) noexcept = default;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint32_t next_u32() noexcept { return gen_.next(); }

  /// Uniform double in [0, 1) with 53 random bits; consumes two 32-bit outputs.
  double next_uniform() noexcept {
    const std::uint32_t a = gen_.next() >> 5;
    const std::uint32_t b = gen_.next() >> 6;
    return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  Pcg32 gen_;
};

/// URAN: fills `out` with independent uniforms in [0, 1).
inline void uran(RngStream& stream, std::span<double> out) noexcept {
  for (double& v : out) v = stream.next_uniform();
}

inline std::vector<double> uran(RngStream& stream, std::size_t n) {
  if (n == 0) throw InvalidArgument("uran: n must be positive");
  std::vector<double> out(n);
  uran(stream, out);
  return out;
}

/// GRAN: n x m matrix of i.i.d. standard normals. Each pair of uniforms
/// (u1, u2) gives r*cos(2 pi u2) and r*sin(2 pi u2) with r = sqrt(-2 ln u1),
/// filled in row-major order. An odd trailing spare is discarded.
inline Matrix gran(RngStream& stream, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw InvalidArgument("gran: dimensions must be positive");
  Matrix out(n, m);
  auto cells = out.data();
  for (std::size_t k = 0; k < cells.size(); k += 2) {
    double u1 = stream.next_uniform();
    while (u1 == 0.0) u1 = stream.next_uniform();
    const double u2 = stream.next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    cells[k] = r * std::cos(phi);
    if (k + 1 < cells.size()) cells[k + 1] = r * std::sin(phi);
  }
  return out;
}

}  // namespace latq
