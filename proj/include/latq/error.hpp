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

#include <stdexcept>
#include <string>

namespace latq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments at an API boundary (dimension mismatch, bad ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot fell below the singularity threshold.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError() : Error("input rank-deficient or numerically singular") {}
};

/// The lattice volume under- or overflowed the double range.
class VolumeUnderflowError : public Error {
 public:
  VolumeUnderflowError()
      : Error("lattice volume underflowed; normalize the generator to unit volume more often") {}
};

/// A stochastic gradient update drove a diagonal entry to zero or below.
class StepTooLargeError : public Error {
 public:
  explicit StepTooLargeError(std::size_t step)
      : Error("step size too large: non-positive diagonal after step " + std::to_string(step)),
        step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// Shell enumeration would visit more lattice points than the configured cap.
class TooManyPointsError : public Error {
 public:
  explicit TooManyPointsError(std::size_t cap)
      : Error("more than " + std::to_string(cap) + " lattice points in the ball; use a smaller r2_max") {}
};

/// An exact solve produced a symmetric matrix that is not positive definite.
class NotGramError : public Error {
 public:
  NotGramError() : Error("solution is not a Gram matrix") {}
};

}  // namespace latq
