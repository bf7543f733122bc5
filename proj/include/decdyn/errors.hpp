// Copyright 2026 The decdyn Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decdyn {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of the operands do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be Hermitian is not, beyond tolerance.
class NotHermitian : public Error {
 public:
  explicit NotHermitian(double relative_asymmetry)
      : Error("matrix is not Hermitian (relative asymmetry " +
              std::to_string(relative_asymmetry) + ")"),
        asymmetry_(relative_asymmetry) {}
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  double asymmetry_;
};

/// Choi matrix has an eigenvalue below -tol; no Kraus family exists.
class NotCP : public Error {
 public:
  explicit NotCP(double min_eigenvalue)
      : Error("map is not completely positive (min Choi eigenvalue " +
              std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// An iterative solver stopped before meeting its residual target.
class IterationCap : public Error {
 public:
  IterationCap(const std::string& what, std::size_t iterations,
               double best_residual)
      : Error(what + " (iterations " + std::to_string(iterations) +
              ", residual " + std::to_string(best_residual) + ")"),
        iterations_(iterations),
        best_residual_(best_residual) {}
  std::size_t iterations() const noexcept { return iterations_; }
  double best_residual() const noexcept { return best_residual_; }

 private:
  std::size_t iterations_;
  double best_residual_;
};

/// Eigensolver failed to converge.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Intermediate dynamical map too ill-conditioned to invert reliably.
class SingularIntermediateMap : public Error {
 public:
  explicit SingularIntermediateMap(double condition_number)
      : Error("intermediate map is numerically singular (condition number " +
              std::to_string(condition_number) + ")"),
        condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

/// A structural precondition on a generator (L(1) = 0, Hermiticity
/// preservation, trace annihilation) does not hold.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Argument outside its documented domain (negative time, empty schedule).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace decdyn
