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

// Dense complex linear algebra used throughout the toolkit.
//
// Operators on C^d are stored as Eigen::MatrixXcd. Vectorization is
// ROW-stacking: vec(X)[i * cols + j] = X(i, j), so the superoperator of
// X -> A X B is kron(A, B^T). Every other header relies on this convention.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "decdyn/errors.hpp"

namespace decdyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Relative tolerance for Hermiticity checks on inputs.
inline constexpr double kHermitianTol = 1e-12;

enum class TensorFactor { first, second };
enum class NormKind { frobenius, trace, spectral };

struct EigenDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns
};

inline ComplexMatrix identity(std::size_t d) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(d),
                                 static_cast<Eigen::Index>(d));
}

/// Matrix unit E_ij of size rows x cols.
inline ComplexMatrix matrix_unit(std::size_t rows, std::size_t cols,
                                 std::size_t i, std::size_t j) {
  ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(rows),
                                        static_cast<Eigen::Index>(cols));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline ComplexVector vec(const ComplexMatrix& x) {
  ComplexVector v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  }
  return v;
}

inline ComplexMatrix unvec(const ComplexVector& v, std::size_t rows,
                           std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols || rows == 0 || cols == 0) {
    throw DimensionError("unvec: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  const auto r = static_cast<Eigen::Index>(rows);
  const auto c = static_cast<Eigen::Index>(cols);
  ComplexMatrix x(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) x(i, j) = v(i * c + j);
  }
  return x;
}

/// ||A - A^dagger||_F / max(||A||_F, tiny). Zero for Hermitian input.
inline double relative_asymmetry(const ComplexMatrix& a) {
  const double n = a.norm();
  if (n == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / n;
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

inline void require_hermitian(const ComplexMatrix& a, double tol = kHermitianTol) {
  require_square(a, "hermitian check");
  const double asym = relative_asymmetry(a);
  if (asym > tol) throw NotHermitian(asym);
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
inline EigenDecomposition herm_eig(const ComplexMatrix& a, double tol = kHermitianTol) {
  require_hermitian(a, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("herm_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const ComplexMatrix& a, double tol = kHermitianTol) {
  require_hermitian(a, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NoConvergence("min_eigenvalue: eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

/// Matrix exponential (Pade scaling-and-squaring).
inline ComplexMatrix expm(const ComplexMatrix& a) {
  require_square(a, "expm");
  return a.exp();
}

/// Transposes the indices of one tensor factor of a (dA*dB)-square matrix.
/// For factor == second: out((i,k),(j,l)) = c((i,l),(j,k)).
inline ComplexMatrix partial_transpose(const ComplexMatrix& c, std::size_t dim_a,
                                       std::size_t dim_b,
                                       TensorFactor factor = TensorFactor::second) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (dim_a == 0 || dim_b == 0 || c.rows() != da * db || c.cols() != da * db) {
    throw DimensionError("partial_transpose: matrix is " + std::to_string(c.rows()) +
                         "x" + std::to_string(c.cols()) + ", expected " +
                         std::to_string(dim_a * dim_b) + " square");
  }
  ComplexMatrix out(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      if (factor == TensorFactor::second) {
        out.block(i * db, j * db, db, db) = c.block(i * db, j * db, db, db).transpose();
      } else {
        out.block(i * db, j * db, db, db) = c.block(j * db, i * db, db, db);
      }
    }
  }
  return out;
}

/// Frobenius-nearest positive semidefinite matrix (eigenvalue clipping).
inline ComplexMatrix psd_project(const ComplexMatrix& a, double tol = kHermitianTol) {
  const EigenDecomposition eig = herm_eig(a, tol);
  const RealVector clipped = eig.eigenvalues.cwiseMax(0.0);
  return eig.eigenvectors * clipped.cast<Complex>().asDiagonal() *
         eig.eigenvectors.adjoint();
}

inline double norm(const ComplexMatrix& a, NormKind kind = NormKind::frobenius) {
  switch (kind) {
    case NormKind::frobenius:
      return a.norm();
    case NormKind::trace:
    case NormKind::spectral: {
      if (a.size() == 0) return 0.0;
      Eigen::JacobiSVD<ComplexMatrix> svd(a);
      const RealVector& s = svd.singularValues();
      return kind == NormKind::trace ? s.sum() : s(0);
    }
  }
  return 0.0;
}

/// Frobenius inner product Re Tr(A^dagger B).
inline double frobenius_pairing(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

namespace pauli {
inline ComplexMatrix x() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix y() { return (ComplexMatrix(2, 2) << 0, -kI, kI, 0).finished(); }
inline ComplexMatrix z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }
/// Lowering operator |0><1|.
inline ComplexMatrix minus() { return (ComplexMatrix(2, 2) << 0, 1, 0, 0).finished(); }
}  // namespace pauli

}  // namespace decdyn
