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

// Linear maps on matrix algebras in superoperator and Choi form, with Kraus
// conversions. The transposition map and tensor extensions live here too.
//
// A SuperOperator acts on row-vectorized operators (see linalg.hpp). The
// Choi matrix places the input ("index") factor first:
//   C = sum_ij E_ij (x) Phi(E_ij),   C((i,k),(j,l)) = S((k,l),(i,j)).
// Co-positivity is therefore tested through the partial transpose on the
// SECOND factor, which is the Choi matrix of tau o Phi.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "decdyn/errors.hpp"
#include "decdyn/linalg.hpp"

namespace decdyn {

struct SuperOperator {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  ComplexMatrix matrix;  // (dim_out^2) x (dim_in^2)

  SuperOperator() = default;
  SuperOperator(std::size_t d_in, std::size_t d_out, ComplexMatrix m)
      : dim_in(d_in), dim_out(d_out), matrix(std::move(m)) {
    if (d_in == 0 || d_out == 0 ||
        matrix.rows() != static_cast<Eigen::Index>(d_out * d_out) ||
        matrix.cols() != static_cast<Eigen::Index>(d_in * d_in)) {
      throw DimensionError("SuperOperator: matrix is " + std::to_string(matrix.rows()) +
                           "x" + std::to_string(matrix.cols()) + " but dims are " +
                           std::to_string(d_in) + " -> " + std::to_string(d_out));
    }
  }
  /// Square superoperator on M_d.
  SuperOperator(std::size_t d, ComplexMatrix m) : SuperOperator(d, d, std::move(m)) {}

  static SuperOperator identity(std::size_t d) {
    return {d, decdyn::identity(d * d)};
  }
  static SuperOperator zero(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d * d);
    return {d, ComplexMatrix::Zero(n, n)};
  }
  bool square() const { return dim_in == dim_out; }
};

inline SuperOperator operator+(const SuperOperator& a, const SuperOperator& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw DimensionError("SuperOperator sum: dimension mismatch");
  }
  return {a.dim_in, a.dim_out, a.matrix + b.matrix};
}
inline SuperOperator operator-(const SuperOperator& a, const SuperOperator& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw DimensionError("SuperOperator difference: dimension mismatch");
  }
  return {a.dim_in, a.dim_out, a.matrix - b.matrix};
}
inline SuperOperator operator*(Complex s, const SuperOperator& a) {
  return {a.dim_in, a.dim_out, s * a.matrix};
}
inline SuperOperator operator*(double s, const SuperOperator& a) {
  return {a.dim_in, a.dim_out, s * a.matrix};
}

struct ChoiMatrix {
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  ComplexMatrix matrix;  // (dim_in * dim_out) square

  ChoiMatrix() = default;
  ChoiMatrix(std::size_t d_in, std::size_t d_out, ComplexMatrix m)
      : dim_in(d_in), dim_out(d_out), matrix(std::move(m)) {
    const auto n = static_cast<Eigen::Index>(d_in * d_out);
    if (d_in == 0 || d_out == 0 || matrix.rows() != n || matrix.cols() != n) {
      throw DimensionError("ChoiMatrix: matrix is " + std::to_string(matrix.rows()) +
                           "x" + std::to_string(matrix.cols()) + ", expected " +
                           std::to_string(n) + " square");
    }
  }
  ChoiMatrix(std::size_t d, ComplexMatrix m) : ChoiMatrix(d, d, std::move(m)) {}
};

enum class KrausSide {
  cp,    // X -> sum_k K_k X K_k^dagger
  cocp,  // X -> sum_k K_k X^T K_k^dagger
};

struct KrausFamily {
  std::vector<ComplexMatrix> operators;
  KrausSide side = KrausSide::cp;
};

// Call as decdyn::apply: unqualified calls with Eigen operands also find
// std::apply through argument-dependent lookup.
inline ComplexMatrix apply(const SuperOperator& s, const ComplexMatrix& x) {
  if (x.rows() != static_cast<Eigen::Index>(s.dim_in) ||
      x.cols() != static_cast<Eigen::Index>(s.dim_in)) {
    throw DimensionError("apply: operand is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", map expects " +
                         std::to_string(s.dim_in));
  }
  return unvec(s.matrix * vec(x), s.dim_out, s.dim_out);
}

/// second o first.
inline SuperOperator compose(const SuperOperator& second, const SuperOperator& first) {
  if (first.dim_out != second.dim_in) {
    throw DimensionError("compose: inner map outputs M_" + std::to_string(first.dim_out) +
                         ", outer map expects M_" + std::to_string(second.dim_in));
  }
  return {first.dim_in, second.dim_out, second.matrix * first.matrix};
}

/// Adjoint under the Hilbert-Schmidt pairing Tr(A^dagger Phi(B)).
inline SuperOperator dual(const SuperOperator& s) {
  return {s.dim_out, s.dim_in, s.matrix.adjoint()};
}

/// Superoperator of X -> A X B.
inline SuperOperator sandwich(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("sandwich: A and B do not act on the same space");
  }
  if (a.rows() != b.cols()) {
    throw DimensionError("sandwich: output of X -> A X B is not square");
  }
  return {static_cast<std::size_t>(a.cols()), static_cast<std::size_t>(a.rows()),
          kron(a, b.transpose())};
}

/// Entrywise transpose on M_d in the standard basis.
inline SuperOperator transpose_map(std::size_t d) {
  if (d == 0) throw DimensionError("transpose_map: d must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(j * n + i, i * n + j) = 1.0;
  }
  return {d, std::move(m)};
}

inline ChoiMatrix choi_of(const SuperOperator& s) {
  const auto di = static_cast<Eigen::Index>(s.dim_in);
  const auto dout = static_cast<Eigen::Index>(s.dim_out);
  ComplexMatrix c(di * dout, di * dout);
  for (Eigen::Index i = 0; i < di; ++i) {
    for (Eigen::Index j = 0; j < di; ++j) {
      for (Eigen::Index k = 0; k < dout; ++k) {
        for (Eigen::Index l = 0; l < dout; ++l) {
          c(i * dout + k, j * dout + l) = s.matrix(k * dout + l, i * di + j);
        }
      }
    }
  }
  return {s.dim_in, s.dim_out, std::move(c)};
}

inline SuperOperator superop_of(const ChoiMatrix& c) {
  const auto di = static_cast<Eigen::Index>(c.dim_in);
  const auto dout = static_cast<Eigen::Index>(c.dim_out);
  ComplexMatrix s(dout * dout, di * di);
  for (Eigen::Index i = 0; i < di; ++i) {
    for (Eigen::Index j = 0; j < di; ++j) {
      for (Eigen::Index k = 0; k < dout; ++k) {
        for (Eigen::Index l = 0; l < dout; ++l) {
          s(k * dout + l, i * di + j) = c.matrix(i * dout + k, j * dout + l);
        }
      }
    }
  }
  return {c.dim_in, c.dim_out, std::move(s)};
}

/// Superoperator of id_n (x) Phi acting blockwise on M_n(M_d).
inline SuperOperator extend(const SuperOperator& s, std::size_t n) {
  if (n == 0) throw InvalidArgument("extend: level n must be at least 1");
  const auto nn = static_cast<Eigen::Index>(n);
  const auto di = static_cast<Eigen::Index>(s.dim_in);
  const auto dout = static_cast<Eigen::Index>(s.dim_out);
  const Eigen::Index big_in = nn * di;
  const Eigen::Index big_out = nn * dout;
  ComplexMatrix m = ComplexMatrix::Zero(big_out * big_out, big_in * big_in);
  for (Eigen::Index p = 0; p < nn; ++p) {
    for (Eigen::Index q = 0; q < nn; ++q) {
      for (Eigen::Index k = 0; k < dout; ++k) {
        for (Eigen::Index l = 0; l < dout; ++l) {
          const Eigen::Index row = (p * dout + k) * big_out + (q * dout + l);
          for (Eigen::Index i = 0; i < di; ++i) {
            for (Eigen::Index j = 0; j < di; ++j) {
              const Eigen::Index col = (p * di + i) * big_in + (q * di + j);
              m(row, col) = s.matrix(k * dout + l, i * di + j);
            }
          }
        }
      }
    }
  }
  return {n * s.dim_in, n * s.dim_out, std::move(m)};
}

inline SuperOperator superop_from_kraus(const KrausFamily& family) {
  if (family.operators.empty()) {
    throw DimensionError("superop_from_kraus: empty family has no dimensions");
  }
  const ComplexMatrix& first = family.operators.front();
  const auto rows = first.rows();
  const auto cols = first.cols();
  ComplexMatrix m = ComplexMatrix::Zero(rows * rows, cols * cols);
  for (const ComplexMatrix& k : family.operators) {
    if (k.rows() != rows || k.cols() != cols) {
      throw DimensionError("superop_from_kraus: Kraus operators differ in shape");
    }
    m += kron(k, k.conjugate());
  }
  SuperOperator s(static_cast<std::size_t>(cols), static_cast<std::size_t>(rows),
                  std::move(m));
  if (family.side == KrausSide::cocp) {
    s = compose(s, transpose_map(s.dim_in));
  }
  return s;
}

/// Kraus family of a CP map from its Choi matrix. Eigenvalues above tol are
/// kept in descending order; each eigenvector's first nonzero component is
/// made real positive so the output is deterministic.
inline KrausFamily kraus_from_choi(const ChoiMatrix& c, double tol = 1e-9) {
  const EigenDecomposition eig = herm_eig(c.matrix);
  if (eig.eigenvalues(0) < -tol) throw NotCP(eig.eigenvalues(0));
  const auto di = static_cast<Eigen::Index>(c.dim_in);
  const auto dout = static_cast<Eigen::Index>(c.dim_out);
  KrausFamily family;
  family.side = KrausSide::cp;
  for (Eigen::Index idx = eig.eigenvalues.size() - 1; idx >= 0; --idx) {
    const double lambda = eig.eigenvalues(idx);
    if (lambda <= tol) break;
    ComplexVector v = eig.eigenvectors.col(idx);
    for (Eigen::Index m = 0; m < v.size(); ++m) {
      if (std::abs(v(m)) > 1e-10) {
        v *= std::conj(v(m)) / std::abs(v(m));
        break;
      }
    }
    ComplexMatrix k(dout, di);
    for (Eigen::Index i = 0; i < di; ++i) {
      for (Eigen::Index o = 0; o < dout; ++o) k(o, i) = std::sqrt(lambda) * v(i * dout + o);
    }
    family.operators.push_back(std::move(k));
  }
  return family;
}

/// Image of the unit, Phi(1).
inline ComplexMatrix unit_image(const SuperOperator& s) {
  return decdyn::apply(s, identity(s.dim_in));
}

/// ||Phi(1) - 1||_F; zero for unital maps.
inline double unital_defect(const SuperOperator& s) {
  return (unit_image(s) - identity(s.dim_out)).norm();
}

/// ||Phi^*(1) - 1||_F; zero for trace-preserving maps.
inline double trace_preservation_defect(const SuperOperator& s) {
  return unital_defect(dual(s));
}

/// ||C - C^dagger||_F / max(1, ||C||_F) for the Choi matrix C; zero exactly
/// when the map preserves Hermiticity.
inline double hermiticity_defect(const SuperOperator& s) {
  const ComplexMatrix c = choi_of(s).matrix;
  return (c - c.adjoint()).norm() / std::max(1.0, c.norm());
}

}  // namespace decdyn
