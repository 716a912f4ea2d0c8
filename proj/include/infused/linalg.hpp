/*
 * Copyright 2026 The infused authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <optional>
#include <vector>

namespace infused {

using Vec = std::vector<double>;

// Dense row-major matrix sized for desk-scale problems. Parallel kernels
// operating on it are written so that results do not depend on the number
// of OpenMP threads: reductions that cross output elements stay serial.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double value = 0.0)
      : rows_(rows), cols_(cols),
        d_(static_cast<std::size_t>(rows) * cols, value) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return d_.empty(); }

  double& operator()(int i, int j) {
    return d_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * cols_ + j];
  }

  double* row(int i) { return d_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const {
    return d_.data() + static_cast<std::size_t>(i) * cols_;
  }

  Vec column(int j) const;

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vec d_;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double max_abs(const Vec& v);
bool all_finite(const Vec& v);
bool all_finite(const Matrix& m);

/// y = A x (parallel over rows).
Vec matvec(const Matrix& A, const Vec& x);
/// y = A^T x (parallel over columns).
Vec matvec_t(const Matrix& A, const Vec& x);
/// X^T X (parallel over output rows).
Matrix gram(const Matrix& X);

// First-difference operator on coefficient vectors: row k of the implicit
// (n-1) x n matrix has +1 at k and -1 at k+1.
Vec diff_apply(const Vec& beta);
Vec diff_apply_t(const Vec& q, int n);
Matrix diff_gram(int n);

/// Cholesky factorization of a symmetric positive definite matrix.
class CholeskyFactor {
 public:
  /// Returns nullopt when a pivot drops to (numerical) zero or below,
  /// i.e. the matrix is not positive definite.
  static std::optional<CholeskyFactor> try_compute(const Matrix& A);
  /// Throws NumericError instead of returning nullopt.
  static CholeskyFactor compute(const Matrix& A);

  Vec solve(const Vec& b) const;
  int size() const { return L_.rows(); }

 private:
  Matrix L_;
};

struct CgResult {
  Vec x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient for symmetric positive
/// definite systems. Stops at ||r|| <= tol * ||b||.
CgResult cg_solve(const Matrix& A, const Vec& b, const Vec& x0, double tol,
                  int max_iter);

}  // namespace infused
