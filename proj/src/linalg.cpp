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
#include "infused/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "infused/errors.hpp"

namespace infused {

namespace {

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DataError(std::string(what) + ": size mismatch (" +
                    std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Matrix::column(int j) const {
  Vec c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

double dot(const Vec& a, const Vec& b) {
  check_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    const double* r = m.row(i);
    for (int j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(r[j])) return false;
    }
  }
  return true;
}

Vec matvec(const Matrix& A, const Vec& x) {
  check_same_size(static_cast<std::size_t>(A.cols()), x.size(), "matvec");
  const int m = A.rows(), n = A.cols();
  Vec y(m);
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n > 16384)
  for (int i = 0; i < m; ++i) {
    const double* r = A.row(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec matvec_t(const Matrix& A, const Vec& x) {
  check_same_size(static_cast<std::size_t>(A.rows()), x.size(), "matvec_t");
  const int m = A.rows(), n = A.cols();
  Vec y(n);
#pragma omp parallel for schedule(static) if (static_cast<long>(m) * n > 16384)
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += A(i, j) * x[i];
    y[j] = s;
  }
  return y;
}

Matrix gram(const Matrix& X) {
  const int m = X.rows(), n = X.cols();
  Matrix G(n, n);
#pragma omp parallel for schedule(dynamic) \
    if (static_cast<long>(m) * n * n > 32768)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += X(k, i) * X(k, j);
      G(i, j) = s;
      G(j, i) = s;
    }
  }
  return G;
}

Vec diff_apply(const Vec& beta) {
  const int n = static_cast<int>(beta.size());
  if (n < 2) return {};
  Vec q(n - 1);
  for (int k = 0; k + 1 < n; ++k) q[k] = beta[k] - beta[k + 1];
  return q;
}

Vec diff_apply_t(const Vec& q, int n) {
  check_same_size(q.size(), static_cast<std::size_t>(n > 0 ? n - 1 : 0),
                  "diff_apply_t");
  Vec out(n, 0.0);
  if (n < 2) return out;
  out[0] = q[0];
  for (int k = 1; k + 1 < n; ++k) out[k] = q[k] - q[k - 1];
  out[n - 1] = -q[n - 2];
  return out;
}

Matrix diff_gram(int n) {
  Matrix G(n, n);
  if (n < 2) return G;
  for (int k = 0; k + 1 < n; ++k) {
    G(k, k) += 1.0;
    G(k + 1, k + 1) += 1.0;
    G(k, k + 1) -= 1.0;
    G(k + 1, k) -= 1.0;
  }
  return G;
}

std::optional<CholeskyFactor> CholeskyFactor::try_compute(const Matrix& A) {
  if (A.rows() != A.cols()) throw DataError("cholesky: matrix not square");
  const int n = A.rows();
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(A(i, i)));
  const double floor = 1e-14 * std::max(1.0, max_diag);

  Matrix L(n, n);
  for (int j = 0; j < n; ++j) {
    double s = A(j, j);
    for (int k = 0; k < j; ++k) s -= L(j, k) * L(j, k);
    if (!(s > floor)) return std::nullopt;
    const double ljj = std::sqrt(s);
    L(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double t = A(i, j);
      for (int k = 0; k < j; ++k) t -= L(i, k) * L(j, k);
      L(i, j) = t / ljj;
    }
  }
  CholeskyFactor f;
  f.L_ = std::move(L);
  return f;
}

CholeskyFactor CholeskyFactor::compute(const Matrix& A) {
  auto f = try_compute(A);
  if (!f) throw NumericError("cholesky: matrix is not positive definite");
  return *f;
}

Vec CholeskyFactor::solve(const Vec& b) const {
  const int n = L_.rows();
  check_same_size(b.size(), static_cast<std::size_t>(n), "cholesky solve");
  Vec x(b);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= L_(i, k) * x[k];
    x[i] = s / L_(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= L_(k, i) * x[k];
    x[i] = s / L_(i, i);
  }
  return x;
}

CgResult cg_solve(const Matrix& A, const Vec& b, const Vec& x0, double tol,
                  int max_iter) {
  const int n = A.rows();
  if (A.cols() != n) throw DataError("cg: matrix not square");
  check_same_size(b.size(), static_cast<std::size_t>(n), "cg");

  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = std::max(std::abs(A(i, i)), 1e-300);

  CgResult res;
  res.x = x0.empty() ? Vec(n, 0.0) : x0;
  check_same_size(res.x.size(), static_cast<std::size_t>(n), "cg start");

  const double nb = norm2(b);
  if (nb == 0.0) {
    res.x.assign(n, 0.0);
    return res;
  }

  Vec r(n);
  {
    Vec ax = matvec(A, res.x);
    for (int i = 0; i < n; ++i) r[i] = b[i] - ax[i];
  }
  Vec z(n), p(n);
  for (int i = 0; i < n; ++i) z[i] = r[i] / d[i];
  p = z;
  double rz = dot(r, z);
  double rn = norm2(r);

  for (int it = 1; it <= max_iter && rn > tol * nb; ++it) {
    Vec ap = matvec(A, p);
    const double pap = dot(p, ap);
    if (!(std::isfinite(pap)) || pap == 0.0) {
      throw NumericError("cg: breakdown (matrix may be indefinite)");
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res.iterations = it;
    rn = norm2(r);
    if (!std::isfinite(rn)) throw NumericError("cg: diverged");
    if (rn <= tol * nb) break;
    for (int i = 0; i < n; ++i) z[i] = r[i] / d[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.relative_residual = rn / nb;
  return res;
}

}  // namespace infused
