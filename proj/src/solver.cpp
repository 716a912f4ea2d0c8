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
#include "infused/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "infused/errors.hpp"

namespace infused {

namespace {

constexpr int kDirectSolveMaxN = 2000;
constexpr int kMaxMu1Shifts = 6;

void check_finite_positive(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw DataError(std::string(name) + " must be positive and finite");
  }
}

void check_symmetric(const Matrix& U) {
  double amax = 0.0, asym = 0.0;
  for (int i = 0; i < U.rows(); ++i) {
    for (int j = i; j < U.cols(); ++j) {
      amax = std::max(amax, std::abs(U(i, j)));
      asym = std::max(asym, std::abs(U(i, j) - U(j, i)));
    }
  }
  if (asym > 1e-9 * std::max(1.0, amax)) {
    throw DataError("interaction matrix is not symmetric");
  }
}

double l1_norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

void Hyperparams::validate() const {
  for (auto [v, name] : {std::pair{lambda1, "lambda1"},
                         std::pair{lambda2, "lambda2"},
                         std::pair{lambda3, "lambda3"}}) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw DataError(std::string(name) + " must be nonnegative and finite");
    }
  }
  check_finite_positive(mu1, "mu1");
  check_finite_positive(mu2, "mu2");
  check_finite_positive(delta1, "delta1");
  check_finite_positive(delta2, "delta2");
  check_finite_positive(tol, "tol");
  check_finite_positive(cg_tol, "cg_tol");
  if (max_iter < 1) throw DataError("max_iter must be at least 1");
  if (cg_max_iter < 0) throw DataError("cg_max_iter must be nonnegative");
}

double soft_threshold(double w, double lam) {
  const double t = std::abs(w) - lam;
  if (t <= 0.0) return 0.0;
  return w > 0.0 ? t : -t;
}

Vec soft_threshold(const Vec& w, double lam) {
  Vec out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = soft_threshold(w[i], lam);
  return out;
}

Matrix system_matrix(const Matrix& XtX, const Matrix& U,
                     const Hyperparams& hp) {
  const int n = XtX.rows();
  Matrix D = XtX;
  const Matrix ctc = diff_gram(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      D(i, j) += -2.0 * hp.lambda3 * U(i, j) + hp.mu2 * ctc(i, j);
    }
    D(i, i) += hp.mu1;
  }
  return D;
}

Vec beta_rhs(const Vec& Xty, const Vec& p, const Vec& q, const Vec& u,
             const Vec& v, const Hyperparams& hp) {
  const int n = static_cast<int>(Xty.size());
  Vec rhs(n);
  Vec scaled_q(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    scaled_q[k] = hp.mu2 * q[k] - v[k];
  }
  const Vec ct = diff_apply_t(scaled_q, n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = Xty[i] + hp.mu1 * p[i] - u[i] + ct[i];
  }
  return rhs;
}

Vec p_update(const Vec& beta, const Vec& u, double mu1, double lambda1) {
  check_finite_positive(mu1, "mu1");
  Vec w(beta.size());
  for (std::size_t i = 0; i < beta.size(); ++i) w[i] = beta[i] + u[i] / mu1;
  return soft_threshold(w, lambda1 / mu1);
}

Vec q_update(const Vec& beta, const Vec& v, double mu2, double lambda2) {
  check_finite_positive(mu2, "mu2");
  Vec w = diff_apply(beta);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] += v[k] / mu2;
  return soft_threshold(w, lambda2 / mu2);
}

void dual_update(Vec& u, Vec& v, const Vec& beta, const Vec& p, const Vec& q,
                 double delta1, double delta2) {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += delta1 * (beta[i] - p[i]);
  const Vec cb = diff_apply(beta);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += delta2 * (cb[k] - q[k]);
}

double objective_value(const Matrix& X, const Vec& y, const Matrix& U,
                       const Hyperparams& hp, const Vec& beta) {
  const Vec xb = matvec(X, beta);
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - xb[i];
    rss += r * r;
  }
  double value = 0.5 * rss + hp.lambda1 * l1_norm(beta) +
                 hp.lambda2 * l1_norm(diff_apply(beta));
  if (hp.lambda3 != 0.0) {
    value -= hp.lambda3 * dot(beta, matvec(U, beta));
  }
  return value;
}

double beta_subproblem_value(const Matrix& X, const Vec& y, const Matrix& U,
                             const Hyperparams& hp, const Vec& beta,
                             const Vec& p, const Vec& q, const Vec& u,
                             const Vec& v) {
  const Vec xb = matvec(X, beta);
  double rss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - xb[i];
    rss += r * r;
  }
  double value = 0.5 * rss;
  if (hp.lambda3 != 0.0) value -= hp.lambda3 * dot(beta, matvec(U, beta));
  const Vec cb = diff_apply(beta);
  double lin = 0.0, quad1 = 0.0, quad2 = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const double r = beta[i] - p[i];
    lin += u[i] * r;
    quad1 += r * r;
  }
  for (std::size_t k = 0; k < cb.size(); ++k) {
    const double r = cb[k] - q[k];
    lin += v[k] * r;
    quad2 += r * r;
  }
  return value + lin + 0.5 * hp.mu1 * quad1 + 0.5 * hp.mu2 * quad2;
}

Vec beta_subproblem_gradient(const Matrix& X, const Vec& y, const Matrix& U,
                             const Hyperparams& hp, const Vec& beta,
                             const Vec& p, const Vec& q, const Vec& u,
                             const Vec& v) {
  const int n = static_cast<int>(beta.size());
  Vec residual = matvec(X, beta);
  for (std::size_t i = 0; i < y.size(); ++i) residual[i] -= y[i];
  Vec g = matvec_t(X, residual);  // X^T (X beta - y)
  if (hp.lambda3 != 0.0) {
    const Vec ub = matvec(U, beta);
    for (int i = 0; i < n; ++i) g[i] -= 2.0 * hp.lambda3 * ub[i];
  }
  Vec cb = diff_apply(beta);
  Vec w(cb.size());
  for (std::size_t k = 0; k < cb.size(); ++k) {
    w[k] = v[k] + hp.mu2 * (cb[k] - q[k]);
  }
  const Vec ct = diff_apply_t(w, n);
  for (int i = 0; i < n; ++i) {
    g[i] += u[i] + hp.mu1 * (beta[i] - p[i]) + ct[i];
  }
  return g;
}

SolverState solve(const Matrix& X, const Vec& y, const Matrix& U,
                  const Hyperparams& hp, const Vec* beta0) {
  hp.validate();
  const int m = X.rows();
  const int n = X.cols();
  if (static_cast<int>(y.size()) != m) {
    throw DataError("solve: y length does not match sample count");
  }
  if (U.rows() != n || U.cols() != n) {
    throw DataError("solve: interaction matrix shape mismatch");
  }
  if (!all_finite(X) || !all_finite(y) || !all_finite(U)) {
    throw DataError("solve: non-finite input");
  }
  check_symmetric(U);
  if (beta0 && static_cast<int>(beta0->size()) != n) {
    throw DataError("solve: beta0 length mismatch");
  }

  const Vec Xty = matvec_t(X, y);
  const Matrix XtX = gram(X);

  const bool direct =
      hp.linear_solver == LinearSolverKind::Direct ||
      (hp.linear_solver == LinearSolverKind::Auto && n <= kDirectSolveMaxN);

  SolverState st;
  Hyperparams eff = hp;  // mu1 may grow if D is not positive definite
  std::optional<CholeskyFactor> factor;
  Matrix D;
  if (direct) {
    for (;;) {
      D = system_matrix(XtX, U, eff);
      factor = CholeskyFactor::try_compute(D);
      if (factor) break;
      if (st.mu1_shifts == kMaxMu1Shifts) {
        throw NumericError(
            "system matrix is not positive definite even after raising mu1 "
            "to " +
            std::to_string(eff.mu1) +
            "; increase mu1 or reduce lambda3");
      }
      eff.mu1 *= 2.0;
      ++st.mu1_shifts;
      st.notes.push_back("mu1 doubled to " + std::to_string(eff.mu1) +
                         " to keep the system matrix positive definite");
    }
  } else {
    D = system_matrix(XtX, U, eff);
  }
  st.mu1_effective = eff.mu1;
  const int cg_iters = eff.cg_max_iter > 0 ? eff.cg_max_iter : 10 * n;

  st.beta = beta0 ? *beta0 : Vec(n, 0.0);
  st.p = beta0 ? *beta0 : Vec(n, 0.0);
  st.q = beta0 ? diff_apply(*beta0) : Vec(n > 1 ? n - 1 : 0, 0.0);
  st.u.assign(n, 0.0);
  st.v.assign(n > 1 ? n - 1 : 0, 0.0);
  st.trace.reserve(std::min(hp.max_iter, 1024));

  Vec beta_prev = st.beta;
  for (int k = 1; k <= hp.max_iter; ++k) {
    const Vec rhs = beta_rhs(Xty, st.p, st.q, st.u, st.v, eff);
    st.beta = direct ? factor->solve(rhs)
                     : cg_solve(D, rhs, st.beta, eff.cg_tol, cg_iters).x;
    st.p = p_update(st.beta, st.u, eff.mu1, eff.lambda1);
    st.q = q_update(st.beta, st.v, eff.mu2, eff.lambda2);
    dual_update(st.u, st.v, st.beta, st.p, st.q, eff.delta1, eff.delta2);

    double rp = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = st.beta[i] - st.p[i];
      rp += r * r;
    }
    const Vec cb = diff_apply(st.beta);
    double rq = 0.0;
    for (std::size_t t = 0; t < cb.size(); ++t) {
      const double r = cb[t] - st.q[t];
      rq += r * r;
    }
    double db = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = st.beta[i] - beta_prev[i];
      db += r * r;
    }
    st.residual_p = std::sqrt(rp);
    st.residual_q = std::sqrt(rq);
    const double beta_change = std::sqrt(db);

    st.objective = objective_value(X, y, U, hp, st.beta);
    st.iterations = k;
    st.trace.push_back({k, st.objective, st.residual_p, st.residual_q});

    if (!std::isfinite(st.objective) || !all_finite(st.beta) ||
        !all_finite(st.u) || !all_finite(st.v)) {
      throw NumericError(
          "solver diverged at iteration " + std::to_string(k) +
          "; reduce delta1/delta2 or increase mu1/mu2");
    }

    const double scale = std::max(1.0, norm2(st.beta));
    if (std::max({st.residual_p, st.residual_q, beta_change}) <=
        hp.tol * scale) {
      st.converged = true;
      break;
    }
    beta_prev = st.beta;
  }
  return st;
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "iter,objective,residual_p,residual_q\n";
  char buf[40];
  for (const TraceRow& r : trace) {
    out << r.iter;
    for (double v : {r.objective, r.residual_p, r.residual_q}) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace infused
