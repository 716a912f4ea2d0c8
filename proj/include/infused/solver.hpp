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

#include <string>
#include <vector>

#include "infused/linalg.hpp"

namespace infused {

// Minimizes, over beta in R^N,
//
//   1/2 ||y - X beta||^2 + lambda1 ||beta||_1 + lambda2 ||C beta||_1
//     - lambda3 beta^T U beta
//
// where C takes first differences of successive coefficients and U is the
// symmetric feature-interaction matrix. The splitting p = beta, q = C beta
// turns this into an augmented-Lagrangian saddle-point problem solved by
// alternating a linear solve for beta, soft-thresholding for p and q, and
// gradient ascent on the duals u, v.

enum class LinearSolverKind {
  Auto,              // direct for N <= 2000, conjugate gradient above
  Direct,            // Cholesky, factored once and reused
  ConjugateGradient  // Jacobi-preconditioned, warm-started per iteration
};

struct Hyperparams {
  double lambda1 = 0.0;  // l1 weight on coefficients
  double lambda2 = 0.0;  // l1 weight on successive differences
  double lambda3 = 0.0;  // weight of the interaction reward
  double mu1 = 1.0;      // augmentation weight for p = beta
  double mu2 = 1.0;      // augmentation weight for q = C beta
  double delta1 = 1.0;   // dual ascent step for u
  double delta2 = 1.0;   // dual ascent step for v
  double tol = 1e-6;     // relative convergence tolerance
  int max_iter = 1000;
  LinearSolverKind linear_solver = LinearSolverKind::Auto;
  double cg_tol = 1e-12;
  int cg_max_iter = 0;  // 0 means 10 * N

  void validate() const;  // throws DataError
};

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double residual_p = 0.0;  // ||beta - p||
  double residual_q = 0.0;  // ||C beta - q||
};

struct SolverState {
  Vec beta;
  Vec p;
  Vec q;
  Vec u;  // dual for p = beta
  Vec v;  // dual for q = C beta
  int iterations = 0;
  double residual_p = 0.0;
  double residual_q = 0.0;
  double objective = 0.0;
  bool converged = false;
  int mu1_shifts = 0;        // positive-definiteness safeguard activations
  double mu1_effective = 0;  // mu1 actually used after safeguard shifts
  std::vector<TraceRow> trace;
  std::vector<std::string> notes;
};

double soft_threshold(double w, double lam);
Vec soft_threshold(const Vec& w, double lam);

/// D = X^T X - 2 lambda3 U + mu1 I + mu2 C^T C, constant across iterations.
Matrix system_matrix(const Matrix& XtX, const Matrix& U,
                     const Hyperparams& hp);

/// Right-hand side of the beta step: X^T y + mu1 p - u + C^T (mu2 q - v).
Vec beta_rhs(const Vec& Xty, const Vec& p, const Vec& q, const Vec& u,
             const Vec& v, const Hyperparams& hp);

/// Exact minimizer of the p subproblem: soft_threshold(beta + u/mu1, lambda1/mu1).
Vec p_update(const Vec& beta, const Vec& u, double mu1, double lambda1);

/// Exact minimizer of the q subproblem: soft_threshold(C beta + v/mu2, lambda2/mu2).
Vec q_update(const Vec& beta, const Vec& v, double mu2, double lambda2);

/// u += delta1 (beta - p); v += delta2 (C beta - q).
void dual_update(Vec& u, Vec& v, const Vec& beta, const Vec& p, const Vec& q,
                 double delta1, double delta2);

/// Value of the full objective at beta.
double objective_value(const Matrix& X, const Vec& y, const Matrix& U,
                       const Hyperparams& hp, const Vec& beta);

/// Smooth part of the augmented Lagrangian as a function of beta, with
/// p, q, u, v held fixed (the l1 terms in p and q are constants here).
double beta_subproblem_value(const Matrix& X, const Vec& y, const Matrix& U,
                             const Hyperparams& hp, const Vec& beta,
                             const Vec& p, const Vec& q, const Vec& u,
                             const Vec& v);

/// Gradient of beta_subproblem_value in beta.
Vec beta_subproblem_gradient(const Matrix& X, const Vec& y, const Matrix& U,
                             const Hyperparams& hp, const Vec& beta,
                             const Vec& p, const Vec& q, const Vec& u,
                             const Vec& v);

/// Runs the full iteration until the primal residuals and the change in
/// beta drop below tol * max(1, ||beta||), or max_iter is reached. Returns
/// the final state with a per-iteration trace. Throws NumericError on
/// divergence or an irreparably indefinite system matrix.
SolverState solve(const Matrix& X, const Vec& y, const Matrix& U,
                  const Hyperparams& hp, const Vec* beta0 = nullptr);

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRow>& trace);

}  // namespace infused
