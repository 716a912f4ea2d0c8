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
#include <doctest.h>

#include <cmath>
#include <random>

#include "infused/errors.hpp"
#include "infused/solver.hpp"
#include "oracles.hpp"

using namespace infused;

namespace {

Matrix random_matrix(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix x(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) x(i, j) = gauss(rng);
  }
  return x;
}

Vec random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec v(n);
  for (double& x : v) x = gauss(rng);
  return v;
}

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  Matrix u(n, n);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      u(i, j) = gauss(rng);
      u(j, i) = u(i, j);
    }
  }
  return u;
}

// columns orthonormalized by modified Gram-Schmidt
Matrix orthonormal_columns(int m, int n, std::mt19937_64& rng) {
  Matrix x = random_matrix(m, n, rng);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      double proj = 0.0;
      for (int i = 0; i < m; ++i) proj += x(i, j) * x(i, k);
      for (int i = 0; i < m; ++i) x(i, j) -= proj * x(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < m; ++i) nrm += x(i, j) * x(i, j);
    nrm = std::sqrt(nrm);
    for (int i = 0; i < m; ++i) x(i, j) /= nrm;
  }
  return x;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("soft thresholding shrinks toward zero") {
  CHECK(soft_threshold(0.5, 0.2) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(soft_threshold(-0.1, 0.2) == 0.0);
  CHECK(soft_threshold(-0.5, 0.2) == doctest::Approx(-0.3).epsilon(1e-15));
  const Vec w = {1.0, -2.0, 0.0, 0.15};
  CHECK(soft_threshold(w, 0.0) == w);
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  CHECK_NOTHROW(hp.validate());
  hp.lambda1 = -1.0;
  CHECK_THROWS_AS(hp.validate(), DataError);
  hp = Hyperparams{};
  hp.mu1 = 0.0;
  CHECK_THROWS_AS(hp.validate(), DataError);
  hp = Hyperparams{};
  hp.tol = 0.0;
  CHECK_THROWS_AS(hp.validate(), DataError);
  hp = Hyperparams{};
  hp.max_iter = 0;
  CHECK_THROWS_AS(hp.validate(), DataError);
}

TEST_CASE("beta step reduces to a diagonal solve for orthonormal designs") {
  // with lambda3 = 0 and mu2 = 0 the system is (1 + mu1) I
  std::mt19937_64 rng(31);
  const int m = 10, n = 4;
  const Matrix x = orthonormal_columns(m, n, rng);
  Hyperparams hp;
  hp.lambda3 = 0.0;
  hp.mu1 = 0.7;
  hp.mu2 = 0.0;  // boundary case allowed at this level, not in solve()

  const Matrix d = system_matrix(gram(x), Matrix(n, n), hp);
  const Vec xty = matvec_t(x, random_vec(m, rng));
  const Vec p = random_vec(n, rng);
  const Vec u = random_vec(n, rng);
  const Vec rhs = beta_rhs(xty, p, Vec(n - 1, 0.0), u, Vec(n - 1, 0.0), hp);
  const Vec beta = CholeskyFactor::compute(d).solve(rhs);
  for (int i = 0; i < n; ++i) {
    const double expected = (xty[i] + hp.mu1 * p[i] - u[i]) / (1.0 + hp.mu1);
    CHECK(beta[i] == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("direct and conjugate-gradient beta steps agree") {
  std::mt19937_64 rng(32);
  const int m = 9, n = 3;
  const Matrix x = random_matrix(m, n, rng);
  Hyperparams hp;
  hp.lambda3 = 0.05;
  const Matrix u_mat = random_symmetric(n, rng);
  const Matrix d = system_matrix(gram(x), u_mat, hp);
  const Vec rhs = random_vec(n, rng);

  const Vec direct = CholeskyFactor::compute(d).solve(rhs);
  const CgResult cg = cg_solve(d, rhs, Vec(), 1e-14, 100);
  for (int i = 0; i < n; ++i) {
    CHECK(direct[i] == doctest::Approx(cg.x[i]).epsilon(1e-8));
  }

  // residual postcondition, both paths
  for (const Vec& beta : {direct, cg.x}) {
    const Vec db = matvec(d, beta);
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      rnorm += (db[i] - rhs[i]) * (db[i] - rhs[i]);
      bnorm += rhs[i] * rhs[i];
    }
    CHECK(std::sqrt(rnorm) <= 1e-10 * std::sqrt(bnorm));
  }
}

TEST_CASE("p and q updates match their closed forms") {
  std::mt19937_64 rng(33);
  const int n = 5;
  const Vec beta = random_vec(n, rng);
  const Vec u = random_vec(n, rng);

  // no shrinkage at lambda = 0
  const Vec p0 = p_update(beta, u, 2.0, 0.0);
  for (int i = 0; i < n; ++i) {
    CHECK(p0[i] == doctest::Approx(beta[i] + u[i] / 2.0).epsilon(1e-15));
  }
  CHECK(p_update(Vec(n, 0.0), Vec(n, 0.0), 1.0, 0.7) == Vec(n, 0.0));

  // strictly decreasing coefficients, lambda2 = 0, v = 0: q = C beta
  const Vec dec = {3.0, 2.0, 0.5, -1.0};
  CHECK(q_update(dec, Vec(3, 0.0), 1.5, 0.0) == diff_apply(dec));
  // constant coefficients: zero differences
  CHECK(q_update(Vec(4, 2.5), Vec(3, 0.0), 1.0, 0.0) == Vec(3, 0.0));
}

TEST_CASE("p and q updates minimize their subproblems") {
  std::mt19937_64 rng(34);
  const int n = 5;
  for (int rep = 0; rep < 20; ++rep) {
    const Vec beta = random_vec(n, rng);
    const Vec u = random_vec(n, rng);
    const double mu1 = 0.5 + rep * 0.1;
    const double lam1 = 0.3;
    const Vec p = p_update(beta, u, mu1, lam1);
    for (int i = 0; i < n; ++i) {
      auto g = [&](double t) {
        return lam1 * std::abs(t) + u[i] * (beta[i] - t) +
               0.5 * mu1 * (beta[i] - t) * (beta[i] - t);
      };
      const double span = std::abs(beta[i]) + std::abs(u[i]) / mu1 + lam1 + 1.0;
      const double t_star = oracle::golden_min(g, -span, span);
      CHECK(p[i] == doctest::Approx(t_star).epsilon(1e-6));
    }
  }
}

TEST_CASE("dual updates follow the ascent formulas") {
  const Vec beta = {1.0, 2.0, 3.0};
  Vec u(3, 0.0), v(2, 0.0);

  // zero residuals leave the duals unchanged
  dual_update(u, v, beta, beta, diff_apply(beta), 1.0, 1.0);
  CHECK(u == Vec(3, 0.0));
  CHECK(v == Vec(2, 0.0));

  // zero steps leave the duals unchanged
  dual_update(u, v, beta, Vec(3, 0.0), Vec(2, 0.0), 0.0, 0.0);
  CHECK(u == Vec(3, 0.0));
  CHECK(v == Vec(2, 0.0));

  // one step from zero
  dual_update(u, v, beta, Vec(3, 0.0), Vec(2, 0.0), 0.5, 2.0);
  CHECK(u == Vec{0.5, 1.0, 1.5});
  const Vec cb = diff_apply(beta);
  CHECK(v == Vec{2.0 * cb[0], 2.0 * cb[1]});
}

TEST_CASE("objective value evaluates every term") {
  std::mt19937_64 rng(35);
  const int m = 8, n = 4;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  const Matrix u = random_symmetric(n, rng);
  Hyperparams hp;

  // all penalties off: half the residual sum of squares
  const Vec beta = random_vec(n, rng);
  const Vec xb = matvec(x, beta);
  double rss = 0.0;
  for (int i = 0; i < m; ++i) rss += (y[i] - xb[i]) * (y[i] - xb[i]);
  CHECK(objective_value(x, y, u, hp, beta) ==
        doctest::Approx(0.5 * rss).epsilon(1e-13));

  // beta = 0: only the data term survives
  CHECK(objective_value(x, y, u, hp, Vec(n, 0.0)) ==
        doctest::Approx(0.5 * dot(y, y)).epsilon(1e-13));

  // all terms, recomputed independently
  hp.lambda1 = 0.3;
  hp.lambda2 = 0.2;
  hp.lambda3 = 0.1;
  double l1 = 0.0;
  for (double b : beta) l1 += std::abs(b);
  double tv = 0.0;
  for (int k = 0; k + 1 < n; ++k) tv += std::abs(beta[k] - beta[k + 1]);
  double quad = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) quad += beta[i] * u(i, j) * beta[j];
  }
  CHECK(objective_value(x, y, u, hp, beta) ==
        doctest::Approx(0.5 * rss + 0.3 * l1 + 0.2 * tv - 0.1 * quad)
            .epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(36);
  const int m = 9, n = 5;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  const Matrix u = random_symmetric(n, rng);
  Hyperparams hp;
  hp.lambda3 = 0.2;
  hp.mu1 = 1.3;
  hp.mu2 = 0.8;

  for (int rep = 0; rep < 10; ++rep) {
    const Vec beta = random_vec(n, rng);
    const Vec p = random_vec(n, rng);
    const Vec q = random_vec(n - 1, rng);
    const Vec du = random_vec(n, rng);
    const Vec dv = random_vec(n - 1, rng);
    const Vec g = beta_subproblem_gradient(x, y, u, hp, beta, p, q, du, dv);
    for (int i = 0; i < n; ++i) {
      Vec lo = beta, hi = beta;
      const double h = 1e-6 * std::max(1.0, std::abs(beta[i]));
      lo[i] -= h;
      hi[i] += h;
      const double fd = (beta_subproblem_value(x, y, u, hp, hi, p, q, du, dv) -
                         beta_subproblem_value(x, y, u, hp, lo, p, q, du, dv)) /
                        (2.0 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("solve without penalties reaches the least-squares solution") {
  std::mt19937_64 rng(37);
  const int m = 20, n = 5;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  Hyperparams hp;
  hp.tol = 1e-10;

  const SolverState st = solve(x, y, Matrix(n, n), hp);
  CHECK(st.converged);

  oracle::MatD xtx(n, oracle::VecD(n, 0.0));
  oracle::VecD xty(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) xtx[i][j] += x(k, i) * x(k, j);
    }
    for (int k = 0; k < m; ++k) xty[i] += x(k, i) * y[k];
  }
  const auto ls = oracle::gauss_solve(xtx, xty);
  for (int i = 0; i < n; ++i) {
    CHECK(st.beta[i] == doctest::Approx(ls[i]).epsilon(1e-6));
  }
}

TEST_CASE("solve matches the closed-form lasso for orthonormal designs") {
  std::mt19937_64 rng(38);
  const int m = 24, n = 6;
  const Matrix x = orthonormal_columns(m, n, rng);
  const Vec y = random_vec(m, rng);
  const Vec xty = matvec_t(x, y);

  Hyperparams hp;
  hp.lambda1 = 0.4 * max_abs(xty);
  hp.tol = 1e-10;
  const SolverState st = solve(x, y, Matrix(n, n), hp);
  CHECK(st.converged);
  for (int i = 0; i < n; ++i) {
    CHECK(st.beta[i] ==
          doctest::Approx(soft_threshold(xty[i], hp.lambda1)).epsilon(1e-6));
  }
  // converged state satisfies the residual bound
  const double scale = std::max(1.0, norm2(st.beta));
  CHECK(st.residual_p <= hp.tol * scale);
  CHECK(st.residual_q <= hp.tol * scale);
}

TEST_CASE("the conjugate-gradient path agrees with the direct path") {
  std::mt19937_64 rng(44);
  const int m = 18, n = 6;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  Hyperparams hp;
  hp.lambda1 = 0.15;
  hp.lambda2 = 0.05;
  hp.tol = 1e-10;

  const SolverState direct = solve(x, y, Matrix(n, n), hp);
  hp.linear_solver = LinearSolverKind::ConjugateGradient;
  const SolverState cg = solve(x, y, Matrix(n, n), hp);
  CHECK(direct.converged);
  CHECK(cg.converged);
  for (int i = 0; i < n; ++i) {
    CHECK(cg.beta[i] == doctest::Approx(direct.beta[i]).epsilon(1e-8));
  }
}

TEST_CASE("zero data with zero start is an immediate fixed point") {
  std::mt19937_64 rng(39);
  const int m = 10, n = 4;
  const Matrix x = random_matrix(m, n, rng);
  Hyperparams hp;
  hp.lambda1 = 0.5;
  hp.lambda3 = 0.01;
  Matrix u(n, n);
  for (int i = 0; i < n; ++i) u(i, i) = 1.0;

  const SolverState st = solve(x, Vec(m, 0.0), u, hp);
  CHECK(st.converged);
  CHECK(st.iterations == 1);
  CHECK(max_abs(st.beta) == 0.0);
}

TEST_CASE("identical inputs give bit-identical traces") {
  std::mt19937_64 rng(40);
  const int m = 15, n = 6;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  const Matrix u = random_symmetric(n, rng);
  Hyperparams hp;
  hp.lambda1 = 0.2;
  hp.lambda2 = 0.1;
  hp.lambda3 = 0.01;

  const SolverState a = solve(x, y, u, hp);
  const SolverState b = solve(x, y, u, hp);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].objective == b.trace[k].objective);
    CHECK(a.trace[k].residual_p == b.trace[k].residual_p);
    CHECK(a.trace[k].residual_q == b.trace[k].residual_q);
  }
  CHECK(a.beta == b.beta);
}

TEST_CASE("oversized dual steps raise a divergence error") {
  std::mt19937_64 rng(41);
  const int m = 12, n = 4;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  Hyperparams hp;
  hp.lambda1 = 0.5;
  hp.delta1 = 1e8;  // far beyond the stable range
  hp.max_iter = 1000;
  CHECK_THROWS_WITH_AS(solve(x, y, Matrix(n, n), hp),
                       doctest::Contains("iteration"), NumericError);
}

TEST_CASE("indefinite systems trigger the mu1 safeguard") {
  std::mt19937_64 rng(42);
  const int m = 12, n = 4;
  const Matrix x = random_matrix(m, n, rng);
  const Vec y = random_vec(m, rng);
  Matrix u(n, n, 1.0);  // rank-one with eigenvalue n

  // moderate lambda3: a few shifts restore definiteness of the beta step
  // (the overall objective is unbounded here, so cap the iterations)
  Hyperparams hp;
  hp.lambda3 = 5.0;
  hp.max_iter = 5;
  const SolverState st = solve(x, y, u, hp);
  CHECK(st.mu1_shifts > 0);
  CHECK(st.mu1_effective > hp.mu1);
  CHECK(!st.notes.empty());
  CHECK(!st.converged);

  // hopeless lambda3: the safeguard gives up with a diagnostic
  hp.lambda3 = 1e6;
  CHECK_THROWS_WITH_AS(solve(x, y, u, hp), doctest::Contains("mu1"),
                       NumericError);
}

TEST_CASE("solve validates its inputs") {
  std::mt19937_64 rng(43);
  const Matrix x = random_matrix(6, 3, rng);
  const Vec y = random_vec(6, rng);
  Hyperparams hp;

  CHECK_THROWS_AS(solve(x, Vec(5, 0.0), Matrix(3, 3), hp), DataError);
  CHECK_THROWS_AS(solve(x, y, Matrix(2, 2), hp), DataError);
  Matrix asym(3, 3);
  asym(0, 1) = 1.0;  // not mirrored
  CHECK_THROWS_AS(solve(x, y, asym, hp), DataError);
  const Vec beta0(2, 0.0);
  CHECK_THROWS_AS(solve(x, y, Matrix(3, 3), hp, &beta0), DataError);
}

}  // TEST_SUITE
