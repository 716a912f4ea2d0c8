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

// Times the OpenMP kernels against their serial reference twins and checks
// that the results agree exactly. Build and run:
//   cmake --build build --target infused_bench && ./build/bench/infused_bench

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "infused/eval.hpp"
#include "infused/feature_graph.hpp"
#include "infused/linalg.hpp"
#include "infused/reference.hpp"
#include "infused/selection.hpp"
#include "infused/structural_info.hpp"

using namespace infused;

namespace {

double time_ms(const std::function<void()>& fn) {
  double best = 1e300;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
    }
  }
  return m;
}

void report(const std::string& name, double serial_ms, double parallel_ms,
            double diff) {
  std::printf("%-24s %10.2f ms %10.2f ms %8.2fx   max|diff| = %g\n",
              name.c_str(), serial_ms, parallel_ms, serial_ms / parallel_ms,
              diff);
}

}  // namespace

int main(int argc, char** argv) {
  int scale = 1;
  if (argc > 1) scale = std::max(1, std::atoi(argv[1]));

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled\n");
#endif
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;

  {
    const int m = 500 * scale;
    Vec f(m);
    for (double& v : f) v = gauss(rng);
    const Matrix A = distance_matrix(f);
    Matrix ks, kp;
    const double ts = time_ms([&] { ks = reference::kernel_adjacency(A); });
    const double tp = time_ms([&] { kp = kernel_adjacency(A); });
    report("kernel_adjacency", ts, tp, max_diff(ks, kp));
  }

  {
    const int m = 600 * scale, n = 400 * scale;
    Matrix X(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) X(i, j) = gauss(rng);
    }
    Matrix gs, gp;
    const double ts = time_ms([&] { gs = reference::gram(X); });
    const double tp = time_ms([&] { gp = gram(X); });
    report("gram", ts, tp, max_diff(gs, gp));
  }

  {
    SyntheticSpec spec;
    spec.samples = 100 * scale;
    spec.features = 60 * scale;
    spec.classes = 3;
    spec.informative = {0, 1, 2, 3, 4};
    spec.seed = 11;
    const Dataset d = standardize(generate_synthetic(spec).dataset);
    const GraphSet gs = reference::build_graph_set(d);
    Matrix us, up;
    const double ts = time_ms([&] {
      us = reference::interaction_matrix(gs.graphs, gs.targets, gs.degenerate);
    });
    const double tp = time_ms(
        [&] { up = interaction_matrix(gs.graphs, gs.targets, gs.degenerate); });
    report("interaction_matrix", ts, tp, max_diff(us, up));
  }

  {
    const int n = 1600 * scale;
    Matrix A(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    }
    Vec x(n);
    for (double& v : x) v = gauss(rng);
    Vec ys, yp;
    const double ts = time_ms([&] {
      for (int rep = 0; rep < 20; ++rep) ys = reference::matvec(A, x);
    });
    const double tp = time_ms([&] {
      for (int rep = 0; rep < 20; ++rep) yp = matvec(A, x);
    });
    double diff = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      diff = std::max(diff, std::abs(ys[i] - yp[i]));
    }
    report("matvec (x20)", ts, tp, diff);
  }

  return 0;
}
