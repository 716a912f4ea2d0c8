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
#include "infused/feature_graph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "infused/dataset.hpp"
#include "infused/errors.hpp"

namespace infused {

Matrix distance_matrix(const Vec& f) {
  if (!all_finite(f)) throw DataError("distance_matrix: non-finite input");
  const int m = static_cast<int>(f.size());
  Matrix A(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const double d = std::abs(f[a] - f[b]);
      A(a, b) = d;
      A(b, a) = d;
    }
  }
  return A;
}

Matrix kernel_adjacency(const Matrix& A) {
  if (A.rows() != A.cols()) {
    throw DataError("kernel_adjacency: distance matrix not square");
  }
  const int m = A.rows();
  Vec sq(m);
  for (int a = 0; a < m; ++a) {
    const double* r = A.row(a);
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += r[k] * r[k];
    if (s == 0.0) {
      throw DataError(
          "degenerate feature: all pairwise distances are zero (constant "
          "feature)");
    }
    sq[a] = s;
  }
  Matrix K(m, m);
#pragma omp parallel for schedule(dynamic) \
    if (static_cast<long>(m) * m * m > 32768)
  for (int a = 0; a < m; ++a) {
    K(a, a) = 1.0;
    const double* ra = A.row(a);
    for (int b = a + 1; b < m; ++b) {
      const double* rb = A.row(b);
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += ra[k] * rb[k];
      const double v = std::min(1.0, s / std::sqrt(sq[a] * sq[b]));
      K(a, b) = v;
      K(b, a) = v;
    }
  }
  return K;
}

Vec graph_distribution(const Matrix& K) {
  if (K.rows() != K.cols()) {
    throw DataError("graph_distribution: kernel not square");
  }
  const int m = K.rows();
  Vec strength(m);
  for (int a = 0; a < m; ++a) {
    const double* r = K.row(a);
    double s = 0.0;
    for (int b = 0; b < m; ++b) {
      if (r[b] < 0.0) {
        throw DataError("graph_distribution: negative kernel entry");
      }
      s += r[b];
    }
    strength[a] = s;
  }
  double total = 0.0;
  for (double s : strength) total += s;
  if (!(total > 0.0)) {
    throw DataError("graph_distribution: kernel sums to zero");
  }
  Vec p(m);
  for (int a = 0; a < m; ++a) p[a] = strength[a] / total;
  return p;
}

FeatureGraph build_feature_graph(const Vec& f) {
  if (f.size() < 2) {
    throw DataError("feature graph needs at least 2 samples");
  }
  if (is_constant(f)) {
    throw DataError("degenerate feature: constant values have no graph");
  }
  FeatureGraph g;
  g.kernel = kernel_adjacency(distance_matrix(f));
  g.prob = graph_distribution(g.kernel);
  return g;
}

void write_graph_csv(const std::string& kernel_path,
                     const std::string& prob_path, const FeatureGraph& g) {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ofstream k(kernel_path);
  if (!k) throw DataError("cannot write file: " + kernel_path);
  const int m = g.size();
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) k << fmt(g.kernel(a, b)) << (b + 1 < m ? "," : "");
    k << '\n';
  }
  std::ofstream p(prob_path);
  if (!p) throw DataError("cannot write file: " + prob_path);
  for (int a = 0; a < m; ++a) p << fmt(g.prob[a]) << (a + 1 < m ? "," : "");
  p << '\n';
}

}  // namespace infused
