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
#include "infused/reference.hpp"

#include <cmath>
#include <utility>

#include "infused/errors.hpp"
#include "infused/structural_info.hpp"

namespace infused::reference {

Vec matvec(const Matrix& A, const Vec& x) {
  const int m = A.rows(), n = A.cols();
  if (static_cast<int>(x.size()) != n) throw DataError("matvec: size mismatch");
  Vec y(m);
  for (int i = 0; i < m; ++i) {
    const double* r = A.row(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Vec matvec_t(const Matrix& A, const Vec& x) {
  const int m = A.rows(), n = A.cols();
  if (static_cast<int>(x.size()) != m) {
    throw DataError("matvec_t: size mismatch");
  }
  Vec y(n);
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

Matrix kernel_adjacency(const Matrix& A) {
  const int m = A.rows();
  if (A.cols() != m) throw DataError("kernel_adjacency: not square");
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

Matrix interaction_matrix(const std::vector<FeatureGraph>& graphs,
                          const std::vector<FeatureGraph>& targets,
                          const std::vector<std::uint8_t>& degenerate) {
  const int n = static_cast<int>(graphs.size());
  if (targets.size() != graphs.size()) {
    throw DataError("interaction_matrix: graphs/targets length mismatch");
  }
  auto is_degenerate = [&](int i) {
    return !degenerate.empty() && degenerate[i] != 0;
  };
  Matrix U(n, n);
  for (int i = 0; i < n; ++i) {
    if (is_degenerate(i)) continue;
    for (int j = i; j < n; ++j) {
      if (is_degenerate(j)) continue;
      const double value =
          (i == j)
              ? 2.0 * jsd_similarity({graphs[i].prob, targets[i].prob})
              : pair_relevance(graphs[i], graphs[j], targets[i], targets[j]);
      U(i, j) = value;
      U(j, i) = value;
    }
  }
  return U;
}

GraphSet build_graph_set(const Dataset& d) {
  d.validate();
  const int n = d.features();
  GraphSet gs;
  gs.graphs.resize(n);
  gs.targets.resize(n);
  gs.degenerate.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    const Vec col = d.X.column(j);
    const bool flagged = j < static_cast<int>(d.constant_features.size()) &&
                         d.constant_features[j] != 0;
    if (flagged || is_constant(col)) {
      gs.degenerate[j] = 1;
      continue;
    }
    const Vec target = class_mean_target(d, j);
    if (is_constant(target)) {
      gs.degenerate[j] = 1;
      continue;
    }
    FeatureGraph g;
    g.kernel = reference::kernel_adjacency(distance_matrix(col));
    g.prob = graph_distribution(g.kernel);
    gs.graphs[j] = std::move(g);
    FeatureGraph t;
    t.kernel = reference::kernel_adjacency(distance_matrix(target));
    t.prob = graph_distribution(t.kernel);
    gs.targets[j] = std::move(t);
  }
  return gs;
}

}  // namespace infused::reference
