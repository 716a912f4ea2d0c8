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

#include "infused/linalg.hpp"

namespace infused {

// Complete weighted graph on the samples of one feature. `kernel` is the
// adjacency: symmetric, unit diagonal, entries in [0,1]. `prob` is the
// normalized vertex strength (row sums over total), a distribution on the
// M vertices.
struct FeatureGraph {
  Matrix kernel;
  Vec prob;

  int size() const { return static_cast<int>(prob.size()); }
  bool empty() const { return prob.empty(); }
};

/// Pairwise absolute differences |f_a - f_b| of the scalar samples.
Matrix distance_matrix(const Vec& f);

/// Cosine similarity of distance-embedding rows: entry (a,b) is
/// <A_a, A_b> / sqrt(<A_a,A_a><A_b,A_b>). Requires every row of A to be
/// nonzero (the feature must not be constant). Parallel over rows.
Matrix kernel_adjacency(const Matrix& A);

/// Normalized vertex strength: row sums of K divided by the total sum.
Vec graph_distribution(const Matrix& K);

/// distance_matrix -> kernel_adjacency -> graph_distribution.
/// Throws DataError for constant features.
FeatureGraph build_feature_graph(const Vec& f);

/// Debug dump: kernel as a dense CSV plus the distribution as one row.
void write_graph_csv(const std::string& kernel_path,
                     const std::string& prob_path, const FeatureGraph& g);

}  // namespace infused
