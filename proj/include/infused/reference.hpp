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

#include <cstdint>
#include <vector>

#include "infused/dataset.hpp"
#include "infused/feature_graph.hpp"
#include "infused/linalg.hpp"
#include "infused/selection.hpp"

namespace infused::reference {

// Serial counterparts of the OpenMP kernels. Per-element arithmetic is
// identical, so the parallel versions must match these bit for bit; tests
// assert exact equality and the benchmark compares runtimes.

Vec matvec(const Matrix& A, const Vec& x);
Vec matvec_t(const Matrix& A, const Vec& x);
Matrix gram(const Matrix& X);
Matrix kernel_adjacency(const Matrix& A);
Matrix interaction_matrix(const std::vector<FeatureGraph>& graphs,
                          const std::vector<FeatureGraph>& targets,
                          const std::vector<std::uint8_t>& degenerate);
GraphSet build_graph_set(const Dataset& d);

}  // namespace infused::reference
