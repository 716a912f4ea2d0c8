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
#include <string>
#include <vector>

#include "infused/feature_graph.hpp"
#include "infused/linalg.hpp"

namespace infused {

/// Shannon entropy in nats, -sum p log p with 0 log 0 = 0. Throws DataError
/// when the input is not a probability vector (negative entry, or sum off 1
/// by more than 1e-9).
double shannon_entropy(const Vec& p);

/// Jensen-Shannon divergence of n >= 2 equally weighted distributions on a
/// shared support: entropy of the mixture minus the mean entropy. Sums are
/// accumulated in sorted order so the result is independent of the argument
/// order, bit for bit. Clamped at 0 against rounding. Range [0, log n].
double jsd(const std::vector<Vec>& dists);

/// exp(-jsd), a similarity in (0, 1]; 1 iff all distributions coincide.
double jsd_similarity(const std::vector<Vec>& dists);

/// Joint relevance of a feature pair against the class structure:
/// [sim(Pi,Pj,Ti) + sim(Pi,Pj,Tj)] / sim(Pi,Pj). Large when the pair is
/// jointly close to its targets and the two features are not redundant.
double pair_relevance(const FeatureGraph& gi, const FeatureGraph& gj,
                      const FeatureGraph& ti, const FeatureGraph& tj);

/// N x N symmetric matrix of pair_relevance scores. Diagonal entries
/// collapse the duplicated graph: U_ii = 2 sim(Pi, Ti). Rows and columns of
/// degenerate (constant) features are zero. Parallel over pairs; each
/// unordered pair is computed once and mirrored, so the result is symmetric
/// to the last bit.
Matrix interaction_matrix(const std::vector<FeatureGraph>& graphs,
                          const std::vector<FeatureGraph>& targets,
                          const std::vector<std::uint8_t>& degenerate);

void write_interaction_csv(const std::string& path, const Matrix& U,
                           const std::vector<std::string>& feature_names);

}  // namespace infused
