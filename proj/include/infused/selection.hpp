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

#include "infused/dataset.hpp"
#include "infused/feature_graph.hpp"
#include "infused/solver.hpp"

namespace infused {

// Graphs for every usable feature plus the graphs of their class-mean
// targets. Degenerate features (constant values or constant class means)
// get no graph and carry no interaction score.
struct GraphSet {
  std::vector<FeatureGraph> graphs;
  std::vector<FeatureGraph> targets;
  std::vector<std::uint8_t> degenerate;
};

/// Builds feature and target graphs for a standardized dataset, in
/// parallel over features.
GraphSet build_graph_set(const Dataset& d);

/// interaction_matrix over a graph set.
Matrix compute_interaction(const GraphSet& gs);

struct FitOptions {
  // Reorder features by descending interaction diagonal before solving, so
  // the fused penalty acts on a relevance-sorted chain; indices are mapped
  // back afterwards.
  bool reorder_by_relevance = false;
};

struct SelectionResult {
  Vec beta_star;
  std::vector<int> selected;  // descending coefficient, only beta > 0
  std::vector<int> ranking;   // all features, descending beta, ties by index
  std::vector<TraceRow> trace;
  Hyperparams config;
  std::vector<std::uint8_t> degenerate;
  bool converged = false;
  int iterations = 0;
  int mu1_shifts = 0;
};

/// Full pipeline: standardize, build graphs, assemble the interaction
/// matrix, solve, rank. Deterministic for fixed inputs.
SelectionResult fit(const Dataset& d, const Hyperparams& hp,
                    const FitOptions& opts = {});

struct TopK {
  std::vector<int> indices;
  bool padded = false;  // k exceeded the number of positive coefficients
};

/// First k entries of the ranking; 1 <= k <= N.
TopK select_top_k(const SelectionResult& r, int k);

/// JSON document with the coefficients, ranking, selection, configuration
/// and the path of the trace CSV. Feature indices are written 1-based.
void write_result_json(const std::string& path, const SelectionResult& r,
                       const std::string& trace_path);

}  // namespace infused
