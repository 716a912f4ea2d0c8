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
#include "infused/selection.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "infused/errors.hpp"
#include "infused/structural_info.hpp"

namespace infused {

namespace {

// Coefficients this close to zero count as zero for the selection rule;
// soft thresholding zeroes p exactly but beta only approaches it.
constexpr double kZeroTol = 1e-8;

}  // namespace

GraphSet build_graph_set(const Dataset& d) {
  d.validate();
  const int n = d.features();
  GraphSet gs;
  gs.graphs.resize(n);
  gs.targets.resize(n);
  gs.degenerate.assign(n, 0);

  std::vector<Vec> columns(n), target_vecs(n);
  for (int j = 0; j < n; ++j) {
    columns[j] = d.X.column(j);
    const bool flagged = j < static_cast<int>(d.constant_features.size()) &&
                         d.constant_features[j] != 0;
    if (flagged || is_constant(columns[j])) {
      gs.degenerate[j] = 1;
      continue;
    }
    target_vecs[j] = class_mean_target(d, j);
    if (is_constant(target_vecs[j])) gs.degenerate[j] = 1;
  }

#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n; ++j) {
    if (gs.degenerate[j]) continue;
    gs.graphs[j] = build_feature_graph(columns[j]);
    gs.targets[j] = build_feature_graph(target_vecs[j]);
  }
  return gs;
}

Matrix compute_interaction(const GraphSet& gs) {
  return interaction_matrix(gs.graphs, gs.targets, gs.degenerate);
}

SelectionResult fit(const Dataset& d, const Hyperparams& hp,
                    const FitOptions& opts) {
  d.validate();
  hp.validate();
  const Dataset sd = d.standardized ? d : standardize(d);
  const int n = sd.features();

  GraphSet gs = build_graph_set(sd);
  if (std::all_of(gs.degenerate.begin(), gs.degenerate.end(),
                  [](std::uint8_t b) { return b != 0; })) {
    throw DataError("no signal: every feature is constant");
  }
  const Matrix U = compute_interaction(gs);

  Vec y(sd.samples());
  for (int i = 0; i < sd.samples(); ++i) y[i] = static_cast<double>(sd.y[i]);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (opts.reorder_by_relevance) {
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (U(a, a) != U(b, b)) return U(a, a) > U(b, b);
      return a < b;
    });
  }

  Matrix Xs = sd.X;
  Matrix Us = U;
  if (opts.reorder_by_relevance) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < sd.samples(); ++i) Xs(i, j) = sd.X(i, order[j]);
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) Us(a, b) = U(order[a], order[b]);
    }
  }

  SolverState st = solve(Xs, y, Us, hp);

  SelectionResult res;
  res.beta_star.assign(n, 0.0);
  for (int j = 0; j < n; ++j) res.beta_star[order[j]] = st.beta[j];
  res.trace = std::move(st.trace);
  res.config = hp;
  res.degenerate = std::move(gs.degenerate);
  res.converged = st.converged;
  res.iterations = st.iterations;
  res.mu1_shifts = st.mu1_shifts;

  res.ranking.resize(n);
  std::iota(res.ranking.begin(), res.ranking.end(), 0);
  std::sort(res.ranking.begin(), res.ranking.end(), [&](int a, int b) {
    if (res.beta_star[a] != res.beta_star[b]) {
      return res.beta_star[a] > res.beta_star[b];
    }
    return a < b;
  });
  for (int idx : res.ranking) {
    if (res.beta_star[idx] > kZeroTol) {
      res.selected.push_back(idx);
    } else {
      break;
    }
  }
  return res;
}

TopK select_top_k(const SelectionResult& r, int k) {
  const int n = static_cast<int>(r.ranking.size());
  if (k < 1 || k > n) {
    throw DataError("k = " + std::to_string(k) + " out of range 1.." +
                    std::to_string(n));
  }
  TopK out;
  out.indices.assign(r.ranking.begin(), r.ranking.begin() + k);
  out.padded = k > static_cast<int>(r.selected.size());
  return out;
}

void write_result_json(const std::string& path, const SelectionResult& r,
                       const std::string& trace_path) {
  nlohmann::json j;
  j["beta_star"] = r.beta_star;
  auto to_one_based = [](const std::vector<int>& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] + 1;
    return out;
  };
  j["ranking"] = to_one_based(r.ranking);
  j["selected"] = to_one_based(r.selected);
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["mu1_shifts"] = r.mu1_shifts;
  j["config"] = {
      {"lambda1", r.config.lambda1}, {"lambda2", r.config.lambda2},
      {"lambda3", r.config.lambda3}, {"mu1", r.config.mu1},
      {"mu2", r.config.mu2},         {"delta1", r.config.delta1},
      {"delta2", r.config.delta2},   {"tol", r.config.tol},
      {"max_iter", r.config.max_iter}};
  j["trace"] = trace_path;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace infused
