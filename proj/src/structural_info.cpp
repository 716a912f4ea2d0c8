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
#include "infused/structural_info.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include "infused/errors.hpp"

namespace infused {

double shannon_entropy(const Vec& p) {
  if (p.empty()) throw DataError("entropy of an empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw DataError("negative probability entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DataError("distribution sums to " + std::to_string(sum) +
                    ", not 1");
  }
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double jsd(const std::vector<Vec>& dists) {
  const int n = static_cast<int>(dists.size());
  if (n < 2) throw DataError("jsd needs at least 2 distributions");
  const std::size_t m = dists[0].size();
  for (const Vec& d : dists) {
    if (d.size() != m) throw DataError("jsd: support size mismatch");
  }

  Vec entropies(n);
  for (int i = 0; i < n; ++i) entropies[i] = shannon_entropy(dists[i]);

  // mixture entry = mean of per-distribution values, summed sorted
  Vec mix(m);
  Vec buf(n);
  for (std::size_t a = 0; a < m; ++a) {
    for (int i = 0; i < n; ++i) buf[i] = dists[i][a];
    std::sort(buf.begin(), buf.end());
    double s = 0.0;
    for (double v : buf) s += v;
    mix[a] = s / n;
  }
  const double h_mix = shannon_entropy(mix);

  std::sort(entropies.begin(), entropies.end());
  double h_bar = 0.0;
  for (double h : entropies) h_bar += h;
  h_bar /= n;

  const double d = h_mix - h_bar;
  return d > 0.0 ? d : 0.0;
}

double jsd_similarity(const std::vector<Vec>& dists) {
  return std::exp(-jsd(dists));
}

double pair_relevance(const FeatureGraph& gi, const FeatureGraph& gj,
                      const FeatureGraph& ti, const FeatureGraph& tj) {
  const double num = jsd_similarity({gi.prob, gj.prob, ti.prob}) +
                     jsd_similarity({gi.prob, gj.prob, tj.prob});
  const double den = jsd_similarity({gi.prob, gj.prob});
  return num / den;
}

Matrix interaction_matrix(const std::vector<FeatureGraph>& graphs,
                          const std::vector<FeatureGraph>& targets,
                          const std::vector<std::uint8_t>& degenerate) {
  const int n = static_cast<int>(graphs.size());
  if (targets.size() != graphs.size()) {
    throw DataError("interaction_matrix: graphs/targets length mismatch");
  }
  if (!degenerate.empty() && static_cast<int>(degenerate.size()) != n) {
    throw DataError("interaction_matrix: mask length mismatch");
  }
  auto is_degenerate = [&](int i) {
    return !degenerate.empty() && degenerate[i] != 0;
  };

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    if (is_degenerate(i)) continue;
    // validates the distributions before entering the parallel region
    (void)shannon_entropy(graphs[i].prob);
    (void)shannon_entropy(targets[i].prob);
    for (int j = i; j < n; ++j) {
      if (!is_degenerate(j)) pairs.emplace_back(i, j);
    }
  }

  Matrix U(n, n);
  const auto total = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < total; ++t) {
    const int i = pairs[t].first;
    const int j = pairs[t].second;
    const double value =
        (i == j) ? 2.0 * jsd_similarity({graphs[i].prob, targets[i].prob})
                 : pair_relevance(graphs[i], graphs[j], targets[i], targets[j]);
    U(i, j) = value;
    U(j, i) = value;
  }
  return U;
}

void write_interaction_csv(const std::string& path, const Matrix& U,
                           const std::vector<std::string>& feature_names) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  const int n = U.rows();
  for (int j = 0; j < n; ++j) {
    out << (j < static_cast<int>(feature_names.size())
                ? feature_names[j]
                : "f" + std::to_string(j + 1))
        << (j + 1 < n ? "," : "");
  }
  out << '\n';
  char buf[40];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", U(i, j));
      out << buf << (j + 1 < n ? "," : "");
    }
    out << '\n';
  }
}

}  // namespace infused
