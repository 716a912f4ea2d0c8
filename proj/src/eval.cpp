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
#include "infused/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "infused/errors.hpp"

namespace infused {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step on seed xor stream
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Dataset subset_rows(const Dataset& d, const std::vector<int>& idx) {
  Dataset out;
  out.X = Matrix(static_cast<int>(idx.size()), d.features());
  out.y.resize(idx.size());
  out.classes = d.classes;
  out.feature_names = d.feature_names;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (int j = 0; j < d.features(); ++j) out.X(static_cast<int>(r), j) = d.X(idx[r], j);
    out.y[r] = d.y[idx[r]];
  }
  return out;
}

Matrix take_columns(const Matrix& X, const std::vector<int>& cols) {
  Matrix out(X.rows(), static_cast<int>(cols.size()));
  for (int i = 0; i < X.rows(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, static_cast<int>(j)) = X(i, cols[j]);
  }
  return out;
}

}  // namespace

std::vector<int> nearest_centroid_classify(const Matrix& train_x,
                                           const std::vector<int>& train_y,
                                           int classes, const Matrix& test_x) {
  if (train_x.rows() != static_cast<int>(train_y.size())) {
    throw DataError("nearest_centroid: label count mismatch");
  }
  if (train_x.cols() != test_x.cols()) {
    throw DataError("nearest_centroid: feature count mismatch");
  }
  const int n = train_x.cols();
  Matrix centroid(classes, n);
  std::vector<int> count(classes, 0);
  for (int i = 0; i < train_x.rows(); ++i) {
    const int c = train_y[i] - 1;
    if (c < 0 || c >= classes) throw DataError("nearest_centroid: bad label");
    ++count[c];
    for (int j = 0; j < n; ++j) centroid(c, j) += train_x(i, j);
  }
  for (int c = 0; c < classes; ++c) {
    if (count[c] == 0) {
      throw DataError("training fold is missing class " +
                      std::to_string(c + 1));
    }
    for (int j = 0; j < n; ++j) centroid(c, j) /= count[c];
  }
  std::vector<int> pred(test_x.rows());
  for (int i = 0; i < test_x.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c) {
      double d = 0.0;
      for (int j = 0; j < n; ++j) {
        const double r = test_x(i, j) - centroid(c, j);
        d += r * r;
      }
      if (d < best_d) {  // strict: ties keep the smaller class index
        best_d = d;
        best = c;
      }
    }
    pred[i] = best + 1;
  }
  return pred;
}

std::vector<std::vector<int>> stratified_folds(const std::vector<int>& y,
                                               int folds,
                                               std::mt19937_64& rng) {
  const int m = static_cast<int>(y.size());
  if (folds < 2) throw DataError("need at least 2 folds");
  if (folds > m) {
    throw DataError("folds (" + std::to_string(folds) +
                    ") exceed sample count (" + std::to_string(m) + ")");
  }
  const int classes = *std::max_element(y.begin(), y.end());
  std::vector<std::vector<int>> by_class(classes);
  for (int i = 0; i < m; ++i) by_class[y[i] - 1].push_back(i);

  std::vector<std::vector<int>> fold(folds);
  int cursor = 0;  // carried across classes to balance fold sizes
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (int idx : members) {
      fold[cursor % folds].push_back(idx);
      ++cursor;
    }
  }
  return fold;
}

FoldResult evaluate_fold(const Dataset& d, const std::vector<int>& train_idx,
                         const std::vector<int>& test_idx,
                         const Hyperparams& hp, const std::vector<int>& ks,
                         const FitOptions& opts) {
  const Dataset train = subset_rows(d, train_idx);
  const Dataset test = subset_rows(d, test_idx);

  const Standardizer zs = Standardizer::fit(train.X);
  const Matrix train_std = zs.apply(train.X);
  const Matrix test_std = zs.apply(test.X);

  const SelectionResult sel = fit(train, hp, opts);

  FoldResult out;
  out.ranking = sel.ranking;
  out.accuracy_per_k.reserve(ks.size());
  for (int k : ks) {
    const TopK top = select_top_k(sel, k);
    const Matrix xtr = take_columns(train_std, top.indices);
    const Matrix xte = take_columns(test_std, top.indices);
    const std::vector<int> pred =
        nearest_centroid_classify(xtr, train.y, d.classes, xte);
    int hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      if (pred[i] == test.y[i]) ++hits;
    }
    out.accuracy_per_k.push_back(static_cast<double>(hits) / pred.size());
  }
  return out;
}

std::vector<CurveRow> cv_accuracy_curve(const Dataset& d,
                                        const Hyperparams& hp,
                                        const CvConfig& cv,
                                        const std::vector<int>& ks,
                                        const FitOptions& opts) {
  d.validate();
  hp.validate();
  if (cv.repeats < 1) throw DataError("repeats must be at least 1");
  if (ks.empty()) throw DataError("no subset sizes given");
  for (int k : ks) {
    if (k < 1 || k > d.features()) {
      throw DataError("subset size k = " + std::to_string(k) +
                      " out of range 1.." + std::to_string(d.features()));
    }
  }

  // all splits are derived serially so results do not depend on scheduling
  struct Split {
    std::vector<int> train, test;
  };
  std::vector<Split> splits;
  splits.reserve(static_cast<std::size_t>(cv.repeats) * cv.folds);
  for (int r = 0; r < cv.repeats; ++r) {
    std::mt19937_64 rng(mix_seed(cv.seed, static_cast<std::uint64_t>(r)));
    const auto folds = stratified_folds(d.y, cv.folds, rng);
    for (int f = 0; f < cv.folds; ++f) {
      Split s;
      s.test = folds[f];
      for (int g = 0; g < cv.folds; ++g) {
        if (g != f) {
          s.train.insert(s.train.end(), folds[g].begin(), folds[g].end());
        }
      }
      splits.push_back(std::move(s));
    }
  }

  const long total = static_cast<long>(splits.size());
  std::vector<std::vector<double>> acc(splits.size());
  std::vector<std::string> errors(splits.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < total; ++t) {
    try {
      acc[t] = evaluate_fold(d, splits[t].train, splits[t].test, hp, ks, opts)
                   .accuracy_per_k;
    } catch (const Error& e) {
      errors[t] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw DataError("cross-validation fold failed: " + e);
  }

  std::vector<CurveRow> rows;
  rows.reserve(ks.size());
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    double mean = 0.0;
    for (const auto& a : acc) mean += a[ki];
    mean /= static_cast<double>(acc.size());
    double var = 0.0;
    for (const auto& a : acc) {
      const double r = a[ki] - mean;
      var += r * r;
    }
    var = acc.size() > 1 ? var / static_cast<double>(acc.size() - 1) : 0.0;
    rows.push_back({ks[ki], mean, std::sqrt(var)});
  }
  return rows;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.samples < 2 || spec.features < 2 || spec.classes < 2) {
    throw DataError("synthetic spec needs samples, features and classes >= 2");
  }
  if (spec.samples < spec.classes) {
    throw DataError("fewer samples than classes");
  }
  if (spec.informative.empty()) {
    throw DataError("informative feature set must not be empty");
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw DataError("noise_sigma must be nonnegative and finite");
  }
  std::set<int> informative(spec.informative.begin(), spec.informative.end());
  for (int j : informative) {
    if (j < 0 || j >= spec.features) {
      throw DataError("informative index " + std::to_string(j) +
                      " out of range");
    }
  }

  SyntheticData out;
  out.informative.assign(informative.begin(), informative.end());
  Dataset& d = out.dataset;
  d.X = Matrix(spec.samples, spec.features);
  d.y.resize(spec.samples);
  d.classes = spec.classes;
  for (int i = 0; i < spec.samples; ++i) d.y[i] = i % spec.classes + 1;
  d.feature_names.reserve(spec.features);
  for (int j = 0; j < spec.features; ++j) {
    d.feature_names.push_back("f" + std::to_string(j + 1));
  }

  const double sep = spec.noise_sigma > 0.0 ? 2.0 * spec.noise_sigma : 1.0;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < spec.features; ++j) {
    const bool inf = informative.count(j) != 0;
    for (int i = 0; i < spec.samples; ++i) {
      const double noise = spec.noise_sigma * gauss(rng);
      d.X(i, j) = inf ? sep * (d.y[i] - 1) + noise : noise;
    }
  }
  d.validate();
  return out;
}

double recovery_score(const SelectionResult& r, const std::vector<int>& truth,
                      int k) {
  if (truth.empty()) throw DataError("recovery_score: empty truth set");
  if (k <= 0) k = static_cast<int>(truth.size());
  const TopK top = select_top_k(r, k);
  const std::set<int> truth_set(truth.begin(), truth.end());
  int hits = 0;
  for (int idx : top.indices) hits += truth_set.count(idx) != 0;
  return static_cast<double>(hits) / static_cast<double>(truth_set.size());
}

void write_curve_csv(const std::string& path,
                     const std::vector<CurveRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << "k,mean_acc,std_acc\n";
  char buf[40];
  for (const CurveRow& r : rows) {
    out << r.k;
    for (double v : {r.mean_accuracy, r.std_accuracy}) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace infused
