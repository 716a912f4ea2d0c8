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
#include <random>
#include <string>
#include <vector>

#include "infused/dataset.hpp"
#include "infused/selection.hpp"

namespace infused {

struct CvConfig {
  int folds = 10;
  int repeats = 10;
  std::uint64_t seed = 0;
};

struct CurveRow {
  int k = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
};

/// Assigns each test row to the class with the nearest training centroid
/// (Euclidean); ties go to the smaller class index. Throws DataError when
/// a class is absent from the training rows.
std::vector<int> nearest_centroid_classify(const Matrix& train_x,
                                           const std::vector<int>& train_y,
                                           int classes, const Matrix& test_x);

/// Seeded stratified fold assignment: per class, indices are shuffled and
/// dealt round-robin, so per-fold class counts differ from proportional by
/// at most one sample.
std::vector<std::vector<int>> stratified_folds(const std::vector<int>& y,
                                               int folds,
                                               std::mt19937_64& rng);

struct FoldResult {
  std::vector<double> accuracy_per_k;
  std::vector<int> ranking;  // selection computed on the training rows only
};

/// One train/test split: standardization statistics and the feature
/// selection are derived from the training rows alone, then applied to the
/// test rows.
FoldResult evaluate_fold(const Dataset& d, const std::vector<int>& train_idx,
                         const std::vector<int>& test_idx,
                         const Hyperparams& hp, const std::vector<int>& ks,
                         const FitOptions& opts = {});

/// Mean/std classification accuracy per subset size k, over folds x repeats,
/// merged in fixed (repeat, fold) order. Splits are computed serially up
/// front; fold evaluations run in parallel.
std::vector<CurveRow> cv_accuracy_curve(const Dataset& d,
                                        const Hyperparams& hp,
                                        const CvConfig& cv,
                                        const std::vector<int>& ks,
                                        const FitOptions& opts = {});

struct SyntheticSpec {
  int samples = 0;
  int features = 0;
  int classes = 2;
  std::vector<int> informative;  // 0-based feature indices
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  Dataset dataset;
  std::vector<int> informative;
};

/// Labels are dealt round-robin. Informative features get class-dependent
/// means spaced by 2 * noise_sigma (or 1 when noise_sigma is 0); the rest
/// are pure noise. Reproducible by seed.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Fraction of the planted features recovered in the top-k ranking;
/// k defaults to |truth|.
double recovery_score(const SelectionResult& r, const std::vector<int>& truth,
                      int k = 0);

void write_curve_csv(const std::string& path,
                     const std::vector<CurveRow>& rows);

}  // namespace infused
