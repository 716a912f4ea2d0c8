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

#include "infused/linalg.hpp"

namespace infused {

// Tabular data with discrete class labels. Labels are contiguous
// integers 1..classes; feature indices are 0-based everywhere in the
// library (file formats use 1-based ids, see the CLI).
struct Dataset {
  Matrix X;                                // samples x features
  std::vector<int> y;                      // class labels, 1..classes
  int classes = 0;
  std::vector<std::string> feature_names;  // empty or one per feature
  std::vector<std::uint8_t> constant_features;  // set by standardize()
  bool standardized = false;

  int samples() const { return X.rows(); }
  int features() const { return X.cols(); }

  /// Checks the structural invariants (sizes, label coverage, finiteness);
  /// throws DataError on violation.
  void validate() const;
};

/// Loads a CSV file. `label_selector` is either a column name (requires a
/// header row) or a 0-based column index. Labels are re-encoded to 1..C by
/// order of first appearance.
Dataset load_csv(const std::string& path, const std::string& label_selector,
                 bool has_header);

void write_csv(const std::string& path, const Dataset& d,
               const std::string& label_name = "label");

// Column statistics fitted on one dataset and applicable to another, so
// cross-validation can carry train statistics onto test rows.
struct Standardizer {
  Vec mean;
  Vec scale;  // sample standard deviation (denominator M-1); 1 for constants
  std::vector<std::uint8_t> constant;

  static Standardizer fit(const Matrix& X);
  /// (x - mean) / scale per column; constant columns become all zero.
  Matrix apply(const Matrix& X) const;
};

/// Z-scores every column. Constant columns are zeroed and flagged rather
/// than rejected. Idempotent up to rounding.
Dataset standardize(const Dataset& d);

/// Vector whose entry a is the mean of feature values over all samples that
/// share sample a's class.
Vec class_mean_target(const Dataset& d, int feature_index);

/// True when max-min is negligible relative to the magnitude of v.
bool is_constant(const Vec& v);

}  // namespace infused
