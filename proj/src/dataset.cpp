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
#include "infused/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "infused/errors.hpp"

namespace infused {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects leading +
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

bool parse_int(const std::string& s, int& out) {
  const char* first = s.data();
  const char* last = first + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void Dataset::validate() const {
  if (samples() < 2) throw DataError("dataset needs at least 2 samples");
  if (features() < 2) throw DataError("dataset needs at least 2 features");
  if (classes < 2) throw DataError("dataset needs at least 2 classes");
  if (static_cast<int>(y.size()) != samples()) {
    throw DataError("label vector length does not match sample count");
  }
  std::vector<int> seen(classes, 0);
  for (int label : y) {
    if (label < 1 || label > classes) {
      throw DataError("label " + std::to_string(label) +
                      " outside 1.." + std::to_string(classes));
    }
    ++seen[label - 1];
  }
  for (int c = 0; c < classes; ++c) {
    if (seen[c] == 0) {
      throw DataError("class " + std::to_string(c + 1) +
                      " has no samples");
    }
  }
  if (!all_finite(X)) throw DataError("dataset contains non-finite values");
}

Dataset load_csv(const std::string& path, const std::string& label_selector,
                 bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_line(line));
  }
  if (rows.empty()) throw DataError("empty input file: " + path);

  std::vector<std::string> header;
  if (has_header) {
    header = rows.front();
    rows.erase(rows.begin());
  }
  if (rows.size() < 2) {
    throw DataError("fewer than 2 samples in " + path);
  }
  const int cols = static_cast<int>(rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) {
      throw DataError("row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows[r].size()) + " cells, expected " +
                      std::to_string(cols));
    }
  }

  int label_col = -1;
  if (int idx; parse_int(label_selector, idx)) {
    if (idx < 0 || idx >= cols) {
      throw DataError("label column index " + std::to_string(idx) +
                      " out of range for " + std::to_string(cols) +
                      " columns");
    }
    label_col = idx;
  } else {
    if (!has_header) {
      throw DataError(
          "label column '" + label_selector +
          "' given by name but the file has no header row (use an index)");
    }
    for (int j = 0; j < cols; ++j) {
      if (header[j] == label_selector) {
        label_col = j;
        break;
      }
    }
    if (label_col < 0) {
      throw DataError("label column '" + label_selector + "' not found");
    }
  }
  if (cols - 1 < 2) {
    throw DataError("at least 2 feature columns required, got " +
                    std::to_string(cols - 1));
  }

  const int m = static_cast<int>(rows.size());
  const int n = cols - 1;
  Dataset d;
  d.X = Matrix(m, n);
  d.y.resize(m);
  d.feature_names.reserve(n);
  for (int j = 0; j < cols; ++j) {
    if (j == label_col) continue;
    d.feature_names.push_back(has_header ? header[j]
                                         : "f" + std::to_string(j + 1));
  }

  std::map<std::string, int> label_codes;  // first-appearance encoding
  std::vector<std::string> label_order;
  for (int r = 0; r < m; ++r) {
    int jj = 0;
    for (int j = 0; j < cols; ++j) {
      if (j == label_col) {
        const std::string& cell = rows[r][j];
        auto it = label_codes.find(cell);
        if (it == label_codes.end()) {
          it = label_codes.emplace(cell, static_cast<int>(label_order.size()) + 1)
                   .first;
          label_order.push_back(cell);
        }
        d.y[r] = it->second;
        continue;
      }
      double v = 0.0;
      const std::string where = "row " + std::to_string(r + 1) + ", column " +
                                std::to_string(j + 1) + " ('" +
                                (has_header ? header[j]
                                            : "f" + std::to_string(j + 1)) +
                                "')";
      if (!parse_double(rows[r][j], v)) {
        throw DataError("non-numeric value '" + rows[r][j] + "' at " + where);
      }
      if (!std::isfinite(v)) {
        throw DataError("non-finite value '" + rows[r][j] + "' at " + where);
      }
      d.X(r, jj++) = v;
    }
  }
  d.classes = static_cast<int>(label_order.size());
  if (d.classes < 2) {
    throw DataError("single-class label column: every row has label '" +
                    label_order.front() + "'");
  }
  d.validate();
  return d;
}

void write_csv(const std::string& path, const Dataset& d,
               const std::string& label_name) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (int j = 0; j < d.features(); ++j) {
    out << (j < static_cast<int>(d.feature_names.size())
                ? d.feature_names[j]
                : "f" + std::to_string(j + 1))
        << ',';
  }
  out << label_name << '\n';
  for (int i = 0; i < d.samples(); ++i) {
    for (int j = 0; j < d.features(); ++j) out << format_double(d.X(i, j)) << ',';
    out << d.y[i] << '\n';
  }
}

bool is_constant(const Vec& v) {
  if (v.empty()) return true;
  double lo = v[0], hi = v[0], amax = std::abs(v[0]);
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    amax = std::max(amax, std::abs(x));
  }
  return hi - lo <= 1e-12 * std::max(1.0, amax);
}

Standardizer Standardizer::fit(const Matrix& X) {
  const int m = X.rows(), n = X.cols();
  if (m < 2) throw DataError("standardize needs at least 2 samples");
  Standardizer s;
  s.mean.resize(n);
  s.scale.resize(n);
  s.constant.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    double mu = 0.0, amax = 0.0;
    for (int i = 0; i < m; ++i) {
      mu += X(i, j);
      amax = std::max(amax, std::abs(X(i, j)));
    }
    mu /= m;
    double ss = 0.0;
    for (int i = 0; i < m; ++i) {
      const double c = X(i, j) - mu;
      ss += c * c;
    }
    const double sd = std::sqrt(ss / (m - 1));
    s.mean[j] = mu;
    if (sd <= 1e-12 * std::max(1.0, amax)) {
      s.constant[j] = 1;
      s.scale[j] = 1.0;
    } else {
      s.scale[j] = sd;
    }
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  const int m = X.rows(), n = X.cols();
  if (static_cast<int>(mean.size()) != n) {
    throw DataError("standardizer fitted on a different feature count");
  }
  Matrix out(m, n);
  for (int j = 0; j < n; ++j) {
    if (constant[j]) continue;  // leave the column at zero
    for (int i = 0; i < m; ++i) out(i, j) = (X(i, j) - mean[j]) / scale[j];
  }
  return out;
}

Dataset standardize(const Dataset& d) {
  Standardizer s = Standardizer::fit(d.X);
  Dataset out = d;
  out.X = s.apply(d.X);
  out.constant_features = s.constant;
  out.standardized = true;
  return out;
}

Vec class_mean_target(const Dataset& d, int feature_index) {
  if (feature_index < 0 || feature_index >= d.features()) {
    throw DataError("feature index " + std::to_string(feature_index) +
                    " out of range");
  }
  Vec sum(d.classes, 0.0);
  std::vector<int> count(d.classes, 0);
  for (int i = 0; i < d.samples(); ++i) {
    sum[d.y[i] - 1] += d.X(i, feature_index);
    ++count[d.y[i] - 1];
  }
  for (int c = 0; c < d.classes; ++c) {
    if (count[c] == 0) {
      throw DataError("class " + std::to_string(c + 1) + " has no samples");
    }
    sum[c] /= count[c];
  }
  Vec target(d.samples());
  for (int i = 0; i < d.samples(); ++i) target[i] = sum[d.y[i] - 1];
  return target;
}

}  // namespace infused
