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
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "infused/errors.hpp"
#include "infused/eval.hpp"

using namespace infused;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("nearest centroid classifies by distance with index ties") {
  Matrix train(4, 2);
  train(0, 0) = 0; train(0, 1) = 0;
  train(1, 0) = 0; train(1, 1) = 2;
  train(2, 0) = 10; train(2, 1) = 0;
  train(3, 0) = 10; train(3, 1) = 2;
  const std::vector<int> y = {1, 1, 2, 2};

  Matrix test(3, 2);
  test(0, 0) = 0; test(0, 1) = 1;    // exactly centroid 1
  test(1, 0) = 2; test(1, 1) = 1;    // nearest to centroid 1
  test(2, 0) = 5; test(2, 1) = 1;    // equidistant: lower class wins
  const auto pred = nearest_centroid_classify(train, y, 2, test);
  CHECK(pred == std::vector<int>{1, 1, 1});
}

TEST_CASE("nearest centroid needs every class in training") {
  Matrix train(2, 2);
  train(0, 0) = 1;
  train(1, 0) = 2;
  const std::vector<int> y = {1, 1};
  CHECK_THROWS_WITH_AS(nearest_centroid_classify(train, y, 2, train),
                       doctest::Contains("missing class"), DataError);
}

TEST_CASE("stratified folds balance classes within one sample") {
  std::mt19937_64 rng(61);
  std::vector<int> y(47);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 3 + 1;
  const int folds = 5;
  const auto assignment = stratified_folds(y, folds, rng);
  REQUIRE(assignment.size() == std::size_t(folds));

  std::vector<int> total_class(3, 0);
  for (int v : y) ++total_class[v - 1];
  std::vector<int> seen(y.size(), 0);
  for (int f = 0; f < folds; ++f) {
    std::vector<int> count(3, 0);
    for (int idx : assignment[f]) {
      ++count[y[idx] - 1];
      ++seen[idx];
    }
    for (int c = 0; c < 3; ++c) {
      const double proportional = double(total_class[c]) / folds;
      CHECK(std::abs(count[c] - proportional) <= 1.0);
    }
  }
  // a partition: every index appears exactly once
  CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
}

TEST_CASE("stratified folds validate their inputs") {
  std::mt19937_64 rng(62);
  std::vector<int> y = {1, 2, 1, 2};
  CHECK_THROWS_AS(stratified_folds(y, 1, rng), DataError);
  CHECK_THROWS_AS(stratified_folds(y, 5, rng), DataError);
}

TEST_CASE("fold evaluation depends only on training rows") {
  SyntheticSpec spec;
  spec.samples = 40;
  spec.features = 6;
  spec.classes = 2;
  spec.informative = {0, 1};
  spec.seed = 63;
  Dataset d = generate_synthetic(spec).dataset;

  std::vector<int> train_idx, test_idx;
  for (int i = 0; i < 40; ++i) (i % 4 == 0 ? test_idx : train_idx).push_back(i);

  Hyperparams hp;
  hp.lambda1 = 0.05;
  const FoldResult base = evaluate_fold(d, train_idx, test_idx, hp, {1, 2});

  // corrupt the test rows; selection must not move
  Dataset poisoned = d;
  for (int idx : test_idx) {
    for (int j = 0; j < d.features(); ++j) poisoned.X(idx, j) = 1e6 + idx + j;
  }
  const FoldResult after = evaluate_fold(poisoned, train_idx, test_idx, hp,
                                         {1, 2});
  CHECK(after.ranking == base.ranking);
}

TEST_CASE("labels driven by one feature give perfect accuracy at k = 1") {
  std::mt19937_64 rng(64);
  std::normal_distribution<double> gauss;
  Dataset d;
  const int m = 40;
  d.X = Matrix(m, 4);
  d.y.resize(m);
  d.classes = 2;
  for (int i = 0; i < m; ++i) {
    d.y[i] = i % 2 + 1;
    d.X(i, 0) = d.y[i] * 10.0 + 0.01 * gauss(rng);  // separable signal
    for (int j = 1; j < 4; ++j) d.X(i, j) = gauss(rng);
  }
  CvConfig cv;
  cv.folds = 5;
  cv.repeats = 2;
  cv.seed = 7;
  Hyperparams hp;
  hp.lambda1 = 0.05;
  const auto rows = cv_accuracy_curve(d, hp, cv, {1});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].k == 1);
  CHECK(rows[0].mean_accuracy == doctest::Approx(1.0));
  CHECK(rows[0].std_accuracy == doctest::Approx(0.0));
}

TEST_CASE("using every feature matches the plain classifier") {
  SyntheticSpec spec;
  spec.samples = 30;
  spec.features = 5;
  spec.classes = 3;
  spec.informative = {0, 1, 2};
  spec.seed = 65;
  const Dataset d = generate_synthetic(spec).dataset;

  std::vector<int> train_idx, test_idx;
  for (int i = 0; i < 30; ++i) (i % 5 == 0 ? test_idx : train_idx).push_back(i);

  const FoldResult fold =
      evaluate_fold(d, train_idx, test_idx, Hyperparams{}, {5});

  // with k = N the selection step is the identity: recompute the plain
  // standardize-then-centroid pipeline by hand
  Matrix train_x(static_cast<int>(train_idx.size()), 5);
  Matrix test_x(static_cast<int>(test_idx.size()), 5);
  std::vector<int> train_y, test_y;
  for (std::size_t r = 0; r < train_idx.size(); ++r) {
    for (int j = 0; j < 5; ++j) train_x(static_cast<int>(r), j) = d.X(train_idx[r], j);
    train_y.push_back(d.y[train_idx[r]]);
  }
  for (std::size_t r = 0; r < test_idx.size(); ++r) {
    for (int j = 0; j < 5; ++j) test_x(static_cast<int>(r), j) = d.X(test_idx[r], j);
    test_y.push_back(d.y[test_idx[r]]);
  }
  const Standardizer z = Standardizer::fit(train_x);
  const auto pred =
      nearest_centroid_classify(z.apply(train_x), train_y, 3, z.apply(test_x));
  int hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == test_y[i];
  const double expected = double(hits) / double(pred.size());
  CHECK(fold.accuracy_per_k[0] == doctest::Approx(expected));
}

TEST_CASE("permuted labels score at chance level") {
  SyntheticSpec spec;
  spec.samples = 60;
  spec.features = 6;
  spec.classes = 3;
  spec.informative = {0, 1};
  spec.seed = 66;
  Dataset d = generate_synthetic(spec).dataset;
  std::mt19937_64 rng(67);
  std::shuffle(d.y.begin(), d.y.end(), rng);

  CvConfig cv;
  cv.folds = 5;
  cv.repeats = 2;
  cv.seed = 11;
  Hyperparams hp;
  hp.lambda1 = 0.05;
  const auto rows = cv_accuracy_curve(d, hp, cv, {2});
  const double p = 1.0 / 3.0;
  const double total = 60.0 * 2.0;
  const double sigma = std::sqrt(p * (1 - p) / total);
  CHECK(std::abs(rows[0].mean_accuracy - p) <= 3.0 * sigma);
}

TEST_CASE("curve output is byte-identical under a fixed seed") {
  SyntheticSpec spec;
  spec.samples = 24;
  spec.features = 4;
  spec.classes = 2;
  spec.informative = {0};
  spec.seed = 68;
  const Dataset d = generate_synthetic(spec).dataset;
  CvConfig cv;
  cv.folds = 4;
  cv.repeats = 2;
  cv.seed = 5;
  Hyperparams hp;
  hp.lambda1 = 0.02;

  const auto rows = cv_accuracy_curve(d, hp, cv, {1, 2, 4});
  REQUIRE(rows.size() == 3);
  write_curve_csv("tmp_curve_a.csv", rows);
  write_curve_csv("tmp_curve_b.csv", cv_accuracy_curve(d, hp, cv, {1, 2, 4}));
  CHECK(read_file("tmp_curve_a.csv") == read_file("tmp_curve_b.csv"));
  std::remove("tmp_curve_a.csv");
  std::remove("tmp_curve_b.csv");
}

TEST_CASE("curve validation errors") {
  SyntheticSpec spec;
  spec.samples = 10;
  spec.features = 3;
  spec.classes = 2;
  spec.informative = {0};
  const Dataset d = generate_synthetic(spec).dataset;
  CvConfig cv;
  cv.folds = 12;  // more folds than samples
  CHECK_THROWS_AS(cv_accuracy_curve(d, Hyperparams{}, cv, {1}), DataError);
  cv.folds = 3;
  CHECK_THROWS_AS(cv_accuracy_curve(d, Hyperparams{}, cv, {4}), DataError);
  CHECK_THROWS_AS(cv_accuracy_curve(d, Hyperparams{}, cv, {}), DataError);
}

TEST_CASE("synthetic data is reproducible and class-separated") {
  SyntheticSpec spec;
  spec.samples = 90;
  spec.features = 8;
  spec.classes = 3;
  spec.informative = {1, 4};
  spec.noise_sigma = 0.5;
  spec.seed = 69;

  const SyntheticData a = generate_synthetic(spec);
  const SyntheticData b = generate_synthetic(spec);
  CHECK(a.dataset.X == b.dataset.X);
  CHECK(a.dataset.y == b.dataset.y);
  CHECK(a.informative == std::vector<int>{1, 4});

  // class-conditional means: far apart for informative features,
  // near zero for noise features
  const double sep = 2.0 * spec.noise_sigma;
  for (int j = 0; j < spec.features; ++j) {
    Vec mean(spec.classes, 0.0);
    std::vector<int> count(spec.classes, 0);
    for (int i = 0; i < spec.samples; ++i) {
      mean[a.dataset.y[i] - 1] += a.dataset.X(i, j);
      ++count[a.dataset.y[i] - 1];
    }
    for (int c = 0; c < spec.classes; ++c) mean[c] /= count[c];
    const bool informative = j == 1 || j == 4;
    for (int c = 0; c + 1 < spec.classes; ++c) {
      const double gap = mean[c + 1] - mean[c];
      const double tol =
          3.0 * spec.noise_sigma / std::sqrt(double(count[c]));
      if (informative) {
        CHECK(std::abs(gap - sep) <= 3.0 * tol);
      } else {
        CHECK(std::abs(gap) <= 3.0 * tol);
      }
    }
  }
}

TEST_CASE("zero noise gives exact class means") {
  SyntheticSpec spec;
  spec.samples = 12;
  spec.features = 3;
  spec.classes = 2;
  spec.informative = {0, 2};
  spec.noise_sigma = 0.0;
  const SyntheticData s = generate_synthetic(spec);
  for (int i = 0; i < 12; ++i) {
    CHECK(s.dataset.X(i, 0) == double(s.dataset.y[i] - 1));
    CHECK(s.dataset.X(i, 1) == 0.0);
    CHECK(s.dataset.X(i, 2) == double(s.dataset.y[i] - 1));
  }
}

TEST_CASE("synthetic spec validation") {
  SyntheticSpec spec;
  spec.samples = 10;
  spec.features = 4;
  spec.classes = 2;
  CHECK_THROWS_AS(generate_synthetic(spec), DataError);  // empty informative
  spec.informative = {4};
  CHECK_THROWS_AS(generate_synthetic(spec), DataError);  // out of range
  spec.informative = {0};
  spec.noise_sigma = -1.0;
  CHECK_THROWS_AS(generate_synthetic(spec), DataError);
}

TEST_CASE("recovery score counts planted features in the prefix") {
  SelectionResult r;
  r.ranking = {3, 0, 2, 1, 4};
  r.beta_star = {0.5, 0.0, 0.2, 0.9, 0.0};
  r.selected = {3, 0, 2};

  CHECK(recovery_score(r, {3, 0}) == 1.0);
  CHECK(recovery_score(r, {1, 4}) == 0.0);
  CHECK(recovery_score(r, {3, 4}) == 0.5);  // half the truth in the prefix
  CHECK(recovery_score(r, {1}, 5) == 1.0);  // explicit larger k
  CHECK_THROWS_AS(recovery_score(r, {}), DataError);
}

}  // TEST_SUITE
