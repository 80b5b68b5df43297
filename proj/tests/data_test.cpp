// Copyright 2026 The dpbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dpbayes/data.hpp"

using namespace dpbayes;

TEST_CASE("csv: minimal file, header, label mapping") {
  std::istringstream in("1,0,+1\n0,1,-1\n");
  const Dataset d = load_csv_stream(in, -1, false);
  CHECK(d.size() == 2);
  CHECK(d.feature_dim() == 2);
  CHECK(*d.points[0].label == 1.0);
  CHECK(*d.points[1].label == -1.0);

  std::istringstream with_header("a,b,y\n1,0,1\n0,1,0\n2,2,1\n");
  const Dataset h = load_csv_stream(with_header, -1, true);
  CHECK(h.size() == 3);
  CHECK(*h.points[1].label == -1.0);  // smaller raw value maps to -1
  CHECK(*h.points[2].label == 1.0);

  std::istringstream first_col("1,0.5,0.25\n-1,0.1,0.2\n");
  const Dataset f = load_csv_stream(first_col, 0, false);
  CHECK(f.feature_dim() == 2);
  CHECK(f.points[0].features[0] == 0.5);
}

TEST_CASE("csv: malformed rows and bad labels carry line numbers") {
  std::istringstream bad("1,0,1\n1,oops,1\n");
  CHECK_THROWS_WITH_AS(load_csv_stream(bad, -1, false, "f.csv"),
                       doctest::Contains("f.csv:2"), ConfigError);
  std::istringstream ragged("1,0,1\n1,1\n");
  CHECK_THROWS_AS(load_csv_stream(ragged, -1, false), ConfigError);
  std::istringstream three_labels("0,0,0\n1,1,1\n2,2,2\n");
  CHECK_THROWS_WITH_AS(load_csv_stream(three_labels, -1, false, "g.csv"),
                       doctest::Contains("not binary"), ConfigError);
}

TEST_CASE("libsvm: sparse expansion") {
  std::istringstream in("+1 1:0.5 3:1.0\n-1\n+1 2:2.0\n");
  const Dataset d = load_libsvm_stream(in);
  CHECK(d.size() == 3);
  CHECK(d.feature_dim() == 3);
  CHECK(d.points[0].features[0] == 0.5);
  CHECK(d.points[0].features[1] == 0.0);
  CHECK(d.points[0].features[2] == 1.0);
  CHECK(d.points[1].features.norm() == 0.0);  // empty feature list
  CHECK(d.points[2].features[1] == 2.0);

  std::istringstream nonmono("+1 3:1.0 2:0.5\n");
  CHECK_THROWS_WITH_AS(load_libsvm_stream(nonmono, "h.svm"),
                       doctest::Contains("non-monotone"), ConfigError);
}

TEST_CASE("round-trip: save then load preserves values to full precision") {
  Rng rng = make_rng(77);
  Dataset d;
  for (int i = 0; i < 25; ++i) {
    DataPoint p;
    p.features = rand_normal_vec(rng, 4);
    p.label = i % 2 ? 1.0 : -1.0;
    d.points.push_back(p);
  }
  std::ostringstream out;
  save_csv(d, out);
  std::istringstream in(out.str());
  const Dataset back = load_csv_stream(in, -1, false);
  REQUIRE(back.size() == d.size());
  for (std::int64_t i = 0; i < d.size(); ++i) {
    CHECK(back.points[i].features == d.points[i].features);
    CHECK(*back.points[i].label == *d.points[i].label);
  }
}

TEST_CASE("two normals generator") {
  const Dataset a = make_two_normals(2000, 2, 4.0, 9);
  const Dataset b = make_two_normals(2000, 2, 4.0, 9);
  REQUIRE(a.size() == 2000);
  for (std::int64_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i].features == b.points[i].features);  // bit-exact
    CHECK(a.points[i].features.norm() <= 1.0 + 1e-12);
  }
  CHECK(*a.points[0].label == 1.0);
  CHECK(*a.points[1999].label == -1.0);

  // Clipping preserves sign(theta.x), so the Bayes direction still
  // classifies at the Gaussian overlap rate Phi(2) ~ 0.977.
  std::int64_t hits = 0;
  for (const DataPoint& p : a.points) {
    if ((p.features[0] > 0) == (*p.label > 0)) ++hits;
  }
  CHECK(static_cast<double>(hits) / 2000.0 ==
        doctest::Approx(0.97725).epsilon(0.02));

  // separation = 0: labels carry no information.
  const Dataset null_sep = make_two_normals(4000, 2, 0.0, 11);
  std::int64_t hits0 = 0;
  for (const DataPoint& p : null_sep.points) {
    if ((p.features[0] > 0) == (*p.label > 0)) ++hits0;
  }
  CHECK(static_cast<double>(hits0) / 4000.0 == doctest::Approx(0.5).epsilon(0.05));

  CHECK_THROWS_AS(make_two_normals(99, 2, 4.0, 1), ConfigError);
}

TEST_CASE("standardize_and_clip") {
  Rng rng = make_rng(13);
  Dataset d;
  for (int i = 0; i < 400; ++i) {
    DataPoint p;
    p.features = Vector(3);
    p.features[0] = rand_normal(rng);            // already standard
    p.features[1] = 5.0 + 3.0 * rand_normal(rng);
    p.features[2] = 7.5;                          // constant column
    p.label = 1.0;
    d.points.push_back(p);
  }
  auto [z, transform] = standardize_and_clip(d, 10.0);
  Vector mean = Vector::Zero(3), var = Vector::Zero(3);
  for (const DataPoint& p : z.points) mean += p.features;
  mean /= 400.0;
  for (const DataPoint& p : z.points) var += (p.features - mean).cwiseAbs2();
  var /= 400.0;
  CHECK(mean.norm() < 1e-10);
  CHECK(var[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(var[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(var[2] == doctest::Approx(0.0));  // constant column -> all zeros

  // Transform reuse: applying to the same data reproduces it.
  const Dataset again = transform.apply(d);
  for (std::int64_t i = 0; i < d.size(); ++i) {
    CHECK((again.points[i].features - z.points[i].features).norm() < 1e-12);
  }

  // Post-condition on the clip: max norm = min(R, max pre-clip norm).
  double pre_max = 0.0;
  for (const DataPoint& p : d.points) {
    pre_max = std::max(
        pre_max, ((p.features - transform.mean).cwiseQuotient(transform.scale))
                     .norm());
  }
  double post_max = 0.0;
  for (const DataPoint& p : z.points) post_max = std::max(post_max, p.features.norm());
  CHECK(post_max == doctest::Approx(std::min(10.0, pre_max)).epsilon(1e-9));
}

TEST_CASE("train/test split") {
  Rng rng = make_rng(15);
  Dataset d;
  for (int i = 0; i < 10; ++i) {
    DataPoint p;
    p.features = Vector(1);
    p.features[0] = i;
    p.label = 1.0;
    d.points.push_back(p);
  }
  auto [train, test] = train_test_split(d, 0.8, 21);
  CHECK(train.size() == 8);
  CHECK(test.size() == 2);

  // Partition: union of values = originals, no overlap.
  std::vector<int> seen(10, 0);
  for (const DataPoint& p : train.points) seen[static_cast<int>(p.features[0])]++;
  for (const DataPoint& p : test.points) seen[static_cast<int>(p.features[0])]++;
  for (int c : seen) CHECK(c == 1);

  auto [train2, test2] = train_test_split(d, 0.8, 21);
  for (std::int64_t i = 0; i < train.size(); ++i) {
    CHECK(train.points[i].features == train2.points[i].features);
  }
  CHECK_THROWS_AS(train_test_split(d, 1.2, 0), ConfigError);
}

TEST_CASE("abalone fixture: 9 features, median-binarized rings") {
  std::istringstream in(
      "M,0.455,0.365,0.095,0.514,0.2245,0.101,0.15,15\n"
      "F,0.53,0.42,0.135,0.677,0.2565,0.1415,0.21,9\n"
      "I,0.33,0.255,0.08,0.205,0.0895,0.0395,0.055,7\n"
      "M,0.44,0.365,0.125,0.516,0.2155,0.114,0.155,10\n"
      "F,0.545,0.425,0.125,0.768,0.294,0.1495,0.26,16\n");
  const Dataset d = load_abalone_stream(in);
  CHECK(d.size() == 5);
  CHECK(d.feature_dim() == 9);
  // M -> (0,0), F -> (1,0), I -> (0,1)
  CHECK(d.points[0].features[0] == 0.0);
  CHECK(d.points[1].features[0] == 1.0);
  CHECK(d.points[2].features[1] == 1.0);
  // median rings = 10; strictly above -> +1
  CHECK(*d.points[0].label == 1.0);   // 15
  CHECK(*d.points[1].label == -1.0);  // 9
  CHECK(*d.points[3].label == -1.0);  // 10 (== median)
  CHECK(*d.points[4].label == 1.0);   // 16

  std::istringstream bad("X,0.1,0.1,0.1,0.1,0.1,0.1,0.1,5\n");
  CHECK_THROWS_WITH_AS(load_abalone_stream(bad, "a.data"),
                       doctest::Contains("a.data:1"), ConfigError);
}
