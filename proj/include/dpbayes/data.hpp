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

#ifndef DPBAYES_DATA_HPP_
#define DPBAYES_DATA_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

#include "dpbayes/model.hpp"

namespace dpbayes {

// Numeric CSV with one binary label column; remaining columns become
// features in order.  label_column is 0-based; -1 selects the last column.
// Labels are mapped to {-1,+1} (smaller raw value -> -1).
Dataset load_csv(const std::string& path, int label_column, bool has_header);
Dataset load_csv_stream(std::istream& in, int label_column, bool has_header,
                        const std::string& origin = "<stream>");

// Sparse "label idx:value ..." lines with 1-based, strictly increasing
// indices; expanded to dense vectors of the maximum observed dimension.
Dataset load_libsvm(const std::string& path);
Dataset load_libsvm_stream(std::istream& in,
                           const std::string& origin = "<stream>");

// Raw abalone format: sex (M/F/I), 7 numeric measurements, integer rings.
// Sex is dummy-coded with two columns (M dropped) and rings are binarized
// at their median, giving 9 features and labels in {-1,+1}.
Dataset load_abalone(const std::string& path);
Dataset load_abalone_stream(std::istream& in,
                            const std::string& origin = "<stream>");

// Full-precision CSV writer (features then label); read back with load_csv.
void save_csv(const Dataset& data, std::ostream& out);

// n/2 points from N(+mu, I) labelled +1 and n/2 from N(-mu, I) labelled -1,
// with ||2 mu|| = separation along the first axis; then clipped to R = 1.
Dataset make_two_normals(std::int64_t n, int dim, double separation,
                         std::uint64_t seed);

// Per-column z-scoring fit on the training split only.
struct FeatureTransform {
  Vector mean;
  Vector scale;
  double clip_radius = 1.0;

  Dataset apply(const Dataset& data) const;
};

// Z-scores every feature column, then clips to R.  Zero-variance columns
// are centered with scale 1 (a warning goes to stderr).  Returns the
// transformed data and the transform for test-set reuse.
std::pair<Dataset, FeatureTransform> standardize_and_clip(const Dataset& data,
                                                          double R);

// Disjoint uniform split with sizes (ceil(f N), N - ceil(f N)).
std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double fraction,
                                             std::uint64_t seed);

}  // namespace dpbayes

#endif  // DPBAYES_DATA_HPP_
