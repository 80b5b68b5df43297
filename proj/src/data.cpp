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

#include "dpbayes/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

namespace dpbayes {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  return in;
}

double parse_double(const std::string& token, const std::string& origin,
                    std::int64_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin + ":" + std::to_string(line_no) +
                      ": malformed numeric field '" + token + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Map raw binary labels onto {-1,+1}: smaller distinct value -> -1.
void binarize_labels(Dataset& data, const std::string& origin) {
  std::set<double> values;
  for (const DataPoint& p : data.points) values.insert(*p.label);
  if (values.empty()) return;
  const bool already_pm1 =
      std::all_of(values.begin(), values.end(),
                  [](double v) { return v == 1.0 || v == -1.0; });
  if (already_pm1) return;
  if (values.size() != 2) {
    throw ConfigError(origin + ": label column is not binary (" +
                      std::to_string(values.size()) + " distinct values)");
  }
  const double lo = *values.begin();
  for (DataPoint& p : data.points) p.label = (*p.label == lo) ? -1.0 : 1.0;
}

double max_feature_norm(const Dataset& data) {
  double m = 0.0;
  for (const DataPoint& p : data.points) m = std::max(m, p.features.norm());
  return m;
}

}  // namespace

Dataset load_csv_stream(std::istream& in, int label_column, bool has_header,
                        const std::string& origin) {
  Dataset data;
  std::string line;
  std::int64_t line_no = 0;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (has_header && line_no == 1) continue;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::vector<std::string> fields = split(stripped, ',');
    if (ncols == 0) {
      ncols = fields.size();
      if (ncols < 2) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": need at least one feature and a label column");
      }
    } else if (fields.size() != ncols) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected " + std::to_string(ncols) + " fields, got " +
                        std::to_string(fields.size()));
    }
    const std::size_t label_idx =
        label_column < 0 ? ncols - 1 : static_cast<std::size_t>(label_column);
    if (label_idx >= ncols) {
      throw ConfigError(origin + ": label column out of range");
    }
    DataPoint p;
    p.features.resize(static_cast<int>(ncols - 1));
    int k = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      const double v = parse_double(trim(fields[j]), origin, line_no);
      if (j == label_idx) {
        p.label = v;
      } else {
        p.features[k++] = v;
      }
    }
    data.points.push_back(std::move(p));
  }
  if (data.points.empty()) throw ConfigError(origin + ": no data rows");
  binarize_labels(data, origin);
  data.norm_bound = max_feature_norm(data);
  return data;
}

Dataset load_csv(const std::string& path, int label_column, bool has_header) {
  std::ifstream in = open_or_throw(path);
  return load_csv_stream(in, label_column, has_header, path);
}

Dataset load_libsvm_stream(std::istream& in, const std::string& origin) {
  struct SparseRow {
    double label;
    std::vector<std::pair<int, double>> entries;
  };
  std::vector<SparseRow> rows;
  int max_index = 0;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::istringstream ss(stripped);
    std::string tok;
    if (!(ss >> tok)) continue;
    SparseRow row;
    row.label = parse_double(tok, origin, line_no);
    int prev_index = 0;
    while (ss >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": expected index:value, got '" + tok + "'");
      }
      const double idx_raw = parse_double(tok.substr(0, colon), origin, line_no);
      const int idx = static_cast<int>(idx_raw);
      if (idx < 1 || static_cast<double>(idx) != idx_raw) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": indices must be positive integers");
      }
      if (idx <= prev_index) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": non-monotone feature indices");
      }
      prev_index = idx;
      row.entries.emplace_back(idx, parse_double(tok.substr(colon + 1), origin, line_no));
      max_index = std::max(max_index, idx);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(origin + ": no data rows");
  Dataset data;
  data.points.reserve(rows.size());
  const int dim = std::max(max_index, 1);
  for (const SparseRow& row : rows) {
    DataPoint p;
    p.features = Vector::Zero(dim);
    for (const auto& [idx, value] : row.entries) p.features[idx - 1] = value;
    p.label = row.label;
    data.points.push_back(std::move(p));
  }
  binarize_labels(data, origin);
  data.norm_bound = max_feature_norm(data);
  return data;
}

Dataset load_libsvm(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return load_libsvm_stream(in, path);
}

Dataset load_abalone_stream(std::istream& in, const std::string& origin) {
  struct Row {
    double sex_f, sex_i;
    std::vector<double> nums;
    double rings;
  };
  std::vector<Row> rows;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::vector<std::string> fields = split(stripped, ',');
    if (fields.size() != 9) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 9 abalone fields, got " +
                        std::to_string(fields.size()));
    }
    Row row{};
    const std::string sex = trim(fields[0]);
    if (sex == "M") {
      row.sex_f = 0.0;
      row.sex_i = 0.0;
    } else if (sex == "F") {
      row.sex_f = 1.0;
      row.sex_i = 0.0;
    } else if (sex == "I") {
      row.sex_f = 0.0;
      row.sex_i = 1.0;
    } else {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": unknown sex code '" + sex + "'");
    }
    for (int j = 1; j <= 7; ++j) {
      row.nums.push_back(parse_double(trim(fields[j]), origin, line_no));
    }
    row.rings = parse_double(trim(fields[8]), origin, line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(origin + ": no data rows");

  std::vector<double> rings;
  rings.reserve(rows.size());
  for (const Row& r : rows) rings.push_back(r.rings);
  std::nth_element(rings.begin(), rings.begin() + rings.size() / 2, rings.end());
  const double median = rings[rings.size() / 2];

  Dataset data;
  data.points.reserve(rows.size());
  for (const Row& r : rows) {
    DataPoint p;
    p.features.resize(9);
    p.features[0] = r.sex_f;
    p.features[1] = r.sex_i;
    for (int j = 0; j < 7; ++j) p.features[2 + j] = r.nums[j];
    p.label = r.rings > median ? 1.0 : -1.0;
    data.points.push_back(std::move(p));
  }
  data.norm_bound = max_feature_norm(data);
  return data;
}

Dataset load_abalone(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return load_abalone_stream(in, path);
}

void save_csv(const Dataset& data, std::ostream& out) {
  out.precision(17);
  for (const DataPoint& p : data.points) {
    for (int j = 0; j < p.features.size(); ++j) {
      if (j) out << ',';
      out << p.features[j];
    }
    if (p.label) out << ',' << *p.label;
    out << '\n';
  }
}

Dataset make_two_normals(std::int64_t n, int dim, double separation,
                         std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) {
    throw ConfigError("make_two_normals: n must be even and >= 2");
  }
  if (dim < 1) throw ConfigError("make_two_normals: dim must be >= 1");
  if (separation < 0) throw ConfigError("make_two_normals: separation >= 0");
  Vector mu = Vector::Zero(dim);
  mu[0] = separation / 2.0;
  Rng rng = make_rng(seed);
  Dataset data;
  data.points.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double y = i < n / 2 ? 1.0 : -1.0;
    DataPoint p;
    p.features = y * mu + rand_normal_vec(rng, dim);
    p.label = y;
    data.points.push_back(std::move(p));
  }
  data.norm_bound = max_feature_norm(data);
  return clip_dataset(data, 1.0);
}

Dataset FeatureTransform::apply(const Dataset& data) const {
  Dataset out = data;
  for (DataPoint& p : out.points) {
    p.features = (p.features - mean).cwiseQuotient(scale);
  }
  out.norm_bound = clip_radius;
  return clip_dataset(out, clip_radius);
}

std::pair<Dataset, FeatureTransform> standardize_and_clip(const Dataset& data,
                                                          double R) {
  if (R <= 0) throw ConfigError("standardize_and_clip: R must be positive");
  if (data.points.empty()) throw ConfigError("standardize_and_clip: empty data");
  const int d = data.feature_dim();
  const double n = static_cast<double>(data.size());
  FeatureTransform t;
  t.mean = Vector::Zero(d);
  t.scale = Vector::Ones(d);
  t.clip_radius = R;
  for (const DataPoint& p : data.points) t.mean += p.features;
  t.mean /= n;
  Vector var = Vector::Zero(d);
  for (const DataPoint& p : data.points) {
    var += (p.features - t.mean).cwiseAbs2();
  }
  var /= n;
  for (int j = 0; j < d; ++j) {
    if (var[j] > 0) {
      t.scale[j] = std::sqrt(var[j]);
    } else {
      std::cerr << "standardize_and_clip: column " << j
                << " has zero variance; leaving it centered with scale 1\n";
    }
  }
  return {t.apply(data), t};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data,
                                             double fraction,
                                             std::uint64_t seed) {
  if (fraction <= 0 || fraction >= 1) {
    throw ConfigError("train_test_split: fraction must be in (0,1)");
  }
  const std::int64_t n = data.size();
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng = make_rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::int64_t n_train =
      static_cast<std::int64_t>(std::ceil(fraction * static_cast<double>(n)));
  Dataset train, test;
  train.norm_bound = test.norm_bound = data.norm_bound;
  for (std::int64_t i = 0; i < n; ++i) {
    (i < n_train ? train : test).points.push_back(data.points[idx[i]]);
  }
  return {train, test};
}

}  // namespace dpbayes
