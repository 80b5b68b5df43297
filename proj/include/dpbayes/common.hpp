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

#ifndef DPBAYES_COMMON_HPP_
#define DPBAYES_COMMON_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dpbayes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Invalid configuration or arguments supplied by the caller (CLI exit 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A privacy precondition failed and the operation refuses to proceed
// (CLI exit 3).  Silently continuing would void the stated guarantee.
class PrivacyError : public std::runtime_error {
 public:
  explicit PrivacyError(const std::string& what) : std::runtime_error(what) {}
};

// A sampler hit a non-recoverable numerical state (CLI exit 1).
class SamplerError : public std::runtime_error {
 public:
  explicit SamplerError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpbayes

#endif  // DPBAYES_COMMON_HPP_
