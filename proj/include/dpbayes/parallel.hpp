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

#ifndef DPBAYES_PARALLEL_HPP_
#define DPBAYES_PARALLEL_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dpbayes/common.hpp"

namespace dpbayes::par {

// All reductions are chunked: per-chunk partials are computed (possibly in
// parallel) and combined in fixed chunk order.  The result is therefore
// bit-identical between the serial and OpenMP paths and independent of the
// number of threads.
inline constexpr std::size_t kChunk = 256;

// Process-wide switch for the OpenMP paths.  Threads <= 1 forces serial.
void set_max_threads(int threads);
int max_threads();
bool threading_enabled();

namespace detail {

inline std::size_t num_chunks(std::size_t n) {
  return (n + kChunk - 1) / kChunk;
}

}  // namespace detail

// Sum of f(i) for i in [0, n).  `parallel` selects the OpenMP path; the
// serial path runs the same chunked loop and yields the identical result.
template <class F>
double chunked_sum(std::size_t n, F&& f, bool parallel) {
  const std::int64_t nchunks =
      static_cast<std::int64_t>(detail::num_chunks(n));
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

template <class F>
double chunked_sum(std::size_t n, F&& f) {
  return chunked_sum(n, static_cast<F&&>(f),
                     threading_enabled() && n >= 2 * kChunk);
}

// Vector-valued reduction: accumulates f(i, acc) into a dim-sized
// accumulator per chunk, then combines chunk partials in order.
template <class F>
Vector chunked_vec_sum(std::size_t n, int dim, F&& f, bool parallel) {
  const std::int64_t nchunks =
      static_cast<std::int64_t>(detail::num_chunks(n));
  std::vector<Vector> partial(static_cast<std::size_t>(nchunks),
                              Vector::Zero(dim));
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    Vector& acc = partial[static_cast<std::size_t>(c)];
    for (std::size_t i = lo; i < hi; ++i) f(i, acc);
  }
  Vector total = Vector::Zero(dim);
  for (const Vector& p : partial) total += p;
  return total;
}

template <class F>
Vector chunked_vec_sum(std::size_t n, int dim, F&& f) {
  return chunked_vec_sum(n, dim, static_cast<F&&>(f),
                         threading_enabled() && n >= 2 * kChunk);
}

// Independent trials written to preallocated slots; deterministic because
// each index owns its output and seeds its own RNG.
template <class F>
void parallel_for(std::int64_t n, F&& f, bool parallel) {
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) f(i);
}

template <class F>
void parallel_for(std::int64_t n, F&& f) {
  parallel_for(n, static_cast<F&&>(f), threading_enabled() && n > 1);
}

}  // namespace dpbayes::par

#endif  // DPBAYES_PARALLEL_HPP_
