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

#include "dpbayes/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dpbayes::par {

namespace {

std::atomic<int> g_max_threads{-1};  // -1: not set, use OpenMP default

}  // namespace

void set_max_threads(int threads) {
  g_max_threads.store(threads);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
}

int max_threads() {
  const int configured = g_max_threads.load();
  if (configured > 0) return configured;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool threading_enabled() {
#ifdef _OPENMP
  return max_threads() > 1;
#else
  return false;
#endif
}

}  // namespace dpbayes::par
