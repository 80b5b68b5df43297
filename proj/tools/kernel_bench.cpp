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
//
// Times the serial reference path of the data-parallel kernels against the
// OpenMP path.  The two paths use the same chunked reduction order, so the
// results they print must agree bit-for-bit.

#include <chrono>
#include <cstdio>
#include <string>

#include "dpbayes/data.hpp"
#include "dpbayes/model.hpp"
#include "dpbayes/parallel.hpp"
#include "dpbayes/rng.hpp"

namespace {

using namespace dpbayes;

template <class F>
double time_ms(F&& fn, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() /
         static_cast<double>(reps);
}

void report(const std::string& name, double serial_ms, double parallel_ms,
            bool identical) {
  std::printf("%-28s serial %9.3f ms   openmp %9.3f ms   speedup %5.2fx   %s\n",
              name.c_str(), serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t n = 400000;
  int dim = 20;
  int reps = 20;
  if (argc > 1) n = std::stoll(argv[1]);
  if (argc > 2) dim = std::stoi(argv[2]);
  if (argc > 3) reps = std::stoi(argv[3]);

  std::printf("kernel benchmark: n=%lld, d=%d, threads=%d\n",
              static_cast<long long>(n), dim, par::max_threads());

  const Dataset data = make_two_normals(n, dim, 4.0, 7);
  const ModelSpec model = make_logistic_model(dim, 2.0, 1.0);
  Rng rng = make_rng(11);
  Vector theta = rand_normal_vec(rng, dim, 0.3);
  theta = model.project(theta);

  // Full-data log-likelihood sum.
  double sum_serial = 0.0, sum_parallel = 0.0;
  const double t_sum_serial = time_ms(
      [&] {
        sum_serial = par::chunked_sum(
            data.points.size(),
            [&](std::size_t i) { return model.log_lik(theta, data.points[i]); },
            false);
      },
      reps);
  const double t_sum_parallel = time_ms(
      [&] {
        sum_parallel = par::chunked_sum(
            data.points.size(),
            [&](std::size_t i) { return model.log_lik(theta, data.points[i]); },
            true);
      },
      reps);
  report("log-likelihood sum", t_sum_serial, t_sum_parallel,
         sum_serial == sum_parallel);

  // Full-data gradient accumulation.
  Vector grad_serial, grad_parallel;
  const double t_grad_serial = time_ms(
      [&] {
        grad_serial = par::chunked_vec_sum(
            data.points.size(), dim,
            [&](std::size_t i, Vector& acc) {
              acc += model.grad_log_lik(theta, data.points[i]);
            },
            false);
      },
      reps);
  const double t_grad_parallel = time_ms(
      [&] {
        grad_parallel = par::chunked_vec_sum(
            data.points.size(), dim,
            [&](std::size_t i, Vector& acc) {
              acc += model.grad_log_lik(theta, data.points[i]);
            },
            true);
      },
      reps);
  report("gradient accumulation", t_grad_serial, t_grad_parallel,
         grad_serial == grad_parallel);

  // Monte-Carlo trials (independent slots).
  const std::int64_t trials = 20000;
  std::vector<double> out_serial(trials), out_parallel(trials);
  auto trial = [&](std::vector<double>& out, std::int64_t k) {
    Rng r = make_rng(derive_seed(3, static_cast<std::uint64_t>(k)));
    double acc = 0.0;
    for (int i = 0; i < 200; ++i) acc += rand_normal(r);
    out[static_cast<std::size_t>(k)] = acc;
  };
  const double t_mc_serial = time_ms(
      [&] {
        par::parallel_for(trials, [&](std::int64_t k) { trial(out_serial, k); },
                          false);
      },
      reps);
  const double t_mc_parallel = time_ms(
      [&] {
        par::parallel_for(
            trials, [&](std::int64_t k) { trial(out_parallel, k); }, true);
      },
      reps);
  report("monte-carlo trials", t_mc_serial, t_mc_parallel,
         out_serial == out_parallel);
  return 0;
}
