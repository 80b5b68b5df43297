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

#include <algorithm>
#include <cmath>

#include "dpbayes/baselines.hpp"
#include "dpbayes/data.hpp"

using namespace dpbayes;

namespace {

Dataset toy_logistic_data(std::int64_t n, std::uint64_t seed) {
  return make_two_normals(n, 2, 3.0, seed);
}

Vector erm_gradient(const ErmProblem& p, const Dataset& data,
                    const Vector& theta) {
  Vector g = Vector::Zero(p.dim);
  for (const DataPoint& x : data.points) g += p.grad_loss(theta, x);
  return g + p.lambda_reg * theta;
}

}  // namespace

TEST_CASE("bfgs solves a quadratic to high accuracy") {
  Matrix a(3, 3);
  a << 4, 1, 0, 1, 3, 0.5, 0, 0.5, 2;
  Vector b(3);
  b << 1, -2, 0.5;
  auto f = [&](const Vector& x) { return 0.5 * x.dot(a * x) - b.dot(x); };
  auto g = [&](const Vector& x) { return Vector(a * x - b); };
  const Vector x = minimize_bfgs(f, g, Vector::Zero(3), 1e-10, 200);
  CHECK((a * x - b).norm() <= 1e-10);
}

TEST_CASE("non-private erm drives the gradient to tolerance") {
  const Dataset data = toy_logistic_data(300, 1);
  const ErmProblem p = make_logistic_erm(2, 1.0, 1.0);
  const Vector theta = solve_erm(p, data, 0.0, nullptr);
  CHECK(erm_gradient(p, data, theta).norm() <= 1e-8);

  // Linearly-inseparable data converges even without extra regularization.
  const ErmProblem unreg = make_logistic_erm(2, 1.0, 0.0);
  const Vector theta2 = solve_erm(unreg, data, 0.0, nullptr);
  CHECK(theta2.allFinite());
}

TEST_CASE("objpert noise scale formulas") {
  // Monotone decreasing in epsilon at fixed delta.
  double prev = 1e300;
  for (double eps : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    const double beta = objpert_beta(1.0, eps, 1e-4);
    CHECK(beta < prev);
    prev = beta;
  }
  // Linearity in L and the quadratic coefficient.
  CHECK(objpert_beta(2.0, 1.0, 1e-4) ==
        doctest::Approx(2.0 * objpert_beta(1.0, 1.0, 1e-4)));
  CHECK(objpert_extra_quad(0.25, 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(objpert_beta(1.0, 0.0, 1e-4), ConfigError);
  CHECK_THROWS_AS(objpert_beta(1.0, 1.0, 2.0), ConfigError);
}

TEST_CASE("privacy-off switch reduces objpert to regularized erm") {
  const Dataset data = toy_logistic_data(200, 2);
  ErmProblem p = make_logistic_erm(2, 1.0, 0.5);
  const Vector plain = solve_erm(p, data, 0.0, nullptr);
  const Vector zero = Vector::Zero(2);
  const Vector with_zero_noise = solve_erm(p, data, 0.0, &zero);
  CHECK((plain - with_zero_noise).norm() <= 1e-7);
}

TEST_CASE("objpert is deterministic given the seed and beats chance") {
  const Dataset data = toy_logistic_data(400, 3);
  const ErmProblem p = make_logistic_erm(2, 1.0, 0.0);
  Rng r1 = make_rng(5), r2 = make_rng(5);
  const Vector a = objpert_train(p, data, 1.0, 1e-4, r1);
  const Vector b = objpert_train(p, data, 1.0, 1e-4, r2);
  CHECK(a == b);
  CHECK(a.allFinite());
}

TEST_CASE("objpert draws its noise before touching the data") {
  // The rng is advanced identically no matter which dataset is passed, so
  // the perturbation cannot depend on the data.
  const Dataset d1 = toy_logistic_data(100, 7);
  const Dataset d2 = toy_logistic_data(250, 8);
  const ErmProblem p = make_logistic_erm(2, 1.0, 0.1);
  Rng r1 = make_rng(9), r2 = make_rng(9);
  (void)objpert_train(p, d1, 0.7, 1e-4, r1);
  (void)objpert_train(p, d2, 0.7, 1e-4, r2);
  CHECK(rand_uniform(r1) == rand_uniform(r2));
}

TEST_CASE("objpert utility sits between chance and the exact erm solution") {
  const Dataset data = toy_logistic_data(300, 21);
  const ErmProblem p = make_logistic_erm(2, 1.0, 1e-6);
  const Vector exact = solve_erm(p, data, 0.0, nullptr);
  const double erm_acc = [&] {
    double hits = 0;
    for (const DataPoint& x : data.points) {
      hits += (exact.dot(x.features) > 0) == (*x.label > 0);
    }
    return hits / static_cast<double>(data.size());
  }();
  double mean_acc = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    Rng rng = make_rng(100 + static_cast<std::uint64_t>(s));
    const Vector theta = objpert_train(p, data, 1.0, 1e-4, rng);
    double hits = 0;
    for (const DataPoint& x : data.points) {
      hits += (theta.dot(x.features) > 0) == (*x.label > 0);
    }
    mean_acc += hits / static_cast<double>(data.size());
  }
  mean_acc /= seeds;
  CHECK(mean_acc > 0.5);
  CHECK(mean_acc < erm_acc);
}

TEST_CASE("output perturbation trails objpert at a tight budget") {
  const Dataset data = toy_logistic_data(400, 23);
  ErmProblem p = make_logistic_erm(2, 1.0, 1.0);
  auto acc = [&](const Vector& theta) {
    double hits = 0;
    for (const DataPoint& x : data.points) {
      hits += (theta.dot(x.features) > 0) == (*x.label > 0);
    }
    return hits / static_cast<double>(data.size());
  };
  double obj_mean = 0.0, out_mean = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    Rng r1 = make_rng(500 + static_cast<std::uint64_t>(s));
    Rng r2 = make_rng(900 + static_cast<std::uint64_t>(s));
    obj_mean += acc(objpert_train(p, data, 0.1, 1e-4, r1));
    out_mean += acc(outpert_train(p, data, 0.1, 1e-4, r2));
  }
  obj_mean /= seeds;
  out_mean /= seeds;
  CHECK(out_mean < obj_mean);
}

TEST_CASE("outpert requires strong convexity and adds calibrated noise") {
  const Dataset data = toy_logistic_data(200, 11);
  ErmProblem p = make_logistic_erm(2, 1.0, 0.0);
  Rng rng = make_rng(13);
  CHECK_THROWS_AS(outpert_train(p, data, 0.5, 1e-4, rng), ConfigError);

  p.lambda_reg = 2.0;
  const Vector center = solve_erm(p, data, 0.0, nullptr);
  // With epsilon close to 1 the noise is modest but nonzero.
  Rng r1 = make_rng(17), r2 = make_rng(17);
  const Vector a = outpert_train(p, data, 0.9, 1e-2, r1);
  const Vector b = outpert_train(p, data, 0.9, 1e-2, r2);
  CHECK(a == b);
  CHECK((a - center).norm() > 0.0);

  // The injected noise follows gaussian_sigma(2L/lambda, eps, delta):
  // recover it and compare moments over repeated draws.
  const double sigma = gaussian_sigma(2.0 * p.grad_bound_l / p.lambda_reg, 0.9,
                                      1e-2);
  Rng rng_many = make_rng(19);
  double s2 = 0.0;
  const int reps = 3000;
  for (int i = 0; i < reps; ++i) {
    const Vector draw = outpert_train(p, data, 0.9, 1e-2, rng_many);
    s2 += (draw - center).squaredNorm();
  }
  CHECK(s2 / (2.0 * reps) == doctest::Approx(sigma * sigma).epsilon(0.06));

  // gaussian_sigma itself rejects epsilon >= 1, so outpert does too.
  CHECK_THROWS_AS(outpert_train(p, data, 1.5, 1e-2, rng),
                  std::invalid_argument);
}
