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

#include "dpbayes/privacy.hpp"

using namespace dpbayes;

namespace {
// Evaluated independently to 30 digits and frozen here.
constexpr double kSgldVar1e6 = 1.18168884377499634e-4;
constexpr double kSgldCoeff = 1.18168884377499634e8;
constexpr double kThreshold1 = 0.315545405941337953;
constexpr double kThreshold2 = 5048.72649506140725;
constexpr double kAdvComp = 5.85023509294455746;
constexpr double kGaussSigmaA = 9.68961052521077884;
constexpr double kGaussSigmaB = 2.49727191610832535;
constexpr double kDegradeDelta = 3.71828182845904524e-3;
constexpr double kNonsphericalS = 11.5970518243761624;

bool rel_close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}
}  // namespace

TEST_CASE("compose_basic sums coordinates") {
  CHECK(compose_basic({{1, 0}, {2, 0}}).epsilon == 3.0);
  CHECK(compose_basic({{0, 0}}).epsilon == 0.0);
  const PrivacyBudget b = compose_basic({{0.5, 1e-6}, {0.5, 1e-6}});
  CHECK(rel_close(b.epsilon, 1.0));
  CHECK(rel_close(b.delta, 2e-6));
  CHECK_THROWS_AS(compose_basic({}), std::invalid_argument);
}

TEST_CASE("compose_advanced matches the worked value") {
  const PrivacyBudget b = compose_advanced(0.1, 0.0, 100, 1e-5);
  CHECK(rel_close(b.epsilon, kAdvComp));
  CHECK(b.delta == 1e-5);
  CHECK(compose_advanced(0.0, 0.0, 1, 0.5).epsilon == 0.0);
  CHECK_THROWS_AS(compose_advanced(0.1, 0.0, 10, 0.0), std::invalid_argument);
}

TEST_CASE("remark-6 regime: eps' <= 2c") {
  // Worked example: c = 1, k = 50, delta' = 1e-5.
  const double dp = 1e-5;
  const double eps = 1.0 / std::sqrt(2.0 * 50 * std::log(1.0 / dp));
  CHECK(compose_advanced(eps, 0.0, 50, dp).epsilon <= 2.0);

  // Randomized grid over c, k, delta'.
  Rng rng = make_rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const double dprime = std::pow(10.0, -rand_uniform(rng, 3.0, 8.0));
    const double cmax = std::sqrt(std::log(1.0 / dprime));
    const double c = rand_uniform(rng, 1e-3, cmax * 0.999);
    const std::int64_t k = rand_int(rng, 10, 10000);
    const double e =
        c / std::sqrt(2.0 * static_cast<double>(k) * std::log(1.0 / dprime));
    CHECK(compose_advanced(e, 0.0, k, dprime).epsilon <= 2.0 * c);
  }
}

TEST_CASE("amplify_subsample") {
  const PrivacyBudget b = amplify_subsample({0.5, 1e-6}, 0.01);
  CHECK(rel_close(b.epsilon, 0.01));
  CHECK(b.delta == 1e-6);
  CHECK(amplify_subsample({0.7, 0.0}, 0.5).epsilon == 0.7);  // fixed point
  CHECK(amplify_subsample({0.0, 1e-3}, 0.2).epsilon == 0.0);
  CHECK_THROWS_AS(amplify_subsample({1.0, 0.0}, 0.1), PrivacyError);
  CHECK_THROWS_AS(amplify_subsample({0.5, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian_sigma worked values and monotonicity") {
  CHECK(rel_close(gaussian_sigma(1.0, 0.5, 1e-5), kGaussSigmaA));
  CHECK(gaussian_sigma(2.0, 0.5, 1e-5) == 2.0 * gaussian_sigma(1.0, 0.5, 1e-5));
  CHECK(rel_close(gaussian_sigma(1.0, 0.9, 0.1), kGaussSigmaB));
  CHECK_THROWS_AS(gaussian_sigma(1.0, 1.5, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_sigma(0.0, 0.5, 0.1), std::invalid_argument);

  Rng rng = make_rng(7);
  for (int i = 0; i < 200; ++i) {
    const double s = rand_uniform(rng, 0.1, 5.0);
    const double e = rand_uniform(rng, 0.05, 0.95);
    const double d = rand_uniform(rng, 1e-8, 0.5);
    CHECK(gaussian_sigma(s * 1.1, e, d) > gaussian_sigma(s, e, d));
    CHECK(gaussian_sigma(s, std::min(e * 1.1, 0.99), d) < gaussian_sigma(s, e, d));
    CHECK(gaussian_sigma(s, e, std::min(d * 1.1, 0.99)) < gaussian_sigma(s, e, d));
  }
}

TEST_CASE("degrade_approx_sampling") {
  const PrivacyBudget a = degrade_approx_sampling(1.0, 0.001);
  CHECK(a.epsilon == 1.0);
  CHECK(rel_close(a.delta, kDegradeDelta));
  CHECK(degrade_approx_sampling(2.0, 0.0).delta == 0.0);
  CHECK(rel_close(degrade_approx_sampling(0.0, 0.01).delta, 0.02));
}

TEST_CASE("sgld_noise_variance worked values and the eta floor") {
  CHECK(rel_close(sgld_noise_variance(1000, 50, 10, 1.0, 1.0, 1e-4, 1e-6),
                  kSgldVar1e6));
  CHECK(rel_close(sgld_noise_variance(1000, 50, 10, 1.0, 1.0, 1e-4, 1.0),
                  kSgldCoeff));
  CHECK(rel_close(sgld_privacy_coefficient(1000, 50, 10, 1.0, 1.0, 1e-4),
                  kSgldCoeff));
  // For small eta the privacy branch ~ eta^2 drops below the floor.
  CHECK(sgld_noise_variance(1000, 50, 10, 1.0, 1.0, 1e-4, 1e-12) == 1e-12);
  // max is continuous at the crossover.
  const double coeff = sgld_privacy_coefficient(1000, 50, 10, 1.0, 1.0, 1e-4);
  const double eta_star = 1.0 / coeff;
  CHECK(rel_close(sgld_noise_variance(1000, 50, 10, 1.0, 1.0, 1e-4, eta_star),
                  eta_star));
}

TEST_CASE("T-condition") {
  CHECK(rel_close(T_condition_threshold(1000, 10, 1.0, 1e-4), kThreshold1));
  CHECK(check_T_condition(1000, 1, 10, 1.0, 1e-4));
  CHECK(rel_close(T_condition_threshold(1000000, 10, 4.0, 1e-4), kThreshold2));
  CHECK_FALSE(check_T_condition(1000000, 100, 10, 4.0, 1e-4));
  CHECK(check_T_condition(12345, 1, 7, 0.0, 1e-4));  // eps = 0: always true
}

TEST_CASE("nonspherical gaussian noise") {
  CHECK(rel_close(nonspherical_noise_scale(0.5, 1e-5), kNonsphericalS));

  Rng rng = make_rng(11);
  const Matrix id = Matrix::Identity(3, 3);
  Rng rng_a = make_rng(5), rng_b = make_rng(5);
  const Vector w1 = nonspherical_gaussian_noise(id, 0.5, 1e-5, rng_a);
  const Vector w2 = nonspherical_gaussian_noise(2.0 * id, 0.5, 1e-5, rng_b);
  CHECK((2.0 * w1 - w2).norm() < 1e-12);  // scaling F doubles every coordinate

  // F = I yields iid coordinates with standard deviation s.
  const double s = nonspherical_noise_scale(0.5, 1e-5);
  double sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    sq += nonspherical_gaussian_noise(id, 0.5, 1e-5, rng).squaredNorm();
  }
  const double per_coord_var = sq / (3.0 * n);
  CHECK(per_coord_var == doctest::Approx(s * s).epsilon(0.05));

  Matrix degenerate = Matrix::Zero(2, 2);
  degenerate(0, 0) = 1.0;
  CHECK_THROWS_AS(nonspherical_gaussian_noise(degenerate, 0.5, 1e-5, rng),
                  std::invalid_argument);
}

TEST_CASE("covariance sensitivity bound values and brute force") {
  CHECK(cov_sensitivity_bound(1.0, 5) == doctest::Approx(1.75));
  CHECK(cov_sensitivity_bound(1.0, 8) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cov_sensitivity_bound(1.0, 4), std::invalid_argument);

  // 200 random n=6 neighbor pairs in the unit ball never exceed 7/(n-1)=1.4.
  Rng rng = make_rng(99);
  const int d = 3;
  auto ball_point = [&] {
    Vector x = rand_normal_vec(rng, d);
    return Vector(std::pow(rand_uniform(rng), 1.0 / d) / x.norm() * x);
  };
  auto cov = [&](const std::vector<Vector>& pts) {
    Vector mean = Vector::Zero(d);
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    Matrix c = Matrix::Zero(d, d);
    for (const auto& p : pts) c += (p - mean) * (p - mean).transpose();
    return Matrix(c / static_cast<double>(pts.size() - 1));
  };
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector> xs(6);
    for (auto& x : xs) x = ball_point();
    const Matrix c0 = cov(xs);
    xs[static_cast<std::size_t>(rand_int(rng, 0, 5))] = ball_point();
    worst = std::max(worst, (cov(xs) - c0).norm());
  }
  CHECK(worst <= cov_sensitivity_bound(1.0, 6));
}

TEST_CASE("the sgld noise plan composes back to at most (eps, delta)") {
  Rng rng = make_rng(321);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t N = rand_int(rng, 100, 100000);
    const std::int64_t tau = rand_int(rng, 1, 50);
    const double delta = std::pow(10.0, -rand_uniform(rng, 3.0, 7.0));
    const double eps = rand_uniform(rng, 0.05, 4.0);
    // Pick T at (or above) the Theorem-2 threshold.
    const std::int64_t T = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(
               std::ceil(T_condition_threshold(N, tau, eps, delta) *
                         rand_uniform(rng, 1.0, 4.0))));
    const NoisePlan plan = plan_sgld_noise(N, T, tau, 1.0, eps, delta, 1e-6);
    REQUIRE(plan.iterations >= 1);
    const PrivacyBudget total = compose_advanced(
        plan.per_iter_budget.epsilon, plan.per_iter_budget.delta,
        plan.iterations, delta / 2.0);
    CHECK(total.epsilon <= eps * (1.0 + 1e-9));
    CHECK(total.delta <= delta * (1.0 + 1e-9));
  }
}

TEST_CASE("ledger is append-only with basic-composition totals") {
  PrivacyLedger ledger;
  ledger.charge("a", {0.5, 1e-6});
  ledger.charge("b", {0.25, 0.0});
  ledger.charge("c", {0.25, 1e-6});
  CHECK(ledger.events().size() == 3);
  CHECK(rel_close(ledger.total().epsilon, 1.0));
  CHECK(rel_close(ledger.total().delta, 2e-6));

  // Permutation invariance of the total.
  PrivacyLedger other;
  other.charge("c", {0.25, 1e-6});
  other.charge("a", {0.5, 1e-6});
  other.charge("b", {0.25, 0.0});
  CHECK(ledger.total().epsilon == other.total().epsilon);
  CHECK(ledger.total().delta == other.total().delta);

  std::ostringstream csv;
  ledger.write_csv(csv);
  const std::string text = csv.str();
  CHECK(text.find("event_label,epsilon,delta,cumulative_epsilon,"
                  "cumulative_delta") == 0);
  CHECK(text.find("\na,0.5,") != std::string::npos);
}
