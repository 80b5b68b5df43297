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

#include "dpbayes/privacy.hpp"

#include <cmath>
#include <ostream>
#include <utility>

namespace dpbayes {

void PrivacyLedger::charge(std::string label, PrivacyBudget budget) {
  events_.push_back(Event{std::move(label), budget});
  total_.epsilon += budget.epsilon;
  total_.delta += budget.delta;
}

void PrivacyLedger::write_csv(std::ostream& out) const {
  out << "event_label,epsilon,delta,cumulative_epsilon,cumulative_delta\n";
  PrivacyBudget running;
  out.precision(17);
  for (const Event& e : events_) {
    running.epsilon += e.budget.epsilon;
    running.delta += e.budget.delta;
    out << e.label << ',' << e.budget.epsilon << ',' << e.budget.delta << ','
        << running.epsilon << ',' << running.delta << '\n';
  }
}

PrivacyBudget compose_basic(const std::vector<PrivacyBudget>& budgets) {
  if (budgets.empty()) {
    throw std::invalid_argument("compose_basic: empty budget list");
  }
  PrivacyBudget total;
  for (const PrivacyBudget& b : budgets) {
    total.epsilon += b.epsilon;
    total.delta += b.delta;
  }
  return total;
}

PrivacyBudget compose_advanced(double epsilon, double delta, std::int64_t k,
                               double delta_prime) {
  if (epsilon < 0 || delta < 0 || k < 1) {
    throw std::invalid_argument("compose_advanced: need eps,delta >= 0, k >= 1");
  }
  if (delta_prime <= 0) {
    throw std::invalid_argument(
        "compose_advanced: delta_prime must be positive (formula undefined "
        "at 0)");
  }
  const double kd = static_cast<double>(k);
  const double eps_prime = std::sqrt(2.0 * kd * std::log(1.0 / delta_prime)) * epsilon +
                           kd * epsilon * std::expm1(epsilon);
  return PrivacyBudget{eps_prime, kd * delta + delta_prime};
}

PrivacyBudget amplify_subsample(PrivacyBudget budget, double gamma) {
  if (gamma <= 0 || gamma > 1) {
    throw std::invalid_argument("amplify_subsample: gamma must be in (0,1]");
  }
  if (budget.epsilon >= 1.0) {
    throw PrivacyError(
        "amplify_subsample: subsampling amplification requires epsilon < 1");
  }
  return PrivacyBudget{2.0 * gamma * budget.epsilon, budget.delta};
}

double gaussian_sigma(double sensitivity, double epsilon, double delta) {
  if (sensitivity <= 0) {
    throw std::invalid_argument("gaussian_sigma: sensitivity must be positive");
  }
  if (epsilon <= 0 || epsilon >= 1) {
    throw std::invalid_argument("gaussian_sigma: epsilon must be in (0,1)");
  }
  if (delta <= 0 || delta >= 1) {
    throw std::invalid_argument("gaussian_sigma: delta must be in (0,1)");
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

PrivacyBudget degrade_approx_sampling(double epsilon, double l1_gap) {
  if (l1_gap < 0 || l1_gap > 1) {
    throw std::invalid_argument("degrade_approx_sampling: l1_gap in [0,1]");
  }
  return PrivacyBudget{epsilon, (1.0 + std::exp(epsilon)) * l1_gap};
}

double sgld_privacy_coefficient(std::int64_t N, std::int64_t T,
                                std::int64_t tau, double L, double epsilon,
                                double delta) {
  if (N < 1 || T < 1 || tau < 1 || L <= 0 || epsilon <= 0 || delta <= 0) {
    throw std::invalid_argument("sgld_privacy_coefficient: arguments positive");
  }
  const double n = static_cast<double>(N);
  const double t = static_cast<double>(T);
  const double tt = static_cast<double>(tau);
  return 128.0 * n * t * L * L / (tt * epsilon * epsilon) *
         std::log(2.5 * n * t / (tt * delta)) * std::log(2.0 / delta);
}

double sgld_noise_variance(std::int64_t N, std::int64_t T, std::int64_t tau,
                           double L, double epsilon, double delta,
                           double eta_t) {
  if (eta_t <= 0) {
    throw std::invalid_argument("sgld_noise_variance: eta_t must be positive");
  }
  const double privacy_term =
      sgld_privacy_coefficient(N, T, tau, L, epsilon, delta) * eta_t * eta_t;
  return privacy_term > eta_t ? privacy_term : eta_t;
}

NoisePlan plan_sgld_noise(std::int64_t N, std::int64_t T, std::int64_t tau,
                          double L, double epsilon, double delta,
                          double eta_ref) {
  NoisePlan plan;
  plan.sigma2 = sgld_noise_variance(N, T, tau, L, epsilon, delta, eta_ref);
  plan.iterations = N * T / tau;
  const double passes = static_cast<double>(N) * static_cast<double>(T) /
                        static_cast<double>(tau);
  plan.per_iter_budget.epsilon =
      epsilon / (2.0 * std::sqrt(2.0 * passes * std::log(2.0 / delta)));
  plan.per_iter_budget.delta =
      static_cast<double>(tau) * delta /
      (2.0 * static_cast<double>(N) * static_cast<double>(T));
  return plan;
}

double T_condition_threshold(std::int64_t N, std::int64_t tau, double epsilon,
                             double delta) {
  if (N < 1 || tau < 1 || delta <= 0 || epsilon < 0) {
    throw std::invalid_argument("T_condition_threshold: bad arguments");
  }
  return epsilon * epsilon * static_cast<double>(N) /
         (32.0 * static_cast<double>(tau) * std::log(2.0 / delta));
}

bool check_T_condition(std::int64_t N, std::int64_t T, std::int64_t tau,
                       double epsilon, double delta) {
  return static_cast<double>(T) >= T_condition_threshold(N, tau, epsilon, delta);
}

double nonspherical_noise_scale(double epsilon, double delta) {
  if (epsilon <= 0 || epsilon >= 1 || delta <= 0 || delta >= 1) {
    throw std::invalid_argument(
        "nonspherical_noise_scale: epsilon, delta must be in (0,1)");
  }
  return (1.0 + std::sqrt(2.0 * std::log(1.0 / delta))) / epsilon;
}

Vector nonspherical_gaussian_noise(const Matrix& F, double epsilon,
                                   double delta, Rng& rng) {
  if (F.rows() != F.cols() || F.rows() < 1) {
    throw std::invalid_argument("nonspherical_gaussian_noise: F must be square");
  }
  Eigen::FullPivLU<Matrix> lu(F);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("nonspherical_gaussian_noise: degenerate F");
  }
  const double s = nonspherical_noise_scale(epsilon, delta);
  Vector w = rand_normal_vec(rng, static_cast<int>(F.rows()), s);
  return F * w;
}

double cov_sensitivity_bound(double L, std::int64_t n) {
  if (L <= 0) {
    throw std::invalid_argument("cov_sensitivity_bound: L must be positive");
  }
  if (n <= 4) {
    throw std::invalid_argument("cov_sensitivity_bound: requires n > 4");
  }
  return 7.0 * L * L / static_cast<double>(n - 1);
}

}  // namespace dpbayes
