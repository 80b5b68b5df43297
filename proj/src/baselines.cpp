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

#include "dpbayes/baselines.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dpbayes/parallel.hpp"

namespace dpbayes {

namespace {

double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

double neg_sigmoid(double z) {
  if (z > 35.0) return std::exp(-z);
  return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

ErmProblem make_logistic_erm(int dim, double R, double lambda_reg) {
  if (dim < 1) throw ConfigError("logistic erm: dimension must be >= 1");
  if (R <= 0) throw ConfigError("logistic erm: R must be positive");
  if (lambda_reg < 0) throw ConfigError("logistic erm: lambda_reg >= 0");
  ErmProblem p;
  p.dim = dim;
  p.loss = [](const Vector& theta, const DataPoint& x) {
    return softplus(-*x.label * theta.dot(x.features));
  };
  p.grad_loss = [](const Vector& theta, const DataPoint& x) -> Vector {
    const double y = *x.label;
    return (-y * neg_sigmoid(y * theta.dot(x.features))) * x.features;
  };
  p.grad_bound_l = R;
  p.smoothness = R * R / 4.0;
  p.lambda_reg = lambda_reg;
  return p;
}

Vector minimize_bfgs(const std::function<double(const Vector&)>& f,
                     const std::function<Vector(const Vector&)>& grad,
                     Vector init, double tol, std::int64_t max_iter) {
  const int d = static_cast<int>(init.size());
  Matrix h_inv = Matrix::Identity(d, d);
  Vector x = std::move(init);
  Vector g = grad(x);
  double fx = f(x);
  for (std::int64_t it = 0; it < max_iter; ++it) {
    if (g.norm() <= tol) return x;
    Vector dir = -h_inv * g;
    if (dir.dot(g) >= 0) {  // lost positive definiteness; reset
      h_inv = Matrix::Identity(d, d);
      dir = -g;
    }
    // Backtracking Armijo line search.  Once the predicted decrease falls
    // below the rounding noise of f, function values can no longer certify
    // progress; acceptance then switches to a strict gradient-norm
    // decrease, which the (precise) gradient can still certify down to the
    // tolerance.
    double step = 1.0;
    const double slope = g.dot(dir);
    const double f_noise = 16.0 * std::numeric_limits<double>::epsilon() *
                           (1.0 + std::abs(fx));
    Vector x_new, g_new;
    double f_new = fx;
    bool moved = false;
    bool have_g_new = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * dir;
      f_new = f(x_new);
      if (!std::isfinite(f_new)) {
        step *= 0.5;
        continue;
      }
      if (f_new <= fx + 1e-4 * step * slope) {
        moved = true;
        break;
      }
      if (step * std::abs(slope) <= f_noise) {
        g_new = grad(x_new);
        have_g_new = true;
        if (g_new.norm() < g.norm()) {
          moved = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) {
      if (g.norm() <= 8.0 * tol) return x;  // at the numerical floor
      throw SamplerError("bfgs: line search failed; gradient norm " +
                         std::to_string(g.norm()));
    }
    if (!have_g_new) g_new = grad(x_new);
    const Vector s = x_new - x;
    const Vector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Matrix i = Matrix::Identity(d, d);
      h_inv = (i - rho * s * y.transpose()) * h_inv *
                  (i - rho * y * s.transpose()) +
              rho * s * s.transpose();
    }
    x = std::move(x_new);
    g = g_new;
    fx = f_new;
  }
  if (g.norm() <= tol) return x;
  throw SamplerError("bfgs: no convergence after " + std::to_string(max_iter) +
                     " iterations; gradient norm " + std::to_string(g.norm()));
}

Vector solve_erm(const ErmProblem& problem, const Dataset& data,
                 double extra_quad, const Vector* linear) {
  const double quad = extra_quad + problem.lambda_reg;
  auto objective = [&](const Vector& theta) {
    double v = par::chunked_sum(data.points.size(), [&](std::size_t i) {
      return problem.loss(theta, data.points[i]);
    });
    v += 0.5 * quad * theta.squaredNorm();
    if (linear) v += linear->dot(theta);
    return v;
  };
  auto gradient = [&](const Vector& theta) {
    Vector g = par::chunked_vec_sum(
        data.points.size(), problem.dim, [&](std::size_t i, Vector& acc) {
          acc += problem.grad_loss(theta, data.points[i]);
        });
    g += quad * theta;
    if (linear) g += *linear;
    return g;
  };
  return minimize_bfgs(objective, gradient, Vector::Zero(problem.dim));
}

double objpert_beta(double L, double epsilon, double delta) {
  if (epsilon <= 0) throw ConfigError("objpert: epsilon must be positive");
  if (delta <= 0 || delta >= 1) throw ConfigError("objpert: delta in (0,1)");
  return L * std::sqrt(8.0 * std::log(2.0 / delta) + 4.0 * epsilon) / epsilon;
}

double objpert_extra_quad(double smoothness, double epsilon) {
  if (epsilon <= 0) throw ConfigError("objpert: epsilon must be positive");
  return 2.0 * smoothness / epsilon;
}

Vector objpert_train(const ErmProblem& problem, const Dataset& data,
                     double epsilon, double delta, Rng& rng) {
  // b is drawn before any gradient of the data is seen.
  const double beta = objpert_beta(problem.grad_bound_l, epsilon, delta);
  const Vector b = rand_normal_vec(rng, problem.dim, beta);
  return solve_erm(problem, data, objpert_extra_quad(problem.smoothness, epsilon),
                   &b);
}

Vector outpert_train(const ErmProblem& problem, const Dataset& data,
                     double epsilon, double delta, Rng& rng) {
  if (problem.lambda_reg <= 0) {
    throw ConfigError("outpert: lambda_reg must be positive (strong convexity)");
  }
  const double sensitivity = 2.0 * problem.grad_bound_l / problem.lambda_reg;
  const double sigma = gaussian_sigma(sensitivity, epsilon, delta);
  Vector theta = solve_erm(problem, data, 0.0, nullptr);
  return theta + rand_normal_vec(rng, problem.dim, sigma);
}

}  // namespace dpbayes
