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

#ifndef DPBAYES_BASELINES_HPP_
#define DPBAYES_BASELINES_HPP_

#include <cstdint>
#include <functional>

#include "dpbayes/model.hpp"
#include "dpbayes/privacy.hpp"
#include "dpbayes/rng.hpp"

namespace dpbayes {

// Convex per-example ERM problem: minimize sum_i loss(theta, x_i) plus the
// quadratic/linear terms a trainer adds.
struct ErmProblem {
  int dim = 1;
  std::function<double(const Vector&, const DataPoint&)> loss;
  std::function<Vector(const Vector&, const DataPoint&)> grad_loss;
  double grad_bound_l = 1.0;  // per-example gradient norm bound
  double smoothness = 0.25;   // per-example max Hessian eigenvalue
  double lambda_reg = 0.0;    // (lambda_reg/2)||theta||^2 regularizer
};

// Logistic loss with features clipped to norm <= R: L = R, smoothness R^2/4.
ErmProblem make_logistic_erm(int dim, double R = 1.0, double lambda_reg = 0.0);

// Quasi-Newton minimizer with backtracking line search, run to
// ||grad|| <= tol; throws SamplerError with the final gradient norm if it
// fails to converge within max_iter.
Vector minimize_bfgs(const std::function<double(const Vector&)>& f,
                     const std::function<Vector(const Vector&)>& grad,
                     Vector init, double tol = 1e-8,
                     std::int64_t max_iter = 10000);

// argmin of sum_i loss + (extra_quad/2)||theta||^2 + linear.theta
// + (lambda_reg/2)||theta||^2.  The non-private ERM solution is the
// extra_quad = 0, linear = 0 case.
Vector solve_erm(const ErmProblem& problem, const Dataset& data,
                 double extra_quad, const Vector* linear);

// Objective perturbation, Gaussian (eps, delta) variant: adds the quadratic
// (Delta/2)||theta||^2 with Delta = 2*smoothness/eps and a linear term b^T
// theta, b ~ N(0, beta^2 I) with beta = L sqrt(8 ln(2/delta) + 4 eps)/eps,
// then solves to high accuracy.  The draw of b precedes any data access.
Vector objpert_train(const ErmProblem& problem, const Dataset& data,
                     double epsilon, double delta, Rng& rng);

double objpert_beta(double L, double epsilon, double delta);
double objpert_extra_quad(double smoothness, double epsilon);

// Output perturbation via the Gaussian mechanism: non-private regularized
// argmin plus per-coordinate noise calibrated to the argmin sensitivity
// 2L/lambda_reg.  Requires lambda_reg > 0 and epsilon in (0,1).
Vector outpert_train(const ErmProblem& problem, const Dataset& data,
                     double epsilon, double delta, Rng& rng);

}  // namespace dpbayes

#endif  // DPBAYES_BASELINES_HPP_
