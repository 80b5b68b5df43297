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

#include "dpbayes/model.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>

#include "dpbayes/parallel.hpp"

namespace dpbayes {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

// 1 / (1 + e^z)
double neg_sigmoid(double z) {
  if (z > 35.0) return std::exp(-z);
  return 1.0 / (1.0 + std::exp(z));
}

double classification_label(const DataPoint& p) {
  if (!p.label) {
    throw std::invalid_argument("model: data point is missing a label");
  }
  const double y = *p.label;
  if (y != 1.0 && y != -1.0) {
    throw std::invalid_argument("model: classification label must be -1 or +1");
  }
  return y;
}

}  // namespace

ModelSpec LogisticModel::spec() const {
  if (dim < 1) throw ConfigError("logistic model: dimension must be >= 1");
  if (C <= 0) throw ConfigError("logistic model: C must be positive");
  if (R <= 0) throw ConfigError("logistic model: R must be positive");
  const double c2 = C * C;
  ModelSpec m;
  m.dim = dim;
  m.bound_b = softplus(C * R);
  m.bound_l = R;
  m.domain = Ball{Vector::Zero(dim), C};
  m.log_lik = [](const Vector& theta, const DataPoint& p) {
    const double y = classification_label(p);
    return -softplus(-y * theta.dot(p.features));
  };
  m.grad_log_lik = [](const Vector& theta, const DataPoint& p) -> Vector {
    const double y = classification_label(p);
    const double m_ = y * theta.dot(p.features);
    return (y * neg_sigmoid(m_)) * p.features;
  };
  m.log_prior = [c2](const Vector& theta) { return -theta.squaredNorm() / (2.0 * c2); };
  m.grad_log_prior = [c2](const Vector& theta) -> Vector { return -theta / c2; };
  return m;
}

ModelSpec make_logistic_model(int dim, double C, double R) {
  return LogisticModel{dim, C, R}.spec();
}

ModelSpec GaussianMeanModel::spec() const {
  if (noise_var <= 0) {
    throw ConfigError("gaussian mean model: noise_var must be positive");
  }
  if (prior_var <= 0) {
    throw ConfigError("gaussian mean model: prior_var must be positive");
  }
  const double nv = noise_var;
  const double prior_prec = std::isinf(prior_var) ? 0.0 : 1.0 / prior_var;
  ModelSpec m;
  m.dim = 1;
  m.log_lik = [nv](const Vector& theta, const DataPoint& p) {
    const double r = p.features[0] - theta[0];
    return -0.5 * std::log(2.0 * M_PI * nv) - r * r / (2.0 * nv);
  };
  m.grad_log_lik = [nv](const Vector& theta, const DataPoint& p) -> Vector {
    Vector g(1);
    g[0] = (p.features[0] - theta[0]) / nv;
    return g;
  };
  m.log_prior = [prior_prec](const Vector& theta) {
    return -0.5 * prior_prec * theta[0] * theta[0];
  };
  m.grad_log_prior = [prior_prec](const Vector& theta) -> Vector {
    Vector g(1);
    g[0] = -prior_prec * theta[0];
    return g;
  };
  return m;
}

std::pair<double, double> GaussianMeanModel::posterior(const Dataset& data) const {
  const double n = static_cast<double>(data.size());
  double sum = 0.0;
  for (const DataPoint& p : data.points) sum += p.features[0];
  const double prior_prec = std::isinf(prior_var) ? 0.0 : 1.0 / prior_var;
  const double prec = n / noise_var + prior_prec;
  const double mean = (sum / noise_var) / prec;
  return {mean, 1.0 / prec};
}

ModelSpec make_gaussian_mean_model(double prior_var, double noise_var) {
  return GaussianMeanModel{prior_var, noise_var}.spec();
}

double BetaBernoulliModel::bound_b() const { return -std::log(p_min); }

double BetaBernoulliModel::fisher_info(double theta) const {
  return 1.0 / (theta * (1.0 - theta));
}

ModelSpec BetaBernoulliModel::spec() const {
  if (a <= 0 || b <= 0) {
    throw ConfigError("beta-bernoulli model: a, b must be positive");
  }
  if (p_min <= 0 || p_min >= 0.5) {
    throw ConfigError("beta-bernoulli model: p_min must be in (0, 0.5)");
  }
  const double av = a;
  const double bv = b;
  ModelSpec m;
  m.dim = 1;
  m.bound_b = bound_b();
  m.bound_l = 1.0 / p_min;
  Vector center(1);
  center[0] = 0.5;
  m.domain = Ball{center, 0.5 - p_min};
  m.log_lik = [](const Vector& theta, const DataPoint& p) {
    const double x = p.features[0];
    return x * std::log(theta[0]) + (1.0 - x) * std::log1p(-theta[0]);
  };
  m.grad_log_lik = [](const Vector& theta, const DataPoint& p) -> Vector {
    const double x = p.features[0];
    Vector g(1);
    g[0] = x / theta[0] - (1.0 - x) / (1.0 - theta[0]);
    return g;
  };
  m.log_prior = [av, bv](const Vector& theta) {
    return (av - 1.0) * std::log(theta[0]) + (bv - 1.0) * std::log1p(-theta[0]);
  };
  m.grad_log_prior = [av, bv](const Vector& theta) -> Vector {
    Vector g(1);
    g[0] = (av - 1.0) / theta[0] - (bv - 1.0) / (1.0 - theta[0]);
    return g;
  };
  return m;
}

std::pair<double, double> BetaBernoulliModel::tempered_params(
    std::int64_t s, std::int64_t n, double rho) const {
  if (s < 0 || n < 0 || s > n) {
    throw std::invalid_argument("tempered_params: need 0 <= s <= n");
  }
  // Likelihood and prior are both raised to rho, so the Beta exponents are
  // rho*(s + a - 1) and rho*(n - s + b - 1).
  const double alpha = rho * (static_cast<double>(s) + a - 1.0) + 1.0;
  const double beta = rho * (static_cast<double>(n - s) + b - 1.0) + 1.0;
  return {alpha, beta};
}

namespace {

// Regularized incomplete beta at the two truncation endpoints.
struct TruncMass {
  double lo, hi;
};

TruncMass trunc_mass(double alpha, double beta, double p_min) {
  return {boost::math::ibeta(alpha, beta, p_min),
          boost::math::ibeta(alpha, beta, 1.0 - p_min)};
}

// E[X^k] of Beta(alpha,beta) truncated to [p_min, 1-p_min], via the identity
// x^k Beta(a,b) kernel = Beta(a+k,b) kernel times a ratio of beta functions.
double trunc_moment(double alpha, double beta, double p_min, int k) {
  const TruncMass m0 = trunc_mass(alpha, beta, p_min);
  const TruncMass mk = trunc_mass(alpha + k, beta, p_min);
  double ratio = 1.0;
  for (int j = 0; j < k; ++j) {
    ratio *= (alpha + j) / (alpha + beta + j);
  }
  return ratio * (mk.hi - mk.lo) / (m0.hi - m0.lo);
}

}  // namespace

double BetaBernoulliModel::truncated_mean(double alpha, double beta) const {
  return trunc_moment(alpha, beta, p_min, 1);
}

double BetaBernoulliModel::truncated_var(double alpha, double beta) const {
  const double m1 = trunc_moment(alpha, beta, p_min, 1);
  const double m2 = trunc_moment(alpha, beta, p_min, 2);
  return m2 - m1 * m1;
}

double BetaBernoulliModel::sample_truncated(double alpha, double beta,
                                            Rng& rng) const {
  const TruncMass m = trunc_mass(alpha, beta, p_min);
  const double u = m.lo + rand_uniform(rng) * (m.hi - m.lo);
  double x = boost::math::ibeta_inv(alpha, beta, u);
  if (x < p_min) x = p_min;
  if (x > 1.0 - p_min) x = 1.0 - p_min;
  return x;
}

ModelSpec make_beta_bernoulli_model(double a, double b, double p_min) {
  return BetaBernoulliModel{a, b, p_min}.spec();
}

ModelSpec LinearRegressionModel::spec() const {
  if (dim < 1) throw ConfigError("linear regression model: dimension >= 1");
  if (noise_var <= 0 || prior_var <= 0) {
    throw ConfigError("linear regression model: variances must be positive");
  }
  const double nv = noise_var;
  const double pv = prior_var;
  ModelSpec m;
  m.dim = dim;
  m.log_lik = [nv](const Vector& theta, const DataPoint& p) {
    if (!p.label) throw std::invalid_argument("linear regression: missing label");
    const double r = *p.label - theta.dot(p.features);
    return -0.5 * std::log(2.0 * M_PI * nv) - r * r / (2.0 * nv);
  };
  m.grad_log_lik = [nv](const Vector& theta, const DataPoint& p) -> Vector {
    const double r = *p.label - theta.dot(p.features);
    return (r / nv) * p.features;
  };
  m.log_prior = [pv](const Vector& theta) {
    return -theta.squaredNorm() / (2.0 * pv);
  };
  m.grad_log_prior = [pv](const Vector& theta) -> Vector { return -theta / pv; };
  return m;
}

std::pair<Vector, Matrix> LinearRegressionModel::posterior(
    const Dataset& data) const {
  Matrix prec = Matrix::Identity(dim, dim) / prior_var;
  Vector rhs = Vector::Zero(dim);
  for (const DataPoint& p : data.points) {
    prec += p.features * p.features.transpose() / noise_var;
    rhs += (*p.label / noise_var) * p.features;
  }
  const Matrix cov = prec.llt().solve(Matrix::Identity(dim, dim));
  return {cov * rhs, cov};
}

ModelSpec make_linear_regression_model(int dim, double noise_var,
                                       double prior_var) {
  return LinearRegressionModel{dim, noise_var, prior_var}.spec();
}

double log_posterior_unnorm(const ModelSpec& model, const Dataset& data,
                            const Vector& theta, double rho) {
  if (!model.in_domain(theta)) {
    throw std::domain_error("log_posterior_unnorm: theta outside domain");
  }
  const double lik = par::chunked_sum(
      data.points.size(),
      [&](std::size_t i) { return model.log_lik(theta, data.points[i]); });
  return rho * (lik + model.log_prior(theta));
}

Vector grad_log_posterior_minibatch(const ModelSpec& model, const Dataset& data,
                                    std::span<const std::int64_t> indices,
                                    const Vector& theta, double rho) {
  if (indices.empty()) {
    throw std::invalid_argument("grad_log_posterior_minibatch: empty index set");
  }
  if (!model.in_domain(theta)) {
    throw std::domain_error("grad_log_posterior_minibatch: theta outside domain");
  }
  const Vector lik_sum = par::chunked_vec_sum(
      indices.size(), model.dim, [&](std::size_t j, Vector& acc) {
        acc += model.grad_log_lik(theta, data.points[indices[j]]);
      });
  const double scale =
      static_cast<double>(data.size()) / static_cast<double>(indices.size());
  return rho * (model.grad_log_prior(theta) + scale * lik_sum);
}

Vector grad_log_posterior_full(const ModelSpec& model, const Dataset& data,
                               const Vector& theta, double rho) {
  if (!model.in_domain(theta)) {
    throw std::domain_error("grad_log_posterior_full: theta outside domain");
  }
  const Vector lik_sum = par::chunked_vec_sum(
      data.points.size(), model.dim, [&](std::size_t i, Vector& acc) {
        acc += model.grad_log_lik(theta, data.points[i]);
      });
  return rho * (model.grad_log_prior(theta) + lik_sum);
}

Dataset clip_dataset(const Dataset& data, double R) {
  if (R <= 0) throw std::invalid_argument("clip_dataset: R must be positive");
  Dataset out = data;
  out.norm_bound = R;
  for (DataPoint& p : out.points) {
    const double n = p.features.norm();
    if (n > R) p.features *= R / n;
  }
  return out;
}

}  // namespace dpbayes
