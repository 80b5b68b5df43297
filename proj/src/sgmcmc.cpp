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

#include "dpbayes/sgmcmc.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <ostream>

namespace dpbayes {

namespace {

constexpr double kDivergenceGuard = 1e6;

void check_sampler_config(const ModelSpec& model, const Dataset& data,
                          const SamplerConfig& cfg) {
  if (cfg.tau < 1) throw ConfigError("sgmcmc: tau must be >= 1");
  if (cfg.tau > data.size()) throw ConfigError("sgmcmc: tau exceeds dataset size");
  if (cfg.passes < 1) throw ConfigError("sgmcmc: passes must be >= 1");
  if (cfg.burn_in_fraction < 0 || cfg.burn_in_fraction >= 1) {
    throw ConfigError("sgmcmc: burn_in_fraction must be in [0,1)");
  }
  if (cfg.collect_every < 1) throw ConfigError("sgmcmc: collect_every >= 1");
  if (cfg.rho <= 0 || cfg.rho > 1) throw ConfigError("sgmcmc: rho in (0,1]");
  if (cfg.iterations(data.size()) < 1) {
    throw ConfigError("sgmcmc: N*passes/tau yields zero iterations");
  }
  (void)model;
}

// Uniform minibatches without replacement, fresh draw each iteration.
class MinibatchSampler {
 public:
  explicit MinibatchSampler(std::int64_t n) : pool_(static_cast<std::size_t>(n)) {
    std::iota(pool_.begin(), pool_.end(), std::int64_t{0});
  }

  std::span<const std::int64_t> draw(std::int64_t tau, Rng& rng) {
    const std::int64_t n = static_cast<std::int64_t>(pool_.size());
    for (std::int64_t j = 0; j < tau; ++j) {
      const std::int64_t k = rand_int(rng, j, n - 1);
      std::swap(pool_[static_cast<std::size_t>(j)],
                pool_[static_cast<std::size_t>(k)]);
    }
    return {pool_.data(), static_cast<std::size_t>(tau)};
  }

 private:
  std::vector<std::int64_t> pool_;
};

Vector minibatch_grad(const ModelSpec& model, const Dataset& data,
                      std::span<const std::int64_t> idx, const Vector& theta,
                      double rho) {
  Vector g = grad_log_posterior_minibatch(model, data, idx, theta, rho);
  if (!g.allFinite()) {
    throw SamplerError("sgmcmc: non-finite gradient estimate");
  }
  return g;
}

void guard_divergence(const Vector& v, const char* what) {
  if (!v.allFinite() || v.norm() > kDivergenceGuard) {
    throw SamplerError(std::string("sgmcmc: ") + what +
                       " diverged past the 1e6 guard");
  }
}

struct TraceBuilder {
  SampleTrace trace;
  std::int64_t burn_end;
  std::int64_t collect_every;

  void record(std::int64_t t, std::int64_t total, const Vector& theta,
              double eta, double noise_var) {
    if (t % collect_every != 0 && t != total) return;
    const Phase phase = t <= burn_end ? Phase::kBurnin : Phase::kSampling;
    trace.iterates.push_back({t, theta, eta, noise_var, phase});
  }
};

TraceBuilder make_builder(const SamplerConfig& cfg, std::int64_t iters) {
  TraceBuilder b;
  b.burn_end = static_cast<std::int64_t>(cfg.burn_in_fraction *
                                         static_cast<double>(iters));
  b.collect_every = cfg.collect_every;
  b.trace.iterates.reserve(
      static_cast<std::size_t>(iters / cfg.collect_every + 2));
  return b;
}

}  // namespace

Schedule Schedule::constant(double eta0) {
  if (eta0 <= 0) throw ConfigError("schedule: eta0 must be positive");
  Schedule s;
  s.kind = Kind::kConstant;
  s.eta0 = eta0;
  return s;
}

Schedule Schedule::decay(double a, double b, double gamma) {
  if (a <= 0 || b < 0) throw ConfigError("schedule: need a > 0, b >= 0");
  if (gamma <= 0.5 || gamma > 1.0) {
    throw ConfigError("schedule: decay exponent gamma must be in (0.5, 1]");
  }
  Schedule s;
  s.kind = Kind::kDecay;
  s.a = a;
  s.b = b;
  s.gamma = gamma;
  return s;
}

Schedule Schedule::decay_floor(double a, double b, double gamma, double eta0) {
  Schedule s = decay(a, b, gamma);
  if (eta0 <= 0) throw ConfigError("schedule: floor eta0 must be positive");
  s.kind = Kind::kDecayFloor;
  s.eta0 = eta0;
  return s;
}

double Schedule::at(std::int64_t t) const {
  switch (kind) {
    case Kind::kConstant:
      return eta0;
    case Kind::kDecay:
      return a * std::pow(b + static_cast<double>(t), -gamma);
    case Kind::kDecayFloor:
      return std::max(a * std::pow(b + static_cast<double>(t), -gamma), eta0);
  }
  return eta0;
}

Vector SampleTrace::posterior_mean() const {
  if (iterates.empty()) throw std::invalid_argument("trace: empty");
  Vector sum = Vector::Zero(iterates[0].theta.size());
  std::int64_t n = 0;
  for (const Iterate& it : iterates) {
    if (it.phase == Phase::kSampling) {
      sum += it.theta;
      ++n;
    }
  }
  if (n == 0) {
    for (const Iterate& it : iterates) sum += it.theta;
    n = static_cast<std::int64_t>(iterates.size());
  }
  return sum / static_cast<double>(n);
}

void SampleTrace::write_csv(std::ostream& out) const {
  const int d = iterates.empty() ? 0 : static_cast<int>(iterates[0].theta.size());
  out << "t,phase,eta,noise_var";
  for (int j = 0; j < d; ++j) out << ",theta_" << j;
  out << '\n';
  out.precision(17);
  for (const Iterate& it : iterates) {
    out << it.t << ',' << (it.phase == Phase::kBurnin ? "burnin" : "sampling")
        << ',' << it.eta << ',' << it.noise_var;
    for (int j = 0; j < d; ++j) out << ',' << it.theta[j];
    out << '\n';
  }
}

// --- SGLD ------------------------------------------------------------

namespace {

Vector sgld_update(const ModelSpec& model, const Dataset& data,
                   const Vector& theta, double eta, double noise_var,
                   std::span<const std::int64_t> idx, double rho, Rng& rng) {
  const Vector g = minibatch_grad(model, data, idx, theta, rho);
  Vector next = theta + 0.5 * eta * g;
  const double sd = std::sqrt(noise_var);
  for (int j = 0; j < next.size(); ++j) next[j] += sd * rand_normal(rng);
  next = model.project(next);
  guard_divergence(next, "theta");
  return next;
}

}  // namespace

Vector sgld_step(const ModelSpec& model, const Dataset& data,
                 const Vector& theta, std::int64_t t, const SamplerConfig& cfg,
                 Rng& rng) {
  check_sampler_config(model, data, cfg);
  const double eta = cfg.schedule.at(t);
  MinibatchSampler mb(data.size());
  return sgld_update(model, data, theta, eta, eta, mb.draw(cfg.tau, rng), cfg.rho,
                     rng);
}

SampleTrace sgld_run(const ModelSpec& model, const Dataset& data,
                     const SamplerConfig& cfg, Vector theta1) {
  check_sampler_config(model, data, cfg);
  const std::int64_t iters = cfg.iterations(data.size());
  TraceBuilder b = make_builder(cfg, iters);
  Rng rng = make_rng(cfg.seed);
  MinibatchSampler mb(data.size());
  Vector theta = model.project(std::move(theta1));
  for (std::int64_t t = 1; t <= iters; ++t) {
    const double eta = cfg.schedule.at(t);
    theta = sgld_update(model, data, theta, eta, eta, mb.draw(cfg.tau, rng),
                        cfg.rho, rng);
    b.record(t, iters, theta, eta, eta);
  }
  return std::move(b.trace);
}

SampleTrace dp_sgld_run(const ModelSpec& model, const Dataset& data,
                        const PrivateSamplerConfig& cfg, Vector theta1) {
  check_sampler_config(model, data, cfg.base);
  if (!model.bound_l) {
    throw ConfigError("dp-sgld: model declares no gradient bound L");
  }
  const std::int64_t N = data.size();
  const std::int64_t T = cfg.base.passes;
  const std::int64_t tau = cfg.base.tau;
  if (!check_T_condition(N, T, tau, cfg.epsilon, cfg.delta)) {
    throw PrivacyError(
        "dp-sgld: T-condition violated; need T >= " +
        std::to_string(T_condition_threshold(N, tau, cfg.epsilon, cfg.delta)) +
        " data passes, got " + std::to_string(T));
  }
  const double L = *model.bound_l;
  const std::int64_t iters = cfg.base.iterations(N);
  TraceBuilder b = make_builder(cfg.base, iters);
  Rng rng = make_rng(cfg.base.seed);
  MinibatchSampler mb(N);
  Vector theta = model.project(std::move(theta1));
  for (std::int64_t t = 1; t <= iters; ++t) {
    const double eta = cfg.base.schedule.at(t);
    const double noise_var =
        sgld_noise_variance(N, T, tau, L, cfg.epsilon, cfg.delta, eta) *
        cfg.debug_noise_scale;
    theta = sgld_update(model, data, theta, eta, noise_var,
                        mb.draw(tau, rng), cfg.base.rho, rng);
    b.record(t, iters, theta, eta, noise_var);
  }
  b.trace.events.push_back({"dp-sgld", {cfg.epsilon, cfg.delta}});
  return std::move(b.trace);
}

Schedule alpha_phase_schedule(double alpha, std::int64_t N, std::int64_t T,
                              std::int64_t tau, double L, double epsilon,
                              double delta) {
  if (alpha <= 0 || alpha >= 1) {
    throw ConfigError("alpha_phase_schedule: alpha must be in (0,1)");
  }
  const double n = static_cast<double>(N);
  const double t = static_cast<double>(T);
  const double tt = static_cast<double>(tau);
  const double k = 128.0 * L * L * std::log(2.5 * n * t / (tt * delta)) *
                   std::log(2.0 / delta);
  return Schedule::decay(alpha * epsilon * epsilon / k, 0.0, 1.0);
}

// --- SGHMC -----------------------------------------------------------

namespace {

HmcState sghmc_update(const ModelSpec& model, const Dataset& data,
                      const HmcState& state, double eta,
                      std::span<const std::int64_t> idx, double rho, double a,
                      double noise_var, Rng& rng) {
  HmcState next = state;
  next.theta = model.project(state.theta + state.v);
  const Vector g = minibatch_grad(model, data, idx, next.theta, rho);
  const double sd = std::sqrt(noise_var);
  next.v = state.v + eta * g - a * state.v;
  for (int j = 0; j < next.v.size(); ++j) next.v[j] += sd * rand_normal(rng);
  guard_divergence(next.theta, "theta");
  guard_divergence(next.v, "momentum");
  return next;
}

}  // namespace

HmcState sghmc_step(const ModelSpec& model, const Dataset& data,
                    const HmcState& state, std::int64_t t,
                    const SamplerConfig& cfg, double a, double b_hat,
                    Rng& rng) {
  check_sampler_config(model, data, cfg);
  if (!(a > b_hat && b_hat >= 0)) {
    throw ConfigError("sghmc: need a > b_hat >= 0");
  }
  const double eta = cfg.schedule.at(t);
  MinibatchSampler mb(data.size());
  return sghmc_update(model, data, state, eta, mb.draw(cfg.tau, rng), cfg.rho, a,
                      2.0 * (a - b_hat) * eta, rng);
}

namespace {

SampleTrace sghmc_run_impl(const ModelSpec& model, const Dataset& data,
                           const SamplerConfig& cfg, double a, double b_hat,
                           Vector theta1, double noise_scale,
                           const LedgerEvent* event) {
  check_sampler_config(model, data, cfg);
  if (!(a > b_hat && b_hat >= 0)) {
    throw ConfigError("sghmc: need a > b_hat >= 0");
  }
  const std::int64_t iters = cfg.iterations(data.size());
  TraceBuilder b = make_builder(cfg, iters);
  Rng rng = make_rng(cfg.seed);
  MinibatchSampler mb(data.size());
  HmcState state{model.project(std::move(theta1)), Vector::Zero(model.dim), 0.0};
  for (std::int64_t t = 1; t <= iters; ++t) {
    const double eta = cfg.schedule.at(t);
    const double noise_var = 2.0 * (a - b_hat) * eta * noise_scale;
    state = sghmc_update(model, data, state, eta, mb.draw(cfg.tau, rng), cfg.rho,
                         a, noise_var, rng);
    b.record(t, iters, state.theta, eta, noise_var);
  }
  if (event) b.trace.events.push_back(*event);
  return std::move(b.trace);
}

}  // namespace

SampleTrace sghmc_run(const ModelSpec& model, const Dataset& data,
                      const SamplerConfig& cfg, double a, double b_hat,
                      Vector theta1) {
  return sghmc_run_impl(model, data, cfg, a, b_hat, std::move(theta1), 1.0,
                        nullptr);
}

bool dp_sghmc_check(double a, double b_hat, double eta_t, std::int64_t N,
                    std::int64_t T, std::int64_t tau, double L, double epsilon,
                    double delta) {
  const double coeff = sgld_privacy_coefficient(N, T, tau, L, epsilon, delta);
  return 2.0 * (a - b_hat) / eta_t >= coeff;
}

namespace {

void require_private_preconditions(const ModelSpec& model, const Dataset& data,
                                   const PrivateSamplerConfig& cfg,
                                   const char* name) {
  if (!model.bound_l) {
    throw ConfigError(std::string(name) + ": model declares no gradient bound L");
  }
  if (!check_T_condition(data.size(), cfg.base.passes, cfg.base.tau, cfg.epsilon,
                         cfg.delta)) {
    throw PrivacyError(
        std::string(name) + ": T-condition violated; need T >= " +
        std::to_string(T_condition_threshold(data.size(), cfg.base.tau,
                                             cfg.epsilon, cfg.delta)));
  }
}

}  // namespace

SampleTrace dp_sghmc_run(const ModelSpec& model, const Dataset& data,
                         const PrivateSamplerConfig& cfg, double a,
                         double b_hat, Vector theta1) {
  check_sampler_config(model, data, cfg.base);
  require_private_preconditions(model, data, cfg, "dp-sghmc");
  const double L = *model.bound_l;
  const std::int64_t iters = cfg.base.iterations(data.size());
  for (std::int64_t t = 1; t <= iters; ++t) {
    if (!dp_sghmc_check(a, b_hat, cfg.base.schedule.at(t), data.size(),
                        cfg.base.passes, cfg.base.tau, L, cfg.epsilon,
                        cfg.delta)) {
      throw PrivacyError(
          "dp-sghmc: friction condition 2(a-b_hat)/eta below the privacy "
          "coefficient at iteration " + std::to_string(t));
    }
  }
  LedgerEvent event{"dp-sghmc", {cfg.epsilon, cfg.delta}};
  return sghmc_run_impl(model, data, cfg.base, a, b_hat, std::move(theta1),
                        cfg.debug_noise_scale, &event);
}

// --- SGNHT -----------------------------------------------------------

namespace {

HmcState sgnht_update(const ModelSpec& model, const Dataset& data,
                      const HmcState& state, double eta,
                      std::span<const std::int64_t> idx, double rho,
                      double noise_var, Rng& rng) {
  const int d = model.dim;
  HmcState next = state;
  next.theta = model.project(state.theta + state.v);
  const Vector g = minibatch_grad(model, data, idx, next.theta, rho);
  const double sd = std::sqrt(noise_var);
  next.v = state.v - state.alpha * state.v + eta * g;
  for (int j = 0; j < d; ++j) next.v[j] += sd * rand_normal(rng);
  next.alpha =
      state.alpha + (next.v.squaredNorm() / static_cast<double>(d) - eta);
  guard_divergence(next.theta, "theta");
  guard_divergence(next.v, "momentum");
  return next;
}

SampleTrace sgnht_run_impl(const ModelSpec& model, const Dataset& data,
                           const SamplerConfig& cfg, double a, Vector theta1,
                           double noise_scale, const LedgerEvent* event) {
  check_sampler_config(model, data, cfg);
  if (a <= 0) throw ConfigError("sgnht: friction a must be positive");
  const std::int64_t iters = cfg.iterations(data.size());
  TraceBuilder b = make_builder(cfg, iters);
  Rng rng = make_rng(cfg.seed);
  MinibatchSampler mb(data.size());
  HmcState state{model.project(std::move(theta1)), Vector::Zero(model.dim), a};
  for (std::int64_t t = 1; t <= iters; ++t) {
    const double eta = cfg.schedule.at(t);
    const double noise_var = 2.0 * a * eta * noise_scale;
    state = sgnht_update(model, data, state, eta, mb.draw(cfg.tau, rng), cfg.rho,
                         noise_var, rng);
    b.record(t, iters, state.theta, eta, noise_var);
  }
  if (event) b.trace.events.push_back(*event);
  return std::move(b.trace);
}

}  // namespace

HmcState sgnht_step(const ModelSpec& model, const Dataset& data,
                    const HmcState& state, std::int64_t t,
                    const SamplerConfig& cfg, double a, Rng& rng) {
  check_sampler_config(model, data, cfg);
  if (a <= 0) throw ConfigError("sgnht: friction a must be positive");
  const double eta = cfg.schedule.at(t);
  MinibatchSampler mb(data.size());
  return sgnht_update(model, data, state, eta, mb.draw(cfg.tau, rng), cfg.rho,
                      2.0 * a * eta, rng);
}

SampleTrace sgnht_run(const ModelSpec& model, const Dataset& data,
                      const SamplerConfig& cfg, double a, Vector theta1) {
  return sgnht_run_impl(model, data, cfg, a, std::move(theta1), 1.0, nullptr);
}

bool dp_sgnht_check(double a, double eta_t, std::int64_t N, std::int64_t T,
                    std::int64_t tau, double L, double epsilon, double delta) {
  return dp_sghmc_check(a, 0.0, eta_t, N, T, tau, L, epsilon, delta);
}

SampleTrace dp_sgnht_run(const ModelSpec& model, const Dataset& data,
                         const PrivateSamplerConfig& cfg, double a,
                         Vector theta1) {
  check_sampler_config(model, data, cfg.base);
  require_private_preconditions(model, data, cfg, "dp-sgnht");
  const double L = *model.bound_l;
  const std::int64_t iters = cfg.base.iterations(data.size());
  for (std::int64_t t = 1; t <= iters; ++t) {
    if (!dp_sgnht_check(a, cfg.base.schedule.at(t), data.size(),
                        cfg.base.passes, cfg.base.tau, L, cfg.epsilon,
                        cfg.delta)) {
      throw PrivacyError(
          "dp-sgnht: thermostat friction 2a/eta below the privacy coefficient "
          "at iteration " + std::to_string(t));
    }
  }
  LedgerEvent event{"dp-sgnht", {cfg.epsilon, cfg.delta}};
  return sgnht_run_impl(model, data, cfg.base, a, std::move(theta1),
                        cfg.debug_noise_scale, &event);
}

// --- SGFS ------------------------------------------------------------

Matrix psd_project(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric);
  const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clipped.asDiagonal() *
         eig.eigenvectors().transpose();
}

Matrix private_covariance(const std::vector<Vector>& grads, double F_norm,
                          double sigma2, Rng& rng) {
  if (grads.size() < 2) {
    throw std::invalid_argument("private_covariance: need at least 2 gradients");
  }
  const int d = static_cast<int>(grads[0].size());
  const double n = static_cast<double>(grads.size());
  Vector mean = Vector::Zero(d);
  for (const Vector& g : grads) mean += g;
  mean /= n;
  Matrix s = Matrix::Zero(d, d);
  for (const Vector& g : grads) {
    const Vector c = g - mean;
    s += c * c.transpose();
  }
  s /= (n - 1.0);
  const double w_sd = 7.0 * F_norm * F_norm * std::sqrt(sigma2);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double w = w_sd * rand_normal(rng);
      s(i, j) += w;
      if (j != i) s(j, i) += w;
    }
  }
  return psd_project(s);
}

SampleTrace dp_sgfs_run(const ModelSpec& model, const Dataset& data,
                        const PrivateSamplerConfig& cfg, const Matrix& F,
                        const std::function<double(std::int64_t)>& kappa,
                        Vector theta1) {
  check_sampler_config(model, data, cfg.base);
  require_private_preconditions(model, data, cfg, "dp-sgfs");
  if (cfg.base.tau <= 4) {
    throw PrivacyError(
        "dp-sgfs: covariance sensitivity bound requires minibatches of size "
        "> 4");
  }
  if (F.rows() != model.dim || F.cols() != model.dim) {
    throw ConfigError("dp-sgfs: F must be d x d");
  }
  const std::int64_t N = data.size();
  const std::int64_t T = cfg.base.passes;
  const std::int64_t tau = cfg.base.tau;
  const double nN = static_cast<double>(N);
  const double nT = static_cast<double>(T);
  const double ntau = static_cast<double>(tau);
  const double sigma2 = 32.0 * nT * std::log(2.5 * nN * nT / (ntau * cfg.delta)) *
                        std::log(2.0 / cfg.delta) /
                        (nN * ntau * cfg.epsilon * cfg.epsilon) *
                        cfg.debug_noise_scale;
  const double f_norm = F.jacobiSvd().singularValues()(0);

  const std::int64_t iters = cfg.base.iterations(N);
  TraceBuilder b = make_builder(cfg.base, iters);
  Rng rng = make_rng(cfg.base.seed);
  MinibatchSampler mb(N);
  Vector theta = model.project(std::move(theta1));
  Matrix info_est = Matrix::Zero(model.dim, model.dim);
  bool warned_singular = false;

  std::vector<Vector> grads(static_cast<std::size_t>(tau));
  for (std::int64_t t = 1; t <= iters; ++t) {
    const double eta = cfg.base.schedule.at(t);
    const auto idx = mb.draw(tau, rng);
    Vector gbar = Vector::Zero(model.dim);
    for (std::int64_t j = 0; j < tau; ++j) {
      grads[static_cast<std::size_t>(j)] =
          model.grad_log_lik(theta, data.points[idx[static_cast<std::size_t>(j)]]);
      gbar += grads[static_cast<std::size_t>(j)];
    }
    gbar /= ntau;
    if (!gbar.allFinite()) throw SamplerError("dp-sgfs: non-finite gradient");

    const double z_var = std::max(sigma2, 1.0 / (nN * nN * eta));
    const Vector z = rand_normal_vec(rng, model.dim, std::sqrt(z_var));
    const Vector g_tilde = gbar + F * z;
    const Matrix v = private_covariance(grads, f_norm, sigma2, rng);
    const double k = kappa ? kappa(t) : 1.0 / static_cast<double>(t);
    info_est = (1.0 - k) * info_est + k * v;

    Matrix precond = ((ntau + nN) * nN / ntau) * info_est +
                     (4.0 / eta) * (F * F.transpose());
    Eigen::LDLT<Matrix> solver(precond);
    if (solver.info() != Eigen::Success || !solver.isPositive()) {
      if (!warned_singular) {
        std::cerr << "dp-sgfs: singular preconditioner; regularizing with "
                     "1e-10 I\n";
        warned_singular = true;
      }
      precond += 1e-10 * Matrix::Identity(model.dim, model.dim);
      solver.compute(precond);
    }
    const Vector drift =
        cfg.base.rho * (model.grad_log_prior(theta) + nN * g_tilde);
    theta = model.project(theta + 2.0 * solver.solve(drift));
    guard_divergence(theta, "theta");
    b.record(t, iters, theta, eta, z_var);
  }
  b.trace.events.push_back({"dp-sgfs", {2.0 * cfg.epsilon, 2.0 * cfg.delta}});
  return std::move(b.trace);
}

// --- Hybrid ----------------------------------------------------------

SampleTrace hybrid_run(const ModelSpec& model, const Dataset& data,
                       double epsilon, double delta, const OpsConfig& ops_cfg,
                       const SamplerConfig& sg_cfg) {
  if (epsilon <= 0) throw ConfigError("hybrid: epsilon must be positive");
  OpsConfig phase1 = ops_cfg;
  phase1.epsilon = epsilon / 2.0;
  const OpsResult start = ops_sample(model, data, phase1);

  SampleTrace trace;
  if (sg_cfg.passes > 0) {
    PrivateSamplerConfig pcfg;
    pcfg.base = sg_cfg;
    pcfg.base.burn_in_fraction = 0.0;  // already in the posterior's bulk
    pcfg.epsilon = epsilon / 2.0;
    pcfg.delta = delta;
    trace = dp_sgld_run(model, data, pcfg, start.theta);
    trace.events.clear();
  }
  trace.iterates.insert(trace.iterates.begin(),
                        {0, start.theta, 0.0, 0.0, Phase::kSampling});
  trace.events.push_back({"ops", {epsilon / 2.0, 0.0}});
  trace.events.push_back({"dp-sgld", {epsilon / 2.0, delta}});
  return trace;
}

}  // namespace dpbayes
