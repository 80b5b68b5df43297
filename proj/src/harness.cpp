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

#include "dpbayes/harness.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <ostream>

#include "dpbayes/data.hpp"
#include "dpbayes/parallel.hpp"

namespace dpbayes {

namespace {

double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

}  // namespace

double accuracy(const Vector& theta, const Dataset& test) {
  if (test.points.empty()) throw std::invalid_argument("accuracy: empty test set");
  double hits = 0.0;
  for (const DataPoint& p : test.points) {
    if (!p.label) throw std::invalid_argument("accuracy: unlabeled data");
    const double m = theta.dot(p.features);
    if (m == 0.0) {
      hits += 0.5;
    } else if ((m > 0.0) == (*p.label > 0.0)) {
      hits += 1.0;
    }
  }
  return hits / static_cast<double>(test.size());
}

double nll(const Vector& theta, const Dataset& test) {
  if (test.points.empty()) throw std::invalid_argument("nll: empty test set");
  double total = 0.0;
  for (const DataPoint& p : test.points) {
    if (!p.label) throw std::invalid_argument("nll: unlabeled data");
    total += softplus(-*p.label * theta.dot(p.features));
  }
  return total / static_cast<double>(test.size());
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kOps: return "ops";
    case Method::kHybrid: return "hybrid";
    case Method::kDpSgld: return "dp-sgld";
    case Method::kObjPert: return "objpert";
    case Method::kOutPert: return "outpert";
    case Method::kNonPrivateErm: return "non-private-erm";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "ops") return Method::kOps;
  if (name == "hybrid") return Method::kHybrid;
  if (name == "dp-sgld" || name == "sgld") return Method::kDpSgld;
  if (name == "objpert") return Method::kObjPert;
  if (name == "outpert") return Method::kOutPert;
  if (name == "non-private-erm" || name == "erm") return Method::kNonPrivateErm;
  return std::nullopt;
}

namespace {

struct CellOutput {
  Vector theta;
  PrivacyBudget charged;
};

std::int64_t sqrt_default(std::int64_t configured, std::int64_t n) {
  if (configured > 0) return configured;
  return static_cast<std::int64_t>(
      std::ceil(std::sqrt(static_cast<double>(n))));
}

CellOutput run_cell_method(Method method, const BenchmarkConfig& cfg,
                           const Dataset& train, double eps, double delta,
                           std::uint64_t mech_seed) {
  const int d = train.feature_dim();
  const double R = cfg.clip_radius;
  const ModelSpec model = make_logistic_model(d, cfg.C, R);
  const ErmProblem erm = make_logistic_erm(d, R, cfg.lambda_reg);
  Rng rng = make_rng(mech_seed);

  const std::int64_t n = train.size();
  const std::int64_t sg_tau = sqrt_default(cfg.sg_tau, n);
  const std::int64_t sg_passes = sqrt_default(cfg.sg_passes, n);

  auto sg_config = [&](double phase_eps) {
    SamplerConfig sg;
    sg.tau = sg_tau;
    sg.passes = sg_passes;
    double eta0 = cfg.sg_eta0;
    if (eta0 <= 0) {
      // Half the crossover stepsize: the eta floor binds, so the run is
      // exact SGLD at every iteration.
      eta0 = 0.5 / sgld_privacy_coefficient(n, sg_passes, sg_tau, R, phase_eps,
                                            delta);
    }
    sg.schedule = Schedule::constant(eta0);
    sg.seed = derive_seed(mech_seed, 0x5eed);
    return sg;
  };

  switch (method) {
    case Method::kNonPrivateErm: {
      return {solve_erm(erm, train, 0.0, nullptr), {0.0, 0.0}};
    }
    case Method::kOps: {
      OpsConfig ops = cfg.ops;
      ops.epsilon = eps;
      ops.seed = mech_seed;
      const OpsResult res = ops_sample(model, train, ops);
      return {res.theta, res.charge};
    }
    case Method::kHybrid: {
      OpsConfig ops = cfg.ops;
      ops.seed = mech_seed;
      const SampleTrace trace =
          hybrid_run(model, train, eps, delta, ops, sg_config(eps / 2.0));
      PrivacyBudget charged;
      for (const LedgerEvent& e : trace.events) {
        charged.epsilon += e.budget.epsilon;
        charged.delta += e.budget.delta;
      }
      return {trace.posterior_mean(), charged};
    }
    case Method::kDpSgld: {
      PrivateSamplerConfig pcfg;
      pcfg.base = sg_config(eps);
      pcfg.base.burn_in_fraction = 0.5;
      pcfg.epsilon = eps;
      pcfg.delta = delta;
      if (cfg.sg_eta0 <= 0) {
        // Phase-transition decay: privacy noise dominates for the first
        // half of the run, exact SGLD for the second.
        pcfg.base.schedule = alpha_phase_schedule(
            0.5, n, sg_passes, sg_tau, R, eps, delta);
      }
      const SampleTrace trace =
          dp_sgld_run(model, train, pcfg, Vector::Zero(d));
      return {trace.posterior_mean(), {eps, delta}};
    }
    case Method::kObjPert: {
      return {objpert_train(erm, train, eps, delta, rng), {eps, delta}};
    }
    case Method::kOutPert: {
      return {outpert_train(erm, train, eps, delta, rng), {eps, delta}};
    }
  }
  throw ConfigError("run_benchmark: unknown method");
}

}  // namespace

BenchmarkResult run_benchmark(const std::vector<Method>& methods,
                              const Dataset& data,
                              const std::vector<double>& eps_grid, double delta,
                              const std::vector<std::uint64_t>& seeds,
                              const BenchmarkConfig& cfg) {
  if (methods.empty() || eps_grid.empty() || seeds.empty()) {
    throw ConfigError("run_benchmark: methods, eps grid and seeds must be "
                      "nonempty");
  }
  struct Cell {
    Method method;
    std::size_t eps_idx;
    std::size_t seed_idx;
  };
  std::vector<Cell> cells;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t ei = 0; ei < eps_grid.size(); ++ei) {
      for (std::size_t si = 0; si < seeds.size(); ++si) {
        cells.push_back({methods[mi], ei, si});
      }
    }
  }
  BenchmarkResult result;
  result.rows.resize(cells.size());

  par::parallel_for(static_cast<std::int64_t>(cells.size()), [&](std::int64_t c) {
    const Cell& cell = cells[static_cast<std::size_t>(c)];
    const double eps = eps_grid[cell.eps_idx];
    const std::uint64_t seed = seeds[cell.seed_idx];
    BenchmarkRow& row = result.rows[static_cast<std::size_t>(c)];
    row.method = method_name(cell.method);
    row.epsilon = eps;
    const bool needs_delta = cell.method != Method::kOps &&
                             cell.method != Method::kNonPrivateErm;
    row.delta = needs_delta ? delta : 0.0;
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      // The split depends only on the seed, so all methods at a given seed
      // share the same train/test data.
      auto [train, test] = train_test_split(data, cfg.train_fraction,
                                            derive_seed(cfg.master_seed, seed));
      if (cfg.standardize) {
        auto [train_z, transform] = standardize_and_clip(train, cfg.clip_radius);
        train = std::move(train_z);
        test = transform.apply(test);
      } else {
        train = clip_dataset(train, cfg.clip_radius);
        test = clip_dataset(test, cfg.clip_radius);
      }
      const std::uint64_t mech_seed =
          derive_seed(cfg.master_seed, seed,
                      cell.eps_idx * 16 + static_cast<std::size_t>(cell.method));
      const CellOutput out =
          run_cell_method(cell.method, cfg, train, eps, delta, mech_seed);
      row.test_accuracy = accuracy(out.theta, test);
      row.test_nll = nll(out.theta, test);
      row.ledger_epsilon = out.charged.epsilon;
      row.ledger_delta = out.charged.delta;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.test_accuracy = std::nan("");
      row.test_nll = std::nan("");
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.runtime_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
  });
  return result;
}

void BenchmarkResult::write_csv(std::ostream& out) const {
  out << "method,epsilon,delta,seed,test_accuracy,test_nll,runtime_ms,"
         "ledger_epsilon,ledger_delta,error\n";
  out.precision(12);
  for (const BenchmarkRow& r : rows) {
    out << r.method << ',' << r.epsilon << ',' << r.delta << ',' << r.seed
        << ',' << r.test_accuracy << ',' << r.test_nll << ',' << r.runtime_ms
        << ',' << r.ledger_epsilon << ',' << r.ledger_delta << ',' << r.error
        << '\n';
  }
}

void BenchmarkResult::write_summary_csv(std::ostream& out) const {
  struct Agg {
    std::vector<double> acc, nll;
  };
  std::map<std::pair<std::string, double>, Agg> groups;
  for (const BenchmarkRow& r : rows) {
    if (!r.error.empty()) continue;
    Agg& g = groups[{r.method, r.epsilon}];
    g.acc.push_back(r.test_accuracy);
    g.nll.push_back(r.test_nll);
  }
  auto mean_se = [](const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var = n > 1 ? var / (n - 1.0) : 0.0;
    return std::pair<double, double>{mean, std::sqrt(var / n)};
  };
  out << "method,epsilon,n_seeds,mean_accuracy,se_accuracy,mean_nll,se_nll\n";
  out.precision(12);
  for (const auto& [key, agg] : groups) {
    const auto [acc_mean, acc_se] = mean_se(agg.acc);
    const auto [nll_mean, nll_se] = mean_se(agg.nll);
    out << key.first << ',' << key.second << ',' << agg.acc.size() << ','
        << acc_mean << ',' << acc_se << ',' << nll_mean << ',' << nll_se
        << '\n';
  }
}

double BenchmarkResult::mean_accuracy(Method m, double epsilon) const {
  const std::string name = method_name(m);
  double sum = 0.0;
  std::int64_t n = 0;
  for (const BenchmarkRow& r : rows) {
    if (r.method == name && r.epsilon == epsilon && r.error.empty()) {
      sum += r.test_accuracy;
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("mean_accuracy: no matching rows");
  return sum / static_cast<double>(n);
}

double are_estimate(const BetaBernoulliModel& model, double theta0,
                    std::int64_t n, double epsilon, std::int64_t replicates,
                    std::uint64_t seed) {
  if (replicates < 2) throw std::invalid_argument("are_estimate: replicates >= 2");
  const double rho = ops_scale(model.bound_b(), epsilon);
  std::vector<double> samples(static_cast<std::size_t>(replicates));
  par::parallel_for(replicates, [&](std::int64_t r) {
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::int64_t s = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      if (rand_uniform(rng) < theta0) ++s;
    }
    const auto [alpha, beta] = model.tempered_params(s, n, rho);
    samples[static_cast<std::size_t>(r)] =
        model.sample_truncated(alpha, beta, rng);
  });
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(replicates);
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(replicates - 1);
  return static_cast<double>(n) * model.fisher_info(theta0) * var;
}

MomentReport posterior_moment_check(const SampleTrace& trace,
                                    double oracle_mean, double oracle_var,
                                    double tol) {
  std::vector<double> series;
  for (const auto& it : trace.iterates) {
    if (it.phase == Phase::kSampling) series.push_back(it.theta[0]);
  }
  if (series.size() < 1000) {
    throw std::invalid_argument(
        "posterior_moment_check: need >= 1000 post-burn-in iterates");
  }
  constexpr int kBatches = 30;
  const std::size_t batch = series.size() / kBatches;
  const std::size_t used = batch * kBatches;
  double mean = 0.0;
  for (std::size_t i = 0; i < used; ++i) mean += series[i];
  mean /= static_cast<double>(used);
  double var = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    var += (series[i] - mean) * (series[i] - mean);
  }
  var /= static_cast<double>(used - 1);

  // Batch means for the mean; batch second moments (about the global mean)
  // for the variance.  Standard errors come from the spread across batches.
  std::vector<double> bm(kBatches, 0.0), bv(kBatches, 0.0);
  for (int k = 0; k < kBatches; ++k) {
    for (std::size_t i = k * batch; i < (k + 1) * batch; ++i) {
      bm[k] += series[i];
      bv[k] += (series[i] - mean) * (series[i] - mean);
    }
    bm[k] /= static_cast<double>(batch);
    bv[k] /= static_cast<double>(batch);
  }
  auto spread_se = [&](const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= kBatches;
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= (kBatches - 1);
    return std::sqrt(v / kBatches);
  };
  MomentReport rep;
  rep.trace_mean = mean;
  rep.trace_var = var;
  rep.se_mean = spread_se(bm);
  rep.se_var = spread_se(bv);
  rep.z_mean = std::abs(mean - oracle_mean) / rep.se_mean;
  rep.z_var = std::abs(var - oracle_var) / rep.se_var;
  rep.mean_ok = rep.z_mean <= tol;
  rep.var_ok = rep.z_var <= tol;
  return rep;
}

NoiseAudit audit_trace_noise(const SampleTrace& trace,
                             const NoisePlanner& planner) {
  NoiseAudit audit;
  audit.ok = true;
  for (const auto& it : trace.iterates) {
    if (it.t == 0) continue;  // hybrid phase-1 marker carries no noise
    const double expected = planner(it.t, it.eta);
    const double diff = std::abs(it.noise_var - expected);
    audit.max_abs_diff = std::max(audit.max_abs_diff, diff);
    if (it.noise_var != expected) audit.ok = false;
    ++audit.checked;
  }
  return audit;
}

NoisePlanner sgld_noise_planner(std::int64_t N, std::int64_t T,
                                std::int64_t tau, double L, double epsilon,
                                double delta) {
  return [=](std::int64_t /*t*/, double eta) {
    return sgld_noise_variance(N, T, tau, L, epsilon, delta, eta);
  };
}

}  // namespace dpbayes
