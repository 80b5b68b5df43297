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
// Command-line driver.  Exit codes are stable API:
//   0 success, 1 runtime failure, 2 configuration error,
//   3 privacy-gate refusal.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dpbayes/baselines.hpp"
#include "dpbayes/data.hpp"
#include "dpbayes/harness.hpp"
#include "dpbayes/model.hpp"
#include "dpbayes/ops.hpp"
#include "dpbayes/privacy.hpp"
#include "dpbayes/sgmcmc.hpp"

namespace {

using namespace dpbayes;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPrivacy = 3;

// ---- shared flag blocks ------------------------------------------------

struct DataFlags {
  std::string source = "synthetic:two-normals";
  std::int64_t n = 2000;
  int dim = 2;
  double separation = 4.0;
  int label_column = -1;
  bool has_header = false;
  double R = 1.0;
  bool no_standardize = false;
  std::uint64_t data_seed = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--data", f.source,
                  "synthetic:two-normals | csv:PATH | libsvm:PATH | "
                  "abalone:PATH");
  cmd->add_option("--n", f.n, "synthetic sample count");
  cmd->add_option("--dim", f.dim, "synthetic feature dimension");
  cmd->add_option("--separation", f.separation, "synthetic class separation");
  cmd->add_option("--label-column", f.label_column,
                  "CSV label column (0-based, -1 = last)");
  cmd->add_flag("--header", f.has_header, "CSV has a header row");
  cmd->add_option("--R", f.R, "feature norm bound (clip radius)");
  cmd->add_flag("--no-standardize", f.no_standardize,
                "skip z-scoring for loaded datasets");
  cmd->add_option("--data-seed", f.data_seed, "synthetic generator seed");
}

Dataset load_data(const DataFlags& f) {
  const auto colon = f.source.find(':');
  const std::string kind = f.source.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : f.source.substr(colon + 1);
  if (kind == "synthetic") {
    if (arg != "two-normals") throw ConfigError("unknown synthetic set: " + arg);
    return make_two_normals(f.n, f.dim, f.separation, f.data_seed);
  }
  Dataset raw;
  if (kind == "csv") {
    raw = load_csv(arg, f.label_column, f.has_header);
  } else if (kind == "libsvm") {
    raw = load_libsvm(arg);
  } else if (kind == "abalone") {
    raw = load_abalone(arg);
  } else {
    throw ConfigError("unknown data source kind: " + kind);
  }
  if (f.no_standardize) return clip_dataset(raw, f.R);
  return standardize_and_clip(raw, f.R).first;
}

struct OutputFlags {
  std::string out, trace_out, ledger_out;
};

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
  cmd->add_option("--out", f.out, "primary output CSV");
  cmd->add_option("--trace-out", f.trace_out, "sampler trace CSV");
  cmd->add_option("--ledger-out", f.ledger_out, "privacy ledger CSV");
}

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  writer(out);
}

void finish_ledger(const PrivacyLedger& ledger, const OutputFlags& of) {
  std::cout << "privacy ledger:\n";
  ledger.write_csv(std::cout);
  write_file(of.ledger_out, [&](std::ostream& o) { ledger.write_csv(o); });
}

void write_theta(const Vector& theta, const std::string& path) {
  auto writer = [&](std::ostream& out) {
    for (int j = 0; j < theta.size(); ++j) out << (j ? "," : "") << "theta_" << j;
    out << '\n';
    out.precision(17);
    for (int j = 0; j < theta.size(); ++j) out << (j ? "," : "") << theta[j];
    out << '\n';
  };
  if (path.empty()) {
    writer(std::cout);
  } else {
    write_file(path, writer);
  }
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) grid.push_back(std::stod(tok));
  }
  if (grid.empty()) throw ConfigError("empty epsilon grid");
  return grid;
}

// ---- sampler subcommand plumbing ----------------------------------------

struct SamplerFlags {
  double epsilon = 1.0;
  double delta = 1e-4;
  std::int64_t tau = 10;
  std::int64_t passes = 50;
  double eta0 = 0.0;  // 0: alpha-phase schedule
  double alpha = 0.5;
  double friction = 0.0;  // 0: auto-calibrated to the privacy threshold
  double C = 2.0;
  std::uint64_t seed = 0;
};

void add_sampler_flags(CLI::App* cmd, SamplerFlags& f, bool with_friction) {
  cmd->add_option("--epsilon", f.epsilon, "privacy loss")->required();
  cmd->add_option("--delta", f.delta, "privacy failure probability")->required();
  cmd->add_option("--tau", f.tau, "minibatch size");
  cmd->add_option("--passes", f.passes, "number of data passes T");
  cmd->add_option("--eta0", f.eta0, "constant stepsize (0: alpha-phase decay)");
  cmd->add_option("--alpha", f.alpha, "burn-in fraction / phase split");
  cmd->add_option("--C", f.C, "prior scale / parameter ball radius");
  cmd->add_option("--seed", f.seed, "RNG seed");
  if (with_friction) {
    cmd->add_option("--friction", f.friction,
                    "friction a (0: smallest value passing the privacy check)");
  }
}

struct SamplerSetup {
  ModelSpec model;
  PrivateSamplerConfig pcfg;
  double L;
};

SamplerSetup make_sampler_setup(const Dataset& data, const SamplerFlags& f,
                                double R) {
  SamplerSetup s{make_logistic_model(data.feature_dim(), f.C, R),
                 PrivateSamplerConfig{}, R};
  s.pcfg.base.tau = f.tau;
  s.pcfg.base.passes = f.passes;
  s.pcfg.base.burn_in_fraction = f.alpha;
  s.pcfg.base.seed = f.seed;
  s.pcfg.epsilon = f.epsilon;
  s.pcfg.delta = f.delta;
  if (f.eta0 > 0) {
    s.pcfg.base.schedule = Schedule::constant(f.eta0);
  } else {
    s.pcfg.base.schedule = alpha_phase_schedule(
        f.alpha, data.size(), f.passes, f.tau, R, f.epsilon, f.delta);
  }
  return s;
}

void finish_trace(const SampleTrace& trace, const OutputFlags& of) {
  write_file(of.trace_out, [&](std::ostream& o) { trace.write_csv(o); });
  PrivacyLedger ledger;
  for (const LedgerEvent& e : trace.events) ledger.charge(e.label, e.budget);
  if (!trace.iterates.empty()) {
    write_theta(trace.posterior_mean(), of.out);
  }
  finish_ledger(ledger, of);
}

// ---- verify suites -------------------------------------------------------

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

SuiteResult suite_dp_ratio(std::int64_t trials, std::uint64_t seed) {
  const ModelSpec model = make_beta_bernoulli_model(1.0, 1.0, 0.3);
  std::vector<Vector> support(2, Vector(1));
  support[0][0] = 0.3;
  support[1][0] = 0.7;
  auto coin = [](Rng& rng) {
    DataPoint p;
    p.features = Vector(1);
    p.features[0] = rand_uniform(rng) < 0.5 ? 0.0 : 1.0;
    return p;
  };
  const double B = -std::log(0.3);
  bool ok = true;
  std::ostringstream detail;
  for (const double eps : {0.1, 1.0, 4.0 * B}) {
    const double rho = ops_scale(B, eps);
    const auto rep =
        verify_dp_ratio(support, model, coin, 20, rho, 4.0 * B * rho, trials,
                        seed);
    ok = ok && rep.ok;
    detail << " [eps=" << eps << " max=" << rep.max_log_ratio
           << " claim=" << rep.claim << "]";
  }
  return {"dp-ratio", ok, detail.str()};
}

SuiteResult suite_covariance(std::int64_t trials, std::uint64_t seed) {
  double min_slack = 1.0;
  bool ok = true;
  for (std::int64_t k = 0; k < trials; ++k) {
    Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    const std::int64_t n = rand_int(rng, 5, 50);
    const int d = static_cast<int>(rand_int(rng, 1, 5));
    auto ball_point = [&]() {
      Vector x = rand_normal_vec(rng, d);
      const double r = std::pow(rand_uniform(rng), 1.0 / d);
      return Vector((r / x.norm()) * x);
    };
    std::vector<Vector> xs(static_cast<std::size_t>(n));
    for (auto& x : xs) x = ball_point();
    auto cov = [&](const std::vector<Vector>& pts) {
      Vector mean = Vector::Zero(d);
      for (const auto& p : pts) mean += p;
      mean /= static_cast<double>(pts.size());
      Matrix c = Matrix::Zero(d, d);
      for (const auto& p : pts) c += (p - mean) * (p - mean).transpose();
      return Matrix(c / static_cast<double>(pts.size() - 1));
    };
    const Matrix c0 = cov(xs);
    xs[static_cast<std::size_t>(rand_int(rng, 0, n - 1))] = ball_point();
    const double change = (cov(xs) - c0).norm();
    const double bound = cov_sensitivity_bound(1.0, n);
    ok = ok && change <= bound;
    min_slack = std::min(min_slack, (bound - change) / bound);
  }
  std::ostringstream detail;
  detail << " min slack fraction=" << min_slack;
  return {"covariance-sensitivity", ok, detail.str()};
}

SuiteResult suite_are(std::uint64_t seed) {
  const BetaBernoulliModel model{1.0, 1.0, 0.1};
  const double B = model.bound_b();
  bool ok = true;
  std::ostringstream detail;
  for (const double eps : {B, 2.0 * B, 4.0 * B}) {
    const double predicted = 1.0 + 4.0 * B / eps;
    const double observed = are_estimate(model, 0.6, 2000, eps, 500, seed);
    const bool pass = std::abs(observed / predicted - 1.0) <= 0.15;
    ok = ok && pass;
    detail << " [eps=" << eps << " are=" << observed << " vs " << predicted
           << "]";
  }
  return {"are", ok, detail.str()};
}

SuiteResult suite_noise_audit(double tamper, std::uint64_t seed) {
  const Dataset data = make_two_normals(200, 2, 4.0, seed);
  const ModelSpec model = make_logistic_model(2, 2.0, 1.0);
  PrivateSamplerConfig pcfg;
  pcfg.base.tau = 10;
  pcfg.base.passes = 20;
  pcfg.base.seed = seed;
  pcfg.epsilon = 1.0;
  pcfg.delta = 1e-4;
  pcfg.base.schedule =
      alpha_phase_schedule(0.5, data.size(), pcfg.base.passes, pcfg.base.tau,
                           1.0, pcfg.epsilon, pcfg.delta);
  pcfg.debug_noise_scale = tamper;
  const SampleTrace trace = dp_sgld_run(model, data, pcfg, Vector::Zero(2));
  const NoiseAudit audit = audit_trace_noise(
      trace, sgld_noise_planner(data.size(), pcfg.base.passes, pcfg.base.tau,
                                1.0, pcfg.epsilon, pcfg.delta));
  std::ostringstream detail;
  detail << " checked=" << audit.checked
         << " max_abs_diff=" << audit.max_abs_diff;
  return {"noise-audit", audit.ok, detail.str()};
}

int run_verify(const std::string& suite, std::int64_t trials, double tamper,
               std::uint64_t seed) {
  std::vector<SuiteResult> results;
  if (suite == "all" || suite == "dp-ratio") {
    results.push_back(suite_dp_ratio(trials, seed));
  }
  if (suite == "all" || suite == "covariance") {
    results.push_back(suite_covariance(trials, seed));
  }
  if (suite == "all" || suite == "are") {
    results.push_back(suite_are(seed));
  }
  if (suite == "all" || suite == "noise-audit") {
    results.push_back(suite_noise_audit(tamper, seed));
  }
  if (results.empty()) throw ConfigError("unknown verify suite: " + suite);
  bool all_ok = true;
  for (const SuiteResult& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << r.detail << '\n';
    all_ok = all_ok && r.pass;
  }
  return all_ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private Bayesian learning via posterior "
               "sampling"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // ---- ops ----
  auto* ops_cmd = app.add_subcommand("ops", "one-posterior-sample release");
  DataFlags ops_data;
  OutputFlags ops_out;
  add_data_flags(ops_cmd, ops_data);
  add_output_flags(ops_cmd, ops_out);
  OpsConfig ops_cfg;
  double ops_C = 2.0;
  std::string ops_backend = "auto";
  ops_cmd->add_option("--epsilon", ops_cfg.epsilon, "privacy loss")->required();
  ops_cmd->add_option("--C", ops_C, "prior scale / parameter ball radius");
  ops_cmd->add_option("--chain-length", ops_cfg.chain_length, "chain length");
  ops_cmd->add_option("--burn-in", ops_cfg.burn_in, "burn-in steps (-1: half)");
  ops_cmd->add_option("--proposal-scale", ops_cfg.proposal_scale,
                      "proposal scale (0: pilot-tuned)");
  ops_cmd->add_option("--seed", ops_cfg.seed, "RNG seed");
  ops_cmd->add_option("--backend", ops_backend, "auto|rwmh|mala|sgnht");
  double ops_l1_gap = 0.0;
  ops_cmd->add_option("--l1-gap", ops_l1_gap,
                      "declared L1 distance of the chain from the target; "
                      "degrades the ledger entry to (eps, (1+e^eps)*gap)");
  // The OPS charge is a pure-epsilon guarantee; a --delta flag here would
  // suggest otherwise.
  std::string ops_forbidden_delta;
  ops_cmd->add_option("--delta", ops_forbidden_delta)->group("");  // hidden
  ops_cmd->callback([&] {
    if (!ops_forbidden_delta.empty()) {
      throw ConfigError("ops reports pure-epsilon privacy; --delta is not "
                        "accepted here");
    }
    const Dataset data = load_data(ops_data);
    const ModelSpec model =
        make_logistic_model(data.feature_dim(), ops_C, ops_data.R);
    if (ops_backend == "rwmh") {
      ops_cfg.backend = OpsBackend::kRandomWalkMh;
    } else if (ops_backend == "mala") {
      ops_cfg.backend = OpsBackend::kMala;
    } else if (ops_backend == "sgnht") {
      ops_cfg.backend = OpsBackend::kSgnht;
    } else {
      ops_cfg.backend = model.dim <= 10 ? OpsBackend::kRandomWalkMh
                                        : OpsBackend::kSgnht;
    }
    const OpsResult res = ops_sample(model, data, ops_cfg);
    write_theta(res.theta, ops_out.out);
    write_file(ops_out.trace_out,
               [&](std::ostream& o) { res.write_trace_csv(o); });
    PrivacyLedger ledger;
    if (ops_l1_gap > 0) {
      ledger.charge("ops (approximate sampling)",
                    degrade_approx_sampling(res.charge.epsilon, ops_l1_gap));
    } else {
      ledger.charge("ops", res.charge);
    }
    finish_ledger(ledger, ops_out);
  });

  // ---- sgld ----
  auto* sgld_cmd = app.add_subcommand("sgld", "DP stochastic gradient "
                                              "Langevin dynamics");
  DataFlags sgld_data;
  OutputFlags sgld_out;
  SamplerFlags sgld_flags;
  add_data_flags(sgld_cmd, sgld_data);
  add_output_flags(sgld_cmd, sgld_out);
  add_sampler_flags(sgld_cmd, sgld_flags, false);
  sgld_cmd->callback([&] {
    const Dataset data = load_data(sgld_data);
    SamplerSetup s = make_sampler_setup(data, sgld_flags, sgld_data.R);
    const SampleTrace trace =
        dp_sgld_run(s.model, data, s.pcfg, Vector::Zero(s.model.dim));
    finish_trace(trace, sgld_out);
  });

  // ---- sghmc ----
  auto* sghmc_cmd = app.add_subcommand("sghmc", "DP SG Hamiltonian Monte "
                                                "Carlo");
  DataFlags sghmc_data;
  OutputFlags sghmc_out;
  SamplerFlags sghmc_flags;
  sghmc_flags.eta0 = 1e-6;
  add_data_flags(sghmc_cmd, sghmc_data);
  add_output_flags(sghmc_cmd, sghmc_out);
  add_sampler_flags(sghmc_cmd, sghmc_flags, true);
  sghmc_cmd->callback([&] {
    const Dataset data = load_data(sghmc_data);
    SamplerSetup s = make_sampler_setup(data, sghmc_flags, sghmc_data.R);
    double a = sghmc_flags.friction;
    if (a <= 0) {
      a = 0.5 * s.pcfg.base.schedule.at(1) *
          sgld_privacy_coefficient(data.size(), sghmc_flags.passes,
                                   sghmc_flags.tau, s.L, sghmc_flags.epsilon,
                                   sghmc_flags.delta);
    }
    const SampleTrace trace =
        dp_sghmc_run(s.model, data, s.pcfg, a, 0.0, Vector::Zero(s.model.dim));
    finish_trace(trace, sghmc_out);
  });

  // ---- sgnht ----
  auto* sgnht_cmd = app.add_subcommand("sgnht", "DP SG Nose-Hoover thermostat");
  DataFlags sgnht_data;
  OutputFlags sgnht_out;
  SamplerFlags sgnht_flags;
  sgnht_flags.eta0 = 1e-6;
  add_data_flags(sgnht_cmd, sgnht_data);
  add_output_flags(sgnht_cmd, sgnht_out);
  add_sampler_flags(sgnht_cmd, sgnht_flags, true);
  sgnht_cmd->callback([&] {
    const Dataset data = load_data(sgnht_data);
    SamplerSetup s = make_sampler_setup(data, sgnht_flags, sgnht_data.R);
    double a = sgnht_flags.friction;
    if (a <= 0) {
      a = 0.5 * s.pcfg.base.schedule.at(1) *
          sgld_privacy_coefficient(data.size(), sgnht_flags.passes,
                                   sgnht_flags.tau, s.L, sgnht_flags.epsilon,
                                   sgnht_flags.delta);
    }
    const SampleTrace trace =
        dp_sgnht_run(s.model, data, s.pcfg, a, Vector::Zero(s.model.dim));
    finish_trace(trace, sgnht_out);
  });

  // ---- sgfs ----
  auto* sgfs_cmd = app.add_subcommand("sgfs", "DP SG Fisher scoring");
  DataFlags sgfs_data;
  OutputFlags sgfs_out;
  SamplerFlags sgfs_flags;
  sgfs_flags.eta0 = 1e-4;
  sgfs_flags.tau = 32;
  add_data_flags(sgfs_cmd, sgfs_data);
  add_output_flags(sgfs_cmd, sgfs_out);
  add_sampler_flags(sgfs_cmd, sgfs_flags, false);
  sgfs_cmd->callback([&] {
    const Dataset data = load_data(sgfs_data);
    SamplerSetup s = make_sampler_setup(data, sgfs_flags, sgfs_data.R);
    const Matrix F = s.L * Matrix::Identity(s.model.dim, s.model.dim);
    const SampleTrace trace =
        dp_sgfs_run(s.model, data, s.pcfg, F, nullptr,
                    Vector::Zero(s.model.dim));
    finish_trace(trace, sgfs_out);
  });

  // ---- hybrid ----
  auto* hybrid_cmd = app.add_subcommand("hybrid", "OPS warm start + DP-SGLD");
  DataFlags hybrid_data;
  OutputFlags hybrid_out;
  SamplerFlags hybrid_flags;
  add_data_flags(hybrid_cmd, hybrid_data);
  add_output_flags(hybrid_cmd, hybrid_out);
  add_sampler_flags(hybrid_cmd, hybrid_flags, false);
  std::int64_t hybrid_chain = 20000;
  hybrid_cmd->add_option("--chain-length", hybrid_chain, "OPS chain length");
  hybrid_cmd->callback([&] {
    const Dataset data = load_data(hybrid_data);
    const ModelSpec model =
        make_logistic_model(data.feature_dim(), hybrid_flags.C, hybrid_data.R);
    OpsConfig ops_phase;
    ops_phase.chain_length = hybrid_chain;
    ops_phase.seed = hybrid_flags.seed;
    SamplerConfig sg;
    sg.tau = hybrid_flags.tau;
    sg.passes = hybrid_flags.passes;
    sg.seed = derive_seed(hybrid_flags.seed, 0x5eed);
    double eta0 = hybrid_flags.eta0;
    if (eta0 <= 0) {
      eta0 = 0.5 / sgld_privacy_coefficient(
                       data.size(), hybrid_flags.passes, hybrid_flags.tau,
                       hybrid_data.R, hybrid_flags.epsilon / 2.0,
                       hybrid_flags.delta);
    }
    sg.schedule = Schedule::constant(eta0);
    const SampleTrace trace = hybrid_run(model, data, hybrid_flags.epsilon,
                                         hybrid_flags.delta, ops_phase, sg);
    finish_trace(trace, hybrid_out);
  });

  // ---- objpert / outpert ----
  for (const bool is_objpert : {true, false}) {
    auto* cmd = app.add_subcommand(
        is_objpert ? "objpert" : "outpert",
        is_objpert ? "objective perturbation baseline"
                   : "Gaussian output perturbation baseline");
    auto data_flags = std::make_shared<DataFlags>();
    auto out_flags = std::make_shared<OutputFlags>();
    auto eps = std::make_shared<double>(1.0);
    auto delta = std::make_shared<double>(1e-4);
    auto lambda_reg = std::make_shared<double>(is_objpert ? 0.0 : 1.0);
    auto seed = std::make_shared<std::uint64_t>(0);
    add_data_flags(cmd, *data_flags);
    add_output_flags(cmd, *out_flags);
    cmd->add_option("--epsilon", *eps, "privacy loss")->required();
    cmd->add_option("--delta", *delta, "privacy failure probability")
        ->required();
    cmd->add_option("--lambda-reg", *lambda_reg, "ridge strength");
    cmd->add_option("--seed", *seed, "RNG seed");
    cmd->callback([=] {
      const Dataset data = load_data(*data_flags);
      const ErmProblem erm =
          make_logistic_erm(data.feature_dim(), data_flags->R, *lambda_reg);
      Rng rng = make_rng(*seed);
      const Vector theta =
          is_objpert ? objpert_train(erm, data, *eps, *delta, rng)
                     : outpert_train(erm, data, *eps, *delta, rng);
      write_theta(theta, out_flags->out);
      PrivacyLedger ledger;
      ledger.charge(is_objpert ? "objpert" : "outpert", {*eps, *delta});
      finish_ledger(ledger, *out_flags);
    });
  }

  // ---- bench ----
  auto* bench_cmd = app.add_subcommand("bench", "utility-vs-privacy benchmark");
  DataFlags bench_data;
  add_data_flags(bench_cmd, bench_data);
  std::string bench_methods = "ops,objpert,non-private-erm";
  std::string bench_eps = "0.1,1,10";
  double bench_delta = 1e-4;
  std::int64_t bench_seeds = 20;
  BenchmarkConfig bench_cfg;
  std::string bench_out, bench_summary_out;
  bench_cmd->add_option("--methods", bench_methods,
                        "comma list: ops,hybrid,sgld,objpert,outpert,erm");
  bench_cmd->add_option("--eps", bench_eps, "comma list of epsilon values");
  bench_cmd->add_option("--delta", bench_delta, "privacy failure probability")
      ->required();
  bench_cmd->add_option("--seeds", bench_seeds, "number of seeds (0..k-1)");
  bench_cmd->add_option("--C", bench_cfg.C, "prior scale");
  bench_cmd->add_option("--lambda-reg", bench_cfg.lambda_reg, "ridge strength");
  bench_cmd->add_option("--train-fraction", bench_cfg.train_fraction,
                        "train split fraction");
  bench_cmd->add_option("--chain-length", bench_cfg.ops.chain_length,
                        "OPS chain length");
  bench_cmd->add_option("--tau", bench_cfg.sg_tau, "DP-SGLD minibatch (0: sqrt N)");
  bench_cmd->add_option("--passes", bench_cfg.sg_passes,
                        "DP-SGLD passes (0: sqrt N)");
  bench_cmd->add_option("--eta0", bench_cfg.sg_eta0, "DP-SGLD stepsize");
  bench_cmd->add_option("--master-seed", bench_cfg.master_seed, "master seed");
  bench_cmd->add_option("--out", bench_out, "per-cell results CSV");
  bench_cmd->add_option("--summary-out", bench_summary_out, "summary CSV");
  bench_cmd->callback([&] {
    std::vector<Method> methods;
    std::stringstream ss(bench_methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto m = parse_method(tok);
      if (!m) throw ConfigError("unknown method: " + tok);
      methods.push_back(*m);
    }
    const std::vector<double> grid = parse_grid(bench_eps);
    if (bench_seeds < 1) throw ConfigError("--seeds must be >= 1");
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(bench_seeds));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    bench_cfg.clip_radius = bench_data.R;
    bench_cfg.standardize = !bench_data.source.starts_with("synthetic") &&
                            !bench_data.no_standardize;
    DataFlags raw = bench_data;
    raw.no_standardize = true;  // cells standardize with train stats only
    const Dataset data = load_data(raw);
    std::cout << "protocol: train_fraction=" << bench_cfg.train_fraction
              << " seeds=" << bench_seeds << " delta=" << bench_delta
              << " clip_R=" << bench_cfg.clip_radius << " C=" << bench_cfg.C
              << " master_seed=" << bench_cfg.master_seed << '\n';
    const BenchmarkResult result =
        run_benchmark(methods, data, grid, bench_delta, seeds, bench_cfg);
    if (bench_out.empty()) {
      result.write_csv(std::cout);
    } else {
      write_file(bench_out, [&](std::ostream& o) { result.write_csv(o); });
    }
    write_file(bench_summary_out,
               [&](std::ostream& o) { result.write_summary_csv(o); });
    std::cout << "summary:\n";
    result.write_summary_csv(std::cout);
  });

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "run the property suites");
  std::string verify_suite = "all";
  std::int64_t verify_trials = 10000;
  double verify_tamper = 1.0;
  std::uint64_t verify_seed = 20260810;
  verify_cmd->add_option("--suite", verify_suite,
                         "all|dp-ratio|covariance|are|noise-audit");
  verify_cmd->add_option("--trials", verify_trials, "randomized trial count");
  verify_cmd->add_option("--tamper-noise", verify_tamper,
                         "test hook: scales injected DP noise (audit must "
                         "catch values != 1)");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed");
  verify_cmd->callback([&] {
    const int rc = run_verify(verify_suite, verify_trials, verify_tamper,
                              verify_seed);
    if (rc != kExitOk) exit_code = rc;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const PrivacyError& e) {
    std::cerr << "privacy error: " << e.what() << '\n';
    return kExitPrivacy;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return exit_code;
}
