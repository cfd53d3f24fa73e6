// SPDX-License-Identifier: Apache-2.0
//
// qcomp: coordinated multipoint beamforming and power control for
// multicell massive MIMO with low-resolution ADCs and DACs
// Copyright (C) 2026 The qcomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command line front end: solve, sweep, cdf, validate.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "qcomp/comp_solver.hpp"
#include "qcomp/harness.hpp"
#include "qcomp/numerics.hpp"
#include "qcomp/quantization.hpp"
#include "qcomp/records_io.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> workers;
  std::vector<std::string> algos;
  std::vector<std::string> bits;
  std::vector<double> gamma_db;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o, bool lists) {
  cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "seed (scenario seed for solve, trial seed base otherwise)");
  cmd->add_option("--out", o.out, "output directory");
  if (lists) {
    cmd->add_option("--trials", o.trials, "number of trials");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    cmd->add_option("--algo", o.algos, "algorithms: icomp, dcomp, percell, ofdm_icomp")->delimiter(',');
    cmd->add_option("--bits", o.bits, "bit depths, e.g. 2,3,inf")->delimiter(',');
    cmd->add_option("--gamma-db", o.gamma_db, "target SINRs in dB")->delimiter(',');
  } else {
    cmd->add_option("--algo", o.algos, "icomp, dcomp, percell or ofdm_icomp")->expected(1);
    cmd->add_option("--bits", o.bits, "bit depth or inf")->expected(1);
    cmd->add_option("--gamma-db", o.gamma_db, "target SINR in dB")->expected(1);
  }
}

qcomp::ExperimentConfig resolve(const Overrides& o, bool single) {
  qcomp::ExperimentConfig c = o.config.empty() ? qcomp::ExperimentConfig{} : qcomp::load_config(o.config);
  if (o.trials) c.n_trials = *o.trials;
  if (o.workers) c.workers = *o.workers;
  if (!o.out.empty()) c.output_dir = o.out;
  if (!o.algos.empty()) {
    c.algorithms.clear();
    for (const auto& a : o.algos) c.algorithms.push_back(qcomp::parse_algorithm(a));
  }
  if (!o.bits.empty()) {
    c.bits.clear();
    for (const auto& b : o.bits) c.bits.push_back(qcomp::BitDepth::parse(b));
  }
  if (!o.gamma_db.empty()) {
    c.sweep_db = o.gamma_db;
    c.scenario.target_sinr_db = {o.gamma_db.front()};
  }
  if (single) {
    if (o.seed) c.scenario.seed = *o.seed;
    if (!c.bits.empty()) c.scenario.adc_dac_bits = c.bits.front();
  } else if (o.seed) {
    c.trial_seed_base = *o.seed;
  }
  qcomp::validate_config(c);
  return c;
}

int run_solve(const Overrides& o) {
  const qcomp::ExperimentConfig c = resolve(o, true);
  for (const auto& w : qcomp::validate(c.scenario)) fmt::print(stderr, "warning: {}\n", w);
  const qcomp::ChannelSet channels = qcomp::draw_trial_channels(c.scenario, c.scenario.seed);
  const double gamma_db = c.gamma_list_db().front();
  const qcomp::TrialRecord r = qcomp::run_trial(c, channels, 0, c.scenario.seed, c.algorithms.front(),
                                                c.scenario.adc_dac_bits, gamma_db);
  fmt::print("algorithm      {}\n", qcomp::to_string(r.algorithm));
  fmt::print("bits           {}\n", r.bits.to_string());
  fmt::print("alpha          {:.6f}\n", qcomp::quant_gain(r.bits).alpha);
  fmt::print("target         {:.3f} dB\n", gamma_db);
  fmt::print("converged      {}{}\n", r.converged ? "yes" : "no", r.failure.empty() ? "" : " (" + r.failure + ")");
  fmt::print("iterations     {}\n", r.iterations);
  if (r.total_ul_power) fmt::print("total UL power {:.6g} mW ({:.3f} dBm)\n", *r.total_ul_power, *r.total_ul_power_dbm);
  if (r.total_dl_power) fmt::print("total DL power {:.6g} mW\n", *r.total_dl_power);
  if (r.duality_gap) fmt::print("duality gap    {:.3e}\n", *r.duality_gap);
  if (!r.zeroed_cells.empty()) fmt::print("zeroed cells   {}\n", fmt::join(r.zeroed_cells, ", "));
  for (std::size_t n = 0; n < r.achieved_sinr_db.size(); ++n) {
    fmt::print("sinr[{}]        {:.6f} dB\n", n, r.achieved_sinr_db[n]);
  }
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    qcomp::write_records((std::filesystem::path(o.out) / "records.jsonl").string(), {r});
  }
  return r.converged ? 0 : 2;
}

int run_batch(const Overrides& o, bool cdf) {
  const qcomp::ExperimentConfig c = resolve(o, false);
  for (const auto& w : qcomp::validate(c.scenario)) fmt::print(stderr, "warning: {}\n", w);
  const auto records = qcomp::run_experiment(c);
  const auto paths = qcomp::write_outputs(c, records);
  if (cdf) {
    const auto rows = qcomp::summarize_cdf(records);
    fmt::print("algorithm,sinr_db,cdf\n");
    for (const auto& r : rows) fmt::print("{},{:.6f},{:.6f}\n", r.algorithm, r.sinr_db, r.cdf);
  } else {
    fmt::print("algorithm,bits,gamma_db,mean_total_power_dbm,p5,p95,infeasible_fraction\n");
    auto field = [](const std::optional<double>& x) { return x ? fmt::format("{:.4f}", *x) : std::string(); };
    for (const auto& r : qcomp::summarize_power_sweep(records)) {
      fmt::print("{},{},{:.2f},{},{},{},{:.3f}\n", r.algorithm, r.bits, r.gamma_db, field(r.mean_total_power_dbm),
                 field(r.p5), field(r.p95), r.infeasible_fraction);
    }
  }
  for (const auto& p : paths) fmt::print(stderr, "wrote {}\n", p);
  return 0;
}

bool report(const std::string& name, bool ok, const std::string& detail) {
  fmt::print("{} {}: {}\n", ok ? "PASS" : "FAIL", name, detail);
  return ok;
}

int run_validate(const Overrides& o) {
  const std::uint64_t seed = o.seed.value_or(1);
  bool ok = true;

  for (int b = 1; b <= 5; ++b) {
    const double mc = qcomp::lloyd_max_mse(b, 1000000, seed + b);
    const double table = qcomp::kLloydMaxBeta[b - 1];
    const double rel = std::abs(mc - table) / table;
    ok &= report(fmt::format("quantizer b={}", b), rel <= 0.01,
                 fmt::format("monte carlo {:.6f} vs table {:.6f} (rel {:.2e})", mc, table, rel));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  qcomp::CMatrix x(12, 12);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = {nd(rng), nd(rng)};
  }
  const qcomp::CMatrix a = x * x.adjoint() + qcomp::CMatrix::Identity(12, 12);
  const Eigen::SelfAdjointEigenSolver<qcomp::CMatrix> eig(a);
  const double top = qcomp::numerics::extremal_eigenvalue(a, qcomp::numerics::Extremal::Max);
  const double bottom = qcomp::numerics::extremal_eigenvalue(a, qcomp::numerics::Extremal::Min);
  const double e_top = eig.eigenvalues().maxCoeff();
  const double e_bottom = eig.eigenvalues().minCoeff();
  ok &= report("eigen max", std::abs(top - e_top) <= 1e-8 * e_top, fmt::format("{:.12g} vs {:.12g}", top, e_top));
  ok &= report("eigen min", std::abs(bottom - e_bottom) <= 1e-8 * e_top,
               fmt::format("{:.12g} vs {:.12g}", bottom, e_bottom));

  qcomp::Scenario s;
  s.n_bs_antennas = 16;
  const qcomp::ChannelSet ch = qcomp::draw_trial_channels(s, seed);
  const double alpha = qcomp::quant_gain(qcomp::BitDepth(3)).alpha;
  try {
    const auto sol = qcomp::solve_icomp(ch.narrowband(), qcomp::target_sinr(s), alpha);
    ok &= report("duality", sol.report.duality_gap <= 1e-6 && sol.report.max_abs_residual() <= 1e-6,
                 fmt::format("gap {:.2e}, worst residual {:.2e}", sol.report.duality_gap,
                             sol.report.max_abs_residual()));
  } catch (const qcomp::Error& e) {
    ok &= report("duality", false, e.what());
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcomp: quantization-aware CoMP beamforming and power control"};
  app.require_subcommand(1);
  Overrides o;
  auto* solve = app.add_subcommand("solve", "solve one scenario and print the report");
  auto* sweep = app.add_subcommand("sweep", "total power versus target SINR experiment");
  auto* cdf = app.add_subcommand("cdf", "achieved SINR CDF experiment");
  auto* validate = app.add_subcommand("validate", "quantizer, eigenvalue and duality self-checks");
  add_common(solve, o, false);
  add_common(sweep, o, true);
  add_common(cdf, o, true);
  validate->add_option("--seed", o.seed, "seed for the random checks");
  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(o);
    if (sweep->parsed()) return run_batch(o, false);
    if (cdf->parsed()) return run_batch(o, true);
    if (validate->parsed()) return run_validate(o);
  } catch (const qcomp::Error& e) {
    fmt::print(stderr, "error ({}): {}\n", qcomp::to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
