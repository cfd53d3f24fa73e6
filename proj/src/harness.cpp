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

#include "qcomp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "qcomp/deterministic.hpp"
#include "qcomp/quantization.hpp"

namespace qcomp {

using nlohmann::json;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ICoMP: return "icomp";
    case Algorithm::DCoMP: return "dcomp";
    case Algorithm::Percell: return "percell";
    case Algorithm::OfdmICoMP: return "ofdm_icomp";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& text) {
  for (Algorithm a : {Algorithm::ICoMP, Algorithm::DCoMP, Algorithm::Percell, Algorithm::OfdmICoMP}) {
    if (text == to_string(a)) return a;
  }
  throw Error(ErrorKind::ConfigError, "unknown algorithm '" + text + "' (icomp, dcomp, percell, ofdm_icomp)");
}

std::vector<BitDepth> ExperimentConfig::bit_list() const {
  return bits.empty() ? std::vector<BitDepth>{scenario.adc_dac_bits} : bits;
}

std::vector<double> ExperimentConfig::gamma_list_db() const {
  return sweep_db.empty() ? std::vector<double>{scenario.target_sinr_db.front()} : sweep_db;
}

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigError, path + ": " + what);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) config_fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) config_fail(path, "must be finite");
  return x;
}

long long as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_fail(path, "expected an integer");
  return v.get<long long>();
}

int as_int(const json& v, const std::string& path) {
  const long long x = as_integer(v, path);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) config_fail(path, "out of range");
  return static_cast<int>(x);
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const long long x = as_integer(v, path);
  if (x < 0) config_fail(path, "must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) config_fail(path, "expected a string");
  return v.get<std::string>();
}

BitDepth as_bits(const json& v, const std::string& path) {
  if (v.is_string()) {
    try {
      return BitDepth::parse(v.get<std::string>());
    } catch (const Error& e) {
      config_fail(path, e.what());
    }
  }
  const int b = as_int(v, path);
  if (b < 1) config_fail(path, "bit depth must be >= 1 or \"inf\"");
  return BitDepth(b);
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
  if (v.is_number()) return {as_number(v, path)};
  if (!v.is_array()) config_fail(path, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t n = 0; n < v.size(); ++n) out.push_back(as_number(v[n], fmt::format("{}[{}]", path, n)));
  return out;
}

using Setter = std::function<void(const json&, const std::string&)>;

void apply_section(const json& section, const std::string& name, const std::map<std::string, Setter>& setters) {
  if (!section.is_object()) config_fail(name, "expected an object");
  for (auto it = section.begin(); it != section.end(); ++it) {
    const std::string path = name + "." + it.key();
    const auto found = setters.find(it.key());
    if (found == setters.end()) config_fail(path, "unknown key");
    found->second(it.value(), path);
  }
}

std::string sigma_name(SigmaStructure s) { return s == SigmaStructure::Coupled ? "coupled" : "block_diagonal"; }

json bits_json(const BitDepth& b) {
  if (b.is_infinite()) return "inf";
  return b.bits();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Locate the byte offset as line:column.
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1;
    int column = 1;
    for (std::size_t n = 0; n < upto; ++n) {
      if (text[n] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::ConfigError, fmt::format("{}:{}:{}: syntax error: {}", source, line, column, e.what()));
  }
  if (!root.is_object()) config_fail(source, "top level must be an object");

  ExperimentConfig c;
  Scenario& s = c.scenario;
  const std::map<std::string, Setter> scenario_keys{
      {"n_cells", [&](const json& v, const std::string& p) { s.n_cells = as_int(v, p); }},
      {"n_users_per_cell", [&](const json& v, const std::string& p) { s.n_users_per_cell = as_int(v, p); }},
      {"n_bs_antennas", [&](const json& v, const std::string& p) { s.n_bs_antennas = as_int(v, p); }},
      {"adc_dac_bits", [&](const json& v, const std::string& p) { s.adc_dac_bits = as_bits(v, p); }},
      {"n_subcarriers", [&](const json& v, const std::string& p) { s.n_subcarriers = as_int(v, p); }},
      {"n_taps", [&](const json& v, const std::string& p) { s.n_taps = as_int(v, p); }},
      {"inter_site_distance_m", [&](const json& v, const std::string& p) { s.inter_site_distance_m = as_number(v, p); }},
      {"min_bs_user_distance_m",
       [&](const json& v, const std::string& p) { s.min_bs_user_distance_m = as_number(v, p); }},
      {"reference_distance_m", [&](const json& v, const std::string& p) { s.reference_distance_m = as_number(v, p); }},
      {"carrier_hz", [&](const json& v, const std::string& p) { s.carrier_hz = as_number(v, p); }},
      {"bandwidth_hz", [&](const json& v, const std::string& p) { s.bandwidth_hz = as_number(v, p); }},
      {"noise_figure_db", [&](const json& v, const std::string& p) { s.noise_figure_db = as_number(v, p); }},
      {"shadowing_sigma_db", [&](const json& v, const std::string& p) { s.shadowing_sigma_db = as_number(v, p); }},
      {"pathloss_exponent", [&](const json& v, const std::string& p) { s.pathloss_exponent = as_number(v, p); }},
      {"delay_profile",
       [&](const json& v, const std::string& p) {
         try {
           s.delay_profile = parse_delay_profile(as_string(v, p));
         } catch (const Error& e) {
           if (e.kind() == ErrorKind::ConfigError) throw;
           config_fail(p, e.what());
         }
       }},
      {"target_sinr_db", [&](const json& v, const std::string& p) { s.target_sinr_db = as_number_list(v, p); }},
      {"seed", [&](const json& v, const std::string& p) { s.seed = as_u64(v, p); }},
  };
  const std::map<std::string, Setter> experiment_keys{
      {"algorithms",
       [&](const json& v, const std::string& p) {
         c.algorithms.clear();
         const json list = v.is_array() ? v : json::array({v});
         for (std::size_t n = 0; n < list.size(); ++n) {
           const std::string at = fmt::format("{}[{}]", p, n);
           try {
             c.algorithms.push_back(parse_algorithm(as_string(list[n], at)));
           } catch (const Error& e) {
             if (e.kind() == ErrorKind::ConfigError && std::string(e.what()).rfind(at, 0) == 0) throw;
             config_fail(at, e.what());
           }
         }
       }},
      {"bits",
       [&](const json& v, const std::string& p) {
         c.bits.clear();
         const json list = v.is_array() ? v : json::array({v});
         for (std::size_t n = 0; n < list.size(); ++n) c.bits.push_back(as_bits(list[n], fmt::format("{}[{}]", p, n)));
       }},
      {"sweep_db", [&](const json& v, const std::string& p) { c.sweep_db = as_number_list(v, p); }},
      {"n_trials", [&](const json& v, const std::string& p) { c.n_trials = as_int(v, p); }},
      {"output_dir", [&](const json& v, const std::string& p) { c.output_dir = as_string(v, p); }},
      {"trial_seed_base", [&](const json& v, const std::string& p) { c.trial_seed_base = as_u64(v, p); }},
      {"workers", [&](const json& v, const std::string& p) { c.workers = as_int(v, p); }},
  };
  const std::map<std::string, Setter> solver_keys{
      {"tolerance", [&](const json& v, const std::string& p) { c.solver.tolerance = as_number(v, p); }},
      {"max_iterations", [&](const json& v, const std::string& p) { c.solver.max_iterations = as_int(v, p); }},
      {"power_cap", [&](const json& v, const std::string& p) { c.solver.power_cap = as_number(v, p); }},
      {"outer_tolerance", [&](const json& v, const std::string& p) { c.percell.tolerance = as_number(v, p); }},
      {"max_outer", [&](const json& v, const std::string& p) { c.percell.max_outer = as_int(v, p); }},
      {"sigma_structure",
       [&](const json& v, const std::string& p) {
         const std::string name = as_string(v, p);
         if (name == "coupled") {
           c.sigma_structure = SigmaStructure::Coupled;
         } else if (name == "block_diagonal") {
           c.sigma_structure = SigmaStructure::BlockDiagonal;
         } else {
           config_fail(p, "expected \"coupled\" or \"block_diagonal\"");
         }
       }},
  };
  apply_section(root, source, {
                                  {"scenario", [&](const json& v, const std::string&) {
                                     apply_section(v, "scenario", scenario_keys);
                                   }},
                                  {"experiment", [&](const json& v, const std::string&) {
                                     apply_section(v, "experiment", experiment_keys);
                                   }},
                                  {"solver", [&](const json& v, const std::string&) {
                                     apply_section(v, "solver", solver_keys);
                                   }},
                              });
  // The per-cell loops share the joint solver's budget and cap.
  c.percell.inner = c.solver;
  c.percell.power_cap = c.solver.power_cap;
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

void validate_config(const ExperimentConfig& c) {
  try {
    validate(c.scenario);
  } catch (const Error& e) {
    config_fail("scenario", e.what());
  }
  if (c.n_trials < 1) config_fail("experiment.n_trials", "must be >= 1");
  if (c.workers < 0) config_fail("experiment.workers", "must be >= 0");
  if (c.algorithms.empty()) config_fail("experiment.algorithms", "must not be empty");
  for (double g : c.sweep_db) {
    if (!std::isfinite(g)) config_fail("experiment.sweep_db", "values must be finite");
  }
  if (!c.sweep_db.empty() && c.scenario.target_sinr_db.size() != 1) {
    config_fail("experiment.sweep_db", "cannot combine a sweep with per-user targets");
  }
  if (!(c.solver.tolerance > 0.0)) config_fail("solver.tolerance", "must be positive");
  if (c.solver.max_iterations < 1) config_fail("solver.max_iterations", "must be >= 1");
  if (!(c.solver.power_cap > 0.0)) config_fail("solver.power_cap", "must be positive");
  if (c.percell.max_outer < 1) config_fail("solver.max_outer", "must be >= 1");
  if (!(c.percell.tolerance > 0.0)) config_fail("solver.outer_tolerance", "must be positive");
  const bool wideband = c.scenario.n_subcarriers > 1 || c.scenario.n_taps > 1;
  for (Algorithm a : c.algorithms) {
    if (a != Algorithm::OfdmICoMP && wideband) {
      config_fail("experiment.algorithms", to_string(a) + " needs n_subcarriers = 1 and n_taps = 1");
    }
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  const Scenario& s = c.scenario;
  json scenario{{"n_cells", s.n_cells},
                {"n_users_per_cell", s.n_users_per_cell},
                {"n_bs_antennas", s.n_bs_antennas},
                {"adc_dac_bits", bits_json(s.adc_dac_bits)},
                {"n_subcarriers", s.n_subcarriers},
                {"n_taps", s.n_taps},
                {"inter_site_distance_m", s.inter_site_distance_m},
                {"min_bs_user_distance_m", s.min_bs_user_distance_m},
                {"reference_distance_m", s.reference_distance_m},
                {"carrier_hz", s.carrier_hz},
                {"bandwidth_hz", s.bandwidth_hz},
                {"noise_figure_db", s.noise_figure_db},
                {"shadowing_sigma_db", s.shadowing_sigma_db},
                {"pathloss_exponent", s.pathloss_exponent},
                {"delay_profile", to_string(s.delay_profile)},
                {"target_sinr_db", s.target_sinr_db},
                {"seed", s.seed}};
  json algorithms = json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(to_string(a));
  json bits = json::array();
  for (const auto& b : c.bits) bits.push_back(bits_json(b));
  json experiment{{"algorithms", algorithms}, {"bits", bits},
                  {"sweep_db", c.sweep_db},   {"n_trials", c.n_trials},
                  {"output_dir", c.output_dir}, {"trial_seed_base", c.trial_seed_base},
                  {"workers", c.workers}};
  json solver{{"tolerance", c.solver.tolerance},         {"max_iterations", c.solver.max_iterations},
              {"power_cap", c.solver.power_cap},         {"outer_tolerance", c.percell.tolerance},
              {"max_outer", c.percell.max_outer},        {"sigma_structure", sigma_name(c.sigma_structure)}};
  return json{{"scenario", scenario}, {"experiment", experiment}, {"solver", solver}}.dump(2);
}

namespace {

std::vector<double> to_db(const SinrValues& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v.values()) {
    out.push_back(x > 0.0 ? linear_to_db(x) : -std::numeric_limits<double>::infinity());
  }
  return out;
}

double precoder_power(const std::vector<CVector>& w) {
  double total = 0.0;
  for (const auto& x : w) total += x.squaredNorm();
  return total;
}

void fill_joint(TrialRecord& r, const JointSolution& s, const SinrValues& achieved) {
  r.converged = s.report.converged;
  r.iterations = s.report.iterations;
  r.total_ul_power = s.lambda.sum();
  r.total_dl_power = precoder_power(s.beams.precoders);
  r.duality_gap = s.report.duality_gap;
  r.achieved_sinr_db = to_db(achieved);
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& config, const ChannelSet& channels, int trial, std::uint64_t seed,
                      Algorithm algorithm, BitDepth bits, double gamma_db) {
  TrialRecord r;
  r.trial = trial;
  r.seed = seed;
  r.algorithm = algorithm;
  r.bits = bits;
  r.gamma_db = gamma_db;

  Scenario s = config.scenario;
  if (!config.sweep_db.empty()) s.target_sinr_db = {gamma_db};
  const double alpha = quant_gain(bits).alpha;
  try {
    switch (algorithm) {
      case Algorithm::ICoMP: {
        const JointSolution sol = solve_icomp(channels.narrowband(), target_sinr(s), alpha, config.solver);
        fill_joint(r, sol, sol.report.achieved_ul_sinr);
        break;
      }
      case Algorithm::Percell: {
        const JointSolution sol = percell_solve(channels.narrowband(), target_sinr(s), alpha, config.percell);
        fill_joint(r, sol, sol.report.achieved_dl_sinr);
        break;
      }
      case Algorithm::DCoMP: {
        const LinkMatrices& h = channels.narrowband();
        const DeterministicSolution sol = solve_deterministic(h, cell_targets(target_sinr(s)), alpha);
        r.converged = true;
        r.iterations = sol.repair.rounds;
        r.total_ul_power = sol.lambda.sum();
        r.achieved_sinr_db = to_db(mmse_ul_sinr(h, sol.lambda, alpha));
        r.zeroed_cells = sol.repair.zeroed_cells;
        std::sort(r.zeroed_cells.begin(), r.zeroed_cells.end());
        break;
      }
      case Algorithm::OfdmICoMP: {
        WidebandChannels wide(channels, s.n_subcarriers);
        const OfdmProblem problem(std::move(wide), target_sinr(s), alpha);
        const JointSolution sol = solve_ofdm_icomp(problem, config.solver, config.sigma_structure);
        fill_joint(r, sol, sol.report.achieved_ul_sinr);
        break;
      }
    }
  } catch (const Error& e) {
    TrialRecord failed;
    failed.trial = trial;
    failed.seed = seed;
    failed.algorithm = algorithm;
    failed.bits = bits;
    failed.gamma_db = gamma_db;
    r = std::move(failed);
    r.failure = std::string(to_string(e.kind()));
  }
  if (r.total_ul_power && *r.total_ul_power > 0.0) r.total_ul_power_dbm = linear_to_db(*r.total_ul_power);
  return r;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const int n = config.n_trials;
  std::vector<std::vector<TrialRecord>> per_trial(static_cast<std::size_t>(n));
  std::vector<std::string> failures(static_cast<std::size_t>(n));
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int t = next++; t < n; t = next++) {
      const std::uint64_t seed = config.trial_seed_base + static_cast<std::uint64_t>(t);
      try {
        const ChannelSet channels = draw_trial_channels(config.scenario, seed);
        auto& out = per_trial[static_cast<std::size_t>(t)];
        for (double g : config.gamma_list_db()) {
          for (Algorithm a : config.algorithms) {
            for (const BitDepth& b : config.bit_list()) out.push_back(run_trial(config, channels, t, seed, a, b, g));
          }
        }
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(t)] = e.what();
      }
    }
  };

  int workers = config.workers == 0 ? static_cast<int>(std::thread::hardware_concurrency()) : config.workers;
  workers = std::clamp(workers, 1, n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (int t = 0; t < n; ++t) {
    if (!failures[static_cast<std::size_t>(t)].empty()) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("trial {} failed: {}", t, failures[t]));
    }
  }
  std::vector<TrialRecord> records;
  for (auto& v : per_trial) std::move(v.begin(), v.end(), std::back_inserter(records));
  return records;
}

std::vector<CdfRow> summarize_cdf(const std::vector<TrialRecord>& records) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : records) {
    if (!r.converged) continue;
    auto& v = values[to_string(r.algorithm)];
    for (double x : r.achieved_sinr_db) {
      if (std::isfinite(x)) v.push_back(x);
    }
  }
  std::vector<CdfRow> rows;
  for (auto& [name, v] : values) {
    std::sort(v.begin(), v.end());
    for (std::size_t n = 0; n < v.size(); ++n) {
      rows.push_back({name, v[n], static_cast<double>(n + 1) / static_cast<double>(v.size())});
    }
  }
  return rows;
}

double percentile(std::vector<double> values, double q) {
  require(!values.empty(), ErrorKind::InvalidArgument, "percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<PowerSweepRow> summarize_power_sweep(const std::vector<TrialRecord>& records) {
  struct Group {
    std::vector<double> power_mw;
    int total = 0;
    int infeasible = 0;
  };
  // Key: algorithm, bit depth (infinite last), gamma.
  using Key = std::tuple<std::string, int, double>;
  std::map<Key, Group> groups;
  for (const auto& r : records) {
    const int bits_key = r.bits.is_infinite() ? std::numeric_limits<int>::max() : r.bits.bits();
    Group& g = groups[{to_string(r.algorithm), bits_key, r.gamma_db}];
    ++g.total;
    if (r.converged && r.total_ul_power && *r.total_ul_power > 0.0) {
      g.power_mw.push_back(*r.total_ul_power);
    } else {
      ++g.infeasible;
    }
  }
  std::vector<PowerSweepRow> rows;
  for (const auto& [key, g] : groups) {
    PowerSweepRow row;
    row.algorithm = std::get<0>(key);
    const int b = std::get<1>(key);
    row.bits = b == std::numeric_limits<int>::max() ? "inf" : std::to_string(b);
    row.gamma_db = std::get<2>(key);
    row.trials = g.total;
    row.infeasible_fraction = static_cast<double>(g.infeasible) / static_cast<double>(g.total);
    if (!g.power_mw.empty()) {
      double mean = 0.0;
      std::vector<double> dbm;
      for (double p : g.power_mw) {
        mean += p;
        dbm.push_back(linear_to_db(p));
      }
      row.mean_total_power_dbm = linear_to_db(mean / static_cast<double>(g.power_mw.size()));
      row.p5 = percentile(dbm, 0.05);
      row.p95 = percentile(dbm, 0.95);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qcomp
