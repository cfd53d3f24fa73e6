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

#ifndef QCOMP_HARNESS_HPP
#define QCOMP_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcomp/comp_solver.hpp"
#include "qcomp/network.hpp"
#include "qcomp/ofdm_solver.hpp"
#include "qcomp/percell.hpp"

namespace qcomp {

enum class Algorithm { ICoMP, DCoMP, Percell, OfdmICoMP };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& text);

struct ExperimentConfig {
  Scenario scenario;
  std::vector<Algorithm> algorithms{Algorithm::ICoMP};
  // Bit depths to sweep; empty means scenario.adc_dac_bits only.
  std::vector<BitDepth> bits;
  // Broadcast target SINRs in dB; empty means scenario.target_sinr_db.
  std::vector<double> sweep_db;
  int n_trials = 200;
  std::string output_dir = "qcomp_out";
  std::uint64_t trial_seed_base = 1;
  int workers = 1;
  SolverOptions solver;
  PercellOptions percell;
  SigmaStructure sigma_structure = SigmaStructure::Coupled;

  std::vector<BitDepth> bit_list() const;
  std::vector<double> gamma_list_db() const;
};

// Parses a JSON config. Errors are ConfigError carrying the line and
// column for syntax problems or the key path for bad fields. Unknown keys
// are rejected.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
// Canonical JSON form of a config (used in metadata.json).
std::string config_to_json(const ExperimentConfig& c);
// Throws ConfigError on invariants the parser cannot see per field.
void validate_config(const ExperimentConfig& c);

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::ICoMP;
  BitDepth bits = BitDepth::infinite();
  double gamma_db = 0.0;
  bool converged = false;
  // Empty on success, otherwise the error kind that stopped the solve.
  std::string failure;
  int iterations = 0;
  std::optional<double> total_ul_power;      // sum lambda, mW
  std::optional<double> total_ul_power_dbm;
  std::optional<double> total_dl_power;      // sum ||w||^2, mW
  std::optional<double> duality_gap;
  // SINR of the link whose constraints the algorithm enforces: downlink
  // for percell, uplink with MMSE combining otherwise. Unserved users
  // carry -inf.
  std::vector<double> achieved_sinr_db;
  std::vector<int> zeroed_cells;

  bool operator==(const TrialRecord&) const = default;
};

// Runs one algorithm on one channel draw. Infeasible or failed solves come
// back with converged = false.
TrialRecord run_trial(const ExperimentConfig& config, const ChannelSet& channels, int trial, std::uint64_t seed,
                      Algorithm algorithm, BitDepth bits, double gamma_db);

// Every (trial, gamma, algorithm, bits) combination; trial t draws its
// channels from seed trial_seed_base + t and shares them across the rest.
// Output is ordered by trial, then gamma, algorithm and bits in config order.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

struct CdfRow {
  std::string algorithm;
  double sinr_db = 0.0;
  double cdf = 0.0;
};

// Empirical CDF over every finite user SINR of converged records.
std::vector<CdfRow> summarize_cdf(const std::vector<TrialRecord>& records);

struct PowerSweepRow {
  std::string algorithm;
  std::string bits;
  double gamma_db = 0.0;
  // 10 log10 of the mean linear power over converged trials and the 5th /
  // 95th percentiles of the per-trial dBm values; empty when no trial converged.
  std::optional<double> mean_total_power_dbm;
  std::optional<double> p5;
  std::optional<double> p95;
  double infeasible_fraction = 0.0;
  int trials = 0;
};

std::vector<PowerSweepRow> summarize_power_sweep(const std::vector<TrialRecord>& records);

// Linear-interpolation percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

}  // namespace qcomp

#endif  // QCOMP_HARNESS_HPP
