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

#include "qcomp/records_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"

namespace qcomp {

using nlohmann::json;

namespace {

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt::format("{:.17g}", x);
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : "null"; }

std::optional<double> read_opt(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  return out;
}

}  // namespace

std::string record_to_json(const TrialRecord& r) {
  std::string s = fmt::format(
      "{{\"trial\":{},\"seed\":{},\"algorithm\":{},\"bits\":\"{}\",\"gamma_db\":{},\"converged\":{},"
      "\"failure\":{},\"iterations\":{},\"total_ul_power\":{},\"total_ul_power_dbm\":{},\"total_dl_power\":{},"
      "\"duality_gap\":{},\"achieved_sinr_db\":[",
      r.trial, r.seed, json(to_string(r.algorithm)).dump(), r.bits.to_string(), num(r.gamma_db),
      r.converged ? "true" : "false", json(r.failure).dump(), r.iterations, opt(r.total_ul_power),
      opt(r.total_ul_power_dbm), opt(r.total_dl_power), opt(r.duality_gap));
  for (std::size_t n = 0; n < r.achieved_sinr_db.size(); ++n) {
    if (n > 0) s += ',';
    s += num(r.achieved_sinr_db[n]);
  }
  s += "],\"zeroed_cells\":[";
  for (std::size_t n = 0; n < r.zeroed_cells.size(); ++n) {
    if (n > 0) s += ',';
    s += std::to_string(r.zeroed_cells[n]);
  }
  s += "]}";
  return s;
}

TrialRecord record_from_json(const std::string& line) {
  try {
    const json j = json::parse(line);
    TrialRecord r;
    r.trial = j.at("trial").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.bits = BitDepth::parse(j.at("bits").get<std::string>());
    r.gamma_db = j.at("gamma_db").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.failure = j.at("failure").get<std::string>();
    r.iterations = j.at("iterations").get<int>();
    r.total_ul_power = read_opt(j, "total_ul_power");
    r.total_ul_power_dbm = read_opt(j, "total_ul_power_dbm");
    r.total_dl_power = read_opt(j, "total_dl_power");
    r.duality_gap = read_opt(j, "duality_gap");
    for (const auto& v : j.at("achieved_sinr_db")) {
      r.achieved_sinr_db.push_back(v.is_null() ? -std::numeric_limits<double>::infinity() : v.get<double>());
    }
    for (const auto& v : j.at("zeroed_cells")) r.zeroed_cells.push_back(v.get<int>());
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed record: ") + e.what());
  }
}

void write_records(const std::string& path, const std::vector<TrialRecord>& records) {
  auto out = open_out(path);
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::vector<TrialRecord> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::vector<TrialRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(record_from_json(line));
  }
  return out;
}

void write_cdf_csv(const std::string& path, const std::vector<CdfRow>& rows) {
  auto out = open_out(path);
  out << "algorithm,sinr_db,cdf\n";
  for (const auto& r : rows) out << fmt::format("{},{:.17g},{:.17g}\n", r.algorithm, r.sinr_db, r.cdf);
}

void write_power_sweep_csv(const std::string& path, const std::vector<PowerSweepRow>& rows) {
  auto out = open_out(path);
  auto field = [](const std::optional<double>& x) { return x ? fmt::format("{:.17g}", *x) : std::string(); };
  out << "algorithm,bits,gamma_db,mean_total_power_dbm,p5,p95,infeasible_fraction\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{:.17g},{},{},{},{:.17g}\n", r.algorithm, r.bits, r.gamma_db,
                       field(r.mean_total_power_dbm), field(r.p5), field(r.p95), r.infeasible_fraction);
  }
}

void write_metadata(const std::string& path, const ExperimentConfig& config, std::size_t record_count) {
  json meta{{"generator", "qcomp"},
            {"n_trials", config.n_trials},
            {"record_count", record_count},
            {"seeds", fmt::format("{}..{}", config.trial_seed_base,
                                  config.trial_seed_base + static_cast<std::uint64_t>(config.n_trials) - 1)},
            {"power_units", "lambda in mW (channels normalized by the noise power in mW)"},
            {"config", json::parse(config_to_json(config))}};
  auto out = open_out(path);
  out << meta.dump(2) << '\n';
}

std::vector<std::string> write_outputs(const ExperimentConfig& config, const std::vector<TrialRecord>& records) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  const std::string records_path = (dir / "records.jsonl").string();
  const std::string cdf_path = (dir / "cdf.csv").string();
  const std::string sweep_path = (dir / "power_sweep.csv").string();
  const std::string meta_path = (dir / "metadata.json").string();
  write_records(records_path, records);
  write_cdf_csv(cdf_path, summarize_cdf(records));
  write_power_sweep_csv(sweep_path, summarize_power_sweep(records));
  write_metadata(meta_path, config, records.size());
  return {records_path, cdf_path, sweep_path, meta_path};
}

}  // namespace qcomp
