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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qcomp/error.hpp"
#include "qcomp/harness.hpp"
#include "qcomp/records_io.hpp"

using namespace qcomp;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    return e.what();
  }
  FAIL("config accepted: " << text);
  return {};
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.scenario.n_bs_antennas = 8;
  c.scenario.n_users_per_cell = 2;
  c.n_trials = 3;
  c.sweep_db = {-5.0, 0.0};
  c.bits = {BitDepth(2), BitDepth::infinite()};
  c.algorithms = {Algorithm::ICoMP, Algorithm::DCoMP, Algorithm::Percell};
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qcomp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TrialRecord converged_record(const std::string& algo_bits, double gamma_db, double power) {
  TrialRecord r;
  r.algorithm = Algorithm::ICoMP;
  r.bits = BitDepth::parse(algo_bits);
  r.gamma_db = gamma_db;
  r.converged = power > 0.0;
  if (r.converged) {
    r.total_ul_power = power;
    r.total_ul_power_dbm = 10.0 * std::log10(power);
  } else {
    r.failure = "Infeasible";
  }
  return r;
}

}  // namespace

TEST_CASE("config parsing applies every section") {
  const ExperimentConfig c = parse_config(R"({
    "scenario": {"n_cells": 3, "n_bs_antennas": 16, "adc_dac_bits": "inf", "target_sinr_db": [2.5]},
    "experiment": {"algorithms": ["icomp", "percell"], "bits": [1, 3, "inf"], "sweep_db": [0, 5],
                   "n_trials": 7, "output_dir": "out", "trial_seed_base": 40, "workers": 2},
    "solver": {"tolerance": 1e-9, "max_iterations": 500, "power_cap": 1e5, "outer_tolerance": 1e-8,
               "max_outer": 50, "sigma_structure": "block_diagonal"}
  })");
  CHECK(c.scenario.n_cells == 3);
  CHECK(c.scenario.n_bs_antennas == 16);
  CHECK(c.scenario.adc_dac_bits.is_infinite());
  CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::ICoMP, Algorithm::Percell});
  REQUIRE(c.bits.size() == 3);
  CHECK(c.bits[2].is_infinite());
  CHECK(c.gamma_list_db() == std::vector<double>{0.0, 5.0});
  CHECK(c.n_trials == 7);
  CHECK(c.trial_seed_base == 40);
  CHECK(c.solver.max_iterations == 500);
  CHECK(c.percell.max_outer == 50);
  CHECK(c.percell.tolerance == 1e-8);
  CHECK(c.percell.inner.max_iterations == 500);
  CHECK(c.percell.power_cap == 1e5);
  CHECK(c.sigma_structure == SigmaStructure::BlockDiagonal);

  const ExperimentConfig d = parse_config("{}");
  CHECK(d.bit_list().size() == 1);
  CHECK(d.bit_list()[0] == BitDepth(3));
  CHECK(d.gamma_list_db() == std::vector<double>{0.0});
}

TEST_CASE("config errors carry location or key path") {
  const std::string syntax = config_error("{\n  \"scenario\": {\n    \"n_cells\": 2,\n  }\n}");
  CHECK(syntax.find("cfg.json:4:") != std::string::npos);
  CHECK(config_error(R"({"scenario": {"n_cell": 2}})").find("scenario.n_cell") != std::string::npos);
  CHECK(config_error(R"({"scenery": {}})").find("scenery") != std::string::npos);
  CHECK(config_error(R"({"scenario": {"n_cells": "two"}})").find("scenario.n_cells") != std::string::npos);
  CHECK(config_error(R"({"experiment": {"algorithms": ["icomp", "best"]}})").find("experiment.algorithms[1]") !=
        std::string::npos);
  CHECK(config_error(R"({"experiment": {"bits": [0]}})").find("experiment.bits[0]") != std::string::npos);
  CHECK(config_error(R"({"solver": {"sigma_structure": "dense"}})").find("solver.sigma_structure") !=
        std::string::npos);
  CHECK(config_error("[1, 2]").find("top level") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/qcomp.json"), Error);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.scenario.n_subcarriers = 8;
  c.scenario.n_taps = 4;
  CHECK_THROWS_AS(validate_config(c), Error);
  c.algorithms = {Algorithm::OfdmICoMP};
  CHECK_NOTHROW(validate_config(c));

  ExperimentConfig d;
  d.scenario.target_sinr_db = {0.0, 1.0, 2.0, 3.0};
  CHECK_NOTHROW(validate_config(d));
  d.sweep_db = {0.0};
  CHECK_THROWS_AS(validate_config(d), Error);

  ExperimentConfig e;
  e.n_trials = 0;
  CHECK_THROWS_AS(validate_config(e), Error);
  e = ExperimentConfig{};
  e.scenario.n_cells = 0;
  CHECK_THROWS_AS(validate_config(e), Error);

  CHECK(parse_algorithm("dcomp") == Algorithm::DCoMP);
  CHECK(to_string(Algorithm::OfdmICoMP) == "ofdm_icomp");
  CHECK_THROWS_AS(parse_algorithm("icomp2"), Error);
}

TEST_CASE("canonical config json parses back to itself") {
  ExperimentConfig c = small_config();
  c.solver.power_cap = 123.0;
  const std::string once = config_to_json(c);
  const std::string twice = config_to_json(parse_config(once));
  CHECK(once == twice);
}

TEST_CASE("experiments are deterministic and independent of worker count") {
  ExperimentConfig c = small_config();
  c.workers = 1;
  const auto a = run_experiment(c);
  c.workers = 3;
  const auto b = run_experiment(c);
  REQUIRE(a.size() == 3u * 2u * 3u * 2u);
  CHECK(a == b);

  // Ordering: trial, then gamma, algorithm, bits.
  CHECK(a[0].trial == 0);
  CHECK(a[0].gamma_db == -5.0);
  CHECK(a[0].algorithm == Algorithm::ICoMP);
  CHECK(a[1].bits.is_infinite());
  CHECK(a[2].algorithm == Algorithm::DCoMP);
  CHECK(a[6].gamma_db == 0.0);
  CHECK(a[12].trial == 1);
  CHECK(a[12].seed == c.trial_seed_base + 1);

  c.trial_seed_base = 100;
  const auto shifted = run_experiment(c);
  CHECK(shifted[0].total_ul_power != a[0].total_ul_power);
}

TEST_CASE("records of converged trials") {
  ExperimentConfig c = small_config();
  const auto records = run_experiment(c);
  for (const auto& r : records) {
    if (!r.converged) {
      CHECK(!r.failure.empty());
      CHECK(!r.total_ul_power);
      continue;
    }
    CHECK(r.failure.empty());
    REQUIRE(r.total_ul_power);
    CHECK(*r.total_ul_power_dbm == doctest::Approx(10.0 * std::log10(*r.total_ul_power)));
    CHECK(r.achieved_sinr_db.size() == 4);
    if (r.algorithm == Algorithm::DCoMP) {
      for (std::size_t n = 0; n < r.achieved_sinr_db.size(); ++n) {
        const int cell = static_cast<int>(n) / 2;
        const bool zeroed = std::find(r.zeroed_cells.begin(), r.zeroed_cells.end(), cell) != r.zeroed_cells.end();
        if (zeroed) CHECK(std::isinf(r.achieved_sinr_db[n]));
      }
      continue;
    }
    REQUIRE(r.duality_gap);
    CHECK(*r.duality_gap <= 1e-6);
    for (double s : r.achieved_sinr_db) CHECK(s == doctest::Approx(r.gamma_db).epsilon(1e-6));
  }
}

TEST_CASE("failed solves become unconverged records") {
  ExperimentConfig c = small_config();
  c.sweep_db = {40.0};
  c.bits = {BitDepth(1)};
  c.algorithms = {Algorithm::ICoMP};
  c.n_trials = 1;
  const auto records = run_experiment(c);
  REQUIRE(records.size() == 1);
  CHECK(!records[0].converged);
  CHECK(records[0].failure == "Infeasible");
  CHECK(records[0].achieved_sinr_db.empty());
}

TEST_CASE("percentiles interpolate linearly") {
  CHECK(percentile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
  CHECK(percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.05) == doctest::Approx(1.2));
  CHECK(percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.95) == doctest::Approx(4.8));
  CHECK(percentile({7.0}, 0.3) == 7.0);
  CHECK_THROWS_AS(percentile({}, 0.5), Error);
}

TEST_CASE("power sweep summary") {
  std::vector<TrialRecord> rs{converged_record("3", 0.0, 1.0), converged_record("3", 0.0, 100.0),
                              converged_record("3", 0.0, 0.0), converged_record("inf", 0.0, 10.0),
                              converged_record("1", 0.0, 0.0), converged_record("3", 5.0, 10.0)};
  const auto rows = summarize_power_sweep(rs);
  REQUIRE(rows.size() == 4);
  // Ordered by bits with inf last, then gamma.
  CHECK(rows[0].bits == "1");
  CHECK(rows[1].bits == "3");
  CHECK(rows[1].gamma_db == 0.0);
  CHECK(rows[2].gamma_db == 5.0);
  CHECK(rows[3].bits == "inf");

  CHECK(!rows[0].mean_total_power_dbm);
  CHECK(!rows[0].p5);
  CHECK(rows[0].infeasible_fraction == 1.0);

  CHECK(rows[1].trials == 3);
  CHECK(rows[1].infeasible_fraction == doctest::Approx(1.0 / 3.0));
  CHECK(*rows[1].mean_total_power_dbm == doctest::Approx(10.0 * std::log10(50.5)));
  CHECK(*rows[1].p5 == doctest::Approx(0.0 + 0.05 * 20.0));
  CHECK(*rows[1].p95 == doctest::Approx(0.95 * 20.0));
  CHECK(*rows[3].mean_total_power_dbm == doctest::Approx(10.0));
}

TEST_CASE("empirical CDF") {
  TrialRecord a = converged_record("3", 0.0, 1.0);
  a.achieved_sinr_db = {3.0, 1.0, -std::numeric_limits<double>::infinity()};
  TrialRecord b = converged_record("3", 0.0, 1.0);
  b.algorithm = Algorithm::DCoMP;
  b.achieved_sinr_db = {0.5, 2.0};
  TrialRecord failed = converged_record("3", 0.0, 0.0);
  failed.achieved_sinr_db = {9.0};
  TrialRecord c = a;
  c.achieved_sinr_db = {2.0};
  const auto rows = summarize_cdf({a, b, failed, c});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].algorithm == "dcomp");
  CHECK(rows[0].sinr_db == 0.5);
  CHECK(rows[1].cdf == 1.0);
  CHECK(rows[2].algorithm == "icomp");
  CHECK(rows[2].sinr_db == 1.0);
  CHECK(rows[2].cdf == doctest::Approx(1.0 / 3.0));
  CHECK(rows[4].sinr_db == 3.0);
  CHECK(rows[4].cdf == 1.0);
  for (std::size_t n = 3; n < rows.size(); ++n) CHECK(rows[n].sinr_db >= rows[n - 1].sinr_db);
}

TEST_CASE("records survive a JSON lines round trip") {
  TrialRecord r = converged_record("2", -3.5, 0.1234567890123456789);
  r.trial = 4;
  r.seed = 18446744073709551615ull;
  r.algorithm = Algorithm::Percell;
  r.iterations = 17;
  r.total_dl_power = 0.25;
  r.duality_gap = 1e-13;
  r.achieved_sinr_db = {1.0 / 3.0, -std::numeric_limits<double>::infinity()};
  r.zeroed_cells = {1};
  TrialRecord f = converged_record("inf", 2.0, 0.0);

  const std::string line = record_to_json(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(record_from_json(line) == r);
  CHECK(record_from_json(record_to_json(f)) == f);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["achieved_sinr_db"][1].is_null());
  CHECK(j["bits"] == "2");

  const fs::path dir = scratch("jsonl");
  write_records((dir / "r.jsonl").string(), {r, f});
  const auto back = read_records((dir / "r.jsonl").string());
  REQUIRE(back.size() == 2);
  CHECK(back[0] == r);
  CHECK(back[1] == f);
  CHECK_THROWS_AS(record_from_json("{\"trial\": 1"), Error);
  fs::remove_all(dir);
}

TEST_CASE("output files") {
  ExperimentConfig c = small_config();
  c.n_trials = 2;
  const fs::path dir = scratch("outputs");
  c.output_dir = dir.string();
  const auto records = run_experiment(c);
  const auto paths = write_outputs(c, records);
  CHECK(paths.size() == 4);
  for (const char* name : {"records.jsonl", "cdf.csv", "power_sweep.csv", "metadata.json"}) {
    CHECK(fs::exists(dir / name));
  }
  CHECK(slurp(dir / "cdf.csv").rfind("algorithm,sinr_db,cdf\n", 0) == 0);
  CHECK(slurp(dir / "power_sweep.csv")
            .rfind("algorithm,bits,gamma_db,mean_total_power_dbm,p5,p95,infeasible_fraction\n", 0) == 0);
  const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
  CHECK(meta["n_trials"] == 2);
  CHECK(meta["record_count"] == records.size());
  CHECK(read_records((dir / "records.jsonl").string()) == records);

  // Rewriting the same run gives byte-identical files.
  const std::string first = slurp(dir / "records.jsonl") + slurp(dir / "metadata.json");
  write_outputs(c, run_experiment(c));
  CHECK(slurp(dir / "records.jsonl") + slurp(dir / "metadata.json") == first);
  fs::remove_all(dir);
}
