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
#include <random>

#include "doctest.h"
#include "qcomp/network.hpp"

using namespace qcomp;

TEST_CASE("hexagonal sites") {
  const auto two = hex_sites(2, 2000.0);
  REQUIRE(two.size() == 2);
  CHECK(distance(two[0], two[1]) == doctest::Approx(2000.0).epsilon(1e-12));
  const auto seven = hex_sites(7, 2000.0);
  REQUIRE(seven.size() == 7);
  for (int i = 1; i < 7; ++i) CHECK(distance(seven[0], seven[i]) == doctest::Approx(2000.0).epsilon(1e-12));
  // Ring neighbours are adjacent to each other as well.
  for (int i = 1; i < 7; ++i) {
    const int next = i == 6 ? 1 : i + 1;
    CHECK(distance(seven[i], seven[next]) == doctest::Approx(2000.0).epsilon(1e-12));
  }
  const auto nineteen = hex_sites(19, 1.0);
  for (std::size_t a = 0; a < nineteen.size(); ++a) {
    for (std::size_t b = a + 1; b < nineteen.size(); ++b) CHECK(distance(nineteen[a], nineteen[b]) > 0.999);
  }
}

TEST_CASE("hexagon membership") {
  const Point c{0.0, 0.0};
  CHECK(in_hex_cell({0.0, 0.0}, c, 2000.0));
  CHECK(in_hex_cell({999.0, 0.0}, c, 2000.0));
  CHECK_FALSE(in_hex_cell({1001.0, 0.0}, c, 2000.0));
  // Vertex direction reaches isd / sqrt(3).
  CHECK(in_hex_cell({0.0, 1150.0}, c, 2000.0));
  CHECK_FALSE(in_hex_cell({0.0, 1160.0}, c, 2000.0));
}

TEST_CASE("users respect cells and minimum distance") {
  Scenario s;
  s.n_cells = 7;
  s.n_users_per_cell = 4;
  std::mt19937_64 rng(3);
  int draws = 0;
  while (draws < 10000) {
    const Geometry g = build_geometry(s, rng);
    for (int c = 0; c < s.n_cells; ++c) {
      for (const Point& p : g.users[c]) {
        CHECK(in_hex_cell(p, g.bs[c], s.inter_site_distance_m));
        for (const Point& b : g.bs) REQUIRE(distance(p, b) >= 100.0);
        ++draws;
      }
    }
  }
}

TEST_CASE("pathloss and noise") {
  CHECK(free_space_loss_db(100.0, 2.4e9) == doctest::Approx(80.05).epsilon(1e-3));
  PathlossModel m;
  m.shadowing_sigma_db = 0.0;
  std::mt19937_64 rng(1);
  const double at_ref = link_gain_db(100.0, m, rng);
  CHECK(at_ref == doctest::Approx(-free_space_loss_db(100.0, 2.4e9)).epsilon(1e-14));
  CHECK(link_gain_db(1000.0, m, rng) == doctest::Approx(at_ref - 38.0).epsilon(1e-12));
  CHECK(link_gain_db(10.0, m, rng) == doctest::Approx(at_ref).epsilon(1e-14));

  CHECK(noise_power_dbm(1e7, 5.0) == doctest::Approx(-99.0).epsilon(1e-12));
  CHECK(noise_power_dbm(1.0, 0.0) == doctest::Approx(-174.0).epsilon(1e-12));
  CHECK(noise_power_dbm(2e7, 5.0) - noise_power_dbm(1e7, 5.0) == doctest::Approx(3.0103).epsilon(1e-4));
}

TEST_CASE("shadowing spread") {
  PathlossModel m;
  std::mt19937_64 rng(2);
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = link_gain_db(500.0, m, rng);
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(sd - 8.7) <= 0.1);
}

TEST_CASE("delay profiles") {
  const auto e = delay_profile_powers(4, DelayProfile::Exponential);
  double total = 0.0;
  for (double p : e) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e[1] / e[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  const auto u = delay_profile_powers(3, DelayProfile::Uniform);
  for (double p : u) CHECK(p == doctest::Approx(1.0 / 3.0));
  CHECK(parse_delay_profile("uniform") == DelayProfile::Uniform);
  CHECK_THROWS_AS(parse_delay_profile("flat"), Error);
}

TEST_CASE("scenario validation") {
  Scenario s;
  CHECK(validate(s).empty());
  s.n_bs_antennas = 4;
  CHECK(validate(s).size() == 1);
  s.n_bs_antennas = 1;
  CHECK_THROWS_AS(validate(s), Error);
  s = Scenario{};
  s.n_taps = 4;
  CHECK_THROWS_AS(validate(s), Error);
  s.n_subcarriers = 4;
  CHECK_NOTHROW(validate(s));
  s.target_sinr_db = {0.0, 1.0, 2.0};
  CHECK_THROWS_AS(validate(s), Error);
  s.target_sinr_db = std::vector<double>(16, 3.0);
  CHECK_NOTHROW(validate(s));
  const SinrValues t = target_sinr(s);
  CHECK(t.size() == 16);
  CHECK(t[5] == doctest::Approx(std::pow(10.0, 0.3)));
}

TEST_CASE("channel draws are deterministic") {
  Scenario s;
  s.n_bs_antennas = 8;
  const ChannelSet a = draw_trial_channels(s, 42);
  const ChannelSet b = draw_trial_channels(s, 42);
  const ChannelSet c = draw_trial_channels(s, 43);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(a.narrowband().block(i, j) == b.narrowband().block(i, j));
      CHECK(a.narrowband().block(i, j) != c.narrowband().block(i, j));
    }
  }
}

TEST_CASE("small-scale fading moments") {
  Scenario s;
  s.n_cells = 1;
  s.n_users_per_cell = 1;
  s.n_bs_antennas = 8;
  Geometry g;
  g.bs = {{0.0, 0.0}};
  g.users = {{{100.0, 0.0}}};
  // Unit link gain after normalization: make the gain equal the noise.
  s.shadowing_sigma_db = 0.0;
  const double gain_db = -free_space_loss_db(100.0, s.carrier_hz);
  const double noise_db = noise_power_dbm(s.bandwidth_hz, s.noise_figure_db);
  const double scale = std::pow(10.0, (gain_db - noise_db) / 10.0);

  std::mt19937_64 rng(9);
  double flat = 0.0;
  const int n = 10000;
  for (int t = 0; t < n; ++t) flat += draw_channels(s, g, rng).narrowband().block(0, 0).squaredNorm() / scale;
  CHECK(std::abs(flat / n - 8.0) <= 0.02 * 8.0);

  s.n_taps = 4;
  s.n_subcarriers = 4;
  double wide = 0.0;
  for (int t = 0; t < n; ++t) {
    const ChannelSet ch = draw_channels(s, g, rng);
    for (const auto& tap : ch.taps()) wide += tap.block(0, 0).squaredNorm() / scale;
  }
  CHECK(std::abs(wide / n - flat / n) <= 0.02 * flat / n);
}

TEST_CASE("in-cell links are stronger on average") {
  Scenario s;
  s.n_bs_antennas = 4;
  s.n_users_per_cell = 1;
  double in_cell = 0.0;
  double cross = 0.0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const ChannelSet ch = draw_trial_channels(s, seed);
    const LinkMatrices& h = ch.narrowband();
    in_cell += h.block(0, 0).squaredNorm() + h.block(1, 1).squaredNorm();
    cross += h.block(0, 1).squaredNorm() + h.block(1, 0).squaredNorm();
  }
  CHECK(in_cell > cross);
}

TEST_CASE("taps grouped by cell") {
  Scenario s;
  s.n_bs_antennas = 4;
  s.n_taps = 3;
  s.n_subcarriers = 4;
  const ChannelSet ch = draw_trial_channels(s, 5);
  const auto by_cell = ch.taps_by_cell(1);
  REQUIRE(by_cell.size() == 2);
  REQUIRE(by_cell[0].size() == 3);
  CHECK(by_cell[0][2] == ch.taps()[2].block(1, 0));
  CHECK_THROWS_AS(ch.narrowband(), Error);
}
