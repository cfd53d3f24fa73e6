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

#ifndef QCOMP_NETWORK_HPP
#define QCOMP_NETWORK_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qcomp/quantization.hpp"
#include "qcomp/types.hpp"

namespace qcomp {

enum class DelayProfile { Uniform, Exponential };

std::string to_string(DelayProfile p);
DelayProfile parse_delay_profile(const std::string& text);

// Full description of one experiment geometry and radio setup.
struct Scenario {
  int n_cells = 2;
  int n_users_per_cell = 2;
  int n_bs_antennas = 64;
  BitDepth adc_dac_bits = BitDepth(3);
  int n_subcarriers = 1;  // 1 = narrowband
  int n_taps = 1;
  double inter_site_distance_m = 2000.0;
  double min_bs_user_distance_m = 100.0;
  double reference_distance_m = 100.0;
  double carrier_hz = 2.4e9;
  double bandwidth_hz = 1e7;
  double noise_figure_db = 5.0;
  double shadowing_sigma_db = 8.7;
  double pathloss_exponent = 3.8;
  DelayProfile delay_profile = DelayProfile::Exponential;
  // One value (broadcast to every user and subcarrier) or one per
  // (cell, user[, subcarrier]) in GridShape order.
  std::vector<double> target_sinr_db{0.0};
  std::uint64_t seed = 1;

  GridShape grid() const { return {n_cells, n_users_per_cell, n_subcarriers}; }
};

// Throws InvalidArgument on a violated invariant; returns non-fatal
// warnings (currently N_b < 4 N_u).
std::vector<std::string> validate(const Scenario& s);

// Per-user linear targets expanded to the scenario grid.
SinrValues target_sinr(const Scenario& s);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

struct Geometry {
  std::vector<Point> bs;
  std::vector<std::vector<Point>> users;  // users[cell][user]
};

// Hexagonal-lattice BS sites: 2 cells side by side, 7 cells as a center
// plus its first ring, other counts filled ring by ring.
std::vector<Point> hex_sites(int n_cells, double inter_site_distance);

// True if p lies in the hexagonal cell of the site at `center` whose
// neighbours are at `inter_site_distance`.
bool in_hex_cell(Point p, Point center, double inter_site_distance);

Geometry build_geometry(const Scenario& s, std::mt19937_64& rng);

// Free-space loss in dB at distance d (m) and frequency f (Hz).
double free_space_loss_db(double distance_m, double carrier_hz);

struct PathlossModel {
  double reference_distance_m = 100.0;
  double carrier_hz = 2.4e9;
  double exponent = 3.8;
  double shadowing_sigma_db = 8.7;

  static PathlossModel from(const Scenario& s);
};

// Negative of log-distance pathloss with free-space anchor at d0, plus
// one lognormal shadowing draw (none when sigma is 0). Distances below d0
// are clamped to d0.
double link_gain_db(double distance_m, const PathlossModel& model, std::mt19937_64& rng);

// Thermal noise power -174 dBm/Hz + 10 log10(BW) + NF.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

std::vector<double> delay_profile_powers(int taps, DelayProfile profile);

// Noise-normalized channels. taps()[l].block(i, j) is H_{i,j,l}; the
// narrowband case has a single tap.
class ChannelSet {
 public:
  ChannelSet() = default;
  explicit ChannelSet(std::vector<LinkMatrices> taps);

  int cells() const noexcept { return taps_.front().cells(); }
  int bs_antennas() const noexcept { return taps_.front().bs_antennas(); }
  int users() const noexcept { return taps_.front().users(); }
  int n_taps() const noexcept { return static_cast<int>(taps_.size()); }

  const std::vector<LinkMatrices>& taps() const noexcept { return taps_; }
  // Requires a single tap.
  const LinkMatrices& narrowband() const;
  // taps_by_cell[j][l] = H_{bs, j, l}
  std::vector<std::vector<CMatrix>> taps_by_cell(int bs) const;

 private:
  std::vector<LinkMatrices> taps_;
};

// Draws small-scale Rayleigh fading on top of the large-scale gains
// implied by `geometry`. Each column (BS i, user (j, v)) is scaled by
// sqrt(gain / noise) with noise in mW, so AWGN has unit variance.
ChannelSet draw_channels(const Scenario& s, const Geometry& geometry, std::mt19937_64& rng);

// Geometry then channels from one generator seeded with `seed`.
ChannelSet draw_trial_channels(const Scenario& s, std::uint64_t seed);

}  // namespace qcomp

#endif  // QCOMP_NETWORK_HPP
