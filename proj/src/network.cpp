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

#include "qcomp/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcomp {

std::string to_string(DelayProfile p) { return p == DelayProfile::Uniform ? "uniform" : "exponential"; }

DelayProfile parse_delay_profile(const std::string& text) {
  if (text == "uniform") return DelayProfile::Uniform;
  if (text == "exponential") return DelayProfile::Exponential;
  throw Error(ErrorKind::InvalidArgument, "unknown delay profile '" + text + "'");
}

std::vector<std::string> validate(const Scenario& s) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (s.n_cells < 1) fail("n_cells must be >= 1");
  if (s.n_users_per_cell < 1) fail("n_users_per_cell must be >= 1");
  if (s.n_bs_antennas < s.n_users_per_cell) fail("n_bs_antennas must be >= n_users_per_cell");
  if (s.n_subcarriers < 1 || s.n_taps < 1) fail("n_subcarriers and n_taps must be >= 1");
  if (s.n_taps > s.n_subcarriers) fail("n_taps must not exceed n_subcarriers");
  if (!(s.inter_site_distance_m > 0.0) || !(s.min_bs_user_distance_m > 0.0) || !(s.reference_distance_m > 0.0)) {
    fail("distances must be positive");
  }
  if (2.0 * s.min_bs_user_distance_m >= s.inter_site_distance_m) fail("min_bs_user_distance_m too large for the cell");
  if (!(s.carrier_hz > 0.0) || !(s.bandwidth_hz > 0.0)) fail("carrier and bandwidth must be positive");
  if (!(s.shadowing_sigma_db >= 0.0)) fail("shadowing_sigma_db must be >= 0");
  if (!s.adc_dac_bits.is_infinite() && s.adc_dac_bits.bits() < 1) fail("adc_dac_bits must be >= 1 or inf");
  const std::size_t full = s.grid().size();
  if (s.target_sinr_db.size() != 1 && s.target_sinr_db.size() != full) {
    fail("target_sinr_db must hold 1 or " + std::to_string(full) + " values");
  }
  for (double g : s.target_sinr_db) {
    if (!std::isfinite(g)) fail("target_sinr_db values must be finite");
  }
  std::vector<std::string> warnings;
  if (s.n_bs_antennas < 4 * s.n_users_per_cell) {
    warnings.push_back("n_bs_antennas < 4 * n_users_per_cell: far from the massive MIMO regime");
  }
  return warnings;
}

SinrValues target_sinr(const Scenario& s) {
  const GridShape shape = s.grid();
  SinrValues out(shape);
  for (std::size_t n = 0; n < shape.size(); ++n) {
    out[n] = db_to_linear(s.target_sinr_db.size() == 1 ? s.target_sinr_db.front() : s.target_sinr_db[n]);
  }
  return out;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Point> hex_sites(int n_cells, double isd) {
  require(n_cells >= 1, ErrorKind::InvalidArgument, "n_cells must be >= 1");
  // Axial lattice a1 = (isd, 0), a2 = (isd / 2, isd sqrt(3) / 2), visited
  // ring by ring and counter-clockwise from the +x axis within a ring.
  std::vector<Point> sites{{0.0, 0.0}};
  for (int ring = 1; static_cast<int>(sites.size()) < n_cells; ++ring) {
    std::vector<std::pair<double, Point>> layer;
    for (int q = -ring; q <= ring; ++q) {
      for (int r = -ring; r <= ring; ++r) {
        const int hex_dist = (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
        if (hex_dist != ring) continue;
        const Point p{isd * (q + 0.5 * r), isd * (std::numbers::sqrt3 / 2.0) * r};
        double angle = std::atan2(p.y, p.x);
        if (angle < -1e-12) angle += 2.0 * std::numbers::pi;
        layer.emplace_back(angle, p);
      }
    }
    std::sort(layer.begin(), layer.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [angle, p] : layer) {
      if (static_cast<int>(sites.size()) == n_cells) break;
      sites.push_back(p);
    }
  }
  return sites;
}

bool in_hex_cell(Point p, Point center, double isd) {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  const double apothem = 0.5 * isd;
  for (int face = 0; face < 3; ++face) {
    const double theta = face * std::numbers::pi / 3.0;
    if (std::abs(dx * std::cos(theta) + dy * std::sin(theta)) > apothem) return false;
  }
  return true;
}

Geometry build_geometry(const Scenario& s, std::mt19937_64& rng) {
  Geometry g;
  g.bs = hex_sites(s.n_cells, s.inter_site_distance_m);
  const double half_width = 0.5 * s.inter_site_distance_m;
  const double half_height = s.inter_site_distance_m / std::numbers::sqrt3;
  std::uniform_real_distribution<double> ux(-half_width, half_width);
  std::uniform_real_distribution<double> uy(-half_height, half_height);
  g.users.resize(static_cast<std::size_t>(s.n_cells));
  for (int c = 0; c < s.n_cells; ++c) {
    const Point center = g.bs[static_cast<std::size_t>(c)];
    auto& users = g.users[static_cast<std::size_t>(c)];
    while (static_cast<int>(users.size()) < s.n_users_per_cell) {
      const Point p{center.x + ux(rng), center.y + uy(rng)};
      if (!in_hex_cell(p, center, s.inter_site_distance_m)) continue;
      const bool too_close = std::any_of(g.bs.begin(), g.bs.end(), [&](Point b) {
        return distance(p, b) < s.min_bs_user_distance_m;
      });
      if (!too_close) users.push_back(p);
    }
  }
  return g;
}

double free_space_loss_db(double distance_m, double carrier_hz) {
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_hz) - 147.55;
}

PathlossModel PathlossModel::from(const Scenario& s) {
  return {s.reference_distance_m, s.carrier_hz, s.pathloss_exponent, s.shadowing_sigma_db};
}

double link_gain_db(double distance_m, const PathlossModel& m, std::mt19937_64& rng) {
  const double d = std::max(distance_m, m.reference_distance_m);
  double loss = free_space_loss_db(m.reference_distance_m, m.carrier_hz) +
                10.0 * m.exponent * std::log10(d / m.reference_distance_m);
  if (m.shadowing_sigma_db > 0.0) {
    std::normal_distribution<double> shadow(0.0, m.shadowing_sigma_db);
    loss += shadow(rng);
  }
  return -loss;
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

std::vector<double> delay_profile_powers(int taps, DelayProfile profile) {
  require(taps >= 1, ErrorKind::InvalidArgument, "taps must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(taps));
  double total = 0.0;
  for (int l = 0; l < taps; ++l) {
    p[l] = profile == DelayProfile::Exponential ? std::exp(-l / 2.0) : 1.0;
    total += p[l];
  }
  for (double& x : p) x /= total;
  return p;
}

ChannelSet::ChannelSet(std::vector<LinkMatrices> taps) : taps_(std::move(taps)) {
  require(!taps_.empty(), ErrorKind::InvalidArgument, "ChannelSet needs at least one tap");
}

const LinkMatrices& ChannelSet::narrowband() const {
  require(taps_.size() == 1, ErrorKind::DimensionMismatch, "narrowband view requested for a multi-tap channel");
  return taps_.front();
}

std::vector<std::vector<CMatrix>> ChannelSet::taps_by_cell(int bs) const {
  std::vector<std::vector<CMatrix>> out(static_cast<std::size_t>(cells()));
  for (int j = 0; j < cells(); ++j) {
    for (const auto& tap : taps_) out[static_cast<std::size_t>(j)].push_back(tap.block(bs, j));
  }
  return out;
}

ChannelSet draw_channels(const Scenario& s, const Geometry& geometry, std::mt19937_64& rng) {
  const PathlossModel model = PathlossModel::from(s);
  const double noise_mw = std::pow(10.0, noise_power_dbm(s.bandwidth_hz, s.noise_figure_db) / 10.0);
  const int nc = s.n_cells;
  const int nu = s.n_users_per_cell;

  // Large-scale amplitude per (BS i, cell j, user v).
  std::vector<double> amplitude(static_cast<std::size_t>(nc) * nc * nu);
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      for (int v = 0; v < nu; ++v) {
        const double d = distance(geometry.bs[i], geometry.users[j][v]);
        const double gain = std::pow(10.0, link_gain_db(d, model, rng) / 10.0);
        amplitude[(static_cast<std::size_t>(i) * nc + j) * nu + v] = std::sqrt(gain / noise_mw);
      }
    }
  }

  const std::vector<double> profile = delay_profile_powers(s.n_taps, s.delay_profile);
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  std::vector<LinkMatrices> taps(static_cast<std::size_t>(s.n_taps), LinkMatrices(nc, s.n_bs_antennas, nu));
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      for (int l = 0; l < s.n_taps; ++l) {
        CMatrix& h = taps[static_cast<std::size_t>(l)].block(i, j);
        const double tap_amp = std::sqrt(profile[static_cast<std::size_t>(l)]);
        for (int v = 0; v < nu; ++v) {
          const double a = tap_amp * amplitude[(static_cast<std::size_t>(i) * nc + j) * nu + v];
          for (int m = 0; m < s.n_bs_antennas; ++m) {
            const double re = component(rng);
            const double im = component(rng);
            h(m, v) = a * Complex(re, im);
          }
        }
      }
    }
  }
  return ChannelSet(std::move(taps));
}

ChannelSet draw_trial_channels(const Scenario& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Geometry g = build_geometry(s, rng);
  return draw_channels(s, g, rng);
}

}  // namespace qcomp
