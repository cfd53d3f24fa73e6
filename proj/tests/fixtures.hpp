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

// Random problem instances shared by the tests.

#ifndef QCOMP_TESTS_FIXTURES_HPP
#define QCOMP_TESTS_FIXTURES_HPP

#include <random>

#include "oracles.hpp"
#include "qcomp/network.hpp"
#include "qcomp/sinr.hpp"
#include "qcomp/types.hpp"

namespace fixture {

// Rayleigh channels with in-cell gain `in_gain` and cross-cell gain
// `cross_gain` (power per entry).
inline qcomp::LinkMatrices random_links(int nc, int nb, int nu, std::mt19937_64& rng, double in_gain = 1.0,
                                        double cross_gain = 0.3) {
  qcomp::LinkMatrices h(nc, nb, nu);
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      h.block(i, j) = oracle::random_cmatrix(nb, nu, rng, std::sqrt(i == j ? in_gain : cross_gain));
    }
  }
  return h;
}

inline qcomp::ChannelSet random_taps(int nc, int nb, int nu, int taps, std::mt19937_64& rng, double in_gain = 1.0,
                                     double cross_gain = 0.3) {
  std::vector<qcomp::LinkMatrices> out;
  for (int l = 0; l < taps; ++l) {
    const double p = std::exp(-0.5 * l);
    out.push_back(random_links(nc, nb, nu, rng, p * in_gain, p * cross_gain));
  }
  return qcomp::ChannelSet(std::move(out));
}

inline qcomp::PowerAllocation random_powers(qcomp::GridShape shape, std::mt19937_64& rng, double lo = 0.1,
                                            double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  qcomp::PowerAllocation p(shape);
  for (auto& x : p.values()) x = u(rng);
  return p;
}

inline qcomp::SinrValues uniform_targets(qcomp::GridShape shape, double db) {
  return qcomp::SinrValues(shape, qcomp::db_to_linear(db));
}

inline std::vector<qcomp::CVector> random_vectors(std::size_t count, int nb, std::mt19937_64& rng) {
  std::vector<qcomp::CVector> v;
  for (std::size_t n = 0; n < count; ++n) v.push_back(oracle::random_cmatrix(nb, 1, rng));
  return v;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fixture

#endif  // QCOMP_TESTS_FIXTURES_HPP
