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

#ifndef QCOMP_SINR_HPP
#define QCOMP_SINR_HPP

#include <vector>

#include "qcomp/network.hpp"
#include "qcomp/types.hpp"

namespace qcomp {

// Per-subcarrier channels G_{i,j}(k) together with the taps they came
// from. freq[k].block(i, j) is G_{i,j}(k).
class WidebandChannels {
 public:
  WidebandChannels() = default;
  // Computes G(k) from the taps.
  WidebandChannels(const ChannelSet& taps, int subcarriers);
  // Takes externally supplied G(k) and checks them against the taps;
  // throws DimensionMismatch if any entry differs by more than `tolerance`
  // relative to the largest channel entry.
  WidebandChannels(const ChannelSet& taps, std::vector<LinkMatrices> freq, double tolerance = 1e-10);

  int cells() const noexcept { return taps_.cells(); }
  int users() const noexcept { return taps_.users(); }
  int bs_antennas() const noexcept { return taps_.bs_antennas(); }
  int subcarriers() const noexcept { return static_cast<int>(freq_.size()); }
  GridShape grid() const noexcept { return {cells(), users(), subcarriers()}; }

  const ChannelSet& taps() const noexcept { return taps_; }
  const LinkMatrices& at(int k) const { return freq_[static_cast<std::size_t>(k)]; }
  // g_{i,j,v}(k): channel between BS i and user (j, v) on subcarrier k.
  auto column(int bs, int cell, int user, int k) const { return at(k).column(bs, cell, user); }

 private:
  ChannelSet taps_;
  std::vector<LinkMatrices> freq_;
};

// Combiner and precoder containers are flat over GridShape order.

// Uplink SINR at BS i for user (i, u) with combiners f and powers lambda:
// alpha^2 lambda |f^H h|^2 over alpha^2 (interference + ||f||^2) + f^H C_q f.
SinrValues ul_sinr(const LinkMatrices& h, const std::vector<CVector>& combiners, const PowerAllocation& lambda,
                   double alpha);

// Downlink SINR with precoders w_{j,v} at every BS; unit noise at users.
SinrValues dl_sinr(const LinkMatrices& h, const std::vector<CVector>& precoders, double alpha);

// Downlink quantization noise power seen by each user,
// sum_j h_{j,i,u}^H C_q,j h_{j,i,u}.
SinrValues dl_quant_noise(const LinkMatrices& h, const std::vector<CVector>& precoders, double alpha);

// SINR reached by the MMSE combiner, alpha^2 lambda h^H C_z^{-1} h, where
// C_z covers everything except the desired signal.
SinrValues mmse_ul_sinr(const LinkMatrices& h, const PowerAllocation& lambda, double alpha);

// Uplink SINR per (cell, user, subcarrier). The quantization covariance is
// the subcarrier projection of the time-domain diagonal, which couples all
// subcarriers through lambda.
SinrValues ofdm_ul_sinr(const WidebandChannels& ch, const std::vector<CVector>& combiners,
                        const PowerAllocation& lambda, double alpha);

// Downlink SINR per (cell, user, subcarrier).
SinrValues ofdm_dl_sinr(const WidebandChannels& ch, const std::vector<CVector>& precoders, double alpha);

// Stacks the precoders of cell j at subcarrier k into an N_b x N_u matrix.
CMatrix precoder_matrix(const std::vector<CVector>& precoders, const GridShape& shape, int cell, int subcarrier,
                        int bs_antennas);

}  // namespace qcomp

#endif  // QCOMP_SINR_HPP
