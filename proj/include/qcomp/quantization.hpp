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

#ifndef QCOMP_QUANTIZATION_HPP
#define QCOMP_QUANTIZATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcomp/types.hpp"

namespace qcomp {

// ADC/DAC resolution; an empty value means infinite resolution.
class BitDepth {
 public:
  static BitDepth infinite() { return BitDepth(); }
  explicit BitDepth(int bits) : bits_(bits) {}

  bool is_infinite() const noexcept { return !bits_.has_value(); }
  int bits() const { return bits_.value(); }

  // "inf" or the decimal bit count.
  std::string to_string() const;
  // Accepts "inf", "infinite" or a decimal integer.
  static BitDepth parse(const std::string& text);

  bool operator==(const BitDepth&) const = default;

 private:
  BitDepth() = default;
  std::optional<int> bits_;
};

// Additive quantization noise model parameters. alpha is the quantization
// gain and beta = 1 - alpha the normalized MSE of the scalar MMSE quantizer.
struct QuantConfig {
  BitDepth bits = BitDepth::infinite();
  double alpha = 1.0;
  double beta = 0.0;
};

// Normalized Lloyd-Max distortion of a unit-variance Gaussian for 1..5 bits.
inline constexpr double kLloydMaxBeta[5] = {0.3634, 0.1175, 0.03454, 0.009497, 0.002499};

// beta from the table for b <= 5, (pi sqrt(3) / 2) 2^{-2b} above, 0 for
// infinite resolution. Throws InvalidBits for b <= 0.
QuantConfig quant_gain(BitDepth bits);

// Quantization config directly from alpha (tests and sweeps over alpha).
QuantConfig quant_from_alpha(double alpha);

// Lloyd-Max (MMSE) scalar quantizer designed for a unit-variance real
// Gaussian. Complex inputs are quantized on real and imaginary parts
// independently after scaling to the per-component standard deviation.
class ScalarQuantizer {
 public:
  static ScalarQuantizer lloyd_max(int bits, double centroid_tolerance = 1e-9, int max_iterations = 1000000);

  int bits() const noexcept { return bits_; }
  const std::vector<double>& levels() const noexcept { return levels_; }
  const std::vector<double>& thresholds() const noexcept { return thresholds_; }

  double quantize(double x) const;
  // Quantizes r ~ CN(0, variance) with the codebook scaled to sqrt(variance / 2).
  Complex quantize(Complex r, double variance) const;

  // E[(x - Q(x))^2] for x ~ N(0,1). Uses the centroid condition,
  // D = 1 - sum_i P(cell i) y_i^2.
  double analytic_distortion() const;

 private:
  int bits_ = 0;
  std::vector<double> levels_;
  std::vector<double> thresholds_;
};

// Monte Carlo estimate of E|r - Q(r)|^2 / E|r|^2 for r ~ CN(0,1) with the
// Lloyd-Max b-bit quantizer on each component.
double lloyd_max_mse(int bits, std::int64_t sample_count, std::uint64_t seed);

// Uplink quantization noise covariance diagonal at one BS:
// alpha (1 - alpha) diag(H_i Lambda H_i^H + I). `stacked` is H_i
// (N_b x N_c N_u) and `lambda` the matching flat powers.
RVector ul_quant_cov(const CMatrix& stacked, std::span<const double> lambda, const QuantConfig& q);

// Downlink quantization noise covariance diagonal: alpha (1 - alpha) diag(W_i W_i^H).
RVector dl_quant_cov(const CMatrix& precoders, const QuantConfig& q);

// diag(Psi^H G_i Lambda G_i^H Psi) for BS i, i.e. the time-domain received
// power per (time n, antenna m) at index n * N_b + m, without the noise
// term. `taps_by_cell[j][l]` is H_{i,j,l}; `lambda` has shape
// (N_c, N_u, K). Computed row by row from the block-circulant structure.
RVector ofdm_ul_load_diag(const std::vector<std::vector<CMatrix>>& taps_by_cell, const PowerAllocation& lambda,
                          int subcarriers);

// alpha (1 - alpha) (ofdm_ul_load_diag + 1), length K N_b.
RVector ofdm_ul_quant_cov_diag(const std::vector<std::vector<CMatrix>>& taps_by_cell,
                               const PowerAllocation& lambda, const QuantConfig& q, int subcarriers);

// alpha (1 - alpha) diag(Psi^H W W^H Psi) for one BS whose per-subcarrier
// precoders are `precoders_by_subcarrier[k]` (N_b x N_u).
RVector ofdm_dl_quant_cov_diag(const std::vector<CMatrix>& precoders_by_subcarrier, const QuantConfig& q);

// Psi(k) diag(d) Psi^H(k) for a time-domain diagonal d of length K N_b;
// the result is diagonal and returned as its N_b entries.
RVector project_to_subcarrier(const RVector& time_diag, int bs_antennas, int subcarrier);

}  // namespace qcomp

#endif  // QCOMP_QUANTIZATION_HPP
