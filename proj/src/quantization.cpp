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

#include "qcomp/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qcomp/numerics.hpp"

namespace qcomp {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string BitDepth::to_string() const { return is_infinite() ? "inf" : std::to_string(*bits_); }

BitDepth BitDepth::parse(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "Infinite" || text == "INF") return infinite();
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidBits, "cannot parse bit depth '" + text + "'");
  }
  if (used != text.size()) throw Error(ErrorKind::InvalidBits, "cannot parse bit depth '" + text + "'");
  return BitDepth(value);
}

QuantConfig quant_gain(BitDepth bits) {
  QuantConfig q;
  q.bits = bits;
  if (bits.is_infinite()) return q;
  const int b = bits.bits();
  require(b >= 1, ErrorKind::InvalidBits, "bit depth must be >= 1, got " + std::to_string(b));
  q.beta = b <= 5 ? kLloydMaxBeta[b - 1] : std::numbers::pi * std::sqrt(3.0) / 2.0 * std::pow(2.0, -2.0 * b);
  q.alpha = 1.0 - q.beta;
  return q;
}

QuantConfig quant_from_alpha(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
  QuantConfig q;
  q.alpha = alpha;
  q.beta = 1.0 - alpha;
  return q;
}

ScalarQuantizer ScalarQuantizer::lloyd_max(int bits, double centroid_tolerance, int max_iterations) {
  require(bits >= 1 && bits <= 16, ErrorKind::InvalidBits, "Lloyd-Max design supports 1..16 bits");
  const int n = 1 << bits;
  ScalarQuantizer q;
  q.bits_ = bits;
  q.levels_.resize(static_cast<std::size_t>(n));
  q.thresholds_.resize(static_cast<std::size_t>(n - 1));

  // High-resolution start: point density proportional to pdf^{1/3},
  // i.e. quantiles of N(0, 3).
  for (int i = 0; i < n; ++i) q.levels_[i] = std::sqrt(3.0) * normal_quantile((i + 0.5) / n);

  for (int it = 0; it < max_iterations; ++it) {
    for (int i = 0; i + 1 < n; ++i) q.thresholds_[i] = 0.5 * (q.levels_[i] + q.levels_[i + 1]);
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      const double lo = i == 0 ? -INFINITY : q.thresholds_[i - 1];
      const double hi = i + 1 == n ? INFINITY : q.thresholds_[i];
      // Cell mass from the nearer tail keeps precision for outer cells.
      const double mass = lo >= 0.0 ? normal_cdf(-lo) - normal_cdf(-hi) : normal_cdf(hi) - normal_cdf(lo);
      const double pdf_lo = std::isinf(lo) ? 0.0 : normal_pdf(lo);
      const double pdf_hi = std::isinf(hi) ? 0.0 : normal_pdf(hi);
      const double centroid = (pdf_lo - pdf_hi) / mass;
      change = std::max(change, std::abs(centroid - q.levels_[i]));
      q.levels_[i] = centroid;
    }
    if (change < centroid_tolerance) break;
  }
  for (int i = 0; i + 1 < n; ++i) q.thresholds_[i] = 0.5 * (q.levels_[i] + q.levels_[i + 1]);
  return q;
}

double ScalarQuantizer::quantize(double x) const {
  const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), x);
  return levels_[static_cast<std::size_t>(it - thresholds_.begin())];
}

Complex ScalarQuantizer::quantize(Complex r, double variance) const {
  const double s = std::sqrt(variance / 2.0);
  if (s == 0.0) return {0.0, 0.0};
  return {s * quantize(r.real() / s), s * quantize(r.imag() / s)};
}

double ScalarQuantizer::analytic_distortion() const {
  const int n = static_cast<int>(levels_.size());
  double captured = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lo = i == 0 ? -INFINITY : thresholds_[i - 1];
    const double hi = i + 1 == n ? INFINITY : thresholds_[i];
    const double mass = lo >= 0.0 ? normal_cdf(-lo) - normal_cdf(-hi) : normal_cdf(hi) - normal_cdf(lo);
    captured += mass * levels_[i] * levels_[i];
  }
  return 1.0 - captured;
}

double lloyd_max_mse(int bits, std::int64_t sample_count, std::uint64_t seed) {
  require(bits >= 1 && bits <= 8, ErrorKind::InvalidBits, "lloyd_max_mse supports 1..8 bits");
  require(sample_count >= 1, ErrorKind::InvalidArgument, "sample_count must be positive");
  const ScalarQuantizer quantizer = ScalarQuantizer::lloyd_max(bits);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> component(0.0, std::sqrt(0.5));
  double error = 0.0;
  double energy = 0.0;
  for (std::int64_t s = 0; s < sample_count; ++s) {
    const Complex r(component(rng), component(rng));
    error += std::norm(r - quantizer.quantize(r, 1.0));
    energy += std::norm(r);
  }
  return error / energy;
}

RVector ul_quant_cov(const CMatrix& stacked, std::span<const double> lambda, const QuantConfig& q) {
  require(static_cast<Eigen::Index>(lambda.size()) == stacked.cols(), ErrorKind::DimensionMismatch,
          "ul_quant_cov: power count != channel columns");
  RVector load = RVector::Ones(stacked.rows());
  for (Eigen::Index c = 0; c < stacked.cols(); ++c) {
    const double p = lambda[static_cast<std::size_t>(c)];
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorKind::NegativePower, "ul_quant_cov: invalid power");
    load += p * stacked.col(c).cwiseAbs2();
  }
  return q.alpha * (1.0 - q.alpha) * load;
}

RVector dl_quant_cov(const CMatrix& precoders, const QuantConfig& q) {
  return q.alpha * (1.0 - q.alpha) * precoders.rowwise().squaredNorm();
}

RVector ofdm_ul_load_diag(const std::vector<std::vector<CMatrix>>& taps_by_cell, const PowerAllocation& lambda,
                          int subcarriers) {
  const GridShape& shape = lambda.shape();
  require(static_cast<int>(taps_by_cell.size()) == shape.cells && shape.subcarriers == subcarriers,
          ErrorKind::DimensionMismatch, "ofdm load: taps/powers shape mismatch");
  require_valid_powers(lambda);
  const int k_count = subcarriers;
  const Eigen::Index nb = taps_by_cell.front().front().rows();
  const CMatrix dft = numerics::dft_matrix(k_count);

  RVector load = RVector::Zero(nb * k_count);
  CVector row(nb);
  for (int j = 0; j < shape.cells; ++j) {
    const auto& taps = taps_by_cell[static_cast<std::size_t>(j)];
    require(!taps.empty() && static_cast<int>(taps.size()) <= k_count, ErrorKind::DimensionMismatch,
            "ofdm load: need 1 <= L <= K");
    for (const auto& t : taps) {
      require(t.rows() == nb && t.cols() == shape.users, ErrorKind::DimensionMismatch, "ofdm load: tap shape");
    }
    for (int v = 0; v < shape.users; ++v) {
      for (int k = 0; k < k_count; ++k) {
        const double p = lambda(j, v, k);
        if (p == 0.0) continue;
        // Column (k, v) of H_{i,j} Psi^H at time n:
        // sum_l H_l[:, v] conj(W[k, (n - l) mod K]).
        for (int n = 0; n < k_count; ++n) {
          row.setZero();
          for (std::size_t l = 0; l < taps.size(); ++l) {
            const int t = ((n - static_cast<int>(l)) % k_count + k_count) % k_count;
            row += std::conj(dft(k, t)) * taps[l].col(v);
          }
          load.segment(static_cast<Eigen::Index>(n) * nb, nb) += p * row.cwiseAbs2();
        }
      }
    }
  }
  return load;
}

RVector ofdm_ul_quant_cov_diag(const std::vector<std::vector<CMatrix>>& taps_by_cell,
                               const PowerAllocation& lambda, const QuantConfig& q, int subcarriers) {
  RVector load = ofdm_ul_load_diag(taps_by_cell, lambda, subcarriers);
  return q.alpha * (1.0 - q.alpha) * (load.array() + 1.0).matrix();
}

RVector ofdm_dl_quant_cov_diag(const std::vector<CMatrix>& precoders_by_subcarrier, const QuantConfig& q) {
  require(!precoders_by_subcarrier.empty(), ErrorKind::DimensionMismatch, "no subcarriers");
  const int k_count = static_cast<int>(precoders_by_subcarrier.size());
  const Eigen::Index nb = precoders_by_subcarrier.front().rows();
  const CMatrix dft = numerics::dft_matrix(k_count);
  RVector out = RVector::Zero(nb * k_count);
  for (int k = 0; k < k_count; ++k) {
    const CMatrix& w = precoders_by_subcarrier[static_cast<std::size_t>(k)];
    require(w.rows() == nb, ErrorKind::DimensionMismatch, "precoder rows differ across subcarriers");
    // Row (n, m) of Psi^H W restricted to block k is conj(W_dft[k, n]) w_m(k).
    const RVector row_power = w.rowwise().squaredNorm();
    for (int n = 0; n < k_count; ++n) {
      out.segment(static_cast<Eigen::Index>(n) * nb, nb) += std::norm(dft(k, n)) * row_power;
    }
  }
  return q.alpha * (1.0 - q.alpha) * out;
}

RVector project_to_subcarrier(const RVector& time_diag, int bs_antennas, int subcarrier) {
  const Eigen::Index nb = bs_antennas;
  require(nb >= 1 && time_diag.size() % nb == 0, ErrorKind::DimensionMismatch, "time diagonal length");
  const int k_count = static_cast<int>(time_diag.size() / nb);
  require(subcarrier >= 0 && subcarrier < k_count, ErrorKind::DimensionMismatch, "subcarrier out of range");
  const CMatrix dft = numerics::dft_matrix(k_count);
  RVector out = RVector::Zero(nb);
  for (int n = 0; n < k_count; ++n) out += std::norm(dft(subcarrier, n)) * time_diag.segment(n * nb, nb);
  return out;
}

}  // namespace qcomp
