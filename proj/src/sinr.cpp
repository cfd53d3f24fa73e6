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

#include "qcomp/sinr.hpp"

#include <algorithm>

#include "qcomp/numerics.hpp"
#include "qcomp/quantization.hpp"

namespace qcomp {

namespace {

void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
}

void check_vectors(const std::vector<CVector>& v, const GridShape& shape, int nb, const char* what) {
  require(v.size() == shape.size(), ErrorKind::DimensionMismatch, std::string(what) + ": count != grid size");
  for (const auto& x : v) {
    require(x.size() == nb, ErrorKind::DimensionMismatch, std::string(what) + ": length != N_b");
  }
}

std::vector<std::vector<CMatrix>> taps_by_cell(const WidebandChannels& ch, int bs) {
  return ch.taps().taps_by_cell(bs);
}

}  // namespace

WidebandChannels::WidebandChannels(const ChannelSet& taps, int subcarriers) : taps_(taps) {
  require(subcarriers >= taps.n_taps(), ErrorKind::DimensionMismatch, "need L <= K");
  freq_.assign(static_cast<std::size_t>(subcarriers), LinkMatrices(taps.cells(), taps.bs_antennas(), taps.users()));
  std::vector<CMatrix> per_tap(static_cast<std::size_t>(taps.n_taps()));
  for (int i = 0; i < taps.cells(); ++i) {
    for (int j = 0; j < taps.cells(); ++j) {
      for (int l = 0; l < taps.n_taps(); ++l) per_tap[static_cast<std::size_t>(l)] = taps.taps()[l].block(i, j);
      const auto g = numerics::taps_to_freq(per_tap, subcarriers);
      for (int k = 0; k < subcarriers; ++k) freq_[static_cast<std::size_t>(k)].block(i, j) = g[k];
    }
  }
}

WidebandChannels::WidebandChannels(const ChannelSet& taps, std::vector<LinkMatrices> freq, double tolerance)
    : WidebandChannels(taps, static_cast<int>(freq.size())) {
  double scale = 0.0;
  double worst = 0.0;
  for (int k = 0; k < subcarriers(); ++k) {
    const LinkMatrices& given = freq[static_cast<std::size_t>(k)];
    require(given.cells() == cells() && given.bs_antennas() == bs_antennas() && given.users() == users(),
            ErrorKind::DimensionMismatch, "frequency channel shape differs from taps");
    for (int i = 0; i < cells(); ++i) {
      for (int j = 0; j < cells(); ++j) {
        const CMatrix& ref = freq_[static_cast<std::size_t>(k)].block(i, j);
        scale = std::max(scale, ref.cwiseAbs().maxCoeff());
        worst = std::max(worst, (given.block(i, j) - ref).cwiseAbs().maxCoeff());
      }
    }
  }
  require(worst <= tolerance * std::max(scale, 1e-300), ErrorKind::DimensionMismatch,
          "frequency channels inconsistent with taps");
  freq_ = std::move(freq);
}

SinrValues ul_sinr(const LinkMatrices& h, const std::vector<CVector>& combiners, const PowerAllocation& lambda,
                   double alpha) {
  check_alpha(alpha);
  const GridShape shape{h.cells(), h.users()};
  require(lambda.shape() == shape, ErrorKind::DimensionMismatch, "ul_sinr: power shape");
  check_vectors(combiners, shape, h.bs_antennas(), "ul_sinr combiners");
  require_valid_powers(lambda);
  const QuantConfig q = quant_from_alpha(alpha);
  const double a2 = alpha * alpha;

  SinrValues out(shape);
  for (int i = 0; i < shape.cells; ++i) {
    const CMatrix stacked = h.stacked(i);
    const RVector cq = ul_quant_cov(stacked, lambda.values(), q);
    for (int u = 0; u < shape.users; ++u) {
      const CVector& f = combiners[shape.index(i, u)];
      double signal = 0.0;
      double interference = 0.0;
      for (int j = 0; j < shape.cells; ++j) {
        for (int v = 0; v < shape.users; ++v) {
          const double p = lambda(j, v) * std::norm(f.dot(h.column(i, j, v)));
          if (j == i && v == u) {
            signal = p;
          } else {
            interference += p;
          }
        }
      }
      const double quant = (f.cwiseAbs2().array() * cq.array()).sum();
      const double denom = a2 * interference + a2 * f.squaredNorm() + quant;
      out(i, u) = denom > 0.0 ? a2 * signal / denom : 0.0;
    }
  }
  return out;
}

SinrValues dl_quant_noise(const LinkMatrices& h, const std::vector<CVector>& precoders, double alpha) {
  check_alpha(alpha);
  const GridShape shape{h.cells(), h.users()};
  check_vectors(precoders, shape, h.bs_antennas(), "dl precoders");
  const QuantConfig q = quant_from_alpha(alpha);
  std::vector<RVector> cq;
  for (int j = 0; j < shape.cells; ++j) {
    cq.push_back(dl_quant_cov(precoder_matrix(precoders, shape, j, 0, h.bs_antennas()), q));
  }
  SinrValues out(shape);
  for (int i = 0; i < shape.cells; ++i) {
    for (int u = 0; u < shape.users; ++u) {
      double total = 0.0;
      for (int j = 0; j < shape.cells; ++j) {
        total += (h.column(j, i, u).cwiseAbs2().array() * cq[j].array()).sum();
      }
      out(i, u) = total;
    }
  }
  return out;
}

SinrValues dl_sinr(const LinkMatrices& h, const std::vector<CVector>& precoders, double alpha) {
  const GridShape shape{h.cells(), h.users()};
  const SinrValues quant = dl_quant_noise(h, precoders, alpha);
  const double a2 = alpha * alpha;
  SinrValues out(shape);
  for (int i = 0; i < shape.cells; ++i) {
    for (int u = 0; u < shape.users; ++u) {
      double signal = 0.0;
      double interference = 0.0;
      for (int j = 0; j < shape.cells; ++j) {
        const auto hc = h.column(j, i, u);
        for (int v = 0; v < shape.users; ++v) {
          const double p = std::norm(precoders[shape.index(j, v)].dot(hc));
          if (j == i && v == u) {
            signal = p;
          } else {
            interference += p;
          }
        }
      }
      out(i, u) = a2 * signal / (a2 * interference + quant(i, u) + 1.0);
    }
  }
  return out;
}

SinrValues mmse_ul_sinr(const LinkMatrices& h, const PowerAllocation& lambda, double alpha) {
  check_alpha(alpha);
  const GridShape shape{h.cells(), h.users()};
  require(lambda.shape() == shape, ErrorKind::DimensionMismatch, "mmse_ul_sinr: power shape");
  require_valid_powers(lambda);
  const QuantConfig q = quant_from_alpha(alpha);
  const double a2 = alpha * alpha;
  const int nb = h.bs_antennas();

  SinrValues out(shape);
  for (int i = 0; i < shape.cells; ++i) {
    const CMatrix stacked = h.stacked(i);
    // alpha^2 (sum lambda h h^H + I) + C_q: full received covariance.
    CMatrix cov = a2 * CMatrix::Identity(nb, nb);
    for (Eigen::Index c = 0; c < stacked.cols(); ++c) {
      const double p = lambda[static_cast<std::size_t>(c)];
      if (p > 0.0) cov.noalias() += a2 * p * stacked.col(c) * stacked.col(c).adjoint();
    }
    cov.diagonal() += ul_quant_cov(stacked, lambda.values(), q).cast<Complex>();
    for (int u = 0; u < shape.users; ++u) {
      const double p = lambda(i, u);
      if (p == 0.0) {
        out(i, u) = 0.0;
        continue;
      }
      const auto hc = h.column(i, i, u);
      CMatrix cz = cov;
      cz.noalias() -= a2 * p * hc * hc.adjoint();
      const auto chol = numerics::HermitianPD::factor(cz);
      out(i, u) = a2 * p * chol.inverse_quadratic_form(hc);
    }
  }
  return out;
}

CMatrix precoder_matrix(const std::vector<CVector>& precoders, const GridShape& shape, int cell, int subcarrier,
                        int bs_antennas) {
  CMatrix w(bs_antennas, shape.users);
  for (int v = 0; v < shape.users; ++v) w.col(v) = precoders[shape.index(cell, v, subcarrier)];
  return w;
}

SinrValues ofdm_ul_sinr(const WidebandChannels& ch, const std::vector<CVector>& combiners,
                        const PowerAllocation& lambda, double alpha) {
  check_alpha(alpha);
  const GridShape shape = ch.grid();
  require(lambda.shape() == shape, ErrorKind::DimensionMismatch, "ofdm_ul_sinr: power shape");
  check_vectors(combiners, shape, ch.bs_antennas(), "ofdm_ul_sinr combiners");
  const QuantConfig q = quant_from_alpha(alpha);
  const double a2 = alpha * alpha;
  const int kc = shape.subcarriers;

  SinrValues out(shape);
  for (int i = 0; i < shape.cells; ++i) {
    const RVector time_diag = ofdm_ul_quant_cov_diag(taps_by_cell(ch, i), lambda, q, kc);
    for (int k = 0; k < kc; ++k) {
      const RVector cq = project_to_subcarrier(time_diag, ch.bs_antennas(), k);
      for (int u = 0; u < shape.users; ++u) {
        const CVector& f = combiners[shape.index(i, u, k)];
        double signal = 0.0;
        double interference = 0.0;
        for (int j = 0; j < shape.cells; ++j) {
          for (int v = 0; v < shape.users; ++v) {
            const double p = lambda(j, v, k) * std::norm(f.dot(ch.column(i, j, v, k)));
            if (j == i && v == u) {
              signal = p;
            } else {
              interference += p;
            }
          }
        }
        const double quant = (f.cwiseAbs2().array() * cq.array()).sum();
        const double denom = a2 * interference + a2 * f.squaredNorm() + quant;
        out(i, u, k) = denom > 0.0 ? a2 * signal / denom : 0.0;
      }
    }
  }
  return out;
}

SinrValues ofdm_dl_sinr(const WidebandChannels& ch, const std::vector<CVector>& precoders, double alpha) {
  check_alpha(alpha);
  const GridShape shape = ch.grid();
  check_vectors(precoders, shape, ch.bs_antennas(), "ofdm_dl_sinr precoders");
  const QuantConfig q = quant_from_alpha(alpha);
  const double a2 = alpha * alpha;
  const int kc = shape.subcarriers;
  const int nb = ch.bs_antennas();

  // Projected DL quantization covariance per (BS j, subcarrier k).
  std::vector<std::vector<RVector>> cq(static_cast<std::size_t>(shape.cells));
  for (int j = 0; j < shape.cells; ++j) {
    std::vector<CMatrix> w;
    for (int k = 0; k < kc; ++k) w.push_back(precoder_matrix(precoders, shape, j, k, nb));
    const RVector time_diag = ofdm_dl_quant_cov_diag(w, q);
    for (int k = 0; k < kc; ++k) cq[j].push_back(project_to_subcarrier(time_diag, nb, k));
  }

  SinrValues out(shape);
  for (int i = 0; i < shape.cells; ++i) {
    for (int u = 0; u < shape.users; ++u) {
      for (int k = 0; k < kc; ++k) {
        double signal = 0.0;
        double interference = 0.0;
        double quant = 0.0;
        for (int j = 0; j < shape.cells; ++j) {
          const auto g = ch.column(j, i, u, k);
          quant += (g.cwiseAbs2().array() * cq[j][k].array()).sum();
          for (int v = 0; v < shape.users; ++v) {
            const double p = std::norm(precoders[shape.index(j, v, k)].dot(g));
            if (j == i && v == u) {
              signal = p;
            } else {
              interference += p;
            }
          }
        }
        out(i, u, k) = a2 * signal / (a2 * interference + quant + 1.0);
      }
    }
  }
  return out;
}

}  // namespace qcomp
