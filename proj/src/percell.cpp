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

#include "qcomp/percell.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qcomp/quantization.hpp"

namespace qcomp {

LinkMatrices in_cell_channels(const LinkMatrices& h, int cell) {
  LinkMatrices out(1, h.bs_antennas(), h.users());
  out.block(0, 0) = h.block(cell, cell);
  return out;
}

namespace {

struct CellState {
  LinkMatrices channels;
  SinrValues gamma;
  PowerAllocation mu;
  std::vector<CVector> combiners;
  Eigen::PartialPivLU<RMatrix> sigma;
  SinrValues virtual_sinr;
};

// Noise seen by user (i, u) from everything outside cell i: interference
// from other BSs plus their DAC quantization noise, plus unit AWGN.
RVector frozen_noise(const LinkMatrices& h, const std::vector<CVector>& precoders, int cell, double alpha) {
  const GridShape shape{h.cells(), h.users()};
  const QuantConfig q = quant_from_alpha(alpha);
  RVector noise = RVector::Ones(h.users());
  for (int j = 0; j < h.cells(); ++j) {
    if (j == cell) continue;
    const CMatrix w = precoder_matrix(precoders, shape, j, 0, h.bs_antennas());
    const RVector cq = dl_quant_cov(w, q);
    for (int u = 0; u < h.users(); ++u) {
      const auto hc = h.column(j, cell, u);
      noise(u) += alpha * alpha * (w.adjoint() * hc).squaredNorm();
      noise(u) += (hc.cwiseAbs2().array() * cq.array()).sum();
    }
  }
  return noise;
}

}  // namespace

JointSolution percell_solve(const LinkMatrices& h, const SinrValues& gamma, double alpha,
                            const PercellOptions& options) {
  const GridShape shape{h.cells(), h.users()};
  require(gamma.shape() == shape, ErrorKind::DimensionMismatch, "target shape does not match channels");

  std::vector<CellState> cells;
  for (int i = 0; i < h.cells(); ++i) {
    CellState c;
    c.channels = in_cell_channels(h, i);
    c.gamma = SinrValues(GridShape{1, h.users()});
    for (int u = 0; u < h.users(); ++u) c.gamma(0, u) = gamma(i, u);
    UplinkSolution dual = fixed_point_ul(c.channels, c.gamma, alpha, options.inner);
    c.mu = std::move(dual.lambda);
    c.combiners = mmse_combiner(c.channels, c.mu, alpha);
    c.virtual_sinr = mmse_ul_sinr(c.channels, c.mu, alpha);
    const RMatrix sigma = dl_scaling_matrix(c.channels, c.combiners, c.gamma, alpha);
    // Same conditioning and sign guard as the joint scaling.
    solve_scaling_system(sigma);
    c.sigma = sigma.partialPivLu();
    cells.push_back(std::move(c));
  }

  JointSolution out;
  out.beams = BeamformerSet(shape);
  for (int i = 0; i < h.cells(); ++i) {
    for (int u = 0; u < h.users(); ++u) {
      out.beams.combiners[shape.index(i, u)] = cells[i].combiners[static_cast<std::size_t>(u)];
      out.beams.precoders[shape.index(i, u)] = CVector::Zero(h.bs_antennas());
    }
  }
  out.lambda = PowerAllocation(shape);
  SolveReport& report = out.report;

  for (int round = 1; round <= options.max_outer; ++round) {
    std::vector<double> tau(shape.size());
    PowerAllocation lambda(shape);
    for (int i = 0; i < h.cells(); ++i) {
      const RVector noise = frozen_noise(h, out.beams.precoders, i, alpha);
      const RVector t = cells[i].sigma.solve(noise);
      for (int u = 0; u < h.users(); ++u) {
        if (!(t(u) > 0.0) || !std::isfinite(t(u))) {
          throw Error(ErrorKind::Infeasible, fmt::format("cell {} scaling turned nonpositive in round {}", i, round));
        }
        tau[shape.index(i, u)] = t(u);
        lambda(i, u) = cells[i].mu(0, u) * noise(u);
      }
    }
    double change = 0.0;
    for (std::size_t n = 0; n < tau.size(); ++n) {
      change = std::max(change, std::abs(tau[n] - out.beams.tau[n]) / std::max(out.beams.tau[n], 1e-300));
    }
    for (std::size_t n = 0; n < tau.size(); ++n) {
      out.beams.precoders[n] = std::sqrt(tau[n]) * out.beams.combiners[n];
    }
    out.beams.tau = std::move(tau);
    // Lambda is paired with the noise that produced the current precoders.
    out.lambda = std::move(lambda);
    const double total = out.lambda.sum();
    report.per_iteration_total_power.push_back(total);
    report.iterations = round;
    if (!std::isfinite(total) || total > options.power_cap) {
      throw Error(ErrorKind::Infeasible, fmt::format("per-cell total power {:.6g} exceeds cap {:.6g} in round {}",
                                                     total, options.power_cap, round));
    }
    if (change < options.tolerance) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged) {
    const auto& p = report.per_iteration_total_power;
    const bool growing = p.size() >= 2 && p.back() > p[p.size() - 2];
    throw Error(growing ? ErrorKind::Infeasible : ErrorKind::NoConvergence,
                fmt::format("per-cell outer loop did not settle within {} rounds", options.max_outer));
  }

  report.final_total_power = out.lambda.sum();
  report.achieved_dl_sinr = dl_sinr(h, out.beams.precoders, alpha);
  report.achieved_ul_sinr = SinrValues(shape);
  for (int i = 0; i < h.cells(); ++i) {
    for (int u = 0; u < h.users(); ++u) report.achieved_ul_sinr(i, u) = cells[i].virtual_sinr(0, u);
  }
  classify(report.achieved_ul_sinr, gamma, 1e-6, report.ul_residual, report.ul_status);
  classify(report.achieved_dl_sinr, gamma, 1e-6, report.dl_residual, report.dl_status);
  report.duality_gap = duality_gap(report.final_total_power, out.beams.precoders, alpha);
  return out;
}

}  // namespace qcomp
