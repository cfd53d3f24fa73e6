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

#include "qcomp/ofdm_solver.hpp"

#include <cmath>

#include "qcomp/numerics.hpp"
#include "qcomp/quantization.hpp"

namespace qcomp {

OfdmProblem::OfdmProblem(WidebandChannels ch, SinrValues targets, double a)
    : channels(std::move(ch)), gamma(std::move(targets)), alpha(a) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
  require(gamma.shape() == channels.grid(), ErrorKind::DimensionMismatch, "target shape does not match channels");
  for (double g : gamma.values()) {
    require(g > 0.0 && std::isfinite(g), ErrorKind::InvalidArgument, "targets must be positive and finite");
  }
}

RVector ofdm_time_load(const OfdmProblem& p, const PowerAllocation& lambda, int cell) {
  return ofdm_ul_load_diag(p.channels.taps().taps_by_cell(cell), lambda, p.channels.subcarriers());
}

CMatrix build_K_bar_matrix(const OfdmProblem& p, const PowerAllocation& lambda, int cell, int subcarrier,
                           const RVector& time_load) {
  const int nb = p.channels.bs_antennas();
  CMatrix k = CMatrix::Identity(nb, nb);
  for (int j = 0; j < p.channels.cells(); ++j) {
    for (int v = 0; v < p.channels.users(); ++v) {
      const double power = lambda(j, v, subcarrier);
      if (power == 0.0) continue;
      const auto g = p.channels.column(cell, j, v, subcarrier);
      k.noalias() += (p.alpha * power) * g * g.adjoint();
    }
  }
  k.diagonal() += ((1.0 - p.alpha) * project_to_subcarrier(time_load, nb, subcarrier)).cast<Complex>();
  return k;
}

numerics::DiagonalPlusLowRank factor_K_bar(const OfdmProblem& p, const PowerAllocation& lambda, int cell,
                                           int subcarrier, const RVector& time_load) {
  const int nb = p.channels.bs_antennas();
  std::vector<CVector> columns;
  for (int j = 0; j < p.channels.cells(); ++j) {
    for (int v = 0; v < p.channels.users(); ++v) {
      const double power = lambda(j, v, subcarrier);
      if (power == 0.0) continue;
      columns.push_back(std::sqrt(p.alpha * power) * p.channels.column(cell, j, v, subcarrier));
    }
  }
  CMatrix v(nb, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = columns[c];
  const RVector d = RVector::Ones(nb) + (1.0 - p.alpha) * project_to_subcarrier(time_load, nb, subcarrier);
  return numerics::DiagonalPlusLowRank(d, std::move(v));
}

numerics::HermitianPD build_K_bar(const OfdmProblem& p, const PowerAllocation& lambda, int cell, int subcarrier) {
  return numerics::HermitianPD::factor(
      build_K_bar_matrix(p, lambda, cell, subcarrier, ofdm_time_load(p, lambda, cell)));
}

PowerAllocation ofdm_fixed_point_map(const OfdmProblem& p, const PowerAllocation& lambda) {
  const GridShape shape = p.grid();
  require(lambda.shape() == shape, ErrorKind::DimensionMismatch, "ofdm power shape");
  require_valid_powers(lambda);
  PowerAllocation next(shape);
  for (int i = 0; i < shape.cells; ++i) {
    // One time-domain diagonal per cell and sweep.
    const RVector load = ofdm_time_load(p, lambda, i);
    for (int k = 0; k < shape.subcarriers; ++k) {
      const auto kbar = factor_K_bar(p, lambda, i, k, load);
      for (int u = 0; u < shape.users; ++u) {
        const double s = kbar.inverse_quadratic_form(p.channels.column(i, i, u, k));
        next(i, u, k) = 1.0 / (p.alpha * (1.0 + 1.0 / p.gamma(i, u, k)) * s);
      }
    }
  }
  return next;
}

UplinkSolution ofdm_fixed_point(const OfdmProblem& p, const SolverOptions& options) {
  return run_fixed_point([&](const PowerAllocation& l) { return ofdm_fixed_point_map(p, l); }, p.grid(), options);
}

std::vector<CVector> ofdm_mmse_combiner(const OfdmProblem& p, const PowerAllocation& lambda) {
  const GridShape shape = p.grid();
  require(lambda.shape() == shape, ErrorKind::DimensionMismatch, "ofdm power shape");
  require_valid_powers(lambda);
  std::vector<CVector> f(shape.size());
  for (int i = 0; i < shape.cells; ++i) {
    const RVector load = ofdm_time_load(p, lambda, i);
    for (int k = 0; k < shape.subcarriers; ++k) {
      // C_z(k) = alpha (K_bar - alpha lambda g g^H)
      const CMatrix kbar = build_K_bar_matrix(p, lambda, i, k, load);
      for (int u = 0; u < shape.users; ++u) {
        const auto g = p.channels.column(i, i, u, k);
        CMatrix cz = kbar;
        cz.noalias() -= (p.alpha * lambda(i, u, k)) * g * g.adjoint();
        cz *= p.alpha;
        f[shape.index(i, u, k)] = numerics::hermitian_solve(cz, g);
      }
    }
  }
  return f;
}

RMatrix ofdm_dl_scaling_matrix(const OfdmProblem& p, const std::vector<CVector>& combiners,
                               SigmaStructure structure) {
  const GridShape shape = p.grid();
  require(combiners.size() == shape.size(), ErrorKind::DimensionMismatch, "combiner count");
  const int kc = shape.subcarriers;
  const double a2 = p.alpha * p.alpha;
  const double aq = p.alpha * (1.0 - p.alpha);
  // overlap(k, l) = sum_n |W[k, n]|^2 |W[l, n]|^2: how much DAC noise from
  // subcarrier l lands on subcarrier k after the time-domain diagonal.
  const CMatrix dft = numerics::dft_matrix(kc);
  const RMatrix mag = dft.cwiseAbs2();
  const RMatrix overlap = mag * mag.transpose();

  const auto n = static_cast<Eigen::Index>(shape.size());
  RMatrix sigma = RMatrix::Zero(n, n);
  for (int i = 0; i < shape.cells; ++i) {
    for (int u = 0; u < shape.users; ++u) {
      for (int k = 0; k < kc; ++k) {
        const auto row = static_cast<Eigen::Index>(shape.index(i, u, k));
        for (int j = 0; j < shape.cells; ++j) {
          const auto g = p.channels.column(j, i, u, k);
          const RVector g2 = g.cwiseAbs2();
          for (int v = 0; v < shape.users; ++v) {
            const bool self = i == j && u == v;
            const CVector& fk = combiners[shape.index(j, v, k)];
            const double gain = std::norm(fk.dot(g));
            const auto col_k = static_cast<Eigen::Index>(shape.index(j, v, k));
            sigma(row, col_k) += self ? a2 / p.gamma(i, u, k) * gain : -a2 * gain;
            for (int l = 0; l < kc; ++l) {
              const CVector& fl = combiners[shape.index(j, v, l)];
              const double quant = aq * overlap(k, l) * (fl.cwiseAbs2().array() * g2.array()).sum();
              if (structure == SigmaStructure::Coupled) {
                sigma(row, static_cast<Eigen::Index>(shape.index(j, v, l))) -= quant;
              } else {
                sigma(row, col_k) -= quant;
              }
            }
          }
        }
      }
    }
  }
  return sigma;
}

DownlinkScaling ofdm_dl_scaling(const OfdmProblem& p, const std::vector<CVector>& combiners,
                                SigmaStructure structure) {
  DownlinkScaling out;
  out.tau = solve_scaling_system(ofdm_dl_scaling_matrix(p, combiners, structure));
  out.precoders.reserve(combiners.size());
  for (std::size_t n = 0; n < combiners.size(); ++n) out.precoders.push_back(std::sqrt(out.tau[n]) * combiners[n]);
  return out;
}

SolveReport verify_ofdm_solution(const OfdmProblem& p, const PowerAllocation& lambda,
                                 const std::vector<CVector>& combiners, const std::vector<CVector>& precoders,
                                 double tolerance) {
  SolveReport r;
  r.final_total_power = lambda.sum();
  r.achieved_ul_sinr = ofdm_ul_sinr(p.channels, combiners, lambda, p.alpha);
  r.achieved_dl_sinr = ofdm_dl_sinr(p.channels, precoders, p.alpha);
  classify(r.achieved_ul_sinr, p.gamma, tolerance, r.ul_residual, r.ul_status);
  classify(r.achieved_dl_sinr, p.gamma, tolerance, r.dl_residual, r.dl_status);
  r.duality_gap = duality_gap(r.final_total_power, precoders, p.alpha);
  return r;
}

JointSolution solve_ofdm_icomp(const OfdmProblem& p, const SolverOptions& options, SigmaStructure structure) {
  UplinkSolution ul = ofdm_fixed_point(p, options);
  JointSolution out;
  out.beams = BeamformerSet(p.grid());
  out.beams.combiners = ofdm_mmse_combiner(p, ul.lambda);
  DownlinkScaling dl = ofdm_dl_scaling(p, out.beams.combiners, structure);
  out.beams.tau = std::move(dl.tau);
  out.beams.precoders = std::move(dl.precoders);
  out.report = verify_ofdm_solution(p, ul.lambda, out.beams.combiners, out.beams.precoders);
  out.report.converged = ul.report.converged;
  out.report.iterations = ul.report.iterations;
  out.report.per_iteration_total_power = std::move(ul.report.per_iteration_total_power);
  out.lambda = std::move(ul.lambda);
  return out;
}

}  // namespace qcomp
