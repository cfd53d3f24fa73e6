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

#ifndef QCOMP_OFDM_SOLVER_HPP
#define QCOMP_OFDM_SOLVER_HPP

#include <vector>

#include "qcomp/comp_solver.hpp"
#include "qcomp/sinr.hpp"

namespace qcomp {

struct OfdmProblem {
  WidebandChannels channels;
  SinrValues gamma;  // shape (cells, users, subcarriers)
  double alpha = 1.0;

  OfdmProblem(WidebandChannels ch, SinrValues targets, double a);
  GridShape grid() const noexcept { return channels.grid(); }
};

// Time-domain received-power diagonal at BS i (length K N_b, index
// n * N_b + m) without noise. Depends on lambda at every subcarrier.
RVector ofdm_time_load(const OfdmProblem& p, const PowerAllocation& lambda, int cell);

// K_bar_{i,k} = I + alpha sum lambda(k) g g^H + (1 - alpha) Psi(k) D Psi(k)^H
// with D = ofdm_time_load. Passing the precomputed diagonal avoids
// rebuilding it for every subcarrier.
CMatrix build_K_bar_matrix(const OfdmProblem& p, const PowerAllocation& lambda, int cell, int subcarrier,
                           const RVector& time_load);
numerics::HermitianPD build_K_bar(const OfdmProblem& p, const PowerAllocation& lambda, int cell, int subcarrier);
numerics::DiagonalPlusLowRank factor_K_bar(const OfdmProblem& p, const PowerAllocation& lambda, int cell,
                                           int subcarrier, const RVector& time_load);

// One Jacobi application of
// lambda(k) <- 1 / (alpha (1 + 1/gamma(k)) g(k)^H K_bar^{-1} g(k)) over all (i, u, k).
PowerAllocation ofdm_fixed_point_map(const OfdmProblem& p, const PowerAllocation& lambda);

// Same convergence and infeasibility contract as fixed_point_ul.
UplinkSolution ofdm_fixed_point(const OfdmProblem& p, const SolverOptions& options = {});

// f(k) = C_z(k)^{-1} g(k) with the projected time-domain quantization noise.
std::vector<CVector> ofdm_mmse_combiner(const OfdmProblem& p, const PowerAllocation& lambda);

// Coupled: the full K N_c N_u system of the downlink constraints, where
// the DAC quantization noise ties tau at one subcarrier to constraints at
// every other. BlockDiagonal: only same-subcarrier entries, each carrying
// the quantization correction of the combiners summed over subcarriers.
// The two agree when tau does not vary across subcarriers or alpha = 1.
enum class SigmaStructure { Coupled, BlockDiagonal };

RMatrix ofdm_dl_scaling_matrix(const OfdmProblem& p, const std::vector<CVector>& combiners,
                               SigmaStructure structure = SigmaStructure::Coupled);

DownlinkScaling ofdm_dl_scaling(const OfdmProblem& p, const std::vector<CVector>& combiners,
                                SigmaStructure structure = SigmaStructure::Coupled);

SolveReport verify_ofdm_solution(const OfdmProblem& p, const PowerAllocation& lambda,
                                 const std::vector<CVector>& combiners, const std::vector<CVector>& precoders,
                                 double tolerance = 1e-6);

JointSolution solve_ofdm_icomp(const OfdmProblem& p, const SolverOptions& options = {},
                               SigmaStructure structure = SigmaStructure::Coupled);

}  // namespace qcomp

#endif  // QCOMP_OFDM_SOLVER_HPP
