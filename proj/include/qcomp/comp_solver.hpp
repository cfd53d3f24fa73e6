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

#ifndef QCOMP_COMP_SOLVER_HPP
#define QCOMP_COMP_SOLVER_HPP

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qcomp/numerics.hpp"
#include "qcomp/sinr.hpp"
#include "qcomp/types.hpp"

namespace qcomp {

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  double power_cap = 1e6;
  // Starting powers; all-zero when empty.
  std::optional<PowerAllocation> init;
};

enum class ConstraintStatus { Active, Inactive, Violated };
std::string_view to_string(ConstraintStatus s);

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_total_power = 0.0;
  std::vector<double> per_iteration_total_power;
  SinrValues achieved_ul_sinr;
  SinrValues achieved_dl_sinr;
  // |sum lambda - alpha sum ||w||^2| / sum lambda
  double duality_gap = 0.0;
  // achieved / target - 1 per constraint
  std::vector<double> ul_residual;
  std::vector<double> dl_residual;
  std::vector<ConstraintStatus> ul_status;
  std::vector<ConstraintStatus> dl_status;

  double max_abs_residual() const;
};

// K_i = I + alpha sum lambda h h^H + (1 - alpha) diag(H_i Lambda H_i^H).
CMatrix build_K_matrix(const LinkMatrices& h, int cell, const PowerAllocation& lambda, double alpha);
numerics::HermitianPD build_K(const LinkMatrices& h, int cell, const PowerAllocation& lambda, double alpha);
// Same matrix kept as its diagonal plus the rank-(N_c N_u) signal part.
numerics::DiagonalPlusLowRank factor_K(const LinkMatrices& h, int cell, const PowerAllocation& lambda, double alpha);

// One Jacobi application of lambda <- 1 / (alpha (1 + 1/gamma) h^H K^{-1} h).
PowerAllocation fixed_point_map(const LinkMatrices& h, const SinrValues& gamma, const PowerAllocation& lambda,
                                double alpha);

struct UplinkSolution {
  PowerAllocation lambda;
  SolveReport report;
};

// Drives any power update map from `init` (or zero) until the largest
// relative change drops below the tolerance; shared by the narrowband and
// wideband solvers.
UplinkSolution run_fixed_point(const std::function<PowerAllocation(const PowerAllocation&)>& map, GridShape shape,
                               const SolverOptions& options);

// Iterates fixed_point_map until the largest relative change drops below
// the tolerance. Throws Infeasible when total power passes the cap or the
// iteration budget runs out while power is still growing.
UplinkSolution fixed_point_ul(const LinkMatrices& h, const SinrValues& gamma, double alpha,
                              const SolverOptions& options = {});

// f = C_z^{-1} h with C_z the interference-plus-noise covariance of the
// quantized uplink signal, for every user of every cell.
std::vector<CVector> mmse_combiner(const LinkMatrices& h, const PowerAllocation& lambda, double alpha);

// Downlink scaling matrix: row (i, u) is the SINR constraint of user (i, u)
// and column (j, v) multiplies tau_{j, v}.
RMatrix dl_scaling_matrix(const LinkMatrices& h, const std::vector<CVector>& combiners, const SinrValues& gamma,
                          double alpha);

struct DownlinkScaling {
  std::vector<double> tau;
  std::vector<CVector> precoders;
};

// Solves Sigma tau = 1 and sets w = sqrt(tau) f. Throws SingularSigma when
// the condition number exceeds 1e12 and NonPositiveTau on any tau <= 0.
DownlinkScaling dl_scaling(const LinkMatrices& h, const std::vector<CVector>& combiners, const SinrValues& gamma,
                           double alpha);

// Shared tail of dl_scaling and its wideband counterpart.
std::vector<double> solve_scaling_system(const RMatrix& sigma);

// Read-only audit of a joint solution: achieved SINRs through the MMSE
// uplink and the given downlink precoders, residuals and duality gap.
SolveReport verify_solution(const LinkMatrices& h, const PowerAllocation& lambda,
                            const std::vector<CVector>& precoders, const SinrValues& gamma, double alpha,
                            double tolerance = 1e-6);

// Classifies achieved / target - 1 against the tolerance.
void classify(const SinrValues& achieved, const SinrValues& gamma, double tolerance, std::vector<double>& residual,
              std::vector<ConstraintStatus>& status);

double duality_gap(double total_ul_power, const std::vector<CVector>& precoders, double alpha);

struct JointSolution {
  PowerAllocation lambda;
  BeamformerSet beams;
  SolveReport report;
};

// Uplink fixed point, MMSE combiners, downlink scaling and audit.
JointSolution solve_icomp(const LinkMatrices& h, const SinrValues& gamma, double alpha,
                          const SolverOptions& options = {});

}  // namespace qcomp

#endif  // QCOMP_COMP_SOLVER_HPP
