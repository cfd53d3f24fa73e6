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

#ifndef QCOMP_DETERMINISTIC_HPP
#define QCOMP_DETERMINISTIC_HPP

#include <functional>
#include <vector>

#include "qcomp/types.hpp"

namespace qcomp {

// Per-cell largest-eigenvalue quantities of the homogeneous-power bound.
// a(i, j) is defined for i != j (the diagonal is left at zero).
struct CellEigenQuantities {
  RMatrix a;
  RVector b;
  RMatrix c;
};

// H_ii^+ = (H_ii^H H_ii)^{-1} H_ii^H and
//   a(i, j) = eig_max(H_ii^+ H_ij H_ij^H H_ii^+^H)
//   b(i)    = eig_max((H_ii^H H_ii)^{-1})
//   c(i, j) = eig_max(H_ii^+ diag(H_ij H_ij^H) H_ii^+^H)
// Throws RankDeficient when some H_ii lacks full column rank.
CellEigenQuantities eigen_quantities(const LinkMatrices& h);

// Omega with omega_ii = (1 - alpha) c_ii, omega_ij = alpha a_ij + (1 - alpha) c_ij.
RMatrix omega_matrix(const CellEigenQuantities& q, double alpha);

// lambda = (1/alpha) (I - Gamma Omega / alpha)^{-1} Gamma b restricted to
// the cells listed in `active`. Throws SingularSystem above condition 1e12.
RVector solve_cell_system(const CellEigenQuantities& q, const std::vector<double>& cell_targets, double alpha,
                          const std::vector<int>& active);

enum class RepairRule { LargestSigned, LargestMagnitude };

struct RepairResult {
  std::vector<double> cell_power;
  std::vector<int> zeroed_cells;  // in the order they were removed
  bool absolute_value_taken = false;
  int rounds = 0;
};

// All negative: absolute values. Mixed signs: zero the largest entry
// (lowest index on ties), call `resolve` on the remaining cells and repeat
// until every remaining power is nonnegative. `resolve` receives the
// active cell indices and returns their powers in that order.
RepairResult repair_negative(const std::vector<double>& raw,
                             const std::function<RVector(const std::vector<int>&)>& resolve,
                             RepairRule rule = RepairRule::LargestSigned);

struct DeterministicSolution {
  PowerAllocation lambda;         // per-cell power broadcast to users
  std::vector<double> raw_cell_power;
  RepairResult repair;
  bool repaired() const noexcept { return repair.absolute_value_taken || !repair.zeroed_cells.empty(); }
};

DeterministicSolution solve_deterministic(const LinkMatrices& h, const std::vector<double>& cell_targets,
                                          double alpha, RepairRule rule = RepairRule::LargestSigned);

// Per-cell targets from per-user ones; throws InvalidArgument when users
// of one cell have different targets.
std::vector<double> cell_targets(const SinrValues& gamma);

}  // namespace qcomp

#endif  // QCOMP_DETERMINISTIC_HPP
