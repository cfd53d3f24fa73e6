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

#ifndef QCOMP_PERCELL_HPP
#define QCOMP_PERCELL_HPP

#include "qcomp/comp_solver.hpp"

namespace qcomp {

struct PercellOptions {
  // Per-cell dual fixed point.
  SolverOptions inner;
  // Outer loop on the downlink scalings.
  double tolerance = 1e-10;
  int max_outer = 200;
  double power_cap = 1e6;
};

// Per-cell baseline. Each BS minimizes its own downlink power through
// in-cell uplink-downlink duality, with the interference and DAC
// quantization noise its users receive from other BSs frozen as extra
// noise power; an outer loop refreshes that noise until the scalings
// settle. The reported lambda is the in-cell dual power times the frozen
// noise power of each user, so its sum equals alpha sum ||w||^2.
//
// report.achieved_dl_sinr holds the true network SINRs; achieved_ul_sinr
// holds the in-cell virtual uplink SINRs of the dual powers.
// Throws Infeasible when the total power passes the cap, a scaling turns
// nonpositive, or the outer budget runs out with power still growing.
JointSolution percell_solve(const LinkMatrices& h, const SinrValues& gamma, double alpha,
                            const PercellOptions& options = {});

// Single-cell view holding only the in-cell block of cell i.
LinkMatrices in_cell_channels(const LinkMatrices& h, int cell);

}  // namespace qcomp

#endif  // QCOMP_PERCELL_HPP
