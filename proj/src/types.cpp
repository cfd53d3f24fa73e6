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

#include "qcomp/types.hpp"

#include <cmath>
#include <string>

namespace qcomp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidBits: return "InvalidBits";
    case ErrorKind::NegativePower: return "NegativePower";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NonPositiveTau: return "NonPositiveTau";
    case ErrorKind::SingularSigma: return "SingularSigma";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

void require_valid_powers(const PowerAllocation& lambda) {
  for (std::size_t n = 0; n < lambda.size(); ++n) {
    const double v = lambda[n];
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::NegativePower, "power entry " + std::to_string(n) + " is " + std::to_string(v));
    }
  }
}

LinkMatrices::LinkMatrices(int cells, int bs_antennas, int users)
    : cells_(cells), bs_antennas_(bs_antennas), users_(users) {
  require(cells >= 1 && bs_antennas >= 1 && users >= 1, ErrorKind::InvalidArgument,
          "link dimensions must be positive");
  blocks_.assign(static_cast<std::size_t>(cells) * cells, CMatrix::Zero(bs_antennas, users));
}

CMatrix LinkMatrices::stacked(int bs) const {
  CMatrix h(bs_antennas_, static_cast<Eigen::Index>(cells_) * users_);
  for (int j = 0; j < cells_; ++j) h.middleCols(static_cast<Eigen::Index>(j) * users_, users_) = block(bs, j);
  return h;
}

}  // namespace qcomp
