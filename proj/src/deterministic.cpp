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

#include "qcomp/deterministic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qcomp/numerics.hpp"

namespace qcomp {

CellEigenQuantities eigen_quantities(const LinkMatrices& h) {
  const int nc = h.cells();
  const int nu = h.users();
  require(h.bs_antennas() >= nu, ErrorKind::RankDeficient, "need N_b >= N_u");
  CellEigenQuantities q{RMatrix::Zero(nc, nc), RVector::Zero(nc), RMatrix::Zero(nc, nc)};
  for (int i = 0; i < nc; ++i) {
    const CMatrix& hii = h.block(i, i);
    const CMatrix gram = hii.adjoint() * hii;
    const double top = numerics::extremal_eigenvalue(gram, numerics::Extremal::Max);
    const double bottom = numerics::extremal_eigenvalue(gram, numerics::Extremal::Min);
    if (!(top > 0.0) || bottom <= 1e-12 * top) {
      throw Error(ErrorKind::RankDeficient, fmt::format("in-cell channel of cell {} is rank deficient", i));
    }
    const auto chol = numerics::HermitianPD::factor(gram);
    const CMatrix pinv = chol.solve(CMatrix(hii.adjoint()));
    q.b(i) = 1.0 / bottom;
    for (int j = 0; j < nc; ++j) {
      const CMatrix& hij = h.block(i, j);
      if (j != i) {
        const CMatrix t = pinv * hij;
        q.a(i, j) = numerics::extremal_eigenvalue(t * t.adjoint(), numerics::Extremal::Max);
      }
      const RVector d = hij.rowwise().squaredNorm();
      const CMatrix t = pinv * d.cwiseSqrt().cast<Complex>().asDiagonal();
      q.c(i, j) = numerics::extremal_eigenvalue(t * t.adjoint(), numerics::Extremal::Max);
    }
  }
  return q;
}

RMatrix omega_matrix(const CellEigenQuantities& q, double alpha) {
  RMatrix omega = alpha * q.a + (1.0 - alpha) * q.c;
  omega.diagonal() = (1.0 - alpha) * q.c.diagonal();
  return omega;
}

RVector solve_cell_system(const CellEigenQuantities& q, const std::vector<double>& cell_targets, double alpha,
                          const std::vector<int>& active) {
  require(static_cast<Eigen::Index>(cell_targets.size()) == q.b.size(), ErrorKind::DimensionMismatch,
          "one target per cell required");
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
  const RMatrix omega = omega_matrix(q, alpha);
  const auto n = static_cast<Eigen::Index>(active.size());
  RMatrix system = RMatrix::Identity(n, n);
  RVector rhs(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int i = active[static_cast<std::size_t>(r)];
    const double g = cell_targets[static_cast<std::size_t>(i)];
    require(g > 0.0 && std::isfinite(g), ErrorKind::InvalidArgument, "cell targets must be positive");
    for (Eigen::Index c = 0; c < n; ++c) system(r, c) -= g * omega(i, active[static_cast<std::size_t>(c)]) / alpha;
    rhs(r) = g * q.b(i);
  }
  const Eigen::JacobiSVD<RMatrix> svd(system);
  const auto& s = svd.singularValues();
  const double cond = s(n - 1) > 0.0 ? s(0) / s(n - 1) : INFINITY;
  if (!(cond <= 1e12)) {
    throw Error(ErrorKind::SingularSystem, fmt::format("cell system condition number {:.3g}", cond));
  }
  return system.partialPivLu().solve(rhs) / alpha;
}

RepairResult repair_negative(const std::vector<double>& raw,
                             const std::function<RVector(const std::vector<int>&)>& resolve, RepairRule rule) {
  RepairResult out;
  out.cell_power = raw;
  std::vector<int> active(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) active[i] = static_cast<int>(i);

  while (!active.empty()) {
    bool any_negative = false;
    bool all_negative = true;
    for (int i : active) {
      const bool neg = out.cell_power[static_cast<std::size_t>(i)] < 0.0;
      any_negative = any_negative || neg;
      all_negative = all_negative && neg;
    }
    if (!any_negative) break;
    ++out.rounds;
    if (all_negative) {
      for (int i : active) out.cell_power[static_cast<std::size_t>(i)] = std::abs(out.cell_power[i]);
      out.absolute_value_taken = true;
      break;
    }
    auto key = [&](int i) {
      const double p = out.cell_power[static_cast<std::size_t>(i)];
      return rule == RepairRule::LargestSigned ? p : std::abs(p);
    };
    int worst = active.front();
    for (int i : active) {
      if (key(i) > key(worst)) worst = i;
    }
    out.cell_power[static_cast<std::size_t>(worst)] = 0.0;
    out.zeroed_cells.push_back(worst);
    active.erase(std::find(active.begin(), active.end(), worst));
    if (active.empty()) break;
    const RVector next = resolve(active);
    require(next.size() == static_cast<Eigen::Index>(active.size()), ErrorKind::DimensionMismatch,
            "repair: re-solve returned the wrong number of cells");
    for (std::size_t r = 0; r < active.size(); ++r) out.cell_power[static_cast<std::size_t>(active[r])] = next(r);
  }
  return out;
}

DeterministicSolution solve_deterministic(const LinkMatrices& h, const std::vector<double>& targets, double alpha,
                                          RepairRule rule) {
  const CellEigenQuantities q = eigen_quantities(h);
  std::vector<int> all(static_cast<std::size_t>(h.cells()));
  for (int i = 0; i < h.cells(); ++i) all[static_cast<std::size_t>(i)] = i;
  const RVector raw = solve_cell_system(q, targets, alpha, all);

  DeterministicSolution out;
  out.raw_cell_power.assign(raw.data(), raw.data() + raw.size());
  out.repair = repair_negative(
      out.raw_cell_power, [&](const std::vector<int>& active) { return solve_cell_system(q, targets, alpha, active); },
      rule);
  out.lambda = PowerAllocation(GridShape{h.cells(), h.users()});
  for (int i = 0; i < h.cells(); ++i) {
    for (int u = 0; u < h.users(); ++u) out.lambda(i, u) = out.repair.cell_power[static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<double> cell_targets(const SinrValues& gamma) {
  const GridShape& s = gamma.shape();
  require(s.subcarriers == 1, ErrorKind::InvalidArgument, "per-cell targets need a narrowband grid");
  std::vector<double> out(static_cast<std::size_t>(s.cells));
  for (int i = 0; i < s.cells; ++i) {
    out[static_cast<std::size_t>(i)] = gamma(i, 0);
    for (int u = 1; u < s.users; ++u) {
      require(gamma(i, u) == gamma(i, 0), ErrorKind::InvalidArgument,
              fmt::format("users of cell {} have different targets", i));
    }
  }
  return out;
}

}  // namespace qcomp
