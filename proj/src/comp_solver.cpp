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

#include "qcomp/comp_solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qcomp/quantization.hpp"

namespace qcomp {

std::string_view to_string(ConstraintStatus s) {
  switch (s) {
    case ConstraintStatus::Active: return "active";
    case ConstraintStatus::Inactive: return "inactive";
    case ConstraintStatus::Violated: return "violated";
  }
  return "unknown";
}

double SolveReport::max_abs_residual() const {
  double worst = 0.0;
  for (double r : ul_residual) worst = std::max(worst, std::abs(r));
  for (double r : dl_residual) worst = std::max(worst, std::abs(r));
  return worst;
}

namespace {

void check_problem(const LinkMatrices& h, const SinrValues& gamma, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, ErrorKind::InvalidArgument, "alpha must lie in (0, 1]");
  require(gamma.shape() == GridShape{h.cells(), h.users()}, ErrorKind::DimensionMismatch,
          "target shape does not match channels");
  for (double g : gamma.values()) {
    require(g > 0.0 && std::isfinite(g), ErrorKind::InvalidArgument, "targets must be positive and finite");
  }
}

}  // namespace

CMatrix build_K_matrix(const LinkMatrices& h, int cell, const PowerAllocation& lambda, double alpha) {
  require(lambda.shape() == GridShape{h.cells(), h.users()}, ErrorKind::DimensionMismatch, "build_K: power shape");
  require_valid_powers(lambda);
  const int nb = h.bs_antennas();
  CMatrix k = CMatrix::Identity(nb, nb);
  RVector load = RVector::Zero(nb);
  for (int j = 0; j < h.cells(); ++j) {
    for (int v = 0; v < h.users(); ++v) {
      const double p = lambda(j, v);
      if (p == 0.0) continue;
      const auto col = h.column(cell, j, v);
      k.noalias() += (alpha * p) * col * col.adjoint();
      load += p * col.cwiseAbs2();
    }
  }
  k.diagonal() += ((1.0 - alpha) * load).cast<Complex>();
  return k;
}

numerics::DiagonalPlusLowRank factor_K(const LinkMatrices& h, int cell, const PowerAllocation& lambda, double alpha) {
  require(lambda.shape() == GridShape{h.cells(), h.users()}, ErrorKind::DimensionMismatch, "build_K: power shape");
  const int nb = h.bs_antennas();
  RVector load = RVector::Zero(nb);
  std::vector<CVector> columns;
  for (int j = 0; j < h.cells(); ++j) {
    for (int v = 0; v < h.users(); ++v) {
      const double p = lambda(j, v);
      if (p == 0.0) continue;
      const auto col = h.column(cell, j, v);
      load += p * col.cwiseAbs2();
      columns.push_back(std::sqrt(alpha * p) * col);
    }
  }
  CMatrix v(nb, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = columns[c];
  return numerics::DiagonalPlusLowRank(RVector::Ones(nb) + (1.0 - alpha) * load, std::move(v));
}

numerics::HermitianPD build_K(const LinkMatrices& h, int cell, const PowerAllocation& lambda, double alpha) {
  return numerics::HermitianPD::factor(build_K_matrix(h, cell, lambda, alpha));
}

PowerAllocation fixed_point_map(const LinkMatrices& h, const SinrValues& gamma, const PowerAllocation& lambda,
                                double alpha) {
  check_problem(h, gamma, alpha);
  require_valid_powers(lambda);
  PowerAllocation next(lambda.shape());
  for (int i = 0; i < h.cells(); ++i) {
    const auto k = factor_K(h, i, lambda, alpha);
    for (int u = 0; u < h.users(); ++u) {
      const double s = k.inverse_quadratic_form(h.column(i, i, u));
      next(i, u) = 1.0 / (alpha * (1.0 + 1.0 / gamma(i, u)) * s);
    }
  }
  return next;
}

UplinkSolution run_fixed_point(const std::function<PowerAllocation(const PowerAllocation&)>& map, GridShape shape,
                               const SolverOptions& options) {
  PowerAllocation lambda = options.init.value_or(PowerAllocation(shape));
  require(lambda.shape() == shape, ErrorKind::DimensionMismatch, "initial power shape");
  require_valid_powers(lambda);

  UplinkSolution out;
  SolveReport& report = out.report;
  for (int it = 1; it <= options.max_iterations; ++it) {
    PowerAllocation next = map(lambda);
    double change = 0.0;
    for (std::size_t n = 0; n < next.size(); ++n) {
      change = std::max(change, std::abs(next[n] - lambda[n]) / std::max(lambda[n], 1e-300));
    }
    const double total = next.sum();
    report.per_iteration_total_power.push_back(total);
    report.iterations = it;
    lambda = std::move(next);
    if (!std::isfinite(total) || total > options.power_cap) {
      throw Error(ErrorKind::Infeasible,
                  fmt::format("total power {:.6g} exceeds cap {:.6g} after {} iterations", total, options.power_cap, it));
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
                fmt::format("no fixed point within {} iterations", options.max_iterations));
  }
  report.final_total_power = lambda.sum();
  out.lambda = std::move(lambda);
  return out;
}

UplinkSolution fixed_point_ul(const LinkMatrices& h, const SinrValues& gamma, double alpha,
                              const SolverOptions& options) {
  check_problem(h, gamma, alpha);
  return run_fixed_point([&](const PowerAllocation& l) { return fixed_point_map(h, gamma, l, alpha); },
                         GridShape{h.cells(), h.users()}, options);
}

std::vector<CVector> mmse_combiner(const LinkMatrices& h, const PowerAllocation& lambda, double alpha) {
  const GridShape shape{h.cells(), h.users()};
  std::vector<CVector> f(shape.size());
  for (int i = 0; i < h.cells(); ++i) {
    // C_z = alpha (K_i - alpha lambda_iu h h^H)
    const CMatrix k = build_K_matrix(h, i, lambda, alpha);
    for (int u = 0; u < h.users(); ++u) {
      const auto col = h.column(i, i, u);
      CMatrix cz = k;
      cz.noalias() -= (alpha * lambda(i, u)) * col * col.adjoint();
      cz *= alpha;
      f[shape.index(i, u)] = numerics::hermitian_solve(cz, col);
    }
  }
  return f;
}

RMatrix dl_scaling_matrix(const LinkMatrices& h, const std::vector<CVector>& combiners, const SinrValues& gamma,
                          double alpha) {
  check_problem(h, gamma, alpha);
  const GridShape shape{h.cells(), h.users()};
  require(combiners.size() == shape.size(), ErrorKind::DimensionMismatch, "combiner count");
  const double a2 = alpha * alpha;
  const double aq = alpha * (1.0 - alpha);
  const auto n = static_cast<Eigen::Index>(shape.size());
  RMatrix sigma(n, n);
  for (int i = 0; i < shape.cells; ++i) {
    for (int u = 0; u < shape.users; ++u) {
      const auto row = static_cast<Eigen::Index>(shape.index(i, u));
      for (int j = 0; j < shape.cells; ++j) {
        const auto hc = h.column(j, i, u);
        const RVector h2 = hc.cwiseAbs2();
        for (int v = 0; v < shape.users; ++v) {
          const auto col = static_cast<Eigen::Index>(shape.index(j, v));
          const CVector& f = combiners[static_cast<std::size_t>(col)];
          const double gain = std::norm(f.dot(hc));
          const double quant = aq * (f.cwiseAbs2().array() * h2.array()).sum();
          sigma(row, col) = row == col ? a2 / gamma(i, u) * gain - quant : -a2 * gain - quant;
        }
      }
    }
  }
  return sigma;
}

std::vector<double> solve_scaling_system(const RMatrix& sigma) {
  const Eigen::JacobiSVD<RMatrix> svd(sigma);
  const auto& s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
  if (!(cond <= 1e12)) {
    throw Error(ErrorKind::SingularSigma, fmt::format("scaling matrix condition number {:.3g}", cond));
  }
  const RVector tau = sigma.partialPivLu().solve(RVector::Ones(sigma.rows()));
  for (Eigen::Index n = 0; n < tau.size(); ++n) {
    if (!(tau(n) > 0.0)) {
      throw Error(ErrorKind::NonPositiveTau, fmt::format("scaling tau[{}] = {:.6g}", n, tau(n)));
    }
  }
  return {tau.data(), tau.data() + tau.size()};
}

DownlinkScaling dl_scaling(const LinkMatrices& h, const std::vector<CVector>& combiners, const SinrValues& gamma,
                           double alpha) {
  DownlinkScaling out;
  out.tau = solve_scaling_system(dl_scaling_matrix(h, combiners, gamma, alpha));
  out.precoders.reserve(combiners.size());
  for (std::size_t n = 0; n < combiners.size(); ++n) out.precoders.push_back(std::sqrt(out.tau[n]) * combiners[n]);
  return out;
}

void classify(const SinrValues& achieved, const SinrValues& gamma, double tolerance, std::vector<double>& residual,
              std::vector<ConstraintStatus>& status) {
  residual.resize(achieved.size());
  status.resize(achieved.size());
  for (std::size_t n = 0; n < achieved.size(); ++n) {
    residual[n] = achieved[n] / gamma[n] - 1.0;
    if (std::abs(residual[n]) <= tolerance) {
      status[n] = ConstraintStatus::Active;
    } else {
      status[n] = residual[n] > 0.0 ? ConstraintStatus::Inactive : ConstraintStatus::Violated;
    }
  }
}

double duality_gap(double total_ul_power, const std::vector<CVector>& precoders, double alpha) {
  double dl = 0.0;
  for (const auto& w : precoders) dl += w.squaredNorm();
  const double diff = std::abs(total_ul_power - alpha * dl);
  return total_ul_power > 0.0 ? diff / total_ul_power : diff;
}

SolveReport verify_solution(const LinkMatrices& h, const PowerAllocation& lambda,
                            const std::vector<CVector>& precoders, const SinrValues& gamma, double alpha,
                            double tolerance) {
  check_problem(h, gamma, alpha);
  SolveReport r;
  r.final_total_power = lambda.sum();
  r.achieved_ul_sinr = mmse_ul_sinr(h, lambda, alpha);
  r.achieved_dl_sinr = dl_sinr(h, precoders, alpha);
  classify(r.achieved_ul_sinr, gamma, tolerance, r.ul_residual, r.ul_status);
  classify(r.achieved_dl_sinr, gamma, tolerance, r.dl_residual, r.dl_status);
  r.duality_gap = duality_gap(r.final_total_power, precoders, alpha);
  return r;
}

JointSolution solve_icomp(const LinkMatrices& h, const SinrValues& gamma, double alpha,
                          const SolverOptions& options) {
  UplinkSolution ul = fixed_point_ul(h, gamma, alpha, options);
  JointSolution out;
  out.beams = BeamformerSet(GridShape{h.cells(), h.users()});
  out.beams.combiners = mmse_combiner(h, ul.lambda, alpha);
  DownlinkScaling dl = dl_scaling(h, out.beams.combiners, gamma, alpha);
  out.beams.tau = std::move(dl.tau);
  out.beams.precoders = std::move(dl.precoders);
  out.report = verify_solution(h, ul.lambda, out.beams.precoders, gamma, alpha);
  out.report.converged = ul.report.converged;
  out.report.iterations = ul.report.iterations;
  out.report.per_iteration_total_power = std::move(ul.report.per_iteration_total_power);
  out.lambda = std::move(ul.lambda);
  return out;
}

}  // namespace qcomp
