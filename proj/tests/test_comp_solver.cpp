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

#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qcomp/comp_solver.hpp"
#include "qcomp/error.hpp"
#include "qcomp/quantization.hpp"

using namespace qcomp;
using fixture::rel;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

// Unquantized SINR balancing by the classic iteration
// lambda <- gamma / (h^H (sum_{others} lambda h h^H + I)^{-1} h).
PowerAllocation unquantized_reference(const LinkMatrices& h, const SinrValues& gamma) {
  const GridShape shape = gamma.shape();
  const int nb = h.bs_antennas();
  PowerAllocation lambda(shape, 0.0);
  for (int it = 0; it < 100000; ++it) {
    PowerAllocation next(shape);
    double change = 0.0;
    for (int i = 0; i < shape.cells; ++i) {
      for (int u = 0; u < shape.users; ++u) {
        CMatrix r = CMatrix::Identity(nb, nb);
        for (int j = 0; j < shape.cells; ++j) {
          for (int v = 0; v < shape.users; ++v) {
            if (j == i && v == u) continue;
            const CVector c = h.column(i, j, v);
            r += lambda(j, v) * c * c.adjoint();
          }
        }
        const CVector c = h.column(i, i, u);
        next(i, u) = gamma(i, u) / c.dot(oracle::solve(r, c)).real();
        change = std::max(change, std::abs(next(i, u) - lambda(i, u)) / next(i, u));
      }
    }
    lambda = next;
    if (change < 1e-13) break;
  }
  return lambda;
}

}  // namespace

TEST_CASE("K matrix matches its definition and is bounded below by I") {
  std::mt19937_64 rng(1);
  const int nb = 4;
  const GridShape shape{2, 2, 1};
  const LinkMatrices h = fixture::random_links(2, nb, 2, rng);
  const PowerAllocation lambda = fixture::random_powers(shape, rng);
  const double alpha = 0.6366;
  for (int i = 0; i < 2; ++i) {
    CMatrix direct = CMatrix::Identity(nb, nb);
    CMatrix loaded = CMatrix::Zero(nb, nb);
    for (int j = 0; j < 2; ++j) {
      for (int v = 0; v < 2; ++v) {
        const CVector c = h.column(i, j, v);
        loaded += lambda(j, v) * c * c.adjoint();
      }
    }
    direct += alpha * loaded + (1.0 - alpha) * oracle::diag_part(loaded);
    const CMatrix k = build_K_matrix(h, i, lambda, alpha);
    CHECK((k - direct).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(oracle::hermitian_eigenvalues(k).front() >= 1.0 - 1e-9);
    const auto chol = build_K(h, i, lambda, alpha);
    const CVector x = oracle::random_cmatrix(nb, 1, rng);
    CHECK(rel(chol.inverse_quadratic_form(x), x.dot(oracle::solve(direct, x)).real()) <= 1e-10);
  }
}

TEST_CASE("one antenna, one user: closed form and feasibility ceiling") {
  // K = 1 + lambda |h|^2, so lambda = gamma / (|h|^2 (alpha - gamma (1 - alpha))),
  // feasible exactly when gamma < alpha / (1 - alpha).
  LinkMatrices h(1, 1, 1);
  h.block(0, 0)(0, 0) = Complex(0.6, -1.3);
  const double g2 = std::norm(h.block(0, 0)(0, 0));
  // The Jacobi map is affine here with slope 1 / (alpha (1 + 1/gamma)), so
  // the targets stay well below the ceiling to keep the contraction fast.
  for (int b : {1, 2, 3, 5}) {
    const double alpha = quant_gain(BitDepth(b)).alpha;
    const double ceiling = alpha / (1.0 - alpha);
    const double gamma = 1.0;
    const UplinkSolution s = fixed_point_ul(h, SinrValues(GridShape{1, 1, 1}, gamma), alpha);
    CHECK(s.report.converged);
    CHECK(rel(s.lambda[0], gamma / (g2 * (alpha - gamma * (1.0 - alpha)))) <= 1e-8);
    CHECK(kind_of([&] { fixed_point_ul(h, SinrValues(GridShape{1, 1, 1}, 1.2 * ceiling), alpha); }) ==
          ErrorKind::Infeasible);
  }
  // Unquantized: lambda = gamma / |h|^2 for any target.
  const UplinkSolution s = fixed_point_ul(h, SinrValues(GridShape{1, 1, 1}, 10.0), 1.0);
  CHECK(rel(s.lambda[0], 10.0 / g2) <= 1e-8);
}

TEST_CASE("fixed-point map is a standard interference function") {
  std::mt19937_64 rng(2);
  const GridShape shape{3, 2, 1};
  const LinkMatrices h = fixture::random_links(3, 4, 2, rng);
  const SinrValues gamma = fixture::uniform_targets(shape, 0.0);
  const double alpha = 0.8825;
  for (int t = 0; t < 20; ++t) {
    const PowerAllocation a = fixture::random_powers(shape, rng, 0.0, 5.0);
    PowerAllocation b = a;
    for (auto& x : b.values()) x += std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    const PowerAllocation ia = fixed_point_map(h, gamma, a, alpha);
    const PowerAllocation ib = fixed_point_map(h, gamma, b, alpha);
    for (std::size_t n = 0; n < shape.size(); ++n) {
      CHECK(ia[n] > 0.0);
      CHECK(ia[n] <= ib[n] * (1.0 + 1e-12));
    }
    for (double rho : {1.5, 4.0}) {
      PowerAllocation scaled = a;
      for (auto& x : scaled.values()) x *= rho;
      const PowerAllocation is = fixed_point_map(h, gamma, scaled, alpha);
      for (std::size_t n = 0; n < shape.size(); ++n) CHECK(rho * ia[n] > is[n]);
    }
  }
}

TEST_CASE("fixed point is unique and approached monotonically from zero") {
  std::mt19937_64 rng(3);
  const GridShape shape{3, 2, 1};
  const LinkMatrices h = fixture::random_links(3, 6, 2, rng);
  const SinrValues gamma = fixture::uniform_targets(shape, 3.0);
  const double alpha = quant_gain(BitDepth(3)).alpha;

  const UplinkSolution from_zero = fixed_point_ul(h, gamma, alpha);
  REQUIRE(from_zero.report.converged);
  const auto& trace = from_zero.report.per_iteration_total_power;
  REQUIRE(trace.size() >= 2);
  for (std::size_t n = 1; n < trace.size(); ++n) CHECK(trace[n] >= trace[n - 1] * (1.0 - 1e-12));
  CHECK(rel(trace.back(), from_zero.lambda.sum()) <= 1e-12);
  CHECK(from_zero.report.iterations == static_cast<int>(trace.size()));

  SolverOptions high;
  high.init = fixture::random_powers(shape, rng, 50.0, 100.0);
  const UplinkSolution from_above = fixed_point_ul(h, gamma, alpha, high);
  for (std::size_t n = 0; n < shape.size(); ++n) CHECK(rel(from_above.lambda[n], from_zero.lambda[n]) <= 1e-8);

  // Fixed point satisfies the targets through MMSE combining.
  const SinrValues achieved = mmse_ul_sinr(h, from_zero.lambda, alpha);
  for (std::size_t n = 0; n < shape.size(); ++n) CHECK(rel(achieved[n], gamma[n]) <= 1e-8);
}

TEST_CASE("unquantized solution agrees with the classic balancing iteration") {
  std::mt19937_64 rng(4);
  const GridShape shape{2, 3, 1};
  const LinkMatrices h = fixture::random_links(2, 5, 3, rng);
  SinrValues gamma(shape);
  for (auto& g : gamma.values()) g = db_to_linear(std::uniform_real_distribution<double>(-3.0, 6.0)(rng));
  const UplinkSolution s = fixed_point_ul(h, gamma, 1.0);
  const PowerAllocation ref = unquantized_reference(h, gamma);
  for (std::size_t n = 0; n < shape.size(); ++n) CHECK(rel(s.lambda[n], ref[n]) <= 1e-8);
}

TEST_CASE("MMSE combiner solves C_z f = h") {
  std::mt19937_64 rng(5);
  const int nb = 4;
  const GridShape shape{2, 2, 1};
  const LinkMatrices h = fixture::random_links(2, nb, 2, rng);
  const PowerAllocation lambda = fixture::random_powers(shape, rng);
  const double alpha = 0.7;
  const auto f = mmse_combiner(h, lambda, alpha);
  REQUIRE(f.size() == shape.size());
  for (int i = 0; i < 2; ++i) {
    const CMatrix k = build_K_matrix(h, i, lambda, alpha);
    for (int u = 0; u < 2; ++u) {
      const CVector c = h.column(i, i, u);
      const CMatrix cz = alpha * (k - alpha * lambda(i, u) * c * c.adjoint());
      const CVector expect = oracle::solve(cz, c);
      CHECK((f[shape.index(i, u)] - expect).norm() <= 1e-10 * expect.norm());
    }
  }
}

TEST_CASE("downlink scaling matrix entries") {
  std::mt19937_64 rng(6);
  const int nb = 3;
  const GridShape shape{2, 2, 1};
  const LinkMatrices h = fixture::random_links(2, nb, 2, rng);
  const auto f = fixture::random_vectors(shape.size(), nb, rng);
  SinrValues gamma(shape);
  for (auto& g : gamma.values()) g = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  const double alpha = 0.6;
  const RMatrix sigma = dl_scaling_matrix(h, f, gamma, alpha);
  REQUIRE(sigma.rows() == 4);
  REQUIRE(sigma.cols() == 4);
  for (int i = 0; i < 2; ++i) {
    for (int u = 0; u < 2; ++u) {
      for (int j = 0; j < 2; ++j) {
        for (int v = 0; v < 2; ++v) {
          const CVector g = h.column(j, i, u);
          const CVector& w = f[shape.index(j, v)];
          double quant = 0.0;
          for (int n = 0; n < nb; ++n) quant += std::norm(w(n)) * std::norm(g(n));
          quant *= alpha * (1.0 - alpha);
          const double gain = alpha * alpha * std::norm(w.dot(g));
          const double expect = (i == j && u == v) ? gain / gamma(i, u) - quant : -gain - quant;
          CHECK(std::abs(sigma(shape.index(i, u), shape.index(j, v)) - expect) <= 1e-12 * (1.0 + std::abs(expect)));
        }
      }
    }
  }
  // With combiners from the uplink fixed point the scalings reproduce the
  // targets.
  const UplinkSolution ul = fixed_point_ul(h, gamma, alpha);
  const DownlinkScaling d = dl_scaling(h, mmse_combiner(h, ul.lambda, alpha), gamma, alpha);
  const SinrValues achieved = dl_sinr(h, d.precoders, alpha);
  for (std::size_t n = 0; n < shape.size(); ++n) {
    CHECK(d.tau[n] > 0.0);
    CHECK(rel(achieved[n], gamma[n]) <= 1e-9);
  }
}

TEST_CASE("scaling system failures") {
  RMatrix singular(2, 2);
  singular << 1.0, 2.0, 2.0, 4.0;
  CHECK(kind_of([&] { solve_scaling_system(singular); }) == ErrorKind::SingularSigma);
  RMatrix negative(2, 2);
  negative << 1.0, 2.0, 0.0, 1.0;  // tau = (-1, 1)
  CHECK(kind_of([&] { solve_scaling_system(negative); }) == ErrorKind::NonPositiveTau);
  RMatrix fine(2, 2);
  fine << 2.0, -0.5, -0.5, 2.0;
  const auto tau = solve_scaling_system(fine);
  CHECK(tau[0] == doctest::Approx(1.0 / 1.5));
  CHECK(tau[1] == doctest::Approx(1.0 / 1.5));
}

TEST_CASE("joint solution meets both directions with zero duality gap") {
  std::mt19937_64 rng(7);
  const GridShape shape{3, 2, 1};
  for (int b : {2, 3, 5}) {
    const double alpha = quant_gain(BitDepth(b)).alpha;
    for (int t = 0; t < 3; ++t) {
      const LinkMatrices h = fixture::random_links(3, 8, 2, rng);
      const SinrValues gamma = fixture::uniform_targets(shape, 0.0);
      const JointSolution s = solve_icomp(h, gamma, alpha);
      CHECK(s.report.converged);
      CHECK(s.report.duality_gap <= 1e-6);
      CHECK(rel(alpha * [&] {
              double p = 0.0;
              for (const auto& w : s.beams.precoders) p += w.squaredNorm();
              return p;
            }(), s.lambda.sum()) <= 1e-6);
      const SinrValues dl = dl_sinr(h, s.beams.precoders, alpha);
      const SinrValues ul = mmse_ul_sinr(h, s.lambda, alpha);
      for (std::size_t n = 0; n < shape.size(); ++n) {
        CHECK(rel(dl[n], gamma[n]) <= 1e-6);
        CHECK(rel(ul[n], gamma[n]) <= 1e-6);
        CHECK(s.beams.tau[n] > 0.0);
        CHECK(rel(s.report.achieved_dl_sinr[n], dl[n]) <= 1e-12);
        CHECK(s.report.dl_status[n] == ConstraintStatus::Active);
        CHECK(s.report.ul_status[n] == ConstraintStatus::Active);
      }
      CHECK(s.report.max_abs_residual() <= 1e-6);
    }
  }
}

TEST_CASE("audit classifies perturbed and empty solutions") {
  std::mt19937_64 rng(8);
  const GridShape shape{2, 2, 1};
  const LinkMatrices h = fixture::random_links(2, 6, 2, rng);
  const SinrValues gamma = fixture::uniform_targets(shape, 3.0);
  const double alpha = 0.8825;
  const JointSolution s = solve_icomp(h, gamma, alpha);

  PowerAllocation more = s.lambda;
  for (auto& x : more.values()) x *= 1.1;
  auto louder = s.beams.precoders;
  for (auto& w : louder) w *= std::sqrt(1.1);
  const SolveReport up = verify_solution(h, more, louder, gamma, alpha);
  for (std::size_t n = 0; n < shape.size(); ++n) {
    CHECK(up.ul_status[n] == ConstraintStatus::Inactive);
    CHECK(up.dl_status[n] == ConstraintStatus::Inactive);
    CHECK(up.ul_residual[n] > 0.0);
  }
  CHECK(up.duality_gap <= 1e-6);

  const PowerAllocation none(shape, 0.0);
  const std::vector<CVector> silent(shape.size(), CVector::Zero(6));
  const SolveReport empty = verify_solution(h, none, silent, gamma, alpha);
  for (std::size_t n = 0; n < shape.size(); ++n) {
    CHECK(empty.ul_status[n] == ConstraintStatus::Violated);
    CHECK(empty.dl_status[n] == ConstraintStatus::Violated);
    CHECK(empty.dl_residual[n] == doctest::Approx(-1.0));
  }
  CHECK(to_string(ConstraintStatus::Active) == "active");
  CHECK(to_string(ConstraintStatus::Inactive) == "inactive");
  CHECK(to_string(ConstraintStatus::Violated) == "violated");
}

TEST_CASE("classification boundaries") {
  const GridShape shape{1, 3, 1};
  const SinrValues gamma(shape, 2.0);
  const SinrValues achieved(shape, std::vector<double>{2.0 * (1.0 + 5e-7), 2.0 * 1.01, 2.0 * 0.99});
  std::vector<double> residual;
  std::vector<ConstraintStatus> status;
  classify(achieved, gamma, 1e-6, residual, status);
  CHECK(status[0] == ConstraintStatus::Active);
  CHECK(status[1] == ConstraintStatus::Inactive);
  CHECK(status[2] == ConstraintStatus::Violated);
  CHECK(residual[1] == doctest::Approx(0.01));
}

TEST_CASE("infeasible targets and budget handling") {
  std::mt19937_64 rng(9);
  const GridShape shape{2, 2, 1};
  const LinkMatrices h = fixture::random_links(2, 4, 2, rng);
  const double alpha = quant_gain(BitDepth(1)).alpha;
  const SinrValues impossible = fixture::uniform_targets(shape, 10.0);
  CHECK(kind_of([&] { solve_icomp(h, impossible, alpha); }) == ErrorKind::Infeasible);

  SolverOptions short_budget;
  short_budget.max_iterations = 3;
  const ErrorKind k = kind_of([&] { fixed_point_ul(h, fixture::uniform_targets(shape, 0.0), 0.9, short_budget); });
  // Starting from zero the power grows every step.
  CHECK(k == ErrorKind::Infeasible);

  CHECK(kind_of([&] { fixed_point_ul(h, fixture::uniform_targets(GridShape{3, 2, 1}, 0.0), 0.9); }) ==
        ErrorKind::DimensionMismatch);
  CHECK_THROWS_AS(fixed_point_ul(h, SinrValues(shape, -1.0), 0.9), Error);
}
