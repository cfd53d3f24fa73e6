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

#ifndef QCOMP_NUMERICS_HPP
#define QCOMP_NUMERICS_HPP

#include <optional>
#include <span>
#include <vector>

#include "qcomp/types.hpp"

namespace qcomp::numerics {

struct Tolerances {
  // Relative Hermitian tolerance: ||A - A^H||_max <= hermitian * ||A||_max.
  double hermitian = 1e-10;
  // Relative Rayleigh-quotient change at which power iteration stops.
  double eigen_relative_change = 1e-12;
  // Relative residual ||Av - rho v|| / ||A|| at which power iteration stops.
  double eigen_residual = 1e-9;
  int eigen_max_iterations = 100000;
};

inline constexpr Tolerances kDefaultTolerances{};

void require_finite(const CMatrix& a, const char* what);

bool is_hermitian(const CMatrix& a, double relative_tolerance = kDefaultTolerances.hermitian);

// A Hermitian positive definite matrix together with its Cholesky factor.
// Construction symmetrizes (A + A^H)/2 and certifies definiteness by a
// successful factorization.
class HermitianPD {
 public:
  static HermitianPD factor(const CMatrix& a, const Tolerances& tol = kDefaultTolerances);

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const noexcept { return matrix_; }

  CVector solve(const CVector& b) const;
  CMatrix solve(const CMatrix& b) const;
  // b^H A^{-1} b, real by construction.
  double inverse_quadratic_form(const CVector& b) const;

 private:
  HermitianPD(CMatrix m, Eigen::LLT<CMatrix> llt) : matrix_(std::move(m)), llt_(std::move(llt)) {}

  CMatrix matrix_;
  Eigen::LLT<CMatrix> llt_;
};

// A = diag(d) + V V^H with d > 0 and few columns in V. Quadratic forms go
// through the r x r matrix I + V^H D^{-1} V; when the subtraction in that
// route would cancel more than four digits the full matrix is factored
// instead (once, on first need).
class DiagonalPlusLowRank {
 public:
  DiagonalPlusLowRank(const RVector& d, CMatrix v);

  // b^H A^{-1} b
  double inverse_quadratic_form(const CVector& b) const;

 private:
  const HermitianPD& dense() const;

  RVector d_inv_;
  CMatrix v_;
  CMatrix d_inv_v_;
  Eigen::LLT<CMatrix> capacitance_;
  mutable std::optional<HermitianPD> dense_;
};

// Solves A x = b for Hermitian positive definite A.
CVector hermitian_solve(const CMatrix& a, const CVector& b, const Tolerances& tol = kDefaultTolerances);

enum class Extremal { Max, Min };

// Largest or smallest eigenvalue of a Hermitian matrix. The max branch
// is a power iteration with Rayleigh-quotient stopping; the min branch
// runs inverse iteration when A is positive definite and a spectral
// shift otherwise.
double extremal_eigenvalue(const CMatrix& a, Extremal which, const Tolerances& tol = kDefaultTolerances);

// Unitary K-point DFT matrix, [W]_{k,n} = exp(-j 2 pi k n / K) / sqrt(K).
CMatrix dft_matrix(int k);

// Frequency response of a tap sequence: G(k) = sum_l H_l exp(-j 2 pi k l / K).
std::vector<CMatrix> taps_to_freq(std::span<const CMatrix> taps, int k);

}  // namespace qcomp::numerics

#endif  // QCOMP_NUMERICS_HPP
