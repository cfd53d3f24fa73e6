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

#include "qcomp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qcomp::numerics {

namespace {

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// Deterministic start vector with no zero entries and irregular phases,
// so it is not orthogonal to the dominant eigenvector of structured input.
CVector start_vector(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = static_cast<double>(k);
    v(k) = Complex(1.0 / (x + 1.37), 0.31 * std::sin(1.7 * x + 0.4));
  }
  return v.normalized();
}

// Dominant (largest magnitude) eigenvalue of a Hermitian matrix applied
// through `apply`. Returns the Rayleigh quotient at convergence.
template <class Apply>
double power_iteration(Eigen::Index n, double scale, Apply&& apply, const Tolerances& tol) {
  CVector v = start_vector(n);
  double rho = 0.0;
  for (int it = 0; it < tol.eigen_max_iterations; ++it) {
    CVector w = apply(v);
    const double next = v.dot(w).real();
    const double residual = (w - next * v).norm();
    const bool settled = it > 0 && std::abs(next - rho) <= tol.eigen_relative_change * std::abs(next);
    rho = next;
    if (residual <= tol.eigen_residual * scale || settled) return rho;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  throw Error(ErrorKind::NoConvergence,
              "power iteration did not converge in " + std::to_string(tol.eigen_max_iterations) + " iterations");
}

double largest_eigenvalue(const CMatrix& a, const Tolerances& tol) {
  const double scale = a.norm();
  if (scale == 0.0) return 0.0;
  const double dominant = power_iteration(a.rows(), scale, [&](const CVector& v) -> CVector { return a * v; }, tol);
  if (dominant >= 0.0) return dominant;
  // Dominant eigenvalue is the most negative one; shift it to zero.
  const CMatrix shifted = a - dominant * CMatrix::Identity(a.rows(), a.cols());
  const double top = power_iteration(a.rows(), shifted.norm(),
                                     [&](const CVector& v) -> CVector { return shifted * v; }, tol);
  return dominant + top;
}

}  // namespace

void require_finite(const CMatrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
}

bool is_hermitian(const CMatrix& a, double relative_tolerance) {
  if (a.rows() != a.cols()) return false;
  const double scale = max_abs(a);
  return max_abs(a - a.adjoint()) <= relative_tolerance * scale;
}

HermitianPD HermitianPD::factor(const CMatrix& a, const Tolerances& tol) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "matrix is not square");
  require_finite(a, "Hermitian matrix");
  require(is_hermitian(a, tol.hermitian), ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
  CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::LLT<CMatrix> llt(sym);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed");
  return HermitianPD(std::move(sym), std::move(llt));
}

CVector HermitianPD::solve(const CVector& b) const {
  require(b.size() == matrix_.rows(), ErrorKind::DimensionMismatch, "right-hand side length mismatch");
  return llt_.solve(b);
}

CMatrix HermitianPD::solve(const CMatrix& b) const {
  require(b.rows() == matrix_.rows(), ErrorKind::DimensionMismatch, "right-hand side rows mismatch");
  return llt_.solve(b);
}

double HermitianPD::inverse_quadratic_form(const CVector& b) const {
  // ||L^{-1} b||^2 with A = L L^H.
  require(b.size() == matrix_.rows(), ErrorKind::DimensionMismatch, "vector length mismatch");
  const CVector y = llt_.matrixL().solve(b);
  return y.squaredNorm();
}

DiagonalPlusLowRank::DiagonalPlusLowRank(const RVector& d, CMatrix v) : v_(std::move(v)) {
  require(d.size() == v_.rows(), ErrorKind::DimensionMismatch, "diagonal and factor rows differ");
  require(d.size() > 0 && (d.array() > 0.0).all() && d.allFinite(), ErrorKind::NotPositiveDefinite,
          "diagonal part must be positive");
  require_finite(v_, "low-rank factor");
  d_inv_ = d.cwiseInverse();
  d_inv_v_ = d_inv_.cast<Complex>().asDiagonal() * v_;
  CMatrix cap = v_.adjoint() * d_inv_v_;
  cap.diagonal().array() += 1.0;
  capacitance_.compute(0.5 * (cap + cap.adjoint()));
  if (capacitance_.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "capacitance factorization failed");
  }
}

const HermitianPD& DiagonalPlusLowRank::dense() const {
  if (!dense_) {
    CMatrix a = v_ * v_.adjoint();
    a.diagonal() += d_inv_.cwiseInverse().cast<Complex>();
    dense_ = HermitianPD::factor(a);
  }
  return *dense_;
}

double DiagonalPlusLowRank::inverse_quadratic_form(const CVector& b) const {
  require(b.size() == d_inv_.size(), ErrorKind::DimensionMismatch, "vector length mismatch");
  const double head = (b.cwiseAbs2().array() * d_inv_.array()).sum();
  const CVector y = capacitance_.matrixL().solve(d_inv_v_.adjoint() * b);
  const double value = head - y.squaredNorm();
  if (value > 1e-4 * head) return value;
  return dense().inverse_quadratic_form(b);
}

CVector hermitian_solve(const CMatrix& a, const CVector& b, const Tolerances& tol) {
  require(a.rows() == a.cols() && a.rows() == b.size(), ErrorKind::DimensionMismatch,
          "hermitian_solve: dim(A) != len(b)");
  return HermitianPD::factor(a, tol).solve(b);
}

double extremal_eigenvalue(const CMatrix& a, Extremal which, const Tolerances& tol) {
  require(a.rows() == a.cols() && a.rows() > 0, ErrorKind::DimensionMismatch, "matrix must be square");
  require_finite(a, "eigenvalue input");
  require(is_hermitian(a, tol.hermitian), ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
  const CMatrix sym = 0.5 * (a + a.adjoint());
  if (sym.rows() == 1) return sym(0, 0).real();

  if (which == Extremal::Max) return largest_eigenvalue(sym, tol);

  Eigen::LLT<CMatrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    const double inv_scale = llt.solve(CMatrix::Identity(sym.rows(), sym.cols())).norm();
    const double mu = power_iteration(
        sym.rows(), inv_scale, [&](const CVector& v) -> CVector { return llt.solve(v); }, tol);
    if (mu > 0.0) return 1.0 / mu;
  }
  const double top = largest_eigenvalue(sym, tol);
  const CMatrix flipped = top * CMatrix::Identity(sym.rows(), sym.cols()) - sym;
  return top - largest_eigenvalue(flipped, tol);
}

CMatrix dft_matrix(int k) {
  require(k >= 1, ErrorKind::InvalidArgument, "DFT size must be >= 1");
  CMatrix w(k, k);
  const double norm = 1.0 / std::sqrt(static_cast<double>(k));
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      const int phase = static_cast<int>((static_cast<long long>(r) * c) % k);
      const double angle = -2.0 * std::numbers::pi * phase / k;
      w(r, c) = norm * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return w;
}

std::vector<CMatrix> taps_to_freq(std::span<const CMatrix> taps, int k) {
  require(!taps.empty(), ErrorKind::DimensionMismatch, "at least one tap required");
  require(k >= 1 && static_cast<int>(taps.size()) <= k, ErrorKind::DimensionMismatch, "need L <= K");
  const auto rows = taps.front().rows();
  const auto cols = taps.front().cols();
  for (const auto& t : taps) {
    require(t.rows() == rows && t.cols() == cols, ErrorKind::DimensionMismatch, "taps differ in shape");
  }
  std::vector<CMatrix> freq(static_cast<std::size_t>(k), CMatrix::Zero(rows, cols));
  for (int s = 0; s < k; ++s) {
    for (std::size_t l = 0; l < taps.size(); ++l) {
      const int phase = static_cast<int>((static_cast<long long>(s) * static_cast<long long>(l)) % k);
      const double angle = -2.0 * std::numbers::pi * phase / k;
      freq[static_cast<std::size_t>(s)] += Complex(std::cos(angle), std::sin(angle)) * taps[l];
    }
  }
  return freq;
}

}  // namespace qcomp::numerics
