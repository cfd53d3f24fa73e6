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

#ifndef QCOMP_TYPES_HPP
#define QCOMP_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qcomp/error.hpp"

namespace qcomp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Index space (cell, user[, subcarrier]) shared by powers, targets,
// SINRs and beamformers. Flat order is cell-major, then user, then
// subcarrier, so a narrowband grid (subcarriers == 1) indexes as
// cell * users + user.
struct GridShape {
  int cells = 0;
  int users = 0;
  int subcarriers = 1;

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(cells) * users * subcarriers;
  }
  std::size_t index(int cell, int user, int subcarrier = 0) const noexcept {
    return (static_cast<std::size_t>(cell) * users + user) * subcarriers + subcarrier;
  }
  bool operator==(const GridShape&) const = default;
};

// Real values over a GridShape. The tag keeps powers, targets and
// achieved SINRs from being mixed up at call sites.
template <class Tag>
class UserArray {
 public:
  UserArray() = default;
  explicit UserArray(GridShape shape, double fill = 0.0)
      : shape_(shape), values_(shape.size(), fill) {}
  UserArray(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    require(values_.size() == shape_.size(), ErrorKind::DimensionMismatch,
            "value count does not match grid shape");
  }

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(int cell, int user, int subcarrier = 0) {
    return values_[shape_.index(cell, user, subcarrier)];
  }
  double operator()(int cell, int user, int subcarrier = 0) const {
    return values_[shape_.index(cell, user, subcarrier)];
  }
  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  double sum() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

 private:
  GridShape shape_{};
  std::vector<double> values_;
};

struct PowerTag;
struct SinrTag;

// Nonnegative noise-normalized transmit powers (lambda). Also carries
// the downlink Lagrange multipliers, which coincide with them.
using PowerAllocation = UserArray<PowerTag>;
// Linear SINR values: targets (gamma) or achieved.
using SinrValues = UserArray<SinrTag>;

// Validates lambda >= 0 and finite.
void require_valid_powers(const PowerAllocation& lambda);

// N_c x N_c grid of N_b x N_u blocks. Block (i, j) is the uplink channel
// between BS i and the users of cell j; column v is h_{i,j,v}. Under TDD
// the downlink channel from BS i to user (j, v) is the conjugate
// transpose of the same column, so no separate downlink object exists.
class LinkMatrices {
 public:
  LinkMatrices() = default;
  LinkMatrices(int cells, int bs_antennas, int users);

  int cells() const noexcept { return cells_; }
  int bs_antennas() const noexcept { return bs_antennas_; }
  int users() const noexcept { return users_; }

  CMatrix& block(int bs, int cell) { return blocks_[static_cast<std::size_t>(bs) * cells_ + cell]; }
  const CMatrix& block(int bs, int cell) const {
    return blocks_[static_cast<std::size_t>(bs) * cells_ + cell];
  }
  auto column(int bs, int cell, int user) const { return block(bs, cell).col(user); }

  // H_i = [H_{i,1}, ..., H_{i,N_c}]
  CMatrix stacked(int bs) const;

 private:
  int cells_ = 0;
  int bs_antennas_ = 0;
  int users_ = 0;
  std::vector<CMatrix> blocks_;
};

// Combiners f, precoders w and downlink scalings tau over a GridShape.
struct BeamformerSet {
  GridShape shape{};
  std::vector<CVector> combiners;
  std::vector<CVector> precoders;
  std::vector<double> tau;

  BeamformerSet() = default;
  explicit BeamformerSet(GridShape s)
      : shape(s), combiners(s.size()), precoders(s.size()), tau(s.size(), 0.0) {}
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace qcomp

#endif  // QCOMP_TYPES_HPP
