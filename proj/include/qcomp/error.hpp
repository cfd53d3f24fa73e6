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

#ifndef QCOMP_ERROR_HPP
#define QCOMP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcomp {

enum class ErrorKind {
  DimensionMismatch,
  NotPositiveDefinite,
  NotHermitian,
  NoConvergence,
  InvalidBits,
  NegativePower,
  Infeasible,
  NonPositiveTau,
  SingularSigma,
  RankDeficient,
  SingularSystem,
  InvalidArgument,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace qcomp

#endif  // QCOMP_ERROR_HPP
