// Copyright 2026 The gce-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file convention.hpp
/// @brief 1+1 dimensional gamma-matrix conventions and potential coupling.

#ifndef GCELAB_CONVENTION_HPP
#define GCELAB_CONVENTION_HPP

#include <string>
#include <string_view>
#include <vector>

#include "gcelab/types.hpp"

namespace gcelab {

/// scalar: V enters as V * 1 (mass-like). vector: V enters as V * gamma^0.
enum class Coupling { scalar, vector };

std::string_view to_string(Coupling c);

struct Convention {
  std::string name = "default";
  Matrix2c gamma0;
  Matrix2c gamma1;
  Coupling coupling = Coupling::scalar;

  /// gamma^0 = sigma_z, gamma^1 = i sigma_x, scalar coupling.
  static Convention standard(Coupling coupling = Coupling::scalar);

  /// Named presets: "default", "vector", "sigma-y", "sigma-y-vector".
  static Convention named(std::string_view name);
  static std::vector<std::string> names();

  /// Throws invalid_convention unless the Clifford relations hold to 1e-14
  /// and gamma^0 is Hermitian, gamma^1 anti-Hermitian.
  void validate() const;

  /// K, the matrix the potential multiplies: 1 or gamma^0.
  Matrix2c coupling_matrix() const;
  /// Spinor factor for x -> -x. gamma^0 anticommutes with gamma^1 and
  /// commutes with both coupling matrices.
  Matrix2c parity() const { return gamma0; }
  Matrix2c gamma1_inverse() const;

  bool same_as(const Convention& other) const;
};

}  // namespace gcelab

#endif  // GCELAB_CONVENTION_HPP
