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

#include "gcelab/convention.hpp"

#include <cmath>

namespace gcelab {

namespace {

constexpr double kCliffordTol = 1e-14;

Matrix2c sigma_x() { return (Matrix2c() << 0, 1, 1, 0).finished(); }
Matrix2c sigma_y() { return (Matrix2c() << 0, -kI, kI, 0).finished(); }
Matrix2c sigma_z() { return (Matrix2c() << 1, 0, 0, -1).finished(); }

double max_abs(const Matrix2c& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

std::string_view to_string(Coupling c) {
  return c == Coupling::scalar ? "scalar" : "vector";
}

Convention Convention::standard(Coupling coupling) {
  Convention c;
  c.name = coupling == Coupling::scalar ? "default" : "vector";
  c.gamma0 = sigma_z();
  c.gamma1 = kI * sigma_x();
  c.coupling = coupling;
  return c;
}

Convention Convention::named(std::string_view name) {
  if (name == "default") return standard(Coupling::scalar);
  if (name == "vector") return standard(Coupling::vector);
  if (name == "sigma-y" || name == "sigma-y-vector") {
    Convention c;
    c.name = std::string(name);
    c.gamma0 = sigma_z();
    c.gamma1 = kI * sigma_y();
    c.coupling = name == "sigma-y" ? Coupling::scalar : Coupling::vector;
    return c;
  }
  throw Error(ErrorKind::invalid_convention, "unknown convention '" + std::string(name) + "'");
}

std::vector<std::string> Convention::names() {
  return {"default", "vector", "sigma-y", "sigma-y-vector"};
}

void Convention::validate() const {
  const Matrix2c id = Matrix2c::Identity();
  if (max_abs(gamma0 * gamma0 - id) > kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "(gamma^0)^2 != 1");
  }
  if (max_abs(gamma1 * gamma1 + id) > kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "(gamma^1)^2 != -1");
  }
  if (max_abs(gamma0 * gamma1 + gamma1 * gamma0) > kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "gamma^0 and gamma^1 do not anticommute");
  }
  if (max_abs(gamma0 - gamma0.adjoint()) > kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "gamma^0 is not Hermitian");
  }
  if (max_abs(gamma1 + gamma1.adjoint()) > kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "gamma^1 is not anti-Hermitian");
  }
  if (std::abs(gamma1.determinant()) < kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "gamma^1 is singular");
  }
}

Matrix2c Convention::coupling_matrix() const {
  return coupling == Coupling::scalar ? Matrix2c::Identity() : gamma0;
}

Matrix2c Convention::gamma1_inverse() const {
  if (std::abs(gamma1.determinant()) < kCliffordTol) {
    throw Error(ErrorKind::invalid_convention, "gamma^1 is singular");
  }
  return gamma1.inverse();
}

bool Convention::same_as(const Convention& other) const {
  return coupling == other.coupling && gamma0 == other.gamma0 && gamma1 == other.gamma1;
}

}  // namespace gcelab
