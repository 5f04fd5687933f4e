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

/// @file types.hpp
/// @brief Shared numeric aliases and the library error type.

#ifndef GCELAB_TYPES_HPP
#define GCELAB_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gcelab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;

inline constexpr cplx kI{0.0, 1.0};

/// Which one-sided limit to take at a breakpoint.
enum class Side { left, right };

enum class ErrorKind {
  invalid_rank,
  inconsistent_basis,
  non_hermitian,
  dimension_mismatch,
  index_out_of_range,
  invalid_convention,
  invalid_profile,
  evanescent_scattering,
  empty_profile,
  invalid_argument,
  outside_domain,
  degenerate_energies,
  non_uniform_grid,
  grid_mismatch,
  domain_not_adjacent,
  parse_error,
  schema_violation,
  invariant_violation,
  io_error,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Largest |A - A^H| entry.
double hermiticity_defect(const CMatrix& m);

/// Uniform or arbitrary sample positions. Most engine operations require the
/// uniform form.
struct Grid {
  std::vector<double> x;

  static Grid uniform(double x_min, double x_max, std::size_t n_points);

  std::size_t size() const { return x.size(); }
  bool is_uniform(double rel_tol = 1e-9) const;
  /// Spacing of a uniform grid; throws non_uniform_grid otherwise.
  double spacing() const;
};

}  // namespace gcelab

#endif  // GCELAB_TYPES_HPP
