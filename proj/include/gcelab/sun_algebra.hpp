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

/// @file sun_algebra.hpp
/// @brief su(N) generators in the fundamental representation, their structure
/// constants, and the expansion of Hermitian potential matrices in that basis.
///
/// Generators are normalized as Tr(T_a T_b) = delta_ab / 2 and ordered in the
/// generalized Gell-Mann way: for every size n = 2..N the symmetric and
/// antisymmetric off-diagonal pairs (m, n), m < n, come first, followed by the
/// diagonal generator of that size. The diagonal generators therefore sit at
/// 1-based positions n^2 - 1 (3, 8, 15, ...). All indices in this API are
/// 0-based.

#ifndef GCELAB_SUN_ALGEBRA_HPP
#define GCELAB_SUN_ALGEBRA_HPP

#include <span>
#include <vector>

#include "gcelab/types.hpp"

namespace gcelab {

/// Dense (N^2-1)^3 table of real structure constants.
class StructureConstants {
 public:
  StructureConstants() = default;
  StructureConstants(int dim, std::vector<double> values);

  int dim() const { return dim_; }
  double operator()(int a, int b, int c) const {
    return values_[(static_cast<std::size_t>(a) * dim_ + b) * dim_ + c];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  int dim_ = 0;
  std::vector<double> values_;
};

/// f_abc = -2i Tr([T_a, T_b] T_c). Throws inconsistent_basis if any entry has
/// an imaginary part above 1e-10.
StructureConstants structure_constants(std::span<const CMatrix> generators);

class SunBasis {
 public:
  /// Generalized Gell-Mann basis of su(n); n >= 2.
  static SunBasis build(int n);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(generators_.size()); }
  const CMatrix& generator(int a) const;
  std::span<const CMatrix> generators() const { return generators_; }
  const StructureConstants& f() const { return f_; }
  double f(int a, int b, int c) const { return f_(a, b, c); }

  /// 0-based index of the diagonal generator acting on the leading
  /// `size` x `size` block (size in 2..n).
  int cartan_index(int size) const;
  bool is_cartan(int a) const;

  /// Coefficients alpha with sum_a alpha_a T_a = E_ij (unit matrix at
  /// row i, column j; i != j).
  std::vector<cplx> ladder(int i, int j) const;
  /// sum_a alpha_a T_a
  CMatrix combine(std::span<const cplx> alpha) const;

  void check_index(int a) const;

 private:
  int n_ = 0;
  std::vector<CMatrix> generators_;
  std::vector<bool> cartan_;
  StructureConstants f_;
};

/// V = v0 * 1 + sum_k c_k T_k for a single Hermitian matrix.
struct MatrixDecomposition {
  double v0 = 0.0;
  std::vector<double> c;
};

/// Piecewise-constant decomposition sharing the breakpoints of the potential
/// it came from. `c[s][k]` is coefficient k on segment s.
struct PotentialDecomposition {
  std::vector<double> breakpoints;  // segment edges, size segments + 1
  std::vector<double> v0;
  std::vector<std::vector<double>> c;

  std::size_t segments() const { return v0.size(); }
};

MatrixDecomposition decompose(const CMatrix& v, const SunBasis& basis);

/// Decompose one Hermitian matrix per segment; `edges` has one more entry
/// than `values`.
PotentialDecomposition decompose(std::span<const CMatrix> values, std::span<const double> edges,
                                 const SunBasis& basis);

CMatrix reconstruct(const MatrixDecomposition& d, const SunBasis& basis);

/// S_a = sum_{b,c} f_abc C_b T_c for one coefficient vector.
CMatrix source_operator(int a, std::span<const double> c, const SunBasis& basis);

/// S_a on every segment of a decomposition.
std::vector<CMatrix> source_operator(int a, const PotentialDecomposition& decomp,
                                     const SunBasis& basis);

/// sum_a alpha_a S_a, the source that goes with the current of sum_a alpha_a T_a.
CMatrix source_operator(std::span<const cplx> alpha, std::span<const double> c,
                        const SunBasis& basis);

}  // namespace gcelab

#endif  // GCELAB_SUN_ALGEBRA_HPP
