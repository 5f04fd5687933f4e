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

#include "gcelab/sun_algebra.hpp"

#include <cmath>
#include <string>

namespace gcelab {

namespace {

constexpr double kImaginaryLimit = 1e-10;
constexpr double kHermitianInputTol = 1e-12;

}  // namespace

StructureConstants::StructureConstants(int dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(dim) * dim * dim) {
    throw Error(ErrorKind::dimension_mismatch, "structure constant table has wrong size");
  }
}

StructureConstants structure_constants(std::span<const CMatrix> generators) {
  const int dim = static_cast<int>(generators.size());
  std::vector<double> f(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      if (a == b) continue;
      const CMatrix comm = generators[a] * generators[b] - generators[b] * generators[a];
      for (int c = 0; c < dim; ++c) {
        const cplx value = cplx{0.0, -2.0} * (comm * generators[c]).trace();
        if (std::abs(value.imag()) > kImaginaryLimit) {
          throw Error(ErrorKind::inconsistent_basis,
                      "f(" + std::to_string(a) + "," + std::to_string(b) + "," +
                          std::to_string(c) + ") has imaginary part " +
                          std::to_string(value.imag()));
        }
        f[(static_cast<std::size_t>(a) * dim + b) * dim + c] = value.real();
      }
    }
  }
  return StructureConstants(dim, std::move(f));
}

SunBasis SunBasis::build(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_rank, "su(N) needs N >= 2, got " + std::to_string(n));
  SunBasis basis;
  basis.n_ = n;
  basis.generators_.reserve(static_cast<std::size_t>(n * n - 1));
  for (int size = 2; size <= n; ++size) {
    const int col = size - 1;
    for (int row = 0; row < col; ++row) {
      CMatrix sym = CMatrix::Zero(n, n);
      sym(row, col) = 0.5;
      sym(col, row) = 0.5;
      CMatrix anti = CMatrix::Zero(n, n);
      anti(row, col) = cplx{0.0, -0.5};
      anti(col, row) = cplx{0.0, 0.5};
      basis.generators_.push_back(std::move(sym));
      basis.cartan_.push_back(false);
      basis.generators_.push_back(std::move(anti));
      basis.cartan_.push_back(false);
    }
    CMatrix diag = CMatrix::Zero(n, n);
    const double norm = 1.0 / std::sqrt(2.0 * size * (size - 1));
    for (int k = 0; k < size - 1; ++k) diag(k, k) = norm;
    diag(size - 1, size - 1) = -(size - 1) * norm;
    basis.generators_.push_back(std::move(diag));
    basis.cartan_.push_back(true);
  }
  basis.f_ = structure_constants(basis.generators_);
  return basis;
}

void SunBasis::check_index(int a) const {
  if (a < 0 || a >= dim()) {
    throw Error(ErrorKind::index_out_of_range,
                "generator index " + std::to_string(a) + " outside [0, " + std::to_string(dim()) + ")");
  }
}

const CMatrix& SunBasis::generator(int a) const {
  check_index(a);
  return generators_[static_cast<std::size_t>(a)];
}

int SunBasis::cartan_index(int size) const {
  if (size < 2 || size > n_) {
    throw Error(ErrorKind::index_out_of_range, "no diagonal generator of size " + std::to_string(size));
  }
  return size * size - 2;
}

bool SunBasis::is_cartan(int a) const {
  check_index(a);
  return cartan_[static_cast<std::size_t>(a)];
}

std::vector<cplx> SunBasis::ladder(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) {
    throw Error(ErrorKind::index_out_of_range,
                "system pair (" + std::to_string(i) + "," + std::to_string(j) + ") invalid for N=" +
                    std::to_string(n_));
  }
  // E_ij is traceless, so alpha_a = 2 Tr(E_ij T_a) = 2 (T_a)_ji.
  std::vector<cplx> alpha(static_cast<std::size_t>(dim()));
  for (int a = 0; a < dim(); ++a) alpha[static_cast<std::size_t>(a)] = 2.0 * generators_[a](j, i);
  return alpha;
}

CMatrix SunBasis::combine(std::span<const cplx> alpha) const {
  if (static_cast<int>(alpha.size()) != dim()) {
    throw Error(ErrorKind::dimension_mismatch, "generator combination has wrong length");
  }
  CMatrix out = CMatrix::Zero(n_, n_);
  for (int a = 0; a < dim(); ++a) {
    if (alpha[a] != cplx{}) out += alpha[a] * generators_[a];
  }
  return out;
}

MatrixDecomposition decompose(const CMatrix& v, const SunBasis& basis) {
  if (v.rows() != basis.n() || v.cols() != basis.n()) {
    throw Error(ErrorKind::dimension_mismatch, "matrix is " + std::to_string(v.rows()) + "x" +
                                                   std::to_string(v.cols()) + ", basis is su(" +
                                                   std::to_string(basis.n()) + ")");
  }
  const double defect = hermiticity_defect(v);
  if (defect > kHermitianInputTol) {
    throw Error(ErrorKind::non_hermitian, "potential matrix deviates from Hermitian by " +
                                              std::to_string(defect));
  }
  MatrixDecomposition d;
  d.v0 = v.trace().real() / basis.n();
  d.c.resize(static_cast<std::size_t>(basis.dim()));
  // Remove the trace first so multiples of the identity give exact zeros.
  const CMatrix traceless = v - d.v0 * CMatrix::Identity(basis.n(), basis.n());
  for (int k = 0; k < basis.dim(); ++k) {
    d.c[static_cast<std::size_t>(k)] = 2.0 * (traceless * basis.generator(k)).trace().real();
  }
  return d;
}

PotentialDecomposition decompose(std::span<const CMatrix> values, std::span<const double> edges,
                                 const SunBasis& basis) {
  if (edges.size() != values.size() + 1) {
    throw Error(ErrorKind::dimension_mismatch, "need one more edge than segment values");
  }
  PotentialDecomposition out;
  out.breakpoints.assign(edges.begin(), edges.end());
  out.v0.reserve(values.size());
  out.c.reserve(values.size());
  for (const CMatrix& v : values) {
    MatrixDecomposition d = decompose(v, basis);
    out.v0.push_back(d.v0);
    out.c.push_back(std::move(d.c));
  }
  return out;
}

CMatrix reconstruct(const MatrixDecomposition& d, const SunBasis& basis) {
  CMatrix v = d.v0 * CMatrix::Identity(basis.n(), basis.n());
  for (int k = 0; k < basis.dim(); ++k) v += d.c[static_cast<std::size_t>(k)] * basis.generator(k);
  return v;
}

CMatrix source_operator(int a, std::span<const double> c, const SunBasis& basis) {
  basis.check_index(a);
  if (static_cast<int>(c.size()) != basis.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "coefficient vector does not match basis");
  }
  CMatrix s = CMatrix::Zero(basis.n(), basis.n());
  for (int b = 0; b < basis.dim(); ++b) {
    if (c[b] == 0.0) continue;
    for (int cc = 0; cc < basis.dim(); ++cc) {
      const double fabc = basis.f(a, b, cc);
      if (fabc != 0.0) s += (fabc * c[b]) * basis.generator(cc);
    }
  }
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if (hermiticity_defect(s) > 1e-13 * scale) {
    throw Error(ErrorKind::inconsistent_basis, "source operator is not Hermitian");
  }
  return s;
}

std::vector<CMatrix> source_operator(int a, const PotentialDecomposition& decomp,
                                     const SunBasis& basis) {
  std::vector<CMatrix> out;
  out.reserve(decomp.segments());
  for (const auto& c : decomp.c) out.push_back(source_operator(a, c, basis));
  return out;
}

CMatrix source_operator(std::span<const cplx> alpha, std::span<const double> c,
                        const SunBasis& basis) {
  if (static_cast<int>(alpha.size()) != basis.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "generator combination has wrong length");
  }
  CMatrix s = CMatrix::Zero(basis.n(), basis.n());
  for (int a = 0; a < basis.dim(); ++a) {
    if (alpha[a] != cplx{}) s += alpha[a] * source_operator(a, c, basis);
  }
  return s;
}

}  // namespace gcelab
