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

/// @file gauge.hpp
/// @brief Residual of the gauge continuity equation on sampled (t, x) fields.
///
/// With lower-index gauge potentials A^a_mu (mu = 0, 1), metric (+, -) and
///   R^a_01 = d_t A^a_1 - d_x A^a_0 - f_bca A^b_0 A^c_1
/// the balance checked at every interior sample is
///   d_mu (J^mu_a - R^{mu nu d} f_abd A^b_nu) = Psibar (C_b f_abc K (x) T_c) Psi.
/// Derivatives are second-order finite differences. No gauged dynamics are
/// solved here; Psi and A are inputs.
#ifndef GCELAB_GAUGE_HPP
#define GCELAB_GAUGE_HPP

#include <array>
#include <vector>

#include "gcelab/convention.hpp"
#include "gcelab/gce_engine.hpp"
#include "gcelab/sun_algebra.hpp"
#include "gcelab/types.hpp"

namespace gcelab {

/// Samples on a uniform (t, x) grid, stored t-major: index it * nx + ix.
struct GaugeConfig {
  std::vector<double> t;
  std::vector<double> x;
  /// a_fields[a][mu]
  std::vector<std::array<std::vector<double>, 2>> a_fields;
  /// R^a_01 per generator; R^a_10 = -R^a_01 and the diagonal vanishes.
  std::vector<std::vector<double>> field_strength;

  static GaugeConfig zero(std::vector<double> t, std::vector<double> x, int dim);

  std::size_t nt() const { return t.size(); }
  std::size_t nx() const { return x.size(); }
  double& field(int a, int mu, std::size_t it, std::size_t ix) {
    return a_fields[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)][it * nx() + ix];
  }
  double field(int a, int mu, std::size_t it, std::size_t ix) const {
    return a_fields[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)][it * nx() + ix];
  }
  /// R^a_{mu nu} at a sample.
  double strength(int a, int mu, int nu, std::size_t it, std::size_t ix) const;

  /// Fills field_strength; validates shapes and grid uniformity.
  void compute_field_strength(const SunBasis& basis);
};

/// Stacked 2N spinors sampled on (t, x), t-major.
struct SuperSpinorGrid {
  int n_systems = 0;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<CVector> values;

  /// exp(-i E_i t) phi_i(x) from stationary solutions (right limits).
  static SuperSpinorGrid sample(const DiracStack& psi, std::vector<double> t, std::vector<double> x);
  const CVector& at(std::size_t it, std::size_t ix) const { return values[it * x.size() + ix]; }
};

/// Residual on interior samples. The report holds the interior t and x
/// values; residual, divergence (x part), time_term and source are t-major.
/// residual_norm = sqrt(h_t h_x sum |r|^2) and spacing = h_x.
GceReport gauge_residual(const SuperSpinorGrid& psi, const GaugeConfig& config, const SunBasis& basis,
                         int a, const PotentialDecomposition& decomp, const Convention& convention);

}  // namespace gcelab

#endif  // GCELAB_GAUGE_HPP
