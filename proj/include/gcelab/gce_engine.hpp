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

/// @file gce_engine.hpp
/// @brief Generalized currents, their continuity-equation residuals, and the
/// local conservation machinery (domains, symmetry transforms, delta-barrier
/// junction relation, charge-current identity).
///
/// A current is labelled by an N x N operator A acting on the system index:
///   Dirac        J^mu[A] = Psibar (gamma^mu (x) A) Psi
///   Schrodinger  J^0[A]  = Psi^dag A Psi
///                J^1[A]  = (i/2m)(Psi'^dag A Psi - Psi^dag A Psi')
/// A = T_a gives the generator currents; A = E_ij (a ladder combination of
/// generators) gives the pair current psibar_i gamma^1 psi_j.
///
/// For stationary states Psi_i = exp(-i E_i t) phi_i the balance evaluated at
/// t = 0 is
///   i sum_ij A_ij (E_i - E_j) rho_ij + d/dx J^1[A] = source[A],
/// with source[T_a] = f_abc C_b Psibar (K (x) T_c) Psi and K the coupling
/// matrix (Psi^dag T_c Psi for Schrodinger).

#ifndef GCELAB_GCE_ENGINE_HPP
#define GCELAB_GCE_ENGINE_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcelab/convention.hpp"
#include "gcelab/profile.hpp"
#include "gcelab/solvers1d.hpp"
#include "gcelab/sun_algebra.hpp"
#include "gcelab/types.hpp"

namespace gcelab {

// ---------------------------------------------------------------------------
// Super-fields
// ---------------------------------------------------------------------------

/// Psi assembled from solution blocks. Each block is solved with its own
/// energy; a jointly solved coupled system is a single block. All blocks must
/// share one segmentation.
class DiracStack {
 public:
  explicit DiracStack(std::vector<SpinorSolution> blocks);

  int n_systems() const { return static_cast<int>(owner_.size()); }
  const Convention& convention() const { return blocks_.front().convention(); }
  double energy(int system) const;
  std::span<const double> breakpoints() const { return blocks_.front().breakpoints(); }
  std::size_t piece_index(double x, Side side) const { return blocks_.front().piece_index(x, side); }
  const std::vector<SpinorSolution>& blocks() const { return blocks_; }

  /// Stacked 2N state from piece s (exact one-sided value at its edges).
  CVector state_on_piece(std::size_t s, double x) const;
  CVector state(double x, Side side = Side::right) const;

 private:
  std::vector<SpinorSolution> blocks_;
  std::vector<std::pair<std::size_t, int>> owner_;  // system -> (block, local index)
};

/// Schrodinger counterpart; states are laid out (phi_1..phi_N, phi_1'..phi_N').
class WaveStack {
 public:
  explicit WaveStack(std::vector<WaveSolution> blocks);

  int n_systems() const { return static_cast<int>(owner_.size()); }
  double mass() const { return blocks_.front().mass(); }
  double energy(int system) const;
  std::span<const double> breakpoints() const { return blocks_.front().breakpoints(); }
  std::size_t piece_index(double x, Side side) const { return blocks_.front().piece_index(x, side); }
  const std::vector<WaveSolution>& blocks() const { return blocks_; }

  CVector state_on_piece(std::size_t s, double x) const;
  CVector state(double x, Side side = Side::right) const;

 private:
  std::vector<WaveSolution> blocks_;
  std::vector<std::pair<std::size_t, int>> owner_;
};

// ---------------------------------------------------------------------------
// Domains and transforms
// ---------------------------------------------------------------------------

/// x -> sigma x + rho, with the spinor factor applied to the mapped solution.
struct TransformSpec {
  int sigma = 1;
  double rho = 0.0;
  Matrix2c spinor_factor = Matrix2c::Identity();

  static TransformSpec identity();
  static TransformSpec translation(double length);
  /// Inversion about x = center (rho = 2 center), spinor factor = parity.
  static TransformSpec parity(double center, const Convention& convention);

  double map(double x) const { return sigma * x + rho; }
  double inverse(double y) const { return (y - rho) / sigma; }
  bool is_identity() const;
  void validate(const Convention* convention = nullptr) const;
};

/// Open interval (x_lo, x_hi); the ends may be infinite.
struct Domain {
  double x_lo = 0.0;
  double x_hi = 0.0;
  TransformSpec transform;

  bool contains(double x) const { return x_lo < x && x < x_hi; }
};

/// Maximal intervals where V_ii(x) = V_jj(sigma x + rho) within tol and
/// neither system couples to the others there. Computed from the segment
/// data; a delta in one system without a matching delta at the mapped point
/// of the other splits the interval.
std::vector<Domain> detect_domains(const PotentialProfile& profile, int i, int j,
                                   const TransformSpec& spec, double tol);

struct DomainStat {
  Domain domain;
  std::size_t samples = 0;
  cplx mean{};
  /// max |J - mean| / max(|mean|, 1e-30)
  double max_deviation = 0.0;
};

std::vector<DomainStat> domain_stats(std::span<const double> x, std::span<const cplx> values,
                                     std::span<const Domain> domains);

// ---------------------------------------------------------------------------
// Currents
// ---------------------------------------------------------------------------

struct CurrentProfile {
  enum class Kind { dirac, schrodinger };

  Kind kind = Kind::dirac;
  std::string label;
  std::optional<int> generator;
  std::optional<std::pair<int, int>> pair;
  std::vector<double> x;
  std::vector<cplx> j1;
  std::vector<cplx> j0;
  std::vector<DomainStat> domain_stats;

  void compute_domain_stats(std::span<const Domain> domains);
};

CurrentProfile dirac_current(const DiracStack& psi, const CMatrix& op, const Grid& grid);
CurrentProfile dirac_current(const DiracStack& psi, int a, const SunBasis& basis, const Grid& grid);
/// psibar_i gamma^mu psi_j through the ladder combination of generators.
CurrentProfile dirac_pair_current(const DiracStack& psi, int i, int j, const SunBasis& basis,
                                  const Grid& grid);

CurrentProfile schrodinger_current(const WaveStack& psi, const CMatrix& op, const Grid& grid);
CurrentProfile schrodinger_current(const WaveStack& psi, int a, const SunBasis& basis,
                                   const Grid& grid);
CurrentProfile schrodinger_pair_current(const WaveStack& psi, int i, int j, const SunBasis& basis,
                                        const Grid& grid);

/// psibar_1(x) gamma^mu F psi_2(sigma x + rho) for system sys1 of sol1 and
/// sys2 of sol2, F the spinor factor.
CurrentProfile transformed_current(const SpinorSolution& sol1, int sys1, const SpinorSolution& sol2,
                                   int sys2, const TransformSpec& spec, const Grid& grid,
                                   std::span<const Domain> domains = {});

/// u^dag g v for two-component spinors.
cplx spinor_form(const Eigen::Vector2cd& u, const Matrix2c& g, const Eigen::Vector2cd& v);

// ---------------------------------------------------------------------------
// Global charge and the delta-barrier junction relation
// ---------------------------------------------------------------------------

struct ChargeRelation {
  cplx q{};
  cplx boundary_value{};
  double discrepancy = 0.0;
};

/// q = int_{x1}^{x2} psibar_1 gamma^0 psi_2 (composite Simpson, split at
/// breakpoints) against i (J_12(x2) - J_12(x1)) / (E_1 - E_2).
ChargeRelation charge_current_relation(const SpinorSolution& sol1, const SpinorSolution& sol2,
                                       double x1, double x2, int n_intervals = 10000,
                                       int sys1 = 0, int sys2 = 0);

struct DeltaRelation {
  cplx c_minus{};
  cplx c_plus{};
  cplx predicted_c_plus{};
  double deviation = 0.0;
  double constancy_minus = 0.0;
  double constancy_plus = 0.0;
};

/// Measures the transformed current on both sides of a delta at x0 and
/// predicts c_plus from the left limits by inserting the junction matrices
/// (junction2 acts at the mapped point sigma x0 + rho in system 2).
DeltaRelation delta_domain_relation(const SpinorSolution& sol1, int sys1, const SpinorSolution& sol2,
                                    int sys2, double x0, const CMatrix& junction1,
                                    const CMatrix& junction2, const TransformSpec& spec,
                                    const Grid& grid, std::span<const Domain> domains);

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

struct DomainVerdict {
  DomainStat stat;
  bool pass = false;
};

struct GceReport {
  std::string label;
  std::vector<double> x;
  std::vector<double> t;  // gauge diagnostic only; residual is t-major then
  std::vector<cplx> residual;
  std::vector<cplx> divergence;
  std::vector<cplx> time_term;
  std::vector<cplx> source;
  std::vector<cplx> current;  // spatial current at the sample points
  double spacing = 0.0;
  double residual_norm = 0.0;  // sqrt(h sum |r|^2)
  double residual_max = 0.0;
  double term_scale = 0.0;     // largest |divergence|, |time_term| or |source|
  std::optional<double> convergence_order;
  std::vector<DomainVerdict> domain_verdicts;

  /// residual_max <= rel_tol * max(1, term_scale)
  bool consistent(double rel_tol) const;
};

/// log(norm_coarse / norm_fine) / log(h_coarse / h_fine); sets it on `fine`.
double convergence_order(const GceReport& coarse, GceReport& fine);

struct ResidualOptions {
  std::vector<Domain> domains;
  double domain_tol = 1e-8;
};

GceReport gce_residual_dirac(const DiracStack& psi, const SunBasis& basis,
                             std::span<const cplx> alpha, const Grid& grid,
                             const PotentialDecomposition& decomp, const ResidualOptions& opts = {},
                             std::string label = {});
GceReport gce_residual_dirac(const DiracStack& psi, const SunBasis& basis, int a, const Grid& grid,
                             const PotentialDecomposition& decomp, const ResidualOptions& opts = {});
GceReport gce_residual_dirac_pair(const DiracStack& psi, const SunBasis& basis, int i, int j,
                                  const Grid& grid, const PotentialDecomposition& decomp,
                                  const ResidualOptions& opts = {});

GceReport gce_residual_schrodinger(const WaveStack& psi, const SunBasis& basis,
                                   std::span<const cplx> alpha, const Grid& grid,
                                   const PotentialDecomposition& decomp,
                                   const ResidualOptions& opts = {}, std::string label = {});
GceReport gce_residual_schrodinger(const WaveStack& psi, const SunBasis& basis, int a,
                                   const Grid& grid, const PotentialDecomposition& decomp,
                                   const ResidualOptions& opts = {});
GceReport gce_residual_schrodinger_pair(const WaveStack& psi, const SunBasis& basis, int i, int j,
                                        const Grid& grid, const PotentialDecomposition& decomp,
                                        const ResidualOptions& opts = {});

}  // namespace gcelab

#endif  // GCELAB_GCE_ENGINE_HPP
