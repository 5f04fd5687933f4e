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

/// @file solvers1d.hpp
/// @brief Exact stationary solutions of the 1-D Dirac and Schrodinger
/// equations over piecewise-constant potentials.
///
/// Both equations are reduced to a first-order system u'(x) = M u(x) with a
/// constant generator M on every segment, so a segment is crossed exactly by
/// exp(M L). Delta barriers act as junction matrices between the one-sided
/// limits. Natural units, hbar = c = 1.
///
/// State layouts:
///   Dirac        u = (psi_1, psi_2, ..., psi_N), two spinor components each
///   Schrodinger  u = (phi_1, ..., phi_N, phi_1', ..., phi_N')

#ifndef GCELAB_SOLVERS1D_HPP
#define GCELAB_SOLVERS1D_HPP

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gcelab/convention.hpp"
#include "gcelab/profile.hpp"
#include "gcelab/types.hpp"

namespace gcelab {

/// Full stacked state at the left edge of the first segment.
struct InitialValue {
  CVector state;
};

/// Incoming right-moving amplitudes from the left, one per asymptotic
/// channel (channel i is system i when the asymptotic potential is
/// diagonal). Plane-wave phases are referenced to x = 0, so the incoming
/// part is sum_c a_c u_c exp(i k_c x).
struct Scattering {
  CVector incoming;
};

using BoundarySpec = std::variant<InitialValue, Scattering>;

struct ScatteringData {
  CVector reflection;
  CVector transmission;
  double incoming_flux = 0.0;
  double reflected_flux = 0.0;
  double transmitted_flux = 0.0;
};

/// Left and right limits at one position; equal away from delta barriers.
struct FieldSample {
  CVector left;
  CVector right;
};

/// exp(M (x - x_ref)) u_ref on every piece.
class PiecewiseSolution {
 public:
  struct Piece {
    double x_ref = 0.0;
    CMatrix generator;
    CVector state;     // at x_ref
    CMatrix potential; // N x N on this piece
  };

  int state_size() const { return static_cast<int>(pieces_.front().state.size()); }
  std::size_t pieces() const { return pieces_.size(); }
  const Piece& piece(std::size_t s) const { return pieces_.at(s); }
  std::span<const double> breakpoints() const { return breakpoints_; }

  std::size_t piece_index(double x, Side side = Side::right) const;
  /// Exact value of piece s continued to any x.
  CVector on_piece(std::size_t s, double x) const;
  CVector derivative_on_piece(std::size_t s, double x) const;

  CVector at(double x, Side side = Side::right) const;
  FieldSample limits(double x) const;
  std::vector<FieldSample> evaluate(const Grid& grid) const;

  const std::optional<ScatteringData>& scattering() const { return scattering_; }

 protected:
  std::vector<double> breakpoints_;
  std::vector<Piece> pieces_;
  std::optional<ScatteringData> scattering_;

  friend class SolverAccess;
};

class SpinorSolution : public PiecewiseSolution {
 public:
  double energy() const { return energy_; }
  int n_systems() const { return n_systems_; }
  const Convention& convention() const { return convention_; }

  /// Two-component spinor of system i inside a stacked state.
  static Eigen::Vector2cd spinor(const CVector& state, int i) { return state.segment<2>(2 * i); }

  /// |i gamma^1 psi' - (V K - E gamma^0) psi| (max over components) at x,
  /// using the exact piece derivative.
  double stationary_residual(double x, Side side = Side::right) const;

 private:
  double energy_ = 0.0;
  int n_systems_ = 0;
  Convention convention_;

  friend class SolverAccess;
};

class WaveSolution : public PiecewiseSolution {
 public:
  double energy() const { return energy_; }
  double mass() const { return mass_; }
  int n_systems() const { return n_systems_; }

  static cplx value(const CVector& state, int i) { return state(i); }
  cplx derivative(const CVector& state, int i) const { return state(n_systems_ + i); }

  /// |-phi''/(2m) + (V - E) phi| at x.
  double stationary_residual(double x, Side side = Side::right) const;

 private:
  double energy_ = 0.0;
  double mass_ = 1.0;
  int n_systems_ = 0;

  friend class SolverAccess;
};

/// M = -i (1 (x) gamma1^-1) (V (x) K - E 1 (x) gamma^0), 2N x 2N.
CMatrix dirac_generator(const CMatrix& v, double energy, const Convention& convention);

/// exp(-i (1 (x) gamma1^-1)(S (x) K)); identity for S = 0.
CMatrix delta_junction(const CMatrix& strength, const Convention& convention);

/// [[0, 1], [2m(V - E), 0]], 2N x 2N.
CMatrix schrodinger_generator(const CMatrix& v, double energy, double mass);

/// [[1, 0], [2m S, 1]]: value continuous, derivative jumps by 2 m S phi.
CMatrix schrodinger_junction(const CMatrix& strength, double mass);

SpinorSolution solve_dirac(const PotentialProfile& profile, double energy,
                           const BoundarySpec& boundary, const Convention& convention);

WaveSolution solve_schrodinger(const PotentialProfile& profile, double energy,
                               const BoundarySpec& boundary, double mass = 1.0);

/// Matrix exponential used by the propagators.
CMatrix expm(const CMatrix& m);

}  // namespace gcelab

#endif  // GCELAB_SOLVERS1D_HPP
