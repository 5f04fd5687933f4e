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

#include "gcelab/solvers1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace gcelab {

namespace {

constexpr double kPropagatingTol = 1e-12;
constexpr double kDiagonalTol = 1e-14;

struct Mode {
  cplx lambda;
  CVector u;
  double flux = 0.0;
};

struct ChannelModes {
  std::vector<Mode> right;
  std::vector<Mode> left;
};

/// Channel basis of an asymptotic potential: identity when diagonal so that
/// channel i is system i, eigenvectors otherwise.
std::pair<Eigen::VectorXd, CMatrix> channels(const CMatrix& v) {
  const int n = static_cast<int>(v.rows());
  bool diagonal = true;
  for (int i = 0; i < n && diagonal; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && std::abs(v(i, j)) > kDiagonalTol) {
        diagonal = false;
        break;
      }
    }
  }
  if (diagonal) return {v.diagonal().real(), CMatrix::Identity(n, n)};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(v);
  return {es.eigenvalues(), es.eigenvectors()};
}

CVector fix_phase(CVector u) {
  Eigen::Index k = 0;
  u.cwiseAbs().maxCoeff(&k);
  const cplx phase = u(k) / std::abs(u(k));
  return u / phase;
}

double dirac_flux(const CVector& u, const Convention& conv) {
  const Matrix2c g = conv.gamma0 * conv.gamma1;
  double flux = 0.0;
  for (int i = 0; i < u.size() / 2; ++i) {
    const Eigen::Vector2cd s = u.segment<2>(2 * i);
    flux += (s.adjoint() * g * s)(0, 0).real();
  }
  return flux;
}

ChannelModes dirac_modes(const CMatrix& v, double energy, const Convention& conv) {
  const auto [values, basis] = channels(v);
  const int n = static_cast<int>(v.rows());
  const Matrix2c ginv = conv.gamma1_inverse();
  const Matrix2c k = conv.coupling_matrix();
  ChannelModes modes;
  for (int c = 0; c < n; ++c) {
    const Matrix2c mc = -kI * ginv * (values(c) * k - energy * conv.gamma0);
    Eigen::ComplexEigenSolver<Matrix2c> es(mc);
    std::optional<Mode> right;
    std::optional<Mode> left;
    for (int e = 0; e < 2; ++e) {
      const cplx lambda = es.eigenvalues()(e);
      if (std::abs(lambda.real()) > kPropagatingTol * std::max(1.0, std::abs(lambda)) ||
          std::abs(lambda.imag()) <= kPropagatingTol) {
        throw Error(ErrorKind::evanescent_scattering,
                    "channel " + std::to_string(c) + " (V=" + std::to_string(values(c)) +
                        ") does not propagate at E=" + std::to_string(energy));
      }
      CVector u(2 * n);
      for (int i = 0; i < n; ++i) u.segment<2>(2 * i) = basis(i, c) * es.eigenvectors().col(e);
      u = fix_phase(u.normalized());
      Mode m{lambda, u, dirac_flux(u, conv)};
      (m.flux > 0.0 ? right : left) = std::move(m);
    }
    if (!right || !left) {
      throw Error(ErrorKind::evanescent_scattering,
                  "channel " + std::to_string(c) + " has no counter-propagating pair");
    }
    modes.right.push_back(*right);
    modes.left.push_back(*left);
  }
  return modes;
}

ChannelModes schrodinger_modes(const CMatrix& v, double energy, double mass) {
  const auto [values, basis] = channels(v);
  const int n = static_cast<int>(v.rows());
  ChannelModes modes;
  for (int c = 0; c < n; ++c) {
    const double kinetic = 2.0 * mass * (energy - values(c));
    if (kinetic <= kPropagatingTol) {
      throw Error(ErrorKind::evanescent_scattering,
                  "channel " + std::to_string(c) + " (V=" + std::to_string(values(c)) +
                      ") is closed at E=" + std::to_string(energy));
    }
    const double k = std::sqrt(kinetic);
    for (const double sign : {1.0, -1.0}) {
      CVector u(2 * n);
      u.head(n) = basis.col(c);
      u.tail(n) = (sign * kI * k) * basis.col(c);
      Mode m{sign * kI * k, u, sign * k / mass};
      (sign > 0 ? modes.right : modes.left).push_back(std::move(m));
    }
  }
  return modes;
}

using GeneratorFn = std::function<CMatrix(const CMatrix&)>;
using JunctionFn = std::function<CMatrix(const CMatrix&)>;

struct Propagation {
  std::vector<double> breakpoints;
  std::vector<PiecewiseSolution::Piece> pieces;
};

Propagation propagate(const PotentialProfile& profile, const GeneratorFn& generator,
                      const JunctionFn& junction, const CVector& initial) {
  Propagation out;
  out.breakpoints = profile.interior_breakpoints();
  CVector state = initial;
  const auto segments = profile.segments();
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    PiecewiseSolution::Piece piece{seg.x_lo, generator(seg.v), state, seg.v};
    if (s + 1 < segments.size()) {
      state = expm(piece.generator * (seg.x_hi - seg.x_lo)) * state;
      if (const DeltaBarrier* d = profile.delta_at(seg.x_hi)) state = junction(d->strength) * state;
    }
    out.pieces.push_back(std::move(piece));
  }
  return out;
}

CMatrix transfer(const PotentialProfile& profile, const GeneratorFn& generator,
                 const JunctionFn& junction) {
  const auto segments = profile.segments();
  const int size = static_cast<int>(generator(segments.front().v).rows());
  CMatrix p = CMatrix::Identity(size, size);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    p = expm(generator(seg.v) * (seg.x_hi - seg.x_lo)) * p;
    if (s + 1 < segments.size()) {
      if (const DeltaBarrier* d = profile.delta_at(seg.x_hi)) p = junction(d->strength) * p;
    }
  }
  return p;
}

/// Left-incidence scattering: incoming + reflected at the left edge,
/// transmitted only at the right edge.
std::pair<CVector, ScatteringData> scattering_state(const PotentialProfile& profile,
                                                    const GeneratorFn& generator,
                                                    const JunctionFn& junction,
                                                    const ChannelModes& left_modes,
                                                    const ChannelModes& right_modes,
                                                    const CVector& incoming) {
  const int n = profile.n_systems();
  if (incoming.size() != n) {
    throw Error(ErrorKind::dimension_mismatch, "scattering needs one incoming amplitude per channel");
  }
  const double x_l = profile.segments().front().x_lo;
  const double x_r = profile.segments().back().x_hi;
  const CMatrix p = transfer(profile, generator, junction);
  const int size = static_cast<int>(p.rows());

  CVector in_state = CVector::Zero(size);
  for (int c = 0; c < n; ++c) {
    const Mode& m = left_modes.right[c];
    in_state += incoming(c) * std::exp(m.lambda * x_l) * m.u;
  }
  CMatrix a(size, 2 * n);
  for (int c = 0; c < n; ++c) {
    const Mode& refl = left_modes.left[c];
    a.col(c) = p * (std::exp(refl.lambda * x_l) * refl.u);
    const Mode& trans = right_modes.right[c];
    a.col(n + c) = -std::exp(trans.lambda * x_r) * trans.u;
  }
  Eigen::FullPivLU<CMatrix> lu(a);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::invalid_argument, "scattering matching system is singular");
  }
  const CVector rt = lu.solve(-(p * in_state));

  ScatteringData data;
  data.reflection = rt.head(n);
  data.transmission = rt.tail(n);
  CVector state = in_state;
  for (int c = 0; c < n; ++c) {
    const Mode& refl = left_modes.left[c];
    state += data.reflection(c) * std::exp(refl.lambda * x_l) * refl.u;
    data.incoming_flux += std::norm(incoming(c)) * left_modes.right[c].flux;
    data.reflected_flux += std::norm(data.reflection(c)) * std::abs(refl.flux);
    data.transmitted_flux += std::norm(data.transmission(c)) * right_modes.right[c].flux;
  }
  return {state, data};
}

void check_initial(const InitialValue& iv, int size) {
  if (iv.state.size() != size) {
    throw Error(ErrorKind::dimension_mismatch, "initial state has " + std::to_string(iv.state.size()) +
                                                   " components, expected " + std::to_string(size));
  }
}

}  // namespace

class SolverAccess {
 public:
  static void fill(PiecewiseSolution& sol, Propagation prop, std::optional<ScatteringData> data) {
    sol.breakpoints_ = std::move(prop.breakpoints);
    sol.pieces_ = std::move(prop.pieces);
    sol.scattering_ = std::move(data);
  }
  static void set(SpinorSolution& sol, double energy, int n, const Convention& conv) {
    sol.energy_ = energy;
    sol.n_systems_ = n;
    sol.convention_ = conv;
  }
  static void set(WaveSolution& sol, double energy, int n, double mass) {
    sol.energy_ = energy;
    sol.n_systems_ = n;
    sol.mass_ = mass;
  }
};

CMatrix expm(const CMatrix& m) { return m.exp(); }

std::size_t PiecewiseSolution::piece_index(double x, Side side) const {
  if (!std::isfinite(x)) throw Error(ErrorKind::outside_domain, "non-finite position");
  std::size_t s = 0;
  while (s < breakpoints_.size()) {
    const double b = breakpoints_[s];
    if (x < b || (x == b && side == Side::left)) break;
    ++s;
  }
  return s;
}

CVector PiecewiseSolution::on_piece(std::size_t s, double x) const {
  if (!std::isfinite(x)) throw Error(ErrorKind::outside_domain, "non-finite position");
  const Piece& p = pieces_.at(s);
  if (x == p.x_ref) return p.state;
  return expm(p.generator * (x - p.x_ref)) * p.state;
}

CVector PiecewiseSolution::derivative_on_piece(std::size_t s, double x) const {
  return pieces_.at(s).generator * on_piece(s, x);
}

CVector PiecewiseSolution::at(double x, Side side) const { return on_piece(piece_index(x, side), x); }

FieldSample PiecewiseSolution::limits(double x) const {
  const std::size_t l = piece_index(x, Side::left);
  const std::size_t r = piece_index(x, Side::right);
  FieldSample out;
  out.right = on_piece(r, x);
  out.left = l == r ? out.right : on_piece(l, x);
  return out;
}

std::vector<FieldSample> PiecewiseSolution::evaluate(const Grid& grid) const {
  std::vector<FieldSample> out;
  out.reserve(grid.size());
  for (double x : grid.x) out.push_back(limits(x));
  return out;
}

double SpinorSolution::stationary_residual(double x, Side side) const {
  const std::size_t s = piece_index(x, side);
  const CVector u = on_piece(s, x);
  const CVector du = derivative_on_piece(s, x);
  const CMatrix& v = piece(s).potential;
  const Matrix2c k = convention_.coupling_matrix();
  double worst = 0.0;
  for (int i = 0; i < n_systems_; ++i) {
    Eigen::Vector2cd r = kI * convention_.gamma1 * du.segment<2>(2 * i) +
                         energy_ * convention_.gamma0 * u.segment<2>(2 * i);
    for (int j = 0; j < n_systems_; ++j) r -= v(i, j) * (k * u.segment<2>(2 * j));
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

double WaveSolution::stationary_residual(double x, Side side) const {
  const std::size_t s = piece_index(x, side);
  const CVector u = on_piece(s, x);
  const CVector du = derivative_on_piece(s, x);
  const CMatrix& v = piece(s).potential;
  const int n = n_systems_;
  const CVector phi = u.head(n);
  const CVector second = du.tail(n);
  const CVector r = -second / (2.0 * mass_) + v * phi - energy_ * phi;
  return r.cwiseAbs().maxCoeff();
}

CMatrix dirac_generator(const CMatrix& v, double energy, const Convention& convention) {
  const Matrix2c ginv = convention.gamma1_inverse();
  const Matrix2c k = convention.coupling_matrix();
  const int n = static_cast<int>(v.rows());
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix2c block = v(i, j) * k;
      if (i == j) block -= energy * convention.gamma0;
      m.block<2, 2>(2 * i, 2 * j) = -kI * ginv * block;
    }
  }
  return m;
}

CMatrix delta_junction(const CMatrix& strength, const Convention& convention) {
  const int n = static_cast<int>(strength.rows());
  if (hermiticity_defect(strength) > 1e-12) {
    throw Error(ErrorKind::non_hermitian, "delta strength is not Hermitian");
  }
  if (strength.isZero(0.0)) return CMatrix::Identity(2 * n, 2 * n);
  const Matrix2c ginv = convention.gamma1_inverse();
  const Matrix2c k = convention.coupling_matrix();
  CMatrix g = CMatrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g.block<2, 2>(2 * i, 2 * j) = -kI * ginv * (strength(i, j) * k);
  }
  return expm(g);
}

CMatrix schrodinger_generator(const CMatrix& v, double energy, double mass) {
  const int n = static_cast<int>(v.rows());
  CMatrix g = CMatrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = CMatrix::Identity(n, n);
  g.bottomLeftCorner(n, n) = 2.0 * mass * (v - energy * CMatrix::Identity(n, n));
  return g;
}

CMatrix schrodinger_junction(const CMatrix& strength, double mass) {
  const int n = static_cast<int>(strength.rows());
  CMatrix j = CMatrix::Identity(2 * n, 2 * n);
  j.bottomLeftCorner(n, n) = 2.0 * mass * strength;
  return j;
}

SpinorSolution solve_dirac(const PotentialProfile& profile, double energy,
                           const BoundarySpec& boundary, const Convention& convention) {
  if (profile.segments().empty()) throw Error(ErrorKind::empty_profile, "profile has no segments");
  convention.validate();
  const int n = profile.n_systems();
  GeneratorFn gen = [&](const CMatrix& v) { return dirac_generator(v, energy, convention); };
  JunctionFn junc = [&](const CMatrix& s) { return delta_junction(s, convention); };

  CVector initial;
  std::optional<ScatteringData> data;
  if (const auto* iv = std::get_if<InitialValue>(&boundary)) {
    check_initial(*iv, 2 * n);
    initial = iv->state;
  } else {
    const auto& sc = std::get<Scattering>(boundary);
    const ChannelModes left = dirac_modes(profile.segments().front().v, energy, convention);
    const ChannelModes right = dirac_modes(profile.segments().back().v, energy, convention);
    auto [state, d] = scattering_state(profile, gen, junc, left, right, sc.incoming);
    initial = std::move(state);
    data = std::move(d);
  }
  SpinorSolution sol;
  SolverAccess::fill(sol, propagate(profile, gen, junc, initial), std::move(data));
  SolverAccess::set(sol, energy, n, convention);
  return sol;
}

WaveSolution solve_schrodinger(const PotentialProfile& profile, double energy,
                               const BoundarySpec& boundary, double mass) {
  if (profile.segments().empty()) throw Error(ErrorKind::empty_profile, "profile has no segments");
  if (!(mass > 0.0)) throw Error(ErrorKind::invalid_argument, "mass must be positive");
  const int n = profile.n_systems();
  GeneratorFn gen = [&](const CMatrix& v) { return schrodinger_generator(v, energy, mass); };
  JunctionFn junc = [&](const CMatrix& s) { return schrodinger_junction(s, mass); };

  CVector initial;
  std::optional<ScatteringData> data;
  if (const auto* iv = std::get_if<InitialValue>(&boundary)) {
    check_initial(*iv, 2 * n);
    initial = iv->state;
  } else {
    const auto& sc = std::get<Scattering>(boundary);
    const ChannelModes left = schrodinger_modes(profile.segments().front().v, energy, mass);
    const ChannelModes right = schrodinger_modes(profile.segments().back().v, energy, mass);
    auto [state, d] = scattering_state(profile, gen, junc, left, right, sc.incoming);
    initial = std::move(state);
    data = std::move(d);
  }
  WaveSolution sol;
  SolverAccess::fill(sol, propagate(profile, gen, junc, initial), std::move(data));
  SolverAccess::set(sol, energy, n, mass);
  return sol;
}

}  // namespace gcelab
