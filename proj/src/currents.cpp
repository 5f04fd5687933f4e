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

#include <algorithm>
#include <cmath>
#include <string>

#include "gcelab/gce_engine.hpp"

namespace gcelab {

namespace {

template <typename Block>
void check_segmentation(const std::vector<Block>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::invalid_argument, "super-field needs at least one block");
  const auto first = blocks.front().breakpoints();
  for (const Block& b : blocks) {
    const auto bp = b.breakpoints();
    if (!std::equal(bp.begin(), bp.end(), first.begin(), first.end())) {
      throw Error(ErrorKind::grid_mismatch, "solution blocks come from different segmentations");
    }
  }
}

template <typename Block>
std::vector<std::pair<std::size_t, int>> owners(const std::vector<Block>& blocks) {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i = 0; i < blocks[b].n_systems(); ++i) out.emplace_back(b, i);
  }
  return out;
}

std::string pair_label(int i, int j) {
  return "J(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

void check_system(int sys, int n, const char* what) {
  if (sys < 0 || sys >= n) {
    throw Error(ErrorKind::index_out_of_range, std::string(what) + " system index " +
                                                   std::to_string(sys) + " out of range");
  }
}

Eigen::Vector2cd spinor_at(const SpinorSolution& sol, int sys, double x, Side side) {
  return SpinorSolution::spinor(sol.at(x, side), sys);
}

Eigen::Vector2cd spinor_on_piece(const SpinorSolution& sol, int sys, std::size_t s, double x) {
  return SpinorSolution::spinor(sol.on_piece(s, x), sys);
}

}  // namespace

// ----------------------------------------------------------------- stacks

DiracStack::DiracStack(std::vector<SpinorSolution> blocks) : blocks_(std::move(blocks)) {
  check_segmentation(blocks_);
  for (const SpinorSolution& b : blocks_) {
    if (!b.convention().same_as(blocks_.front().convention())) {
      throw Error(ErrorKind::invalid_convention, "super-field mixes gamma conventions");
    }
  }
  owner_ = owners(blocks_);
}

double DiracStack::energy(int system) const {
  check_system(system, n_systems(), "stack");
  return blocks_[owner_[system].first].energy();
}

CVector DiracStack::state_on_piece(std::size_t s, double x) const {
  CVector out(2 * n_systems());
  int offset = 0;
  for (const SpinorSolution& b : blocks_) {
    const CVector u = b.on_piece(s, x);
    out.segment(offset, u.size()) = u;
    offset += static_cast<int>(u.size());
  }
  return out;
}

CVector DiracStack::state(double x, Side side) const { return state_on_piece(piece_index(x, side), x); }

WaveStack::WaveStack(std::vector<WaveSolution> blocks) : blocks_(std::move(blocks)) {
  check_segmentation(blocks_);
  for (const WaveSolution& b : blocks_) {
    if (b.mass() != blocks_.front().mass()) {
      throw Error(ErrorKind::invalid_argument, "super-field mixes particle masses");
    }
  }
  owner_ = owners(blocks_);
}

double WaveStack::energy(int system) const {
  check_system(system, n_systems(), "stack");
  return blocks_[owner_[system].first].energy();
}

CVector WaveStack::state_on_piece(std::size_t s, double x) const {
  const int n = n_systems();
  CVector out(2 * n);
  int offset = 0;
  for (const WaveSolution& b : blocks_) {
    const CVector u = b.on_piece(s, x);
    const int m = b.n_systems();
    out.segment(offset, m) = u.head(m);
    out.segment(n + offset, m) = u.tail(m);
    offset += m;
  }
  return out;
}

CVector WaveStack::state(double x, Side side) const { return state_on_piece(piece_index(x, side), x); }

// ------------------------------------------------------------- transforms

TransformSpec TransformSpec::identity() { return {}; }

TransformSpec TransformSpec::translation(double length) {
  TransformSpec t;
  t.rho = length;
  return t;
}

TransformSpec TransformSpec::parity(double center, const Convention& convention) {
  TransformSpec t;
  t.sigma = -1;
  t.rho = 2.0 * center;
  t.spinor_factor = convention.parity();
  return t;
}

bool TransformSpec::is_identity() const {
  return sigma == 1 && rho == 0.0 && spinor_factor == Matrix2c::Identity();
}

void TransformSpec::validate(const Convention* convention) const {
  if (sigma != 1 && sigma != -1) {
    throw Error(ErrorKind::invalid_argument, "transform sigma must be +1 or -1");
  }
  if (!std::isfinite(rho)) throw Error(ErrorKind::invalid_argument, "transform rho must be finite");
  if (sigma == 1 && spinor_factor != Matrix2c::Identity()) {
    throw Error(ErrorKind::invalid_argument, "translations carry the identity spinor factor");
  }
  if (sigma == -1 && convention != nullptr &&
      (spinor_factor - convention->parity()).cwiseAbs().maxCoeff() > 1e-14) {
    throw Error(ErrorKind::invalid_argument, "inversion must carry the convention's parity matrix");
  }
}

// --------------------------------------------------------------- currents

cplx spinor_form(const Eigen::Vector2cd& u, const Matrix2c& g, const Eigen::Vector2cd& v) {
  return (u.adjoint() * g * v)(0, 0);
}

namespace {

/// sum_ij op_ij u_i^dag g v_j over stacked spinors, skipping zero entries.
cplx stacked_form(const CVector& u, const Matrix2c& g, const CVector& v, const CMatrix& op) {
  cplx sum{};
  for (int i = 0; i < op.rows(); ++i) {
    for (int j = 0; j < op.cols(); ++j) {
      const cplx a = op(i, j);
      if (a == cplx{}) continue;
      sum += a * spinor_form(u.segment<2>(2 * i), g, v.segment<2>(2 * j));
    }
  }
  return sum;
}

void check_op(const CMatrix& op, int n) {
  if (op.rows() != n || op.cols() != n) {
    throw Error(ErrorKind::dimension_mismatch, "current operator does not match the super-field");
  }
}

}  // namespace

CurrentProfile dirac_current(const DiracStack& psi, const CMatrix& op, const Grid& grid) {
  check_op(op, psi.n_systems());
  const Convention& conv = psi.convention();
  const Matrix2c g1 = conv.gamma0 * conv.gamma1;
  const Matrix2c g0 = conv.gamma0 * conv.gamma0;
  CurrentProfile out;
  out.kind = CurrentProfile::Kind::dirac;
  out.x = grid.x;
  out.j1.reserve(grid.size());
  out.j0.reserve(grid.size());
  for (double x : grid.x) {
    const CVector u = psi.state(x, Side::right);
    out.j1.push_back(stacked_form(u, g1, u, op));
    out.j0.push_back(stacked_form(u, g0, u, op));
  }
  return out;
}

CurrentProfile dirac_current(const DiracStack& psi, int a, const SunBasis& basis, const Grid& grid) {
  if (basis.n() != psi.n_systems()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  CurrentProfile out = dirac_current(psi, basis.generator(a), grid);
  out.generator = a;
  out.label = "J^" + std::to_string(a + 1);
  return out;
}

CurrentProfile dirac_pair_current(const DiracStack& psi, int i, int j, const SunBasis& basis,
                                  const Grid& grid) {
  if (basis.n() != psi.n_systems()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  const std::vector<cplx> alpha = basis.ladder(i, j);
  CurrentProfile out = dirac_current(psi, basis.combine(alpha), grid);
  out.pair = std::make_pair(i, j);
  out.label = pair_label(i, j);
  return out;
}

namespace {

/// (i/2m) sum_ij op_ij (phi_i'^* phi_j - phi_i^* phi_j')
cplx wave_current(const CVector& u, int n, double mass, const CMatrix& op) {
  cplx sum{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx a = op(i, j);
      if (a == cplx{}) continue;
      sum += a * (std::conj(u(n + i)) * u(j) - std::conj(u(i)) * u(n + j));
    }
  }
  return kI / (2.0 * mass) * sum;
}

cplx wave_density(const CVector& u, int n, const CMatrix& op) {
  cplx sum{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx a = op(i, j);
      if (a != cplx{}) sum += a * std::conj(u(i)) * u(j);
    }
  }
  return sum;
}

}  // namespace

CurrentProfile schrodinger_current(const WaveStack& psi, const CMatrix& op, const Grid& grid) {
  const int n = psi.n_systems();
  check_op(op, n);
  CurrentProfile out;
  out.kind = CurrentProfile::Kind::schrodinger;
  out.x = grid.x;
  for (double x : grid.x) {
    const CVector u = psi.state(x, Side::right);
    out.j1.push_back(wave_current(u, n, psi.mass(), op));
    out.j0.push_back(wave_density(u, n, op));
  }
  return out;
}

CurrentProfile schrodinger_current(const WaveStack& psi, int a, const SunBasis& basis,
                                   const Grid& grid) {
  if (basis.n() != psi.n_systems()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  CurrentProfile out = schrodinger_current(psi, basis.generator(a), grid);
  out.generator = a;
  out.label = "J^" + std::to_string(a + 1);
  return out;
}

CurrentProfile schrodinger_pair_current(const WaveStack& psi, int i, int j, const SunBasis& basis,
                                        const Grid& grid) {
  if (basis.n() != psi.n_systems()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  CurrentProfile out = schrodinger_current(psi, basis.combine(basis.ladder(i, j)), grid);
  out.pair = std::make_pair(i, j);
  out.label = pair_label(i, j);
  return out;
}

void CurrentProfile::compute_domain_stats(std::span<const Domain> domains) {
  domain_stats = gcelab::domain_stats(x, j1, domains);
}

CurrentProfile transformed_current(const SpinorSolution& sol1, int sys1, const SpinorSolution& sol2,
                                   int sys2, const TransformSpec& spec, const Grid& grid,
                                   std::span<const Domain> domains) {
  check_system(sys1, sol1.n_systems(), "first");
  check_system(sys2, sol2.n_systems(), "second");
  if (!sol1.convention().same_as(sol2.convention())) {
    throw Error(ErrorKind::invalid_convention, "solutions use different gamma conventions");
  }
  const Convention& conv = sol1.convention();
  spec.validate(&conv);
  const bool plain = spec.spinor_factor == Matrix2c::Identity();
  const Matrix2c g1 = conv.gamma0 * conv.gamma1;
  const Matrix2c g0 = conv.gamma0 * conv.gamma0;
  // Right limits in x; under inversion that is the left limit at the image.
  const Side mapped_side = spec.sigma == 1 ? Side::right : Side::left;

  CurrentProfile out;
  out.kind = CurrentProfile::Kind::dirac;
  out.pair = std::make_pair(sys1, sys2);
  out.label = spec.is_identity() ? pair_label(sys1, sys2) : "J_F" + pair_label(sys1, sys2).substr(1);
  out.x = grid.x;
  for (double x : grid.x) {
    const double y = spec.map(x);
    if (!std::isfinite(y)) throw Error(ErrorKind::outside_domain, "mapped point is not finite");
    const Eigen::Vector2cd u = spinor_at(sol1, sys1, x, Side::right);
    Eigen::Vector2cd v = spinor_at(sol2, sys2, y, mapped_side);
    if (!plain) v = spec.spinor_factor * v;
    out.j1.push_back(spinor_form(u, g1, v));
    out.j0.push_back(spinor_form(u, g0, v));
  }
  out.compute_domain_stats(domains);
  return out;
}

// ------------------------------------------------------------ charge

ChargeRelation charge_current_relation(const SpinorSolution& sol1, const SpinorSolution& sol2,
                                       double x1, double x2, int n_intervals, int sys1, int sys2) {
  check_system(sys1, sol1.n_systems(), "first");
  check_system(sys2, sol2.n_systems(), "second");
  const double e1 = sol1.energy();
  const double e2 = sol2.energy();
  if (std::abs(e1 - e2) <= 1e-14 * std::max(1.0, std::max(std::abs(e1), std::abs(e2)))) {
    throw Error(ErrorKind::degenerate_energies,
                "charge-current relation divides by E_1 - E_2 = " + std::to_string(e1 - e2));
  }
  if (!sol1.convention().same_as(sol2.convention())) {
    throw Error(ErrorKind::invalid_convention, "solutions use different gamma conventions");
  }
  if (!std::isfinite(x1) || !std::isfinite(x2) || x2 < x1) {
    throw Error(ErrorKind::invalid_argument, "need finite x1 <= x2");
  }
  if (n_intervals < 2) throw Error(ErrorKind::invalid_argument, "need at least two intervals");
  ChargeRelation out;
  if (x1 == x2) return out;

  const Convention& conv = sol1.convention();
  const Matrix2c g1 = conv.gamma0 * conv.gamma1;
  const Matrix2c g0 = conv.gamma0 * conv.gamma0;

  std::vector<double> cuts{x1, x2};
  for (auto bp : {sol1.breakpoints(), sol2.breakpoints()}) {
    for (double b : bp) {
      if (x1 < b && b < x2) cuts.push_back(b);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double total = x2 - x1;
  cplx q{};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double mid = 0.5 * (a + b);
    const std::size_t p1 = sol1.piece_index(mid, Side::right);
    const std::size_t p2 = sol2.piece_index(mid, Side::right);
    int m = static_cast<int>(std::lround(n_intervals * (b - a) / total));
    m = std::max(2, m + (m % 2));
    const double h = (b - a) / m;
    cplx sum{};
    for (int i = 0; i <= m; ++i) {
      const double x = i == m ? b : a + i * h;
      const double w = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += w * spinor_form(spinor_on_piece(sol1, sys1, p1, x), g0, spinor_on_piece(sol2, sys2, p2, x));
    }
    q += sum * (h / 3.0);
  }
  out.q = q;
  const cplx j_hi = spinor_form(spinor_at(sol1, sys1, x2, Side::left), g1,
                                spinor_at(sol2, sys2, x2, Side::left));
  const cplx j_lo = spinor_form(spinor_at(sol1, sys1, x1, Side::right), g1,
                                spinor_at(sol2, sys2, x1, Side::right));
  out.boundary_value = kI * (j_hi - j_lo) / (e1 - e2);
  out.discrepancy = std::abs(out.q - out.boundary_value);
  return out;
}

// ------------------------------------------------------- delta relation

DeltaRelation delta_domain_relation(const SpinorSolution& sol1, int sys1, const SpinorSolution& sol2,
                                    int sys2, double x0, const CMatrix& junction1,
                                    const CMatrix& junction2, const TransformSpec& spec,
                                    const Grid& grid, std::span<const Domain> domains) {
  if (junction1.rows() != 2 || junction1.cols() != 2 || junction2.rows() != 2 ||
      junction2.cols() != 2) {
    throw Error(ErrorKind::dimension_mismatch, "junctions must be 2x2 spinor matrices");
  }
  const CurrentProfile current = transformed_current(sol1, sys1, sol2, sys2, spec, grid);

  const Domain* minus = nullptr;
  const Domain* plus = nullptr;
  for (const Domain& d : domains) {
    if (d.x_lo < x0 && x0 <= d.x_hi) minus = &d;
    if (d.x_lo <= x0 && x0 < d.x_hi) plus = &d;
  }
  if (minus == nullptr || plus == nullptr) {
    throw Error(ErrorKind::domain_not_adjacent,
                "no conservation domain on both sides of x0=" + std::to_string(x0));
  }
  const Domain left{minus->x_lo, x0, minus->transform};
  const Domain right{x0, plus->x_hi, plus->transform};
  const std::vector<Domain> sides{left, right};
  const std::vector<DomainStat> stats = domain_stats(current.x, current.j1, sides);
  if (stats[0].samples == 0 || stats[1].samples == 0) {
    throw Error(ErrorKind::domain_not_adjacent, "grid has no samples on one side of x0");
  }

  DeltaRelation out;
  out.c_minus = stats[0].mean;
  out.c_plus = stats[1].mean;
  out.constancy_minus = stats[0].max_deviation;
  out.constancy_plus = stats[1].max_deviation;

  const Convention& conv = sol1.convention();
  const Matrix2c g1 = conv.gamma0 * conv.gamma1;
  const Matrix2c factor = spec.spinor_factor;
  const double y0 = spec.map(x0);
  // x -> x0^- reaches the image from below for sigma = +1, from above for -1.
  const Side minus_side = spec.sigma == 1 ? Side::left : Side::right;
  const Eigen::Vector2cd psi1_minus = spinor_at(sol1, sys1, x0, Side::left);
  const Eigen::Vector2cd psi2_minus = spinor_at(sol2, sys2, y0, minus_side);
  const Eigen::Vector2cd psi1_plus = junction1 * psi1_minus;
  const Eigen::Vector2cd psi2_plus =
      spec.sigma == 1 ? Eigen::Vector2cd(junction2 * psi2_minus)
                      : Eigen::Vector2cd(junction2.partialPivLu().solve(psi2_minus));
  out.predicted_c_plus = spinor_form(psi1_plus, g1, factor * psi2_plus);
  out.deviation = std::abs(out.c_plus - out.predicted_c_plus);
  return out;
}

}  // namespace gcelab
