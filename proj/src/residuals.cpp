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
#include <functional>
#include <limits>
#include <string>

#include "gcelab/gce_engine.hpp"
#include "residual_detail.hpp"

namespace gcelab {

namespace detail {

void finalize(GceReport& report, const ResidualOptions& opts) {
  const std::size_t n = report.divergence.size();
  report.residual.resize(n);
  double sum_sq = 0.0;
  report.residual_max = 0.0;
  report.term_scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    report.residual[k] = report.time_term[k] + report.divergence[k] - report.source[k];
    const double r = std::abs(report.residual[k]);
    sum_sq += r * r;
    report.residual_max = std::max(report.residual_max, r);
    report.term_scale = std::max({report.term_scale, std::abs(report.divergence[k]),
                                  std::abs(report.time_term[k]), std::abs(report.source[k])});
  }
  report.residual_norm = std::sqrt(report.spacing * sum_sq);
  report.domain_verdicts.clear();
  if (!opts.domains.empty() && report.t.empty()) {
    for (const DomainStat& st : domain_stats(report.x, report.current, opts.domains)) {
      report.domain_verdicts.push_back({st, st.samples > 0 && st.max_deviation <= opts.domain_tol});
    }
  }
}

}  // namespace detail

namespace {

enum class Stencil { centered, forward, backward };

struct StencilChoice {
  std::size_t piece;
  Stencil kind;
};

/// Piece and three-point stencil for every grid point such that no stencil
/// straddles a breakpoint; points on a breakpoint take the piece to their
/// right (the last grid point takes the left one).
std::vector<StencilChoice> choose_stencils(const Grid& grid, std::span<const double> breakpoints) {
  const std::size_t n = grid.size();
  if (n < 3) throw Error(ErrorKind::invalid_argument, "residual needs at least three grid points");
  const double inf = std::numeric_limits<double>::infinity();
  auto piece_of = [&](double x, bool prefer_left) {
    std::size_t s = 0;
    while (s < breakpoints.size()) {
      const double b = breakpoints[s];
      if (x < b || (x == b && prefer_left)) break;
      ++s;
    }
    return s;
  };
  std::vector<StencilChoice> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = grid.x[k];
    const std::size_t s = piece_of(x, k + 1 == n);
    const double lo = s == 0 ? -inf : breakpoints[s - 1];
    const double hi = s == breakpoints.size() ? inf : breakpoints[s];
    if (k > 0 && k + 1 < n && grid.x[k - 1] >= lo && grid.x[k + 1] <= hi) {
      out[k] = {s, Stencil::centered};
    } else if (k + 2 < n && grid.x[k + 2] <= hi) {
      out[k] = {s, Stencil::forward};
    } else if (k >= 2 && grid.x[k - 2] >= lo) {
      out[k] = {s, Stencil::backward};
    } else {
      throw Error(ErrorKind::invalid_argument,
                  "grid too coarse: fewer than three samples inside the segment around x=" +
                      std::to_string(x));
    }
  }
  return out;
}

void check_decomposition(const PotentialDecomposition& decomp, std::span<const double> breakpoints,
                         const SunBasis& basis) {
  if (decomp.segments() != breakpoints.size() + 1 || decomp.breakpoints.size() != decomp.segments() + 1) {
    throw Error(ErrorKind::grid_mismatch, "decomposition segments do not match the solutions");
  }
  for (std::size_t s = 0; s < breakpoints.size(); ++s) {
    if (decomp.breakpoints[s + 1] != breakpoints[s]) {
      throw Error(ErrorKind::grid_mismatch, "decomposition breakpoints do not match the solutions");
    }
  }
  for (const auto& c : decomp.c) {
    if (static_cast<int>(c.size()) != basis.dim()) {
      throw Error(ErrorKind::dimension_mismatch, "decomposition was built for another basis");
    }
  }
}

/// state(s, x) -> stacked state; current/time/source evaluate the balance
/// terms from a state on piece s.
struct Terms {
  std::function<CVector(std::size_t, double)> state;
  std::function<cplx(const CVector&)> current;
  std::function<cplx(const CVector&)> time_term;
  std::function<cplx(const CVector&, std::size_t)> source;
};

GceReport assemble(const Grid& grid, std::span<const double> breakpoints, const Terms& terms,
                   const ResidualOptions& opts, std::string label) {
  GceReport report;
  report.label = std::move(label);
  report.spacing = grid.spacing();
  report.x = grid.x;
  const std::vector<StencilChoice> stencils = choose_stencils(grid, breakpoints);
  const double h = report.spacing;
  const std::size_t n = grid.size();
  report.divergence.resize(n);
  report.time_term.resize(n);
  report.source.resize(n);
  report.current.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [s, kind] = stencils[k];
    auto j_at = [&](std::size_t m) { return terms.current(terms.state(s, grid.x[m])); };
    const CVector u = terms.state(s, grid.x[k]);
    const cplx j0 = terms.current(u);
    cplx d;
    switch (kind) {
      case Stencil::centered: d = (j_at(k + 1) - j_at(k - 1)) / (2.0 * h); break;
      case Stencil::forward: d = (-3.0 * j0 + 4.0 * j_at(k + 1) - j_at(k + 2)) / (2.0 * h); break;
      case Stencil::backward: d = (3.0 * j0 - 4.0 * j_at(k - 1) + j_at(k - 2)) / (2.0 * h); break;
    }
    report.current[k] = j0;
    report.divergence[k] = d;
    report.time_term[k] = terms.time_term(u);
    report.source[k] = terms.source(u, s);
  }
  detail::finalize(report, opts);
  return report;
}

cplx stacked_form(const CVector& u, const Matrix2c& g, const CMatrix& op) {
  cplx sum{};
  for (int i = 0; i < op.rows(); ++i) {
    for (int j = 0; j < op.cols(); ++j) {
      const cplx a = op(i, j);
      if (a == cplx{}) continue;
      sum += a * spinor_form(u.segment<2>(2 * i), g, u.segment<2>(2 * j));
    }
  }
  return sum;
}

/// op_ij * i (E_i - E_j): the exact time derivative of exp(i(E_i - E_j)t) at t = 0.
CMatrix time_weights(const CMatrix& op, const std::vector<double>& energies) {
  CMatrix w = op;
  for (int i = 0; i < op.rows(); ++i) {
    for (int j = 0; j < op.cols(); ++j) w(i, j) *= kI * (energies[i] - energies[j]);
  }
  return w;
}

std::vector<CMatrix> segment_sources(std::span<const cplx> alpha, const PotentialDecomposition& decomp,
                                     const SunBasis& basis) {
  std::vector<CMatrix> out;
  for (const auto& c : decomp.c) out.push_back(source_operator(alpha, c, basis));
  return out;
}

std::string combination_label(std::span<const cplx> alpha) {
  int nonzero = 0;
  int last = 0;
  for (std::size_t a = 0; a < alpha.size(); ++a) {
    if (alpha[a] != cplx{}) {
      ++nonzero;
      last = static_cast<int>(a);
    }
  }
  if (nonzero == 1 && alpha[last] == cplx{1.0, 0.0}) return "a=" + std::to_string(last + 1);
  return "combination";
}

}  // namespace

bool GceReport::consistent(double rel_tol) const {
  return residual_max <= rel_tol * std::max(1.0, term_scale);
}

double convergence_order(const GceReport& coarse, GceReport& fine) {
  if (!(coarse.residual_norm > 0.0) || !(fine.residual_norm > 0.0) || !(coarse.spacing > fine.spacing)) {
    throw Error(ErrorKind::invalid_argument,
                "convergence order needs two nonzero residual norms at distinct spacings");
  }
  const double order = std::log(coarse.residual_norm / fine.residual_norm) /
                       std::log(coarse.spacing / fine.spacing);
  fine.convergence_order = order;
  return order;
}

GceReport gce_residual_dirac(const DiracStack& psi, const SunBasis& basis,
                             std::span<const cplx> alpha, const Grid& grid,
                             const PotentialDecomposition& decomp, const ResidualOptions& opts,
                             std::string label) {
  if (basis.n() != psi.n_systems()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  check_decomposition(decomp, psi.breakpoints(), basis);
  const Convention& conv = psi.convention();
  const CMatrix op = basis.combine(alpha);
  std::vector<double> energies;
  for (int i = 0; i < psi.n_systems(); ++i) energies.push_back(psi.energy(i));
  const CMatrix weights = time_weights(op, energies);
  const std::vector<CMatrix> sources = segment_sources(alpha, decomp, basis);
  const Matrix2c g1 = conv.gamma0 * conv.gamma1;
  const Matrix2c g0 = conv.gamma0 * conv.gamma0;
  const Matrix2c gk = conv.gamma0 * conv.coupling_matrix();

  Terms terms;
  terms.state = [&](std::size_t s, double x) { return psi.state_on_piece(s, x); };
  terms.current = [&](const CVector& u) { return stacked_form(u, g1, op); };
  terms.time_term = [&](const CVector& u) { return stacked_form(u, g0, weights); };
  terms.source = [&](const CVector& u, std::size_t s) { return stacked_form(u, gk, sources[s]); };
  return assemble(grid, psi.breakpoints(), terms, opts,
                  label.empty() ? "dirac " + combination_label(alpha) : std::move(label));
}

GceReport gce_residual_dirac(const DiracStack& psi, const SunBasis& basis, int a, const Grid& grid,
                             const PotentialDecomposition& decomp, const ResidualOptions& opts) {
  basis.check_index(a);
  std::vector<cplx> alpha(static_cast<std::size_t>(basis.dim()));
  alpha[static_cast<std::size_t>(a)] = 1.0;
  return gce_residual_dirac(psi, basis, alpha, grid, decomp, opts,
                            "dirac a=" + std::to_string(a + 1));
}

GceReport gce_residual_dirac_pair(const DiracStack& psi, const SunBasis& basis, int i, int j,
                                  const Grid& grid, const PotentialDecomposition& decomp,
                                  const ResidualOptions& opts) {
  const std::vector<cplx> alpha = basis.ladder(i, j);
  return gce_residual_dirac(psi, basis, alpha, grid, decomp, opts,
                            "dirac pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
}

namespace {

cplx wave_form(const CVector& u, int n, const CMatrix& op) {
  cplx sum{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx a = op(i, j);
      if (a != cplx{}) sum += a * std::conj(u(i)) * u(j);
    }
  }
  return sum;
}

cplx wave_flux(const CVector& u, int n, double mass, const CMatrix& op) {
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

}  // namespace

GceReport gce_residual_schrodinger(const WaveStack& psi, const SunBasis& basis,
                                   std::span<const cplx> alpha, const Grid& grid,
                                   const PotentialDecomposition& decomp,
                                   const ResidualOptions& opts, std::string label) {
  if (basis.n() != psi.n_systems()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  check_decomposition(decomp, psi.breakpoints(), basis);
  const int n = psi.n_systems();
  const double mass = psi.mass();
  const CMatrix op = basis.combine(alpha);
  std::vector<double> energies;
  for (int i = 0; i < n; ++i) energies.push_back(psi.energy(i));
  const CMatrix weights = time_weights(op, energies);
  const std::vector<CMatrix> sources = segment_sources(alpha, decomp, basis);

  Terms terms;
  terms.state = [&](std::size_t s, double x) { return psi.state_on_piece(s, x); };
  terms.current = [&](const CVector& u) { return wave_flux(u, n, mass, op); };
  terms.time_term = [&](const CVector& u) { return wave_form(u, n, weights); };
  terms.source = [&](const CVector& u, std::size_t s) { return wave_form(u, n, sources[s]); };
  return assemble(grid, psi.breakpoints(), terms, opts,
                  label.empty() ? "schrodinger " + combination_label(alpha) : std::move(label));
}

GceReport gce_residual_schrodinger(const WaveStack& psi, const SunBasis& basis, int a,
                                   const Grid& grid, const PotentialDecomposition& decomp,
                                   const ResidualOptions& opts) {
  basis.check_index(a);
  std::vector<cplx> alpha(static_cast<std::size_t>(basis.dim()));
  alpha[static_cast<std::size_t>(a)] = 1.0;
  return gce_residual_schrodinger(psi, basis, alpha, grid, decomp, opts,
                                  "schrodinger a=" + std::to_string(a + 1));
}

GceReport gce_residual_schrodinger_pair(const WaveStack& psi, const SunBasis& basis, int i, int j,
                                        const Grid& grid, const PotentialDecomposition& decomp,
                                        const ResidualOptions& opts) {
  const std::vector<cplx> alpha = basis.ladder(i, j);
  return gce_residual_schrodinger(psi, basis, alpha, grid, decomp, opts,
                                  "schrodinger pair (" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + ")");
}

}  // namespace gcelab
