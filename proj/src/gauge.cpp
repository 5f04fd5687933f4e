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

#include "gcelab/gauge.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "residual_detail.hpp"

namespace gcelab {

namespace {

double uniform_spacing(const std::vector<double>& v, const char* what) {
  Grid g{v};
  if (v.size() < 3) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + " grid needs at least three samples");
  }
  if (!g.is_uniform()) throw Error(ErrorKind::non_uniform_grid, std::string(what) + " grid is not uniform");
  return g.spacing();
}

/// Second-order derivative along one axis of a t-major table.
double diff(const std::vector<double>& f, std::size_t nt, std::size_t nx, std::size_t it,
            std::size_t ix, bool along_t, double h) {
  const std::size_t n = along_t ? nt : nx;
  const std::size_t k = along_t ? it : ix;
  auto at = [&](std::size_t m) { return along_t ? f[m * nx + ix] : f[it * nx + m]; };
  // One-sided forms written in differences so constants give exact zeros.
  if (k == 0) return (3.0 * (at(1) - at(0)) - (at(2) - at(1))) / (2.0 * h);
  if (k + 1 == n) return (3.0 * (at(k) - at(k - 1)) - (at(k - 1) - at(k - 2))) / (2.0 * h);
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
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

std::size_t decomp_segment(const PotentialDecomposition& decomp, double x) {
  std::size_t s = 0;
  while (s + 1 < decomp.segments() && x >= decomp.breakpoints[s + 1]) ++s;
  return s;
}

}  // namespace

GaugeConfig GaugeConfig::zero(std::vector<double> t, std::vector<double> x, int dim) {
  GaugeConfig cfg;
  cfg.t = std::move(t);
  cfg.x = std::move(x);
  const std::size_t n = cfg.t.size() * cfg.x.size();
  cfg.a_fields.assign(static_cast<std::size_t>(dim),
                      {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)});
  return cfg;
}

double GaugeConfig::strength(int a, int mu, int nu, std::size_t it, std::size_t ix) const {
  if (mu == nu) return 0.0;
  const double r = field_strength.at(static_cast<std::size_t>(a))[it * nx() + ix];
  return mu == 0 ? r : -r;
}

void GaugeConfig::compute_field_strength(const SunBasis& basis) {
  const double ht = uniform_spacing(t, "time");
  const double hx = uniform_spacing(x, "space");
  const int dim = basis.dim();
  if (static_cast<int>(a_fields.size()) != dim) {
    throw Error(ErrorKind::dimension_mismatch, "gauge fields must have one entry per generator");
  }
  const std::size_t n = nt() * nx();
  for (const auto& comp : a_fields) {
    if (comp[0].size() != n || comp[1].size() != n) {
      throw Error(ErrorKind::grid_mismatch, "gauge field samples do not match the (t, x) grid");
    }
  }
  field_strength.assign(static_cast<std::size_t>(dim), std::vector<double>(n, 0.0));
  for (int a = 0; a < dim; ++a) {
    const auto& comp = a_fields[static_cast<std::size_t>(a)];
    for (std::size_t it = 0; it < nt(); ++it) {
      for (std::size_t ix = 0; ix < nx(); ++ix) {
        double r = diff(comp[1], nt(), nx(), it, ix, true, ht) - diff(comp[0], nt(), nx(), it, ix, false, hx);
        for (int b = 0; b < dim; ++b) {
          const double a0 = field(b, 0, it, ix);
          if (a0 == 0.0) continue;
          for (int c = 0; c < dim; ++c) r -= basis.f(b, c, a) * a0 * field(c, 1, it, ix);
        }
        field_strength[static_cast<std::size_t>(a)][it * nx() + ix] = r;
      }
    }
  }
}

SuperSpinorGrid SuperSpinorGrid::sample(const DiracStack& psi, std::vector<double> t,
                                        std::vector<double> x) {
  SuperSpinorGrid g;
  g.n_systems = psi.n_systems();
  g.t = std::move(t);
  g.x = std::move(x);
  std::vector<CVector> spatial;
  spatial.reserve(g.x.size());
  for (double xv : g.x) spatial.push_back(psi.state(xv));
  g.values.reserve(g.t.size() * g.x.size());
  for (double tv : g.t) {
    for (const CVector& u : spatial) {
      CVector v = u;
      for (int i = 0; i < g.n_systems; ++i) v.segment<2>(2 * i) *= std::exp(-kI * psi.energy(i) * tv);
      g.values.push_back(std::move(v));
    }
  }
  return g;
}

GceReport gauge_residual(const SuperSpinorGrid& psi, const GaugeConfig& config, const SunBasis& basis,
                         int a, const PotentialDecomposition& decomp, const Convention& convention) {
  basis.check_index(a);
  if (psi.t != config.t || psi.x != config.x) {
    throw Error(ErrorKind::grid_mismatch, "spinor and gauge field samples use different grids");
  }
  if (psi.n_systems != basis.n()) {
    throw Error(ErrorKind::dimension_mismatch, "basis rank differs from the number of systems");
  }
  const std::size_t nt = config.nt();
  const std::size_t nx = config.nx();
  if (psi.values.size() != nt * nx) {
    throw Error(ErrorKind::grid_mismatch, "spinor samples do not fill the (t, x) grid");
  }
  GaugeConfig cfg = config;
  if (cfg.field_strength.empty()) cfg.compute_field_strength(basis);
  const double ht = uniform_spacing(cfg.t, "time");
  const double hx = uniform_spacing(cfg.x, "space");
  const int dim = basis.dim();
  convention.validate();

  const Matrix2c g0 = convention.gamma0 * convention.gamma0;
  const Matrix2c g1 = convention.gamma0 * convention.gamma1;
  const Matrix2c gk = convention.gamma0 * convention.coupling_matrix();
  const CMatrix& ta = basis.generator(a);
  std::vector<CMatrix> sources;
  for (const auto& c : decomp.c) sources.push_back(source_operator(a, c, basis));

  // Corrected currents J^mu - R^{mu nu d} f_abd A^b_nu on every sample.
  std::vector<cplx> k0(nt * nx);
  std::vector<cplx> k1(nt * nx);
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t k = it * nx + ix;
      double corr0 = 0.0;
      double corr1 = 0.0;
      for (int d = 0; d < dim; ++d) {
        const double r = cfg.field_strength[static_cast<std::size_t>(d)][k];
        if (r == 0.0) continue;
        for (int b = 0; b < dim; ++b) {
          const double f = basis.f(a, b, d);
          if (f == 0.0) continue;
          corr0 -= r * f * cfg.field(b, 1, it, ix);
          corr1 += r * f * cfg.field(b, 0, it, ix);
        }
      }
      const CVector& u = psi.at(it, ix);
      k0[k] = stacked_form(u, g0, ta) - corr0;
      k1[k] = stacked_form(u, g1, ta) - corr1;
    }
  }

  GceReport report;
  report.label = "gauge a=" + std::to_string(a + 1);
  report.spacing = hx;
  report.t.assign(cfg.t.begin() + 1, cfg.t.end() - 1);
  report.x.assign(cfg.x.begin() + 1, cfg.x.end() - 1);
  for (std::size_t it = 1; it + 1 < nt; ++it) {
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
      const std::size_t k = it * nx + ix;
      report.time_term.push_back((k0[k + nx] - k0[k - nx]) / (2.0 * ht));
      report.divergence.push_back((k1[k + 1] - k1[k - 1]) / (2.0 * hx));
      report.current.push_back(k1[k]);
      const CMatrix& s = sources.at(decomp_segment(decomp, cfg.x[ix]));
      report.source.push_back(stacked_form(psi.at(it, ix), gk, s));
    }
  }
  detail::finalize(report, {});
  report.residual_norm *= std::sqrt(ht);
  return report;
}

}  // namespace gcelab
