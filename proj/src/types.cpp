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

#include "gcelab/types.hpp"

#include <cmath>

namespace gcelab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_rank: return "invalid-rank";
    case ErrorKind::inconsistent_basis: return "inconsistent-basis";
    case ErrorKind::non_hermitian: return "non-hermitian";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::invalid_convention: return "invalid-convention";
    case ErrorKind::invalid_profile: return "invalid-profile";
    case ErrorKind::evanescent_scattering: return "evanescent-scattering";
    case ErrorKind::empty_profile: return "empty-profile";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::outside_domain: return "outside-domain";
    case ErrorKind::degenerate_energies: return "degenerate-energies";
    case ErrorKind::non_uniform_grid: return "non-uniform-grid";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::domain_not_adjacent: return "domain-not-adjacent";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::schema_violation: return "schema-violation";
    case ErrorKind::invariant_violation: return "invariant-violation";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Grid Grid::uniform(double x_min, double x_max, std::size_t n_points) {
  if (n_points < 2 || !(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::invalid_argument, "uniform grid needs x_min < x_max and >= 2 points");
  }
  Grid g;
  g.x.resize(n_points);
  const double span = x_max - x_min;
  const double last = static_cast<double>(n_points - 1);
  for (std::size_t k = 0; k < n_points; ++k) {
    g.x[k] = x_min + span * (static_cast<double>(k) / last);
  }
  g.x.back() = x_max;
  return g;
}

bool Grid::is_uniform(double rel_tol) const {
  if (x.size() < 2) return false;
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(h > 0.0)) return false;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (std::abs((x[k] - x[k - 1]) - h) > rel_tol * h) return false;
  }
  return true;
}

double Grid::spacing() const {
  if (!is_uniform()) throw Error(ErrorKind::non_uniform_grid, "grid spacing is not uniform");
  return (x.back() - x.front()) / static_cast<double>(x.size() - 1);
}

}  // namespace gcelab
