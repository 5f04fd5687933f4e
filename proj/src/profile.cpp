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

#include "gcelab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gcelab {

namespace {

constexpr double kHermitianTol = 1e-12;

std::string segment_label(std::size_t s, const Segment& seg) {
  return "segment " + std::to_string(s) + " [" + std::to_string(seg.x_lo) + ", " +
         std::to_string(seg.x_hi) + "]";
}

}  // namespace

PotentialProfile::PotentialProfile(int n_systems, std::vector<Segment> segments,
                                   std::vector<DeltaBarrier> deltas)
    : n_systems_(n_systems), segments_(std::move(segments)), deltas_(std::move(deltas)) {
  if (n_systems_ < 1) throw Error(ErrorKind::invalid_profile, "profile needs at least one system");
  if (segments_.empty()) throw Error(ErrorKind::empty_profile, "profile has no segments");
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const Segment& seg = segments_[s];
    if (!std::isfinite(seg.x_lo) || !std::isfinite(seg.x_hi) || !(seg.x_lo < seg.x_hi)) {
      throw Error(ErrorKind::invalid_profile, segment_label(s, seg) + " needs finite x_lo < x_hi");
    }
    if (seg.v.rows() != n_systems_ || seg.v.cols() != n_systems_) {
      throw Error(ErrorKind::dimension_mismatch, segment_label(s, seg) + " potential is not " +
                                                     std::to_string(n_systems_) + "x" +
                                                     std::to_string(n_systems_));
    }
    if (hermiticity_defect(seg.v) > kHermitianTol) {
      throw Error(ErrorKind::non_hermitian, segment_label(s, seg) + " potential is not Hermitian");
    }
    if (s > 0) {
      const Segment& prev = segments_[s - 1];
      if (seg.x_lo < prev.x_hi) {
        throw Error(ErrorKind::invalid_profile,
                    segment_label(s - 1, prev) + " overlaps " + segment_label(s, seg));
      }
      if (seg.x_lo > prev.x_hi) {
        throw Error(ErrorKind::invalid_profile,
                    "gap between " + segment_label(s - 1, prev) + " and " + segment_label(s, seg));
      }
    }
  }
  const std::vector<double> interior = interior_breakpoints();
  for (const DeltaBarrier& d : deltas_) {
    if (std::find(interior.begin(), interior.end(), d.x0) == interior.end()) {
      throw Error(ErrorKind::invalid_profile,
                  "delta at x=" + std::to_string(d.x0) + " is not on an interior segment boundary");
    }
    if (d.strength.rows() != n_systems_ || d.strength.cols() != n_systems_) {
      throw Error(ErrorKind::dimension_mismatch, "delta strength has wrong dimension");
    }
    if (hermiticity_defect(d.strength) > kHermitianTol) {
      throw Error(ErrorKind::non_hermitian, "delta strength at x=" + std::to_string(d.x0) +
                                                " is not Hermitian");
    }
  }
  std::sort(deltas_.begin(), deltas_.end(),
            [](const DeltaBarrier& a, const DeltaBarrier& b) { return a.x0 < b.x0; });
  for (std::size_t k = 1; k < deltas_.size(); ++k) {
    if (deltas_[k].x0 == deltas_[k - 1].x0) {
      throw Error(ErrorKind::invalid_profile,
                  "two deltas at x=" + std::to_string(deltas_[k].x0) + "; merge their strengths");
    }
  }
}

PotentialProfile PotentialProfile::diagonal(std::span<const double> edges,
                                            const std::vector<std::vector<double>>& values,
                                            std::vector<DeltaBarrier> deltas) {
  if (edges.size() != values.size() + 1 || values.empty()) {
    throw Error(ErrorKind::dimension_mismatch, "need one more edge than segment values");
  }
  const int n = static_cast<int>(values.front().size());
  std::vector<Segment> segments;
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (static_cast<int>(values[s].size()) != n) {
      throw Error(ErrorKind::dimension_mismatch, "segment value rows differ in length");
    }
    CMatrix v = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) v(i, i) = values[s][static_cast<std::size_t>(i)];
    segments.push_back({edges[s], edges[s + 1], std::move(v)});
  }
  return PotentialProfile(n, std::move(segments), std::move(deltas));
}

std::vector<double> PotentialProfile::edges() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const Segment& s : segments_) out.push_back(s.x_lo);
  out.push_back(segments_.back().x_hi);
  return out;
}

std::vector<double> PotentialProfile::interior_breakpoints() const {
  std::vector<double> out;
  for (std::size_t s = 1; s < segments_.size(); ++s) out.push_back(segments_[s].x_lo);
  return out;
}

std::size_t PotentialProfile::segment_index(double x, Side side) const {
  if (!std::isfinite(x)) throw Error(ErrorKind::outside_domain, "non-finite position");
  std::size_t s = 0;
  while (s + 1 < segments_.size()) {
    const double b = segments_[s + 1].x_lo;
    if (x < b || (x == b && side == Side::left)) break;
    ++s;
  }
  return s;
}

const CMatrix& PotentialProfile::value_at(double x, Side side) const {
  return segments_[segment_index(x, side)].v;
}

const DeltaBarrier* PotentialProfile::delta_at(double x) const {
  for (const DeltaBarrier& d : deltas_) {
    if (d.x0 == x) return &d;
  }
  return nullptr;
}

bool PotentialProfile::is_diagonal(double tol) const {
  auto off_diagonal = [tol](const CMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (i != j && std::abs(m(i, j)) > tol) return true;
      }
    }
    return false;
  };
  for (const Segment& s : segments_) {
    if (off_diagonal(s.v)) return false;
  }
  for (const DeltaBarrier& d : deltas_) {
    if (off_diagonal(d.strength)) return false;
  }
  return true;
}

PotentialProfile PotentialProfile::restrict_to(int system) const {
  if (system < 0 || system >= n_systems_) {
    throw Error(ErrorKind::index_out_of_range, "system " + std::to_string(system) + " out of range");
  }
  std::vector<Segment> segments;
  for (const Segment& s : segments_) {
    segments.push_back({s.x_lo, s.x_hi, CMatrix::Constant(1, 1, s.v(system, system))});
  }
  std::vector<DeltaBarrier> deltas;
  for (const DeltaBarrier& d : deltas_) {
    deltas.push_back({d.x0, CMatrix::Constant(1, 1, d.strength(system, system))});
  }
  return PotentialProfile(1, std::move(segments), std::move(deltas));
}

PotentialDecomposition PotentialProfile::decompose(const SunBasis& basis) const {
  std::vector<CMatrix> values;
  values.reserve(segments_.size());
  for (const Segment& s : segments_) values.push_back(s.v);
  const std::vector<double> e = edges();
  return gcelab::decompose(values, e, basis);
}

}  // namespace gcelab
