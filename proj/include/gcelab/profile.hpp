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

/// @file profile.hpp
/// @brief Piecewise-constant N-system potential landscapes with delta barriers.

#ifndef GCELAB_PROFILE_HPP
#define GCELAB_PROFILE_HPP

#include <optional>
#include <span>
#include <vector>

#include "gcelab/sun_algebra.hpp"
#include "gcelab/types.hpp"

namespace gcelab {

struct Segment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  CMatrix v;  // N x N Hermitian
};

struct DeltaBarrier {
  double x0 = 0.0;
  CMatrix strength;  // N x N Hermitian, energy * length
};

/// Contiguous segments; the first and last extend to -inf and +inf.
/// Deltas sit on interior segment boundaries.
class PotentialProfile {
 public:
  PotentialProfile() = default;
  PotentialProfile(int n_systems, std::vector<Segment> segments, std::vector<DeltaBarrier> deltas = {});

  /// Diagonal profile from per-system values on shared segment edges:
  /// values[s][i] is V_i on segment s.
  static PotentialProfile diagonal(std::span<const double> edges,
                                   const std::vector<std::vector<double>>& values,
                                   std::vector<DeltaBarrier> deltas = {});

  int n_systems() const { return n_systems_; }
  std::span<const Segment> segments() const { return segments_; }
  std::span<const DeltaBarrier> deltas() const { return deltas_; }

  /// Segment edges x_lo(0), x_hi(0), ..., x_hi(last).
  std::vector<double> edges() const;
  /// Edges between segments, where the piecewise solution changes piece.
  std::vector<double> interior_breakpoints() const;

  /// Segment containing x; at an interior boundary `side` picks the neighbour.
  /// Points outside the listed segments belong to the asymptotic ones.
  std::size_t segment_index(double x, Side side = Side::right) const;
  const CMatrix& value_at(double x, Side side = Side::right) const;
  const DeltaBarrier* delta_at(double x) const;

  bool is_diagonal(double tol = 0.0) const;
  /// One-system profile holding V_ii and the ii entries of the deltas.
  PotentialProfile restrict_to(int system) const;

  PotentialDecomposition decompose(const SunBasis& basis) const;

 private:
  int n_systems_ = 0;
  std::vector<Segment> segments_;
  std::vector<DeltaBarrier> deltas_;
};

}  // namespace gcelab

#endif  // GCELAB_PROFILE_HPP
