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

// Potential landscapes and solved states shared by the engine, gauge and
// acceptance tests. These call the library solvers.
#ifndef GCELAB_TESTS_FIXTURES_HPP
#define GCELAB_TESTS_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "gcelab/gce_engine.hpp"
#include "gcelab/profile.hpp"
#include "gcelab/solvers1d.hpp"

namespace fixtures {

using namespace gcelab;

/// Equal potentials on (-3, 3) only.
inline PotentialProfile local_window() {
  return PotentialProfile::diagonal(std::vector<double>{-6.0, -3.0, 3.0, 6.0},
                                    {{1.0, 0.3}, {0.5, 0.5}, {0.2, 0.8}});
}

/// V_1(x) = V_2(-x) on (-3, 3), broken outside.
inline PotentialProfile mirror_window() {
  return PotentialProfile::diagonal(std::vector<double>{-6.0, -3.0, -1.0, 1.0, 3.0, 6.0},
                                    {{0.4, 0.9}, {0.7, 0.2}, {0.3, 0.3}, {0.2, 0.7}, {0.6, 0.1}});
}

/// V_1(x) = V_2(x + 2) on (-6, 2).
inline PotentialProfile shifted_window() {
  return PotentialProfile::diagonal(std::vector<double>{-6.0, -4.0, -2.0, 0.0, 2.0, 4.0},
                                    {{0.6, 0.3}, {0.2, 0.6}, {0.9, 0.2}, {0.4, 0.9}, {0.1, 0.4}});
}

/// Mirror-symmetric pair with a delta of strength lambda at 0 in system 1 only.
inline PotentialProfile mirror_with_delta(double lambda) {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 0) = lambda;
  return PotentialProfile::diagonal(std::vector<double>{-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0},
                                    {{0.5, 0.9}, {1.2, -0.4}, {0.3, 0.8}, {0.8, 0.3}, {-0.4, 1.2}, {0.9, 0.5}},
                                    {{0.0, s}});
}

/// Different potentials everywhere.
inline PotentialProfile unequal() {
  return PotentialProfile::diagonal(std::vector<double>{-2.0, 0.0, 2.0}, {{0.8, 0.1}, {0.2, 0.6}});
}

inline Eigen::VectorXcd amplitude(cplx a) { return Eigen::VectorXcd::Constant(1, a); }

/// One scattering solution per system, solved separately.
inline std::vector<SpinorSolution> scatter_each(const PotentialProfile& p, const std::vector<double>& energies,
                                                const std::vector<cplx>& amps, const Convention& c) {
  std::vector<SpinorSolution> out;
  for (int i = 0; i < p.n_systems(); ++i) {
    out.push_back(solve_dirac(p.restrict_to(i), energies[static_cast<std::size_t>(i)],
                              Scattering{amplitude(amps[static_cast<std::size_t>(i)])}, c));
  }
  return out;
}

inline std::vector<WaveSolution> scatter_each_wave(const PotentialProfile& p, const std::vector<double>& energies,
                                                   const std::vector<cplx>& amps, double mass) {
  std::vector<WaveSolution> out;
  for (int i = 0; i < p.n_systems(); ++i) {
    out.push_back(solve_schrodinger(p.restrict_to(i), energies[static_cast<std::size_t>(i)],
                                    Scattering{amplitude(amps[static_cast<std::size_t>(i)])}, mass));
  }
  return out;
}

/// Initial-value states for the delta landscape; E = 2 in both systems.
inline std::vector<SpinorSolution> delta_states(const PotentialProfile& p, const Convention& c) {
  Eigen::VectorXcd u1(2);
  u1 << 1.0, cplx(0.3, 0.2);
  Eigen::VectorXcd u2(2);
  u2 << 0.5, cplx(0.0, -0.7);
  return {solve_dirac(p.restrict_to(0), 2.0, InitialValue{u1}, c),
          solve_dirac(p.restrict_to(1), 2.0, InitialValue{u2}, c)};
}

}  // namespace fixtures

#endif  // GCELAB_TESTS_FIXTURES_HPP
