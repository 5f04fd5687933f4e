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

/// @file scenario.hpp
/// @brief Scenario files (JSON) and the orchestration that turns one into
/// tables and verdicts. The key schema is documented in docs/scenario_format.md.
#ifndef GCELAB_SCENARIO_HPP
#define GCELAB_SCENARIO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcelab/gce_engine.hpp"
#include "gcelab/profile.hpp"
#include "gcelab/solvers1d.hpp"
#include "gcelab/types.hpp"

namespace gcelab {

enum class Model { dirac, schrodinger };
enum class Output { currents, residuals, domains, charge_relation, delta_relation };

std::string_view to_string(Model m);
std::string_view to_string(Output o);

struct ScenarioGrid {
  double x_min = -10.0;
  double x_max = 10.0;
  std::size_t n_points = 4001;

  Grid grid() const { return Grid::uniform(x_min, x_max, n_points); }
  bool operator==(const ScenarioGrid&) const = default;
};

struct ScenarioTransform {
  int sigma = 1;
  double rho = 0.0;
  bool operator==(const ScenarioTransform&) const = default;
};

struct Scenario {
  std::string name;
  Model model = Model::dirac;
  int n_systems = 0;
  PotentialProfile profile;
  std::vector<double> energies;
  /// One per system. Scattering carries a single incoming amplitude; initial
  /// values carry that system's block of the stacked state.
  std::vector<BoundarySpec> boundaries;
  std::string convention = "default";
  double mass = 1.0;
  std::optional<ScenarioTransform> transform;
  ScenarioGrid grid;
  std::pair<int, int> pair{0, 1};  // 0-based
  std::optional<int> generator;    // 0-based
  double tol = 1e-8;               // domain constancy
  double domain_tol = 1e-12;       // potential matching in domain detection
  double residual_tol = 1e-4;      // residual_max relative to max(1, term scale)
  double charge_tol = 1e-6;        // quadrature vs boundary expression, relative to max(1, |q|)
  double relation_tol = 1e-10;     // junction prediction, relative to max(1, |c_plus|)
  bool expect_locality = false;
  std::vector<Output> requested_outputs;

  /// Enforces every schema rule; throws invariant_violation naming it.
  void validate() const;
  Convention gamma_convention() const;
  TransformSpec transform_spec() const;
};

bool operator==(const Scenario& a, const Scenario& b);

/// Throws parse_error (with line/column), schema_violation (naming the key)
/// or invariant_violation.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s);

/// Accepts a path or the name of a shipped scenario ("fig2" ->
/// <scenario dir>/fig2.json).
std::filesystem::path resolve_scenario(const std::string& path_or_name);

/// Overrides the (0,0) entry of every delta strength.
void set_delta_strength(Scenario& s, double lambda);

/// Solved super-field of a scenario. Diagonal profiles are solved one system
/// at a time with its own energy; coupled profiles jointly (equal energies).
struct SolvedScenario {
  std::vector<SpinorSolution> dirac;
  std::vector<WaveSolution> wave;
  /// system -> (block, index inside the block)
  std::vector<std::pair<std::size_t, int>> owner;

  DiracStack dirac_stack() const { return DiracStack(dirac); }
  WaveStack wave_stack() const { return WaveStack(wave); }
};

SolvedScenario solve_scenario(const Scenario& s);

struct Table {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Verdict {
  std::string check;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  /// Verdicts that do not count only inform.
  bool counts = true;
};

struct ReportBundle {
  std::string scenario_text;  // canonical serialization of the input
  std::string scenario_name;
  std::string convention;
  double spacing = 0.0;
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;

  bool ok() const;
};

ReportBundle run_scenario(const Scenario& s);

/// GCE residual of the scenario's generator (or pair when none is set) on a
/// grid with the given number of points.
GceReport scenario_residual(const Scenario& s, const SolvedScenario& solved, std::size_t n_points);

}  // namespace gcelab

#endif  // GCELAB_SCENARIO_HPP
