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

// gce_lab: command-line front end for the gcelab library.
//
// Exit status: 0 success, 1 verdict failure, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcelab/gce_engine.hpp"
#include "gcelab/report.hpp"
#include "gcelab/scenario.hpp"
#include "gcelab/sun_algebra.hpp"

namespace {

using namespace gcelab;

constexpr int kOk = 0;
constexpr int kVerdictFailure = 1;
constexpr int kUsage = 2;

struct Flags {
  std::string scenario;
  std::string out;
  std::size_t grid = 4001;
  bool grid_set = false;
  std::string h_list;
  double lambda = 0.0;
  bool lambda_set = false;
  std::string convention = "default";
  bool convention_set = false;
  double tol = 1e-8;
  bool tol_set = false;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "% .6f", std::abs(v) < 5e-16 ? 0.0 : v);
  return buf;
}

std::filesystem::path out_dir(const Flags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv("GCE_LAB_OUT"); env != nullptr && *env != '\0') return env;
  return "gce_out";
}

Scenario scenario_from_flags(const Flags& f) {
  if (f.scenario.empty()) throw Error(ErrorKind::invalid_argument, "--scenario is required");
  Scenario s = load_scenario(resolve_scenario(f.scenario));
  if (f.grid_set) s.grid.n_points = f.grid;
  if (f.convention_set) s.convention = f.convention;
  if (f.tol_set) s.tol = f.tol;
  if (f.lambda_set) {
    if (s.profile.deltas().empty()) throw Error(ErrorKind::invalid_argument, "--lambda needs a scenario with a delta barrier");
    set_delta_strength(s, f.lambda);
  }
  s.validate();
  return s;
}

int finish(const ReportBundle& bundle, const std::filesystem::path& dir) {
  for (const Verdict& v : bundle.verdicts) {
    std::cout << (v.pass ? "PASS " : (v.counts ? "FAIL " : "INFO ")) << v.check << "  value=" << fmt(v.value)
              << " threshold=" << fmt(v.threshold) << "\n";
  }
  const auto written = write_reports(bundle, dir);
  std::cout << "wrote " << written.size() << " file(s) to " << dir.string() << "\n";
  return bundle.ok() ? kOk : kVerdictFailure;
}

int cmd_generators(int n) {
  const SunBasis basis = SunBasis::build(n);
  std::cout << "su(" << n << "): " << basis.dim() << " generators, Tr(TaTb) = delta_ab/2\n";
  for (int a = 0; a < basis.dim(); ++a) {
    std::cout << "T" << a + 1 << (basis.is_cartan(a) ? " (cartan)" : "") << "\n";
    const CMatrix& t = basis.generator(a);
    for (int r = 0; r < n; ++r) {
      std::cout << " ";
      for (int c = 0; c < n; ++c) {
        std::cout << " (" << fmt_short(t(r, c).real()) << "," << fmt_short(t(r, c).imag()) << ")";
      }
      std::cout << "\n";
    }
  }
  std::cout << "nonzero structure constants f_abc, a < b < c:\n";
  for (int a = 0; a < basis.dim(); ++a) {
    for (int b = a + 1; b < basis.dim(); ++b) {
      for (int c = b + 1; c < basis.dim(); ++c) {
        const double f = basis.f(a, b, c);
        if (std::abs(f) > 1e-14) {
          std::cout << "  f_" << a + 1 << "," << b + 1 << "," << c + 1 << " = " << fmt(f) << "\n";
        }
      }
    }
  }
  return kOk;
}

void print_decomposition(const MatrixDecomposition& d) {
  std::cout << "  V0 = " << fmt(d.v0) << "\n";
  for (std::size_t k = 0; k < d.c.size(); ++k) {
    std::cout << "  C" << k + 1 << " = " << fmt(std::abs(d.c[k]) < 1e-15 ? 0.0 : d.c[k]) << "\n";
  }
}

/// Matrix file: a JSON list of rows; entries are numbers or [re, im].
CMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open matrix file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse_error, path + ": " + e.what());
  }
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::schema_violation, path + ": expected a list of rows");
  const int n = static_cast<int>(j.size());
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw Error(ErrorKind::schema_violation, path + ": row " + std::to_string(r + 1) + " must have " +
                                                   std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw Error(ErrorKind::schema_violation, path + ": entry (" + std::to_string(r + 1) + "," +
                                                     std::to_string(c + 1) + ") is not a number or [re, im]");
      }
    }
  }
  return m;
}

int cmd_decompose(const std::string& matrix_file, const Flags& f) {
  if (!matrix_file.empty()) {
    const CMatrix m = read_matrix(matrix_file);
    const SunBasis basis = SunBasis::build(static_cast<int>(m.rows()));
    std::cout << "V = V0 * 1 + sum_k C_k T_k, C_k = 2 Tr(V T_k)\n";
    print_decomposition(decompose(m, basis));
    return kOk;
  }
  const Scenario s = scenario_from_flags(f);
  const SunBasis basis = SunBasis::build(s.n_systems);
  const PotentialDecomposition d = s.profile.decompose(basis);
  for (std::size_t seg = 0; seg < d.segments(); ++seg) {
    std::cout << "segment " << seg + 1 << " [" << fmt(d.breakpoints[seg]) << ", " << fmt(d.breakpoints[seg + 1])
              << "]\n";
    print_decomposition({d.v0[seg], d.c[seg]});
  }
  return kOk;
}

int cmd_solve(const Flags& f) {
  const Scenario s = scenario_from_flags(f);
  const SolvedScenario solved = solve_scenario(s);
  const Grid grid = s.grid.grid();
  ReportBundle bundle;
  bundle.scenario_text = serialize_scenario(s);
  bundle.scenario_name = s.name;
  bundle.convention = s.model == Model::dirac ? s.convention : "none";
  bundle.spacing = grid.spacing();
  Table t{"solution", {"x"}, {}};
  const int n = s.n_systems;
  if (s.model == Model::dirac) {
    for (int i = 1; i <= n; ++i) {
      for (int c = 1; c <= 2; ++c) {
        t.header.push_back("re_psi" + std::to_string(i) + "_" + std::to_string(c));
        t.header.push_back("im_psi" + std::to_string(i) + "_" + std::to_string(c));
      }
    }
    const DiracStack psi = solved.dirac_stack();
    for (double x : grid.x) {
      const CVector u = psi.state(x);
      std::vector<double> row{x};
      for (int k = 0; k < u.size(); ++k) {
        row.push_back(u(k).real());
        row.push_back(u(k).imag());
      }
      t.rows.push_back(std::move(row));
    }
  } else {
    for (int i = 1; i <= n; ++i) {
      t.header.push_back("re_phi" + std::to_string(i));
      t.header.push_back("im_phi" + std::to_string(i));
    }
    for (int i = 1; i <= n; ++i) {
      t.header.push_back("re_dphi" + std::to_string(i));
      t.header.push_back("im_dphi" + std::to_string(i));
    }
    const WaveStack psi = solved.wave_stack();
    for (double x : grid.x) {
      const CVector u = psi.state(x);
      std::vector<double> row{x};
      for (int k = 0; k < u.size(); ++k) {
        row.push_back(u(k).real());
        row.push_back(u(k).imag());
      }
      t.rows.push_back(std::move(row));
    }
  }
  bundle.tables.push_back(std::move(t));
  return finish(bundle, out_dir(f));
}

int cmd_outputs(const Flags& f, std::vector<Output> outputs) {
  Scenario s = scenario_from_flags(f);
  s.requested_outputs = std::move(outputs);
  s.validate();
  return finish(run_scenario(s), out_dir(f));
}

std::vector<double> parse_h_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double h = 0.0;
    try {
      h = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !(h > 0.0)) throw Error(ErrorKind::invalid_argument, "--h entries must be positive numbers");
    out.push_back(h);
  }
  return out;
}

int cmd_scan(const Flags& f) {
  Scenario s = scenario_from_flags(f);
  const std::vector<double> hs = parse_h_list(f.h_list.empty() ? "1e-2,5e-3,2.5e-3" : f.h_list);
  if (hs.size() < 2) throw Error(ErrorKind::invalid_argument, "--h needs at least two spacings");
  const SolvedScenario solved = solve_scenario(s);
  ReportBundle bundle;
  bundle.scenario_text = serialize_scenario(s);
  bundle.scenario_name = s.name;
  bundle.convention = s.model == Model::dirac ? s.convention : "none";
  Table t{"scan", {"h", "n_points", "residual_norm", "residual_max", "order"}, {}};
  std::vector<GceReport> reports;
  const double span = s.grid.x_max - s.grid.x_min;
  for (double h : hs) {
    const double intervals = std::round(span / h);
    if (intervals < 2.0 || std::abs(intervals * h - span) > 1e-9 * span) {
      throw Error(ErrorKind::invalid_argument, "h=" + fmt(h) + " does not divide the grid span " + fmt(span));
    }
    reports.push_back(scenario_residual(s, solved, static_cast<std::size_t>(intervals) + 1));
  }
  for (std::size_t k = 0; k < reports.size(); ++k) {
    double order = std::nan("");
    if (k > 0) {
      order = convergence_order(reports[k - 1], reports[k]);
      const bool pass = std::abs(order - 2.0) <= 0.2;
      bundle.verdicts.push_back({"convergence order h=" + fmt(reports[k - 1].spacing) + " -> " + fmt(reports[k].spacing),
                                 pass, order, 0.2});
    }
    t.rows.push_back({reports[k].spacing, static_cast<double>(reports[k].x.size()), reports[k].residual_norm,
                      reports[k].residual_max, order});
    std::cout << "h=" << fmt(reports[k].spacing) << " residual_norm=" << fmt(reports[k].residual_norm)
              << (k > 0 ? " order=" + fmt(order) : std::string()) << "\n";
  }
  bundle.spacing = reports.back().spacing;
  bundle.tables.push_back(std::move(t));
  return finish(bundle, out_dir(f));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gce_lab: generalized continuity equations for coupled 1-D Dirac and Schrodinger systems", "gce_lab"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  // --h is the spacing list, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kToolVersion);

  Flags flags;
  app.add_option("--scenario", flags.scenario, "Scenario file path or shipped scenario name (e.g. fig2)");
  app.add_option("--out", flags.out, "Output directory (default: $GCE_LAB_OUT, else ./gce_out)");
  app.add_option("--grid", flags.grid, "Number of grid points, overrides the scenario (default 4001)")
      ->check(CLI::Range(std::size_t{3}, std::size_t{100000000}));
  app.add_option("--h", flags.h_list, "Comma-separated grid spacings for scan (default 1e-2,5e-3,2.5e-3)");
  app.add_option("--lambda", flags.lambda, "Override the strength of every delta barrier (system 1 entry)");
  app.add_option("--convention", flags.convention, "Gamma convention: default, vector, sigma-y, sigma-y-vector");
  app.add_option("--tol", flags.tol, "Domain constancy tolerance (default 1e-8)")->check(CLI::PositiveNumber);

  int rank = 2;
  auto* gen = app.add_subcommand("generators", "Print the su(N) generators and nonzero structure constants");
  gen->add_option("N", rank, "Rank N >= 2")->required();
  std::string matrix_file;
  auto* dec = app.add_subcommand("decompose", "Decompose a Hermitian matrix file (or a scenario's segments) into V0 and C_k");
  dec->add_option("matrix", matrix_file, "JSON file holding a list of matrix rows");
  auto* solve = app.add_subcommand("solve", "Solve a scenario and write the sampled solution");
  auto* cur = app.add_subcommand("currents", "Write the pair/generator/transformed current tables of a scenario");
  auto* ver = app.add_subcommand("gce-verify", "Write the continuity-equation residual table and verdict");
  auto* scan = app.add_subcommand("scan", "Residual norms over the --h spacings and the convergence order");
  auto* run = app.add_subcommand("run", "Run every output requested by a scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  flags.grid_set = app.count("--grid") > 0;
  flags.lambda_set = app.count("--lambda") > 0;
  flags.convention_set = app.count("--convention") > 0;
  flags.tol_set = app.count("--tol") > 0;

  try {
    if (*gen) return cmd_generators(rank);
    if (*dec) return cmd_decompose(matrix_file, flags);
    if (*solve) return cmd_solve(flags);
    if (*cur) return cmd_outputs(flags, {Output::currents});
    if (*ver) return cmd_outputs(flags, {Output::residuals});
    if (*scan) return cmd_scan(flags);
    if (*run) return finish(run_scenario(scenario_from_flags(flags)), out_dir(flags));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
