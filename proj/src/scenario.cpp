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

#include "gcelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gcelab/sun_algebra.hpp"

namespace gcelab {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::schema_violation, "key '" + key + "': " + what);
}

[[noreturn]] void invariant(const std::string& rule) {
  throw Error(ErrorKind::invariant_violation, rule);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) schema(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

cplx as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  schema(path, "expected a number or [re, im]");
}

/// A bare number is a multiple of the identity, a list of n numbers the
/// diagonal, a list of n rows a full matrix.
CMatrix as_matrix(const json& j, int n, const std::string& path) {
  if (j.is_number()) return CMatrix::Identity(n, n) * j.get<double>();
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    schema(path, "expected a number, " + std::to_string(n) + " diagonal entries or " +
                     std::to_string(n) + " rows");
  }
  CMatrix m = CMatrix::Zero(n, n);
  if (j[0].is_array()) {
    for (int r = 0; r < n; ++r) {
      const json& row = j[static_cast<std::size_t>(r)];
      const std::string rp = path + "[" + std::to_string(r) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        schema(rp, "row must have " + std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        m(r, c) = as_complex(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
      }
    }
    return m;
  }
  for (int r = 0; r < n; ++r) {
    m(r, r) = as_double(j[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]");
  }
  return m;
}

json complex_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

json matrix_json(const CMatrix& m) {
  bool diagonal_real = true;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if ((r != c && m(r, c) != cplx{}) || m(r, c).imag() != 0.0) diagonal_real = false;
    }
  }
  json out = json::array();
  if (diagonal_real) {
    for (int r = 0; r < m.rows(); ++r) out.push_back(m(r, r).real());
    return out;
  }
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

const std::vector<std::pair<Output, const char*>> kOutputNames = {
    {Output::currents, "currents"},
    {Output::residuals, "residuals"},
    {Output::domains, "domains"},
    {Output::charge_relation, "charge_relation"},
    {Output::delta_relation, "delta_relation"},
};

bool wants(const Scenario& s, Output o) {
  return std::find(s.requested_outputs.begin(), s.requested_outputs.end(), o) !=
         s.requested_outputs.end();
}

void positive(double v, const char* key) {
  if (!(v > 0.0) || !std::isfinite(v)) invariant(std::string(key) + " must be positive and finite");
}

}  // namespace

std::string_view to_string(Model m) { return m == Model::dirac ? "dirac" : "schrodinger"; }

std::string_view to_string(Output o) {
  for (const auto& [out, name] : kOutputNames) {
    if (out == o) return name;
  }
  return "unknown";
}

Convention Scenario::gamma_convention() const { return Convention::named(convention); }

TransformSpec Scenario::transform_spec() const {
  if (!transform) return TransformSpec::identity();
  if (transform->sigma == -1) return TransformSpec::parity(transform->rho / 2.0, gamma_convention());
  TransformSpec t = TransformSpec::translation(transform->rho);
  t.sigma = transform->sigma;
  return t;
}

void Scenario::validate() const {
  if (n_systems < 1) invariant("n_systems must be at least 1");
  if (profile.n_systems() != n_systems) invariant("profile matrices must be n_systems x n_systems");
  if (static_cast<int>(energies.size()) != n_systems) invariant("energies needs one entry per system");
  for (double e : energies) {
    if (!std::isfinite(e)) invariant("energies must be finite");
  }
  if (static_cast<int>(boundaries.size()) != n_systems) invariant("boundaries needs one entry per system");
  if (grid.n_points < 3) invariant("grid.n_points must be at least 3");
  if (!(grid.x_min < grid.x_max) || !std::isfinite(grid.x_min) || !std::isfinite(grid.x_max)) {
    invariant("grid.x_min must be finite and below grid.x_max");
  }
  positive(mass, "mass");
  positive(tol, "tol");
  positive(domain_tol, "domain_tol");
  positive(residual_tol, "residual_tol");
  positive(charge_tol, "charge_tol");
  positive(relation_tol, "relation_tol");
  try {
    gamma_convention();
  } catch (const Error& e) {
    invariant(std::string("convention: ") + e.what());
  }
  const int state_size = 2;
  for (const BoundarySpec& b : boundaries) {
    if (b.index() != boundaries.front().index()) invariant("boundaries must all be of one kind");
    if (const auto* iv = std::get_if<InitialValue>(&b)) {
      if (iv->state.size() != state_size) invariant("an initial state has two entries per system");
    } else if (std::get<Scattering>(b).incoming.size() != 1) {
      invariant("a scattering boundary has one amplitude per system");
    }
  }
  if (!profile.is_diagonal()) {
    for (double e : energies) {
      if (e != energies.front()) invariant("coupled profiles need one common energy");
    }
  }
  if (transform) {
    if (transform->sigma != 1 && transform->sigma != -1) invariant("transform.sigma must be +1 or -1");
    if (!std::isfinite(transform->rho)) invariant("transform.rho must be finite");
    if (model != Model::dirac) invariant("transforms apply to the dirac model only");
  }
  const bool needs_pair = wants(*this, Output::currents) || wants(*this, Output::residuals) ||
                          wants(*this, Output::domains) || wants(*this, Output::charge_relation) ||
                          wants(*this, Output::delta_relation);
  if (needs_pair) {
    if (n_systems < 2) invariant("current outputs need at least two systems");
    if (pair.first < 0 || pair.second < 0 || pair.first >= n_systems || pair.second >= n_systems ||
        pair.first == pair.second) {
      invariant("pair must name two distinct systems in 1..n_systems");
    }
  }
  if (generator && (*generator < 0 || *generator >= n_systems * n_systems - 1)) {
    invariant("generator must lie in 1..n_systems^2-1");
  }
  if ((wants(*this, Output::charge_relation) || wants(*this, Output::delta_relation)) &&
      model != Model::dirac) {
    invariant("charge_relation and delta_relation need the dirac model");
  }
  if (wants(*this, Output::delta_relation) && profile.deltas().empty()) {
    invariant("delta_relation needs a delta barrier in the profile");
  }
  std::set<Output> seen;
  for (Output o : requested_outputs) {
    if (!seen.insert(o).second) invariant("requested_outputs lists an entry twice");
  }
}

bool operator==(const Scenario& a, const Scenario& b) {
  auto same_profile = [](const PotentialProfile& p, const PotentialProfile& q) {
    if (p.n_systems() != q.n_systems() || p.segments().size() != q.segments().size() ||
        p.deltas().size() != q.deltas().size()) {
      return false;
    }
    for (std::size_t k = 0; k < p.segments().size(); ++k) {
      const Segment& s = p.segments()[k];
      const Segment& t = q.segments()[k];
      if (s.x_lo != t.x_lo || s.x_hi != t.x_hi || s.v != t.v) return false;
    }
    for (std::size_t k = 0; k < p.deltas().size(); ++k) {
      if (p.deltas()[k].x0 != q.deltas()[k].x0 || p.deltas()[k].strength != q.deltas()[k].strength) {
        return false;
      }
    }
    return true;
  };
  auto same_boundaries = [](const std::vector<BoundarySpec>& p, const std::vector<BoundarySpec>& q) {
    if (p.size() != q.size()) return false;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k].index() != q[k].index()) return false;
      if (const auto* iv = std::get_if<InitialValue>(&p[k])) {
        if (iv->state != std::get<InitialValue>(q[k]).state) return false;
      } else if (std::get<Scattering>(p[k]).incoming != std::get<Scattering>(q[k]).incoming) {
        return false;
      }
    }
    return true;
  };
  return a.name == b.name && a.model == b.model && a.n_systems == b.n_systems &&
         same_profile(a.profile, b.profile) && a.energies == b.energies &&
         same_boundaries(a.boundaries, b.boundaries) && a.convention == b.convention &&
         a.mass == b.mass && a.transform == b.transform && a.grid == b.grid && a.pair == b.pair &&
         a.generator == b.generator && a.tol == b.tol && a.domain_tol == b.domain_tol &&
         a.residual_tol == b.residual_tol && a.charge_tol == b.charge_tol &&
         a.relation_tol == b.relation_tol && a.expect_locality == b.expect_locality &&
         a.requested_outputs == b.requested_outputs;
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::parse_error, "line " + std::to_string(line) + ", column " +
                                            std::to_string(column) + ": " + e.what());
  }
  allow_keys(root, "",
             {"name", "model", "n_systems", "profile", "energies", "boundaries", "convention", "mass",
              "transform", "grid", "pair", "generator", "tol", "domain_tol", "residual_tol",
              "charge_tol", "relation_tol", "expect_locality", "requested_outputs"});

  Scenario s;
  const json& name = require(root, "", "name");
  if (!name.is_string()) schema("name", "expected a string");
  s.name = name.get<std::string>();

  const json& model = require(root, "", "model");
  if (model == "dirac") {
    s.model = Model::dirac;
  } else if (model == "schrodinger") {
    s.model = Model::schrodinger;
  } else {
    schema("model", "expected \"dirac\" or \"schrodinger\"");
  }
  s.n_systems = as_int(require(root, "", "n_systems"), "n_systems");
  if (s.n_systems < 1) invariant("n_systems must be at least 1");
  const int n = s.n_systems;

  const json& prof = require(root, "", "profile");
  allow_keys(prof, "profile", {"segments", "deltas"});
  const json& segs = require(prof, "profile", "segments");
  if (!segs.is_array()) schema("profile.segments", "expected a list");
  std::vector<Segment> segments;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const std::string p = "profile.segments[" + std::to_string(k) + "]";
    allow_keys(segs[k], p, {"x_lo", "x_hi", "v"});
    segments.push_back({as_double(require(segs[k], p, "x_lo"), p + ".x_lo"),
                        as_double(require(segs[k], p, "x_hi"), p + ".x_hi"),
                        as_matrix(require(segs[k], p, "v"), n, p + ".v")});
  }
  std::vector<DeltaBarrier> deltas;
  if (auto it = prof.find("deltas"); it != prof.end()) {
    if (!it->is_array()) schema("profile.deltas", "expected a list");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& d = (*it)[k];
      const std::string p = "profile.deltas[" + std::to_string(k) + "]";
      allow_keys(d, p, {"x0", "strength"});
      deltas.push_back({as_double(require(d, p, "x0"), p + ".x0"),
                        as_matrix(require(d, p, "strength"), n, p + ".strength")});
    }
  }
  try {
    s.profile = PotentialProfile(n, std::move(segments), std::move(deltas));
  } catch (const Error& e) {
    schema("profile", e.what());
  }

  const json& energies = require(root, "", "energies");
  if (!energies.is_array()) schema("energies", "expected a list");
  for (std::size_t k = 0; k < energies.size(); ++k) {
    s.energies.push_back(as_double(energies[k], "energies[" + std::to_string(k) + "]"));
  }

  const json& bounds = require(root, "", "boundaries");
  if (!bounds.is_array()) schema("boundaries", "expected a list");
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const json& b = bounds[k];
    const std::string p = "boundaries[" + std::to_string(k) + "]";
    if (!b.is_object()) schema(p, "expected an object");
    const json& kind = require(b, p, "kind");
    if (kind == "scattering") {
      allow_keys(b, p, {"kind", "amplitude"});
      CVector amp(1);
      amp(0) = as_complex(require(b, p, "amplitude"), p + ".amplitude");
      s.boundaries.emplace_back(Scattering{amp});
    } else if (kind == "initial") {
      allow_keys(b, p, {"kind", "state"});
      const json& st = require(b, p, "state");
      if (!st.is_array()) schema(p + ".state", "expected a list");
      CVector v(static_cast<int>(st.size()));
      for (std::size_t c = 0; c < st.size(); ++c) {
        v(static_cast<int>(c)) = as_complex(st[c], p + ".state[" + std::to_string(c) + "]");
      }
      s.boundaries.emplace_back(InitialValue{v});
    } else {
      schema(p + ".kind", "expected \"scattering\" or \"initial\"");
    }
  }

  if (auto it = root.find("convention"); it != root.end()) {
    if (!it->is_string()) schema("convention", "expected a string");
    s.convention = it->get<std::string>();
  }
  if (auto it = root.find("mass"); it != root.end()) s.mass = as_double(*it, "mass");
  if (auto it = root.find("transform"); it != root.end()) {
    allow_keys(*it, "transform", {"sigma", "rho"});
    ScenarioTransform t;
    t.sigma = as_int(require(*it, "transform", "sigma"), "transform.sigma");
    if (auto r = it->find("rho"); r != it->end()) t.rho = as_double(*r, "transform.rho");
    s.transform = t;
  }
  const json& grid = require(root, "", "grid");
  allow_keys(grid, "grid", {"x_min", "x_max", "n_points"});
  s.grid.x_min = as_double(require(grid, "grid", "x_min"), "grid.x_min");
  s.grid.x_max = as_double(require(grid, "grid", "x_max"), "grid.x_max");
  if (auto it = grid.find("n_points"); it != grid.end()) {
    const int np = as_int(*it, "grid.n_points");
    if (np < 3) invariant("grid.n_points must be at least 3");
    s.grid.n_points = static_cast<std::size_t>(np);
  }
  if (auto it = root.find("pair"); it != root.end()) {
    if (!it->is_array() || it->size() != 2) schema("pair", "expected [i, j]");
    s.pair = {as_int((*it)[0], "pair[0]") - 1, as_int((*it)[1], "pair[1]") - 1};
  }
  if (auto it = root.find("generator"); it != root.end()) s.generator = as_int(*it, "generator") - 1;
  for (auto [key, field] : {std::pair{"tol", &s.tol}, {"domain_tol", &s.domain_tol},
                            {"residual_tol", &s.residual_tol}, {"charge_tol", &s.charge_tol},
                            {"relation_tol", &s.relation_tol}}) {
    if (auto it = root.find(key); it != root.end()) *field = as_double(*it, key);
  }
  if (auto it = root.find("expect_locality"); it != root.end()) {
    if (!it->is_boolean()) schema("expect_locality", "expected true or false");
    s.expect_locality = it->get<bool>();
  }
  if (auto it = root.find("requested_outputs"); it != root.end()) {
    if (!it->is_array()) schema("requested_outputs", "expected a list");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string p = "requested_outputs[" + std::to_string(k) + "]";
      const json& o = (*it)[k];
      if (!o.is_string()) schema(p, "expected a string");
      auto match = std::find_if(kOutputNames.begin(), kOutputNames.end(),
                                [&](const auto& e) { return o == e.second; });
      if (match == kOutputNames.end()) schema(p, "unknown output '" + o.get<std::string>() + "'");
      s.requested_outputs.push_back(match->first);
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  json root;
  root["name"] = s.name;
  root["model"] = std::string(to_string(s.model));
  root["n_systems"] = s.n_systems;
  json segs = json::array();
  for (const Segment& seg : s.profile.segments()) {
    segs.push_back({{"x_lo", seg.x_lo}, {"x_hi", seg.x_hi}, {"v", matrix_json(seg.v)}});
  }
  json deltas = json::array();
  for (const DeltaBarrier& d : s.profile.deltas()) {
    deltas.push_back({{"x0", d.x0}, {"strength", matrix_json(d.strength)}});
  }
  root["profile"] = {{"segments", segs}, {"deltas", deltas}};
  root["energies"] = s.energies;
  json bounds = json::array();
  for (const BoundarySpec& b : s.boundaries) {
    if (const auto* iv = std::get_if<InitialValue>(&b)) {
      json st = json::array();
      for (int k = 0; k < iv->state.size(); ++k) st.push_back(complex_json(iv->state(k)));
      bounds.push_back({{"kind", "initial"}, {"state", st}});
    } else {
      bounds.push_back(
          {{"kind", "scattering"}, {"amplitude", complex_json(std::get<Scattering>(b).incoming(0))}});
    }
  }
  root["boundaries"] = bounds;
  root["convention"] = s.convention;
  root["mass"] = s.mass;
  if (s.transform) root["transform"] = {{"sigma", s.transform->sigma}, {"rho", s.transform->rho}};
  root["grid"] = {{"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}, {"n_points", s.grid.n_points}};
  root["pair"] = {s.pair.first + 1, s.pair.second + 1};
  if (s.generator) root["generator"] = *s.generator + 1;
  root["tol"] = s.tol;
  root["domain_tol"] = s.domain_tol;
  root["residual_tol"] = s.residual_tol;
  root["charge_tol"] = s.charge_tol;
  root["relation_tol"] = s.relation_tol;
  root["expect_locality"] = s.expect_locality;
  json outs = json::array();
  for (Output o : s.requested_outputs) outs.push_back(std::string(to_string(o)));
  root["requested_outputs"] = outs;
  return root.dump(2) + "\n";
}

std::filesystem::path resolve_scenario(const std::string& path_or_name) {
  const std::filesystem::path direct(path_or_name);
  if (std::filesystem::is_regular_file(direct)) return direct;
  const std::filesystem::path shipped =
      std::filesystem::path(GCE_LAB_SCENARIO_DIR) / (path_or_name + ".json");
  if (direct.extension().empty() && direct.parent_path().empty() &&
      std::filesystem::is_regular_file(shipped)) {
    return shipped;
  }
  throw Error(ErrorKind::io_error, "no scenario file or shipped scenario named '" + path_or_name + "'");
}

void set_delta_strength(Scenario& s, double lambda) {
  std::vector<Segment> segments(s.profile.segments().begin(), s.profile.segments().end());
  std::vector<DeltaBarrier> deltas(s.profile.deltas().begin(), s.profile.deltas().end());
  for (DeltaBarrier& d : deltas) d.strength(0, 0) = lambda;
  s.profile = PotentialProfile(s.n_systems, std::move(segments), std::move(deltas));
}

SolvedScenario solve_scenario(const Scenario& s) {
  s.validate();
  SolvedScenario out;
  const int n = s.n_systems;
  auto solve_one = [&](const PotentialProfile& p, double e, const BoundarySpec& b) {
    if (s.model == Model::dirac) {
      out.dirac.push_back(solve_dirac(p, e, b, s.gamma_convention()));
    } else {
      out.wave.push_back(solve_schrodinger(p, e, b, s.mass));
    }
  };
  if (s.profile.is_diagonal()) {
    for (int i = 0; i < n; ++i) {
      solve_one(s.profile.restrict_to(i), s.energies[static_cast<std::size_t>(i)],
                s.boundaries[static_cast<std::size_t>(i)]);
      out.owner.emplace_back(static_cast<std::size_t>(i), 0);
    }
    return out;
  }
  // Joint solve: per-system boundary blocks stacked in the solver layout.
  BoundarySpec joint;
  if (std::holds_alternative<Scattering>(s.boundaries.front())) {
    CVector amp(n);
    for (int i = 0; i < n; ++i) amp(i) = std::get<Scattering>(s.boundaries[static_cast<std::size_t>(i)]).incoming(0);
    joint = Scattering{amp};
  } else {
    CVector st(2 * n);
    for (int i = 0; i < n; ++i) {
      const CVector& b = std::get<InitialValue>(s.boundaries[static_cast<std::size_t>(i)]).state;
      if (s.model == Model::dirac) {
        st.segment<2>(2 * i) = b;
      } else {
        st(i) = b(0);
        st(n + i) = b(1);
      }
    }
    joint = InitialValue{st};
  }
  solve_one(s.profile, s.energies.front(), joint);
  for (int i = 0; i < n; ++i) out.owner.emplace_back(0, i);
  return out;
}

GceReport scenario_residual(const Scenario& s, const SolvedScenario& solved, std::size_t n_points) {
  const SunBasis basis = SunBasis::build(s.n_systems);
  const Grid grid = Grid::uniform(s.grid.x_min, s.grid.x_max, n_points);
  const PotentialDecomposition decomp = s.profile.decompose(basis);
  const auto [i, j] = s.pair;
  if (s.model == Model::dirac) {
    const DiracStack psi = solved.dirac_stack();
    if (s.generator) return gce_residual_dirac(psi, basis, *s.generator, grid, decomp);
    return gce_residual_dirac_pair(psi, basis, i, j, grid, decomp);
  }
  const WaveStack psi = solved.wave_stack();
  if (s.generator) return gce_residual_schrodinger(psi, basis, *s.generator, grid, decomp);
  return gce_residual_schrodinger_pair(psi, basis, i, j, grid, decomp);
}

bool ReportBundle::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass || !v.counts; });
}

namespace {

Table current_table(const std::string& name, const CurrentProfile& c) {
  Table t{name, {"x", "re_j1", "im_j1", "re_j0", "im_j0"}, {}};
  for (std::size_t k = 0; k < c.x.size(); ++k) {
    t.rows.push_back({c.x[k], c.j1[k].real(), c.j1[k].imag(), c.j0[k].real(), c.j0[k].imag()});
  }
  return t;
}

std::string pair_suffix(std::pair<int, int> p) {
  return std::to_string(p.first + 1) + "_" + std::to_string(p.second + 1);
}

const SpinorSolution& block_of(const SolvedScenario& solved, int system, int& local) {
  const auto [block, idx] = solved.owner.at(static_cast<std::size_t>(system));
  local = idx;
  return solved.dirac.at(block);
}

void run_outputs(const Scenario& s, ReportBundle& bundle) {
  const SolvedScenario solved = solve_scenario(s);
  const Grid grid = s.grid.grid();
  bundle.spacing = grid.spacing();
  const auto [pi, pj] = s.pair;
  const bool dirac = s.model == Model::dirac;
  const TransformSpec spec = s.transform_spec();
  const bool transformed = !spec.is_identity();

  std::optional<SunBasis> basis;
  if (s.n_systems >= 2) basis = SunBasis::build(s.n_systems);

  auto pair_current = [&]() {
    if (dirac) return dirac_pair_current(solved.dirac_stack(), pi, pj, *basis, grid);
    return schrodinger_pair_current(solved.wave_stack(), pi, pj, *basis, grid);
  };
  auto domain_current = [&]() {
    if (!transformed) return pair_current();
    int li = 0;
    int lj = 0;
    const SpinorSolution& si = block_of(solved, pi, li);
    const SpinorSolution& sj = block_of(solved, pj, lj);
    return transformed_current(si, li, sj, lj, spec, grid);
  };

  if (wants(s, Output::currents)) {
    bundle.tables.push_back(current_table("currents_pair_" + pair_suffix(s.pair), pair_current()));
    if (s.generator) {
      const CurrentProfile g = dirac ? dirac_current(solved.dirac_stack(), *s.generator, *basis, grid)
                                     : schrodinger_current(solved.wave_stack(), *s.generator, *basis, grid);
      bundle.tables.push_back(current_table("currents_generator_" + std::to_string(*s.generator + 1), g));
    }
    if (transformed) bundle.tables.push_back(current_table("currents_transformed", domain_current()));
  }

  if (wants(s, Output::residuals)) {
    const GceReport r = scenario_residual(s, solved, s.grid.n_points);
    Table t{"residuals",
            {"x", "re_residual", "im_residual", "re_divergence", "im_divergence", "re_time_term",
             "im_time_term", "re_source", "im_source"},
            {}};
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      t.rows.push_back({r.x[k], r.residual[k].real(), r.residual[k].imag(), r.divergence[k].real(),
                        r.divergence[k].imag(), r.time_term[k].real(), r.time_term[k].imag(),
                        r.source[k].real(), r.source[k].imag()});
    }
    bundle.tables.push_back(std::move(t));
    bundle.verdicts.push_back({"residual " + r.label, r.consistent(s.residual_tol), r.residual_max,
                               s.residual_tol * std::max(1.0, r.term_scale)});
  }

  if (wants(s, Output::domains)) {
    const std::vector<Domain> domains = detect_domains(s.profile, pi, pj, spec, s.domain_tol);
    const CurrentProfile c = domain_current();
    const std::vector<DomainStat> stats = domain_stats(c.x, c.j1, domains);
    Table t{"domains", {"x_lo", "x_hi", "samples", "re_mean", "im_mean", "max_deviation", "pass"}, {}};
    bundle.verdicts.push_back({"domains detected", !domains.empty(), static_cast<double>(domains.size()), 1.0});
    for (std::size_t k = 0; k < stats.size(); ++k) {
      const DomainStat& st = stats[k];
      const bool pass = st.samples > 0 && st.max_deviation <= s.tol;
      t.rows.push_back({st.domain.x_lo, st.domain.x_hi, static_cast<double>(st.samples), st.mean.real(),
                        st.mean.imag(), st.max_deviation, pass ? 1.0 : 0.0});
      bundle.verdicts.push_back({"domain " + std::to_string(k + 1) + " constancy", pass, st.max_deviation, s.tol});
    }
    bundle.tables.push_back(std::move(t));

    // Relative variation of the same current outside every domain.
    const DomainStat* ref = nullptr;
    for (const DomainStat& st : stats) {
      if (st.samples > 0 && (ref == nullptr || st.samples > ref->samples)) ref = &st;
    }
    if (ref != nullptr) {
      double variation = 0.0;
      std::size_t outside = 0;
      for (std::size_t k = 0; k < c.x.size(); ++k) {
        const bool inside = std::any_of(domains.begin(), domains.end(),
                                        [&](const Domain& d) { return d.contains(c.x[k]); });
        const bool edge = std::any_of(domains.begin(), domains.end(), [&](const Domain& d) {
          return d.x_lo == c.x[k] || d.x_hi == c.x[k];
        });
        if (inside || edge) continue;
        ++outside;
        variation = std::max(variation, std::abs(c.j1[k] - ref->mean) / std::max(std::abs(ref->mean), 1e-30));
      }
      if (outside > 0) {
        bundle.verdicts.push_back({"locality outside domains", variation >= 0.1, variation, 0.1,
                                   s.expect_locality});
      }
    }
  }

  if (wants(s, Output::charge_relation)) {
    int li = 0;
    int lj = 0;
    const SpinorSolution& si = block_of(solved, pi, li);
    const SpinorSolution& sj = block_of(solved, pj, lj);
    const ChargeRelation cr = charge_current_relation(si, sj, s.grid.x_min, s.grid.x_max, 10000, li, lj);
    bundle.tables.push_back({"charge_relation",
                             {"re_q", "im_q", "re_boundary_value", "im_boundary_value", "discrepancy"},
                             {{cr.q.real(), cr.q.imag(), cr.boundary_value.real(), cr.boundary_value.imag(),
                               cr.discrepancy}}});
    const double threshold = s.charge_tol * std::max(1.0, std::abs(cr.q));
    bundle.verdicts.push_back({"charge-current relation", cr.discrepancy <= threshold, cr.discrepancy, threshold});
  }

  if (wants(s, Output::delta_relation)) {
    if (!s.profile.is_diagonal()) {
      throw Error(ErrorKind::invalid_argument, "delta_relation needs a diagonal profile");
    }
    const Convention conv = s.gamma_convention();
    const double x0 = s.profile.deltas().front().x0;
    const DeltaBarrier* d1 = s.profile.delta_at(x0);
    const DeltaBarrier* d2 = s.profile.delta_at(spec.map(x0));
    const CMatrix j1 = delta_junction(CMatrix::Constant(1, 1, d1->strength(pi, pi)), conv);
    const CMatrix j2 = d2 == nullptr ? CMatrix::Identity(2, 2)
                                     : delta_junction(CMatrix::Constant(1, 1, d2->strength(pj, pj)), conv);
    const std::vector<Domain> domains = detect_domains(s.profile, pi, pj, spec, s.domain_tol);
    int li = 0;
    int lj = 0;
    const SpinorSolution& si = block_of(solved, pi, li);
    const SpinorSolution& sj = block_of(solved, pj, lj);
    const DeltaRelation dr = delta_domain_relation(si, li, sj, lj, x0, j1, j2, spec, grid, domains);
    bundle.tables.push_back({"delta_relation",
                             {"re_c_minus", "im_c_minus", "re_c_plus", "im_c_plus", "re_predicted_c_plus",
                              "im_predicted_c_plus", "deviation", "constancy_minus", "constancy_plus"},
                             {{dr.c_minus.real(), dr.c_minus.imag(), dr.c_plus.real(), dr.c_plus.imag(),
                               dr.predicted_c_plus.real(), dr.predicted_c_plus.imag(), dr.deviation,
                               dr.constancy_minus, dr.constancy_plus}}});
    const double threshold = s.relation_tol * std::max(1.0, std::abs(dr.c_plus));
    bundle.verdicts.push_back({"junction relation", dr.deviation <= threshold, dr.deviation, threshold});
    bundle.verdicts.push_back({"constancy left of delta", dr.constancy_minus <= s.tol, dr.constancy_minus, s.tol});
    bundle.verdicts.push_back({"constancy right of delta", dr.constancy_plus <= s.tol, dr.constancy_plus, s.tol});
  }
}

}  // namespace

ReportBundle run_scenario(const Scenario& s) {
  ReportBundle bundle;
  bundle.scenario_text = serialize_scenario(s);
  bundle.scenario_name = s.name;
  bundle.convention = s.model == Model::dirac ? s.convention : "none";
  try {
    run_outputs(s, bundle);
  } catch (const Error& e) {
    throw Error(e.kind(), "scenario '" + s.name + "': " + e.what());
  }
  return bundle;
}

}  // namespace gcelab
