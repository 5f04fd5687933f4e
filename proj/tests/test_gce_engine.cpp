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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fixtures.hpp"
#include "gcelab/gce_engine.hpp"
#include "test_support.hpp"

namespace {

using namespace gcelab;
using oracle::I;
using std::numbers::pi;

const double kInf = std::numeric_limits<double>::infinity();

/// psi_1^dag gamma0 gamma1 psi_2 with the default matrices written out.
cplx bilinear_j1(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  return a.dot(oracle::sz() * (I * oracle::sx()) * b);
}

double max_rel_deviation(const std::vector<cplx>& v, std::size_t lo, std::size_t hi) {
  cplx mean{};
  for (std::size_t k = lo; k < hi; ++k) mean += v[k];
  mean /= static_cast<double>(hi - lo);
  double dev = 0.0;
  for (std::size_t k = lo; k < hi; ++k) dev = std::max(dev, std::abs(v[k] - mean));
  return dev / std::max(std::abs(mean), 1e-30);
}

// ------------------------------------------------------------ currents

TEST(DiracCurrent, IdenticalSystemsCartanCurrentVanishes) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-2.0, 0.0, 2.0}, {{0.4, 0.4}, {-0.3, -0.3}});
  const Convention c = Convention::standard();
  const DiracStack psi(fixtures::scatter_each(p, {1.5, 1.5}, {1.0, 1.0}, c));
  const SunBasis basis = SunBasis::build(2);
  const CurrentProfile j = dirac_current(psi, basis.cartan_index(2), basis, Grid::uniform(-5, 5, 201));
  for (const cplx v : j.j1) EXPECT_LE(std::abs(v), 1e-14);
  EXPECT_EQ(j.generator, 2);
}

TEST(DiracCurrent, EqualFreeStatesGiveProbabilityCurrent) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-1.0, 1.0}, {{0.0, 0.0}});
  const Convention c = Convention::standard();
  const auto sols = fixtures::scatter_each(p, {1.2, 1.2}, {cplx(0.6, 0.8), cplx(0.6, 0.8)}, c);
  const DiracStack psi(sols);
  const Grid g = Grid::uniform(-4, 4, 81);
  const CurrentProfile j = dirac_pair_current(psi, 0, 1, SunBasis::build(2), g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Eigen::Vector2cd u = sols[0].at(g.x[k]);
    EXPECT_LE(std::abs(j.j1[k] - bilinear_j1(u, u)), 1e-14);
    EXPECT_LE(std::abs(j.j0[k] - u.squaredNorm()), 1e-14);
  }
}

TEST(DiracCurrent, PairCurrentConstantOnlyInsideWindow) {
  const Convention c = Convention::standard();
  const auto sols = fixtures::scatter_each(fixtures::local_window(), {2.0, 2.0}, {1.0, cplx(0.6, 0.8)}, c);
  const DiracStack psi(sols);
  const Grid g = Grid::uniform(-10, 10, 4001);
  const CurrentProfile j = dirac_pair_current(psi, 0, 1, SunBasis::build(2), g);
  // (-3, 3) holds samples 1401..2599.
  EXPECT_LE(max_rel_deviation(j.j1, 1401, 2600), 1e-8);
  EXPECT_GE(max_rel_deviation(j.j1, 0, 4001), 0.1);

  // Fine-grid divergence of the bilinear built from the solution spinors.
  auto jx = [&](double x) { return bilinear_j1(sols[0].at(x), sols[1].at(x)); };
  const double h = 1e-4;
  for (double x : {-2.5, -0.3, 1.0, 2.9}) EXPECT_LE(std::abs(jx(x + h) - jx(x - h)) / (2 * h), 1e-6) << x;
  double outside = 0.0;
  for (double x : {-5.0, -4.0, 4.0, 5.0}) outside = std::max(outside, std::abs(jx(x + h) - jx(x - h)) / (2 * h));
  EXPECT_GT(outside, 1e-2);
}

TEST(DiracCurrent, MixedConventionsRejected) {
  const PotentialProfile p = fixtures::local_window();
  std::vector<SpinorSolution> blocks{
      solve_dirac(p.restrict_to(0), 2.0, Scattering{fixtures::amplitude(1.0)}, Convention::standard()),
      solve_dirac(p.restrict_to(1), 2.0, Scattering{fixtures::amplitude(1.0)}, Convention::named("sigma-y"))};
  try {
    DiracStack psi(blocks);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_convention);
  }
  const auto sols = fixtures::scatter_each(p, {2.0, 2.0}, {1.0, 1.0}, Convention::standard());
  const DiracStack psi(sols);
  EXPECT_THROW(dirac_current(psi, 0, SunBasis::build(3), Grid::uniform(0, 1, 3)), Error);
  EXPECT_THROW(dirac_pair_current(psi, 0, 2, SunBasis::build(2), Grid::uniform(0, 1, 3)), Error);
}

TEST(DiracCurrent, HermitianPairing) {
  for (const std::string& name : Convention::names()) {
    const auto sols = fixtures::scatter_each(fixtures::unequal(), {2.0, 2.5}, {1.0, cplx(0.6, 0.8)},
                                             Convention::named(name));
    const DiracStack psi(sols);
    const SunBasis basis = SunBasis::build(2);
    const Grid g = Grid::uniform(-4, 4, 801);
    const CurrentProfile a = dirac_pair_current(psi, 0, 1, basis, g);
    const CurrentProfile b = dirac_pair_current(psi, 1, 0, basis, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_LE(std::abs(a.j1[k] - std::conj(b.j1[k])), 1e-13);
      EXPECT_LE(std::abs(a.j0[k] - std::conj(b.j0[k])), 1e-13);
    }
  }
}

TEST(SchrodingerCurrent, IdenticalSystemsCartanCurrentVanishes) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-2.0, 0.0, 2.0}, {{0.4, 0.4}, {1.3, 1.3}});
  const WaveStack psi(fixtures::scatter_each_wave(p, {1.6, 1.6}, {1.0, 1.0}, 1.0));
  const SunBasis basis = SunBasis::build(2);
  const CurrentProfile j = schrodinger_current(psi, 2, basis, Grid::uniform(-5, 5, 201));
  for (const cplx v : j.j1) EXPECT_LE(std::abs(v), 1e-14);
}

TEST(SchrodingerCurrent, FreePlaneWavePairClosedForm) {
  const double m = 0.7;
  const double k1 = 1.1;
  const double k2 = 1.6;
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-1.0, 1.0}, {{0.0, 0.0}});
  const WaveStack psi(
      fixtures::scatter_each_wave(p, {k1 * k1 / (2 * m), k2 * k2 / (2 * m)}, {1.0, 1.0}, m));
  const Grid g = Grid::uniform(-6, 6, 241);
  const CurrentProfile j = schrodinger_pair_current(psi, 0, 1, SunBasis::build(2), g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const cplx expect = (k1 + k2) / (2 * m) * std::exp(I * (k2 - k1) * g.x[k]);
    EXPECT_LE(std::abs(j.j1[k] - expect), 1e-13);
    EXPECT_NEAR(std::abs(j.j1[k]), (k1 + k2) / (2 * m), 1e-13);
  }
}

TEST(SchrodingerCurrent, PairCurrentConstantOnWindow) {
  const WaveStack psi(fixtures::scatter_each_wave(fixtures::local_window(), {1.5, 1.5}, {1.0, cplx(0.6, 0.8)}, 1.0));
  const Grid g = Grid::uniform(-10, 10, 4001);
  const CurrentProfile j = schrodinger_pair_current(psi, 0, 1, SunBasis::build(2), g);
  cplx ref = j.j1[1401];
  for (std::size_t k = 1401; k < 2600; ++k) EXPECT_LE(std::abs(j.j1[k] - ref), 1e-10);
  const CurrentProfile b = schrodinger_pair_current(psi, 1, 0, SunBasis::build(2), g);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LE(std::abs(j.j1[k] - std::conj(b.j1[k])), 1e-13);
}

// ------------------------------------------------------------ domains

TEST(DetectDomains, IdenticalProfilesGiveWholeLine) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-2.0, 0.0, 2.0}, {{0.4, 0.4}, {-0.3, -0.3}});
  const auto d = detect_domains(p, 0, 1, TransformSpec::identity(), 1e-12);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].x_lo, -kInf);
  EXPECT_EQ(d[0].x_hi, kInf);
}

TEST(DetectDomains, DeltaSplitsMirrorDomain) {
  const Convention c = Convention::named("vector");
  const auto d = detect_domains(fixtures::mirror_with_delta(pi / 3), 0, 1, TransformSpec::parity(0.0, c), 1e-12);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].x_lo, -kInf);
  EXPECT_EQ(d[0].x_hi, 0.0);
  EXPECT_EQ(d[1].x_lo, 0.0);
  EXPECT_EQ(d[1].x_hi, kInf);
  // Without the delta the mirror symmetry holds everywhere.
  const auto whole = detect_domains(fixtures::mirror_with_delta(0.0), 0, 1, TransformSpec::parity(0.0, c), 1e-12);
  ASSERT_EQ(whole.size(), 1u);
}

TEST(DetectDomains, WindowsFromSegments) {
  const auto d = detect_domains(fixtures::local_window(), 0, 1, TransformSpec::identity(), 1e-12);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].x_lo, -3.0);
  EXPECT_EQ(d[0].x_hi, 3.0);
  const auto m = detect_domains(fixtures::mirror_window(), 0, 1,
                                TransformSpec::parity(0.0, Convention::standard()), 1e-12);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].x_lo, -3.0);
  EXPECT_EQ(m[0].x_hi, 3.0);
  const auto t = detect_domains(fixtures::shifted_window(), 0, 1, TransformSpec::translation(2.0), 1e-12);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].x_lo, -6.0);
  EXPECT_EQ(t[0].x_hi, 2.0);
}

TEST(DetectDomains, DisjointWindowsCarryTheirOwnConstants) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-9.0, -6.0, -3.0, 3.0, 6.0, 9.0},
                                                        {{1.0, 0.2}, {0.5, 0.5}, {1.0, 0.2}, {0.3, 0.3}, {0.7, 0.1}});
  const auto d = detect_domains(p, 0, 1, TransformSpec::identity(), 1e-12);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].x_lo, -6.0);
  EXPECT_EQ(d[0].x_hi, -3.0);
  EXPECT_EQ(d[1].x_lo, 3.0);
  EXPECT_EQ(d[1].x_hi, 6.0);
  const DiracStack psi(fixtures::scatter_each(p, {2.0, 2.0}, {1.0, cplx(0.0, 1.0)}, Convention::standard()));
  CurrentProfile j = dirac_pair_current(psi, 0, 1, SunBasis::build(2), Grid::uniform(-12, 12, 2401));
  j.compute_domain_stats(d);
  ASSERT_EQ(j.domain_stats.size(), 2u);
  for (const DomainStat& s : j.domain_stats) {
    EXPECT_GT(s.samples, 200u);
    EXPECT_LE(s.max_deviation, 1e-8);
  }
  EXPECT_GT(std::abs(j.domain_stats[0].mean - j.domain_stats[1].mean), 1e-3);
}

TEST(DetectDomains, Errors) {
  const PotentialProfile p = fixtures::local_window();
  try {
    detect_domains(p, 0, 2, TransformSpec::identity(), 1e-12);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::index_out_of_range);
  }
  EXPECT_THROW(detect_domains(p, 0, 1, TransformSpec::identity(), 0.0), Error);
  TransformSpec bad;
  bad.sigma = 2;
  EXPECT_THROW(detect_domains(p, 0, 1, bad, 1e-12), Error);
}

TEST(DomainStats, DeviationMetric) {
  const std::vector<double> x{-1.0, 0.0, 1.0, 2.0, 3.0};
  const std::vector<cplx> v{5.0, 2.0, 2.0, 2.2, 9.0};
  const std::vector<Domain> d{{-0.5, 2.5, TransformSpec::identity()}};
  const auto s = domain_stats(x, v, d);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].samples, 3u);
  EXPECT_NEAR(s[0].mean.real(), 6.2 / 3.0, 1e-15);
  EXPECT_NEAR(s[0].max_deviation, (2.2 - 6.2 / 3.0) / (6.2 / 3.0), 1e-14);
}

// ------------------------------------------------------- transformed

TEST(TransformedCurrent, IdentityReproducesPairCurrentBitwise) {
  const Convention c = Convention::standard();
  const auto sols = fixtures::scatter_each(fixtures::local_window(), {2.0, 2.0}, {1.0, cplx(0.6, 0.8)}, c);
  const DiracStack psi(sols);
  const Grid g = Grid::uniform(-10, 10, 4001);
  const CurrentProfile pair = dirac_pair_current(psi, 0, 1, SunBasis::build(2), g);
  const CurrentProfile t = transformed_current(sols[0], 0, sols[1], 0, TransformSpec::identity(), g);
  ASSERT_EQ(t.j1.size(), pair.j1.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(t.j1[k], pair.j1[k]);
    EXPECT_EQ(t.j0[k], pair.j0[k]);
  }
}

TEST(TransformedCurrent, ParityConstantOnMirrorWindow) {
  const Convention c = Convention::standard();
  const PotentialProfile p = fixtures::mirror_window();
  const auto sols = fixtures::scatter_each(p, {2.0, 2.0}, {1.0, 1.0}, c);
  const TransformSpec spec = TransformSpec::parity(0.0, c);
  const auto d = detect_domains(p, 0, 1, spec, 1e-12);
  const Grid g = Grid::uniform(-10, 10, 4001);
  const CurrentProfile t = transformed_current(sols[0], 0, sols[1], 0, spec, g, d);
  ASSERT_EQ(t.domain_stats.size(), 1u);
  EXPECT_LE(t.domain_stats[0].max_deviation, 1e-10);
  EXPECT_GT(std::abs(t.domain_stats[0].mean), 1e-3);

  // Oracle: d/dx of psi_1^dag gamma0 gamma1 gamma0 psi_2(-x) inside the window.
  auto jf = [&](double x) { return bilinear_j1(sols[0].at(x), oracle::sz() * Eigen::Vector2cd(sols[1].at(-x))); };
  const double h = 1e-4;
  for (double x : {-2.0, 0.0, 0.5, 2.5}) EXPECT_LE(std::abs(jf(x + h) - jf(x - h)) / (2 * h), 1e-6);
  EXPECT_LE(std::abs(jf(0.5) - t.domain_stats[0].mean), 1e-10);
}

TEST(TransformedCurrent, TranslationConstantOnShiftedWindow) {
  const Convention c = Convention::standard();
  const PotentialProfile p = fixtures::shifted_window();
  const auto sols = fixtures::scatter_each(p, {2.0, 2.0}, {1.0, 1.0}, c);
  const TransformSpec spec = TransformSpec::translation(2.0);
  const auto d = detect_domains(p, 0, 1, spec, 1e-12);
  const CurrentProfile t = transformed_current(sols[0], 0, sols[1], 0, spec, Grid::uniform(-10, 10, 4001), d);
  ASSERT_EQ(t.domain_stats.size(), 1u);
  EXPECT_LE(t.domain_stats[0].max_deviation, 1e-10);
  auto jf = [&](double x) { return bilinear_j1(sols[0].at(x), sols[1].at(x + 2.0)); };
  EXPECT_LE(std::abs(jf(-3.3) - t.domain_stats[0].mean), 1e-10);
}

TEST(TransformedCurrent, Errors) {
  const Convention c = Convention::standard();
  const auto sols = fixtures::scatter_each(fixtures::local_window(), {2.0, 2.0}, {1.0, 1.0}, c);
  Grid far;
  far.x = {1e308};
  TransformSpec shift = TransformSpec::translation(1e308);
  try {
    transformed_current(sols[0], 0, sols[1], 0, shift, far);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::outside_domain);
  }
  TransformSpec wrong = TransformSpec::parity(0.0, c);
  wrong.spinor_factor = Matrix2c::Identity();
  EXPECT_THROW(transformed_current(sols[0], 0, sols[1], 0, wrong, Grid::uniform(0, 1, 3)), Error);
  EXPECT_THROW(transformed_current(sols[0], 1, sols[1], 0, TransformSpec::identity(), Grid::uniform(0, 1, 3)), Error);
}

// ------------------------------------------------------ charge relation

TEST(ChargeRelation, FreePlaneWavesMatchClosedForm) {
  const Convention c = Convention::standard();
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-1.0, 1.0}, {{0.0, 0.0}});
  const double e1 = 1.0;
  const double e2 = 1.5;
  const auto sols = fixtures::scatter_each(p, {e1, e2}, {1.0, 1.0}, c);
  const ChargeRelation r = charge_current_relation(sols[0], sols[1], 0.0, 2 * pi);
  // Right movers u e^{iEx}: the density bilinear is u1^dag u2 e^{i (E2 - E1) x}.
  const cplx overlap = sols[0].at(0.0).dot(sols[1].at(0.0));
  const double dk = e2 - e1;
  const cplx exact = overlap * (std::exp(I * dk * 2.0 * pi) - 1.0) / (I * dk);
  EXPECT_LE(std::abs(r.q - exact), 1e-6);
  EXPECT_LE(std::abs(r.boundary_value - exact), 1e-12);
  EXPECT_LE(r.discrepancy, 1e-6);
  EXPECT_GT(std::abs(exact), 0.1);
}

TEST(ChargeRelation, ScatteringAcrossBarriers) {
  const Convention c = Convention::standard();
  const auto sols = fixtures::scatter_each(
      PotentialProfile::diagonal(std::vector<double>{-2.0, 0.0, 2.0}, {{0.6, 0.6}, {0.1, 0.1}}), {1.4, 2.1},
      {1.0, cplx(0.0, 1.0)}, c);
  const ChargeRelation r = charge_current_relation(sols[0], sols[1], -5.0, 5.0);
  EXPECT_LE(r.discrepancy, 1e-6);
}

TEST(ChargeRelation, DegenerateAndEmpty) {
  const Convention c = Convention::standard();
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-1.0, 1.0}, {{0.0, 0.0}});
  const auto same = fixtures::scatter_each(p, {1.0, 1.0}, {1.0, 1.0}, c);
  try {
    charge_current_relation(same[0], same[0], 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_energies);
  }
  const auto sols = fixtures::scatter_each(p, {1.0, 1.5}, {1.0, 1.0}, c);
  const ChargeRelation r = charge_current_relation(sols[0], sols[1], 0.7, 0.7);
  EXPECT_EQ(r.q, cplx{});
  EXPECT_EQ(r.boundary_value, cplx{});
  EXPECT_THROW(charge_current_relation(sols[0], sols[1], 1.0, 0.0), Error);
}

// -------------------------------------------------------- delta relation

DeltaRelation delta_relation_for(double lambda, const Convention& c) {
  const PotentialProfile p = fixtures::mirror_with_delta(lambda);
  const auto sols = fixtures::delta_states(p, c);
  const TransformSpec spec = TransformSpec::parity(0.0, c);
  const auto domains = detect_domains(p, 0, 1, spec, 1e-12);
  return delta_domain_relation(sols[0], 0, sols[1], 0, 0.0, delta_junction(CMatrix::Constant(1, 1, lambda), c),
                               CMatrix::Identity(2, 2), spec, Grid::uniform(-10, 10, 4001), domains);
}

TEST(DeltaRelation, ZeroStrengthSingleValue) {
  for (const std::string& name : Convention::names()) {
    const DeltaRelation r = delta_relation_for(0.0, Convention::named(name));
    EXPECT_LE(std::abs(r.c_minus - r.c_plus), 1e-12) << name;
    EXPECT_LE(r.deviation, 1e-12);
  }
}

TEST(DeltaRelation, JunctionPredictsRightConstant) {
  for (const std::string& name : Convention::names()) {
    const Convention c = Convention::named(name);
    for (double lambda : {pi / 6, pi / 3, pi / 2}) {
      const DeltaRelation r = delta_relation_for(lambda, c);
      EXPECT_LE(r.constancy_minus, 1e-10) << name << " " << lambda;
      EXPECT_LE(r.constancy_plus, 1e-10) << name << " " << lambda;
      EXPECT_LE(r.deviation, 1e-10) << name << " " << lambda;
      EXPECT_GT(std::abs(r.c_plus - r.c_minus), 1e-3) << name << " " << lambda;
    }
  }
}

TEST(DeltaRelation, DirectOneSidedLimits) {
  // Independent evaluation: c_+ from the right limits of the solutions.
  const Convention c = Convention::named("vector");
  const PotentialProfile p = fixtures::mirror_with_delta(pi / 2);
  const auto sols = fixtures::delta_states(p, c);
  const DeltaRelation r = delta_relation_for(pi / 2, c);
  const Eigen::Vector2cd a = sols[0].at(0.0, Side::right);
  const Eigen::Vector2cd b = sols[1].at(0.0, Side::left);
  EXPECT_LE(std::abs(bilinear_j1(a, oracle::sz() * b) - r.c_plus), 1e-10);
  // Vector junction at pi/2 is i sigma_y.
  const Eigen::Vector2cd am = sols[0].at(0.0, Side::left);
  EXPECT_LE((a - I * oracle::sy() * am).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DeltaRelation, FullRotationRestoresSingleValue) {
  const DeltaRelation r = delta_relation_for(2 * pi, Convention::named("vector"));
  EXPECT_LE(std::abs(r.c_minus - r.c_plus), 1e-10);
}

TEST(DeltaRelation, DomainsMustTouchTheDelta) {
  const Convention c = Convention::named("vector");
  const PotentialProfile p = fixtures::mirror_with_delta(pi / 3);
  const auto sols = fixtures::delta_states(p, c);
  const std::vector<Domain> far{{-kInf, -1.0, TransformSpec::parity(0.0, c)}};
  try {
    delta_domain_relation(sols[0], 0, sols[1], 0, 0.0, CMatrix::Identity(2, 2), CMatrix::Identity(2, 2),
                          TransformSpec::parity(0.0, c), Grid::uniform(-5, 5, 101), far);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_not_adjacent);
  }
}

// ------------------------------------------------------------- residuals

struct DiracCase {
  PotentialProfile profile;
  DiracStack psi;
  PotentialDecomposition decomp;
};

DiracCase dirac_case(const PotentialProfile& p, std::vector<double> e, std::vector<cplx> amps,
                     const Convention& c = Convention::standard()) {
  const SunBasis basis = SunBasis::build(p.n_systems());
  return {p, DiracStack(fixtures::scatter_each(p, e, amps, c)), p.decompose(basis)};
}

TEST(DiracResidual, EqualPotentialsEqualEnergies) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-6.0, -3.0, 3.0, 6.0},
                                                        {{1.0, 1.0}, {0.5, 0.5}, {0.2, 0.2}});
  const DiracCase d = dirac_case(p, {2.0, 2.0}, {1.0, cplx(0.6, 0.8)});
  const SunBasis basis = SunBasis::build(2);
  const Grid g = Grid::uniform(-10, 10, 20001);
  const GceReport r = gce_residual_dirac_pair(d.psi, basis, 0, 1, g, d.decomp);
  EXPECT_NEAR(r.spacing, 1e-3, 1e-15);
  EXPECT_LE(r.residual_max, 1e-10);
  for (int a = 0; a < 3; ++a) {
    const GceReport ra = gce_residual_dirac(d.psi, basis, a, g, d.decomp);
    EXPECT_LE(ra.residual_max, 1e-10) << a;
    for (const cplx s : ra.source) EXPECT_EQ(s, cplx{});
  }
}

TEST(DiracResidual, SecondOrderWithSource) {
  const DiracCase d = dirac_case(fixtures::unequal(), {2.0, 2.5}, {1.0, cplx(0.6, 0.8)});
  const SunBasis basis = SunBasis::build(2);
  for (int a = 0; a < 2; ++a) {
    const GceReport coarse = gce_residual_dirac(d.psi, basis, a, Grid::uniform(-4, 4, 801), d.decomp);
    GceReport fine = gce_residual_dirac(d.psi, basis, a, Grid::uniform(-4, 4, 1601), d.decomp);
    EXPECT_GT(coarse.term_scale, 0.1);
    const double order = convergence_order(coarse, fine);
    EXPECT_NEAR(fine.residual_norm / coarse.residual_norm, 0.25, 0.025) << a;
    EXPECT_NEAR(order, 2.0, 0.2);
    ASSERT_TRUE(fine.convergence_order.has_value());
    EXPECT_EQ(*fine.convergence_order, order);
  }
  const GceReport coarse = gce_residual_dirac_pair(d.psi, basis, 0, 1, Grid::uniform(-4, 4, 801), d.decomp);
  const GceReport fine = gce_residual_dirac_pair(d.psi, basis, 0, 1, Grid::uniform(-4, 4, 1601), d.decomp);
  EXPECT_NEAR(fine.residual_norm / coarse.residual_norm, 0.25, 0.025);
}

TEST(DiracResidual, CartanWithDiagonalPotentialHasNoSource) {
  const DiracCase d = dirac_case(fixtures::unequal(), {2.0, 2.5}, {1.0, cplx(0.6, 0.8)});
  const SunBasis basis = SunBasis::build(2);
  const GceReport r = gce_residual_dirac(d.psi, basis, 2, Grid::uniform(-4, 4, 8001), d.decomp);
  for (const cplx s : r.source) EXPECT_EQ(s, cplx{});
  for (const cplx t : r.time_term) EXPECT_EQ(t, cplx{});
  // Each probability current is constant, so is their difference.
  EXPECT_LE(r.residual_max, 1e-10);
  EXPECT_TRUE(r.consistent(1e-10));
}

TEST(DiracResidual, HermitianPairingOfResiduals) {
  const DiracCase d = dirac_case(fixtures::unequal(), {2.0, 2.5}, {1.0, cplx(0.6, 0.8)});
  const SunBasis basis = SunBasis::build(2);
  const Grid g = Grid::uniform(-4, 4, 801);
  const GceReport a = gce_residual_dirac_pair(d.psi, basis, 0, 1, g, d.decomp);
  const GceReport b = gce_residual_dirac_pair(d.psi, basis, 1, 0, g, d.decomp);
  ASSERT_EQ(a.residual.size(), b.residual.size());
  for (std::size_t k = 0; k < a.residual.size(); ++k) {
    EXPECT_LE(std::abs(a.residual[k] - std::conj(b.residual[k])), 1e-13);
    EXPECT_LE(std::abs(a.current[k] - std::conj(b.current[k])), 1e-13);
  }
}

TEST(DiracResidual, DomainVerdicts) {
  const DiracCase d = dirac_case(fixtures::local_window(), {2.0, 2.0}, {1.0, cplx(0.6, 0.8)});
  ResidualOptions opts;
  opts.domains = detect_domains(d.profile, 0, 1, TransformSpec::identity(), 1e-12);
  opts.domain_tol = 1e-8;
  const GceReport r =
      gce_residual_dirac_pair(d.psi, SunBasis::build(2), 0, 1, Grid::uniform(-10, 10, 4001), d.decomp, opts);
  ASSERT_EQ(r.domain_verdicts.size(), 1u);
  EXPECT_TRUE(r.domain_verdicts[0].pass);
  EXPECT_LE(r.domain_verdicts[0].stat.max_deviation, 1e-8);
}

TEST(DiracResidual, Errors) {
  const DiracCase d = dirac_case(fixtures::unequal(), {2.0, 2.5}, {1.0, 1.0});
  const SunBasis basis = SunBasis::build(2);
  Grid bent;
  bent.x = {0.0, 0.1, 0.3, 0.4};
  try {
    gce_residual_dirac(d.psi, basis, 0, bent, d.decomp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_uniform_grid);
  }
  const PotentialDecomposition other = fixtures::local_window().decompose(basis);
  EXPECT_THROW(gce_residual_dirac(d.psi, basis, 0, Grid::uniform(-1, 1, 11), other), Error);
  EXPECT_THROW(gce_residual_dirac(d.psi, basis, 3, Grid::uniform(-1, 1, 11), d.decomp), Error);
}

TEST(SchrodingerResidual, EqualPotentialsEqualEnergies) {
  const PotentialProfile p = PotentialProfile::diagonal(std::vector<double>{-6.0, -3.0, 3.0, 6.0},
                                                        {{1.0, 1.0}, {0.5, 0.5}, {0.2, 0.2}});
  const WaveStack psi(fixtures::scatter_each_wave(p, {1.5, 1.5}, {1.0, cplx(0.6, 0.8)}, 1.0));
  const GceReport r = gce_residual_schrodinger_pair(psi, SunBasis::build(2), 0, 1, Grid::uniform(-10, 10, 20001),
                                                    p.decompose(SunBasis::build(2)));
  EXPECT_LE(r.residual_max, 1e-10);
}

TEST(SchrodingerResidual, SecondOrderWithSource) {
  const PotentialProfile p = fixtures::unequal();
  const SunBasis basis = SunBasis::build(2);
  const WaveStack psi(fixtures::scatter_each_wave(p, {2.0, 2.5}, {1.0, cplx(0.6, 0.8)}, 1.0));
  const PotentialDecomposition dec = p.decompose(basis);
  for (int a = 0; a < 2; ++a) {
    const GceReport coarse = gce_residual_schrodinger(psi, basis, a, Grid::uniform(-4, 4, 801), dec);
    GceReport fine = gce_residual_schrodinger(psi, basis, a, Grid::uniform(-4, 4, 1601), dec);
    EXPECT_NEAR(fine.residual_norm / coarse.residual_norm, 0.25, 0.025) << a;
    EXPECT_NEAR(convergence_order(coarse, fine), 2.0, 0.2);
  }
}

TEST(SchrodingerResidual, PairTermsMatchDirectEvaluation) {
  const double m = 1.3;
  const double e = 1.8;
  const PotentialProfile p = fixtures::unequal();
  const auto sols = fixtures::scatter_each_wave(p, {e, e}, {1.0, cplx(0.2, -0.9)}, m);
  const WaveStack psi(sols);
  const Grid g = Grid::uniform(-4, 4, 161);
  const GceReport r = gce_residual_schrodinger_pair(psi, SunBasis::build(2), 0, 1, g, p.decompose(SunBasis::build(2)));
  ASSERT_EQ(r.x.size(), g.size());
  std::size_t checked = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double x = g.x[k];
    if (x == -2.0 || x == 0.0 || x == 2.0) continue;
    const auto u1 = sols[0].at(x);
    const auto u2 = sols[1].at(x);
    const double v1 = p.value_at(x)(0, 0).real();
    const double v2 = p.value_at(x)(1, 1).real();
    const cplx source = I * (v1 - v2) * std::conj(u1(0)) * u2(0);
    const cplx current = I / (2 * m) * (std::conj(u1(1)) * u2(0) - std::conj(u1(0)) * u2(1));
    EXPECT_LE(std::abs(r.source[k] - source), 1e-13) << x;
    EXPECT_LE(std::abs(r.current[k] - current), 1e-13) << x;
    EXPECT_LE(std::abs(r.time_term[k]), 1e-15);
    ++checked;
  }
  EXPECT_EQ(checked, g.size() - 3);
}

TEST(SchrodingerResidual, TimeTermWithUnequalEnergies) {
  const double m = 1.0;
  const PotentialProfile p = fixtures::unequal();
  const auto sols = fixtures::scatter_each_wave(p, {1.8, 2.6}, {1.0, 1.0}, m);
  const GceReport r = gce_residual_schrodinger_pair(WaveStack(sols), SunBasis::build(2), 0, 1,
                                                    Grid::uniform(-4, 4, 81), p.decompose(SunBasis::build(2)));
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    const cplx rho = std::conj(sols[0].at(r.x[k])(0)) * sols[1].at(r.x[k])(0);
    EXPECT_LE(std::abs(r.time_term[k] - I * (1.8 - 2.6) * rho), 1e-13);
  }
}

}  // namespace
