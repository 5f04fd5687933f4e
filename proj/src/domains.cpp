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
#include <limits>
#include <string>

#include "gcelab/gce_engine.hpp"

namespace gcelab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// System i decouples from every other system at this potential value.
bool uncoupled(const CMatrix& v, int i, double tol) {
  for (int k = 0; k < v.rows(); ++k) {
    if (k != i && (std::abs(v(k, i)) > tol || std::abs(v(i, k)) > tol)) return false;
  }
  return true;
}

cplx delta_entry(const PotentialProfile& profile, double x, int i) {
  const DeltaBarrier* d = profile.delta_at(x);
  return d == nullptr ? cplx{} : d->strength(i, i);
}

bool delta_couples(const PotentialProfile& profile, double x, int i, double tol) {
  const DeltaBarrier* d = profile.delta_at(x);
  return d != nullptr && !uncoupled(d->strength, i, tol);
}

}  // namespace

std::vector<Domain> detect_domains(const PotentialProfile& profile, int i, int j,
                                   const TransformSpec& spec, double tol) {
  const int n = profile.n_systems();
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorKind::index_out_of_range, "system pair (" + std::to_string(i + 1) + "," +
                                                   std::to_string(j + 1) + ") out of range");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "domain tolerance must be positive");
  spec.validate();

  // Every point where either V_i(x) or V_j(F(x)) may change.
  std::vector<double> cuts;
  for (double b : profile.interior_breakpoints()) {
    cuts.push_back(b);
    cuts.push_back(spec.inverse(b));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto matches = [&](double x) {
    const double y = spec.map(x);
    const CMatrix& vx = profile.value_at(x);
    const CMatrix& vy = profile.value_at(y);
    return std::abs(vx(i, i) - vy(j, j)) <= tol && uncoupled(vx, i, tol) && uncoupled(vy, j, tol);
  };
  // A cut splits a run of matching intervals when the deltas at x and F(x)
  // disagree or couple to other systems.
  auto splits = [&](double x) {
    const double y = spec.map(x);
    return std::abs(delta_entry(profile, x, i) - delta_entry(profile, y, j)) > tol ||
           delta_couples(profile, x, i, tol) || delta_couples(profile, y, j, tol);
  };

  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> probe;
  if (cuts.empty()) {
    lo.push_back(-kInf);
    hi.push_back(kInf);
    probe.push_back(0.0);
  } else {
    lo.push_back(-kInf);
    hi.push_back(cuts.front());
    probe.push_back(cuts.front() - 1.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      lo.push_back(cuts[k]);
      hi.push_back(cuts[k + 1]);
      probe.push_back(0.5 * (cuts[k] + cuts[k + 1]));
    }
    lo.push_back(cuts.back());
    hi.push_back(kInf);
    probe.push_back(cuts.back() + 1.0);
  }

  std::vector<Domain> out;
  for (std::size_t k = 0; k < probe.size(); ++k) {
    if (!matches(probe[k])) continue;
    if (!out.empty() && out.back().x_hi == lo[k] && !splits(lo[k])) {
      out.back().x_hi = hi[k];
    } else {
      out.push_back(Domain{lo[k], hi[k], spec});
    }
  }
  return out;
}

std::vector<DomainStat> domain_stats(std::span<const double> x, std::span<const cplx> values,
                                     std::span<const Domain> domains) {
  if (x.size() != values.size()) {
    throw Error(ErrorKind::dimension_mismatch, "positions and values differ in length");
  }
  std::vector<DomainStat> out;
  out.reserve(domains.size());
  for (const Domain& d : domains) {
    DomainStat st;
    st.domain = d;
    cplx sum{};
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (!d.contains(x[k])) continue;
      sum += values[k];
      ++st.samples;
    }
    if (st.samples > 0) {
      st.mean = sum / static_cast<double>(st.samples);
      double dev = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (d.contains(x[k])) dev = std::max(dev, std::abs(values[k] - st.mean));
      }
      st.max_deviation = dev / std::max(std::abs(st.mean), 1e-30);
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace gcelab
