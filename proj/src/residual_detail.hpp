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

#ifndef GCELAB_RESIDUAL_DETAIL_HPP
#define GCELAB_RESIDUAL_DETAIL_HPP

#include "gcelab/gce_engine.hpp"

namespace gcelab::detail {

/// Fills residual = time_term + divergence - source, the norms and, when
/// domains are given, the constancy verdicts of `current`.
void finalize(GceReport& report, const ResidualOptions& opts);

}  // namespace gcelab::detail

#endif  // GCELAB_RESIDUAL_DETAIL_HPP
