// Copyright 2026 The FSOF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

#include "fsof/flow_map.hpp"

namespace fsof {

struct MetricsReport {
  double e_A = 0.0;  // average angular error (rad, or rad/s for velocity maps)
  double e_E = 0.0;  // average end-point error
  double e_U = 0.0;  // average |Fu - Fu_hat|
  double e_V = 0.0;  // average |Fv - Fv_hat|
  std::size_t n = 0;
  FlowUnits units = FlowUnits::kPixels;
};

/// Compares ground truth and estimate over mask & gt.valid & est.valid.
/// The angular error uses 1-augmented vectors (Barron et al.), with the
/// arccos argument clamped to [-1, 1].
///
/// Per-row sums are accumulated independently and combined pairwise in a
/// fixed order, so the result is identical for any thread count.
///
/// Throws DimensionMismatch, UnitsMismatch, or EmptyOverlap.
MetricsReport evaluate(const FlowMap& gt, const FlowMap& est,
                       const FreespaceMask& mask);

/// Same, with the mask taken to be all-true.
MetricsReport evaluate(const FlowMap& gt, const FlowMap& est);

namespace reference {

MetricsReport evaluate(const FlowMap& gt, const FlowMap& est,
                       const FreespaceMask& mask);

}  // namespace reference

}  // namespace fsof
