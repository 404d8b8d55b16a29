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

// Recovers the inter-frame motion (x_d, z_d, phi) from observed road flow by
// global-best particle swarm optimisation of the mean end-point error
// between the closed-form displacement model and the observation.

#include <cstdint>
#include <numbers>

#include "fsof/flow_map.hpp"
#include "fsof/geometry.hpp"

namespace fsof {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct PoseSearchConfig {
  Interval x_d{-1.0, 1.0};
  Interval z_d{0.0, 5.0};
  Interval phi{-10.0 * std::numbers::pi / 180.0, 10.0 * std::numbers::pi / 180.0};
  int swarm_size = 50;
  int max_iterations = 200;
  double inertia = 0.729;
  double cognitive = 1.49445;
  double social = 1.49445;
  double tolerance = 1e-9;  // best-cost improvement over the stall window, px
  int stall_window = 20;
  std::uint64_t seed = 0;
};

void validate(const PoseSearchConfig& cfg);

struct PoseEstimate {
  PoseDelta pose;
  double cost = 0.0;  // mean end-point error, px
  int iterations = 0;
  bool converged = false;
};

// Cost assigned to a pixel where the candidate model is undefined.
inline constexpr double kUndefinedModelPenalty = 1e3;

/// Mean end-point error of the displacement model under `candidate` against
/// `observed`, over mask & observed.valid. Throws EmptyOverlap.
double pose_cost(const PoseDelta& candidate, const FlowMap& observed,
                 const FreespaceMask& mask, const CameraIntrinsics& k,
                 const MountConfig& m);

/// Particle evaluations run in parallel; the swarm update and the best
/// particle selection (ties to the lowest index) are serial, so the result
/// depends only on the inputs and cfg.seed.
/// Throws EmptyOverlap, NonFinite, InvalidArgument.
PoseEstimate estimate_pose(const FlowMap& observed, const FreespaceMask& mask,
                           const CameraIntrinsics& k, const MountConfig& m,
                           const PoseSearchConfig& cfg);

}  // namespace fsof
