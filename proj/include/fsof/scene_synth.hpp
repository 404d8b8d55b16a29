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

// Synthetic ground truth for the road-plane flow models: an independent
// back-project / move / re-project oracle, a virtual road plane, seeded
// Gaussian noise and rectangular obstacles.

#include <cstdint>
#include <string_view>
#include <vector>

#include "fsof/flow_map.hpp"
#include "fsof/flow_models.hpp"
#include "fsof/geometry.hpp"

namespace fsof {

struct SceneSpec {
  CameraIntrinsics camera;
  MountConfig mount;
  ImageSize size;
  double lateral_extent = 10.0;  // road spans x in [-lateral_extent, lateral_extent]
  double z_min = 1.0;            // and z in [z_min, z_max], metres
  double z_max = 80.0;
  double grid_spacing = 0.1;     // spacing of the virtual-plane samples, metres
  bool sparse = false;           // keep only pixels hit by a plane sample
};

void validate(const SceneSpec& spec);

struct NoiseSpec {
  double sigma = 0.0;  // standard deviation, same units as the flow
  std::uint64_t seed = 0;
};

// Recorded in reports so noisy runs can be reproduced elsewhere.
inline constexpr std::string_view kNoiseGenerator =
    "splitmix64-counter/box-muller";

/// Literal pinhole chain: cast the pixel ray, intersect y = h, apply
/// R_yaw * (p - d), project with K * R_roll and subtract. No closed-form
/// simplification is used. Throws HorizonError / PointBehindCameraError.
FlowVector flow_oracle(Pixel p, const CameraIntrinsics& k, const MountConfig& m,
                       const PoseDelta& d);

/// Uniform grid of road points on y = h covering the scene's extents.
std::vector<GroundPoint> sample_virtual_plane(const SceneSpec& spec);

/// Oracle flow for every pixel whose ray lands on the sampled road region
/// (or, for sparse specs, every pixel a plane sample projects onto).
FlowMap synth_ground_truth(const SceneSpec& spec, const PoseDelta& d);

/// Adds i.i.d. N(0, sigma^2) to both channels of valid pixels. The draw for
/// pixel (u, v), channel c depends only on (seed, u, v, c).
FlowMap add_noise(const FlowMap& flow, const NoiseSpec& noise);

/// Standard normal variate for a given (seed, counter) pair.
double counter_gaussian(std::uint64_t seed, std::uint64_t counter);

struct PixelRect {
  int u = 0;
  int v = 0;
  int width = 0;
  int height = 0;
};

struct ObstacleScene {
  FlowMap flow;
  FreespaceMask freespace;  // ground truth: valid road pixels outside the rect
};

/// Overwrites the rectangle with (flow + offset) and marks it as obstacle.
/// Throws OutOfBounds when the rectangle does not fit in the map.
ObstacleScene insert_obstacle(const FlowMap& flow, const PixelRect& rect,
                              FlowVector offset);

namespace reference {

FlowMap add_noise(const FlowMap& flow, const NoiseSpec& noise);

}  // namespace reference

}  // namespace fsof
