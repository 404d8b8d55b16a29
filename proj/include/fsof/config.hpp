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

// JSON run configuration and JSON renderings of results.
//
//   {
//     "camera": {"fx": 700, "fy": 700, "u0": 600, "v0": 200},      required
//     "mount":  {"h": 1.5, "theta": 0.0},                           required
//     "motion": {"kind": "displacement", "x_d": 0, "z_d": 1, "phi": 0}
//            or {"kind": "velocity", "v_r": 10, "delta_f": 0, "l": 2.7,
//                "heading": 0, "dt": 0.1},
//     "scene":  {"width": 1242, "height": 375, "lateral_extent": 10,
//                "z_min": 1, "z_max": 80, "grid_spacing": 0.1, "sparse": false},
//     "noise":  {"sigma": 0.0, "seed": 0},
//     "pso":    {"swarm_size": 50, "max_iterations": 200, "inertia": 0.729,
//                "cognitive": 1.49445, "social": 1.49445, "tolerance": 1e-9,
//                "stall_window": 20, "seed": 0,
//                "bounds": {"x_d": [-1, 1], "z_d": [0, 5], "phi": [-0.1745, 0.1745]}},
//     "fit":    {"bin_w": 0.25, "min_row_support": 10, "tau": 1.0,
//                "kind": "rational-displacement"}
//   }
//
// Angles are radians, lengths metres. Every section except camera and mount
// is optional and falls back to the defaults shown; unknown keys are errors.

#include <filesystem>
#include <string_view>

#include <json.hpp>

#include "fsof/fitting.hpp"
#include "fsof/flow_models.hpp"
#include "fsof/geometry.hpp"
#include "fsof/metrics.hpp"
#include "fsof/pose_estimation.hpp"
#include "fsof/scene_synth.hpp"

namespace fsof {

enum class MotionKind { kDisplacement, kVelocity };

struct MotionConfig {
  MotionKind kind = MotionKind::kDisplacement;
  PoseDelta pose;
  VelocityState state;
  double dt = 0.1;  // s; turns a velocity state into an inter-frame PoseDelta

  /// The inter-frame motion: `pose`, or the Ackermann rates integrated over dt.
  PoseDelta displacement() const;
};

struct RunConfig {
  CameraIntrinsics camera;
  MountConfig mount;
  MotionConfig motion;
  SceneSpec scene;  // camera and mount mirror the sections above
  NoiseSpec noise;
  PoseSearchConfig pso;
  FitConfig fit;
};

/// Parses and validates. Throws ConfigError (with the offending key) or
/// InvalidArgument.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const PoseEstimate& estimate);
nlohmann::json to_json(const CurveFit& fit);
CurveFit curve_fit_from_json(const nlohmann::json& doc);

}  // namespace fsof
