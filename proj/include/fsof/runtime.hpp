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

// Thread control and render throughput measurement shared by the CLI and the
// acceptance suite.

#include <optional>
#include <string>

#include <json.hpp>

#include "fsof/flow_models.hpp"

namespace fsof {

/// Caps OpenMP parallelism. `requested` wins; otherwise the FSOF_THREADS
/// environment variable; otherwise the OpenMP default. Returns the cap in
/// effect. Throws InvalidArgument for values < 1 or a malformed variable.
int configure_threads(std::optional<int> requested);

/// CPU model, logical core count, compiler and OpenMP thread cap.
nlohmann::json environment_json();

struct ThroughputResult {
  ImageSize size;
  int frames = 0;
  int threads = 0;
  double seconds = 0.0;  // total wall time over all frames
  double fps() const { return seconds > 0.0 ? frames / seconds : 0.0; }
  double ms_per_frame() const { return frames > 0 ? 1e3 * seconds / frames : 0.0; }
};

/// Renders `frames` full frames with render_flow_map after one warm-up frame.
ThroughputResult measure_render_throughput(const FlowModel& model,
                                           const CameraIntrinsics& k,
                                           const MountConfig& m, ImageSize size,
                                           int frames);

/// KITTI-like camera used by the throughput benchmark.
CameraIntrinsics benchmark_camera(ImageSize size);
MountConfig benchmark_mount();
FlowModel benchmark_model();

}  // namespace fsof
