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

// Static PNG renderings of flow and error maps.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fsof/flow_map.hpp"

namespace fsof {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

/// Middlebury colour-wheel colour for a flow vector already divided by the
/// normalisation magnitude (|f| <= 1 inside the wheel).
Rgb flow_color(double fu, double fv);

/// Largest end-point magnitude over valid pixels (0 for an empty map).
double max_flow_magnitude(const FlowMap& flow);

/// 8-bit RGB colour-wheel PNG. Vectors are divided by `max_magnitude`
/// (the map's own maximum when <= 0); invalid pixels are black. The value
/// used is stored in a "max_magnitude" tEXt chunk.
std::vector<std::uint8_t> encode_flow_visualization(const FlowMap& flow,
                                                    double max_magnitude = 0.0);
void write_flow_visualization(const FlowMap& flow, const std::filesystem::path& path,
                              double max_magnitude = 0.0);

/// Per-pixel end-point error heat map (black = 0, white = max error) over
/// pixels valid in both maps, dark blue elsewhere. The maximum is stored as
/// "max_error".
std::vector<std::uint8_t> encode_error_heatmap(const FlowMap& gt, const FlowMap& est);
void write_error_heatmap(const FlowMap& gt, const FlowMap& est,
                         const std::filesystem::path& path);

}  // namespace fsof
