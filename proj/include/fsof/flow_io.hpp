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

// Flow and mask file formats.
//
// KITTI flow PNG (16-bit RGB, one pixel = 3 big-endian uint16 samples):
//
//   channel | meaning | decode
//   --------+---------+-----------------------------
//   R       | Fu      | (raw - 32768) / 64.0
//   G       | Fv      | (raw - 32768) / 64.0
//   B       | valid   | raw != 0
//
// so the representable range is [-512, 511.984375] in steps of 1/64 px.
// Encoding rounds to the nearest step and saturates to [0, 65535].
//
// Middlebury .flo (little-endian):
//
//   offset | bytes     | content
//   -------+-----------+-------------------------------------------
//   0      | 4         | float32 202021.25 ("PIEH")
//   4      | 4         | int32 width
//   8      | 4         | int32 height
//   12     | 8 * w * h | row-major (Fu, Fv) float32 pairs
//
// The format has no validity channel: invalid pixels are written as NaN and
// NaN (or |f| > 1e9, the Middlebury "unknown" convention) reads as invalid.
//
// Freespace masks are 8-bit greyscale PNGs; any non-zero value is freespace.
//
// Neither flow format records units, so write_flow() also writes a sidecar
// "<path>.json" holding {"units": "px" | "px/s"}; read_flow() honours it.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fsof/flow_map.hpp"

namespace fsof {

enum class FlowFileFormat { kKittiPng16, kMiddleburyFlo, kMaskPng8 };

/// By extension: ".png" -> KITTI, ".flo" -> Middlebury.
FlowFileFormat flow_format_for(const std::filesystem::path& path);

inline constexpr double kKittiScale = 64.0;
inline constexpr int kKittiOffset = 1 << 15;
inline constexpr float kFloMagic = 202021.25f;

struct WriteReport {
  std::size_t saturated = 0;  // samples clipped to the format's range
};

// In-memory codecs; the path overloads wrap them.
FlowMap decode_kitti_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_kitti_png(const FlowMap& flow,
                                           WriteReport* report = nullptr);
FlowMap decode_flo(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_flo(const FlowMap& flow);
FreespaceMask decode_mask_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_mask_png(const FreespaceMask& mask);

FlowMap read_kitti_png(const std::filesystem::path& path);
WriteReport write_kitti_png(const FlowMap& flow, const std::filesystem::path& path);
FlowMap read_flo(const std::filesystem::path& path);
void write_flo(const FlowMap& flow, const std::filesystem::path& path);
FreespaceMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const FreespaceMask& mask, const std::filesystem::path& path);

/// Format chosen by extension; units from the sidecar when present,
/// otherwise pixels.
FlowMap read_flow(const std::filesystem::path& path);
WriteReport write_flow(const FlowMap& flow, const std::filesystem::path& path);

std::filesystem::path units_sidecar_path(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace fsof
