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

#include "fsof/flow_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include <json.hpp>

#include "fsof/errors.hpp"
#include "png_codec.hpp"

namespace fsof {

namespace {

constexpr double kFloUnknownThreshold = 1e9;

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_le32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::uint8_t>(x >> shift));
  }
}

std::uint16_t kitti_encode(double f, std::size_t& saturated) {
  const double raw = std::round(f * kKittiScale + kKittiOffset);
  if (!(raw >= 0.0)) {  // also catches NaN
    ++saturated;
    return 0;
  }
  if (raw > 65535.0) {
    ++saturated;
    return 65535;
  }
  return static_cast<std::uint16_t>(raw);
}

double kitti_decode(std::uint16_t raw) {
  return (static_cast<double>(raw) - kKittiOffset) / kKittiScale;
}

}  // namespace

FlowFileFormat flow_format_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return FlowFileFormat::kKittiPng16;
  if (ext == ".flo") return FlowFileFormat::kMiddleburyFlo;
  throw ConfigError("cannot infer flow format from '" + path.string() +
                    "' (expected .png or .flo)");
}

FlowMap decode_kitti_png(std::span<const std::uint8_t> bytes) {
  const detail::PngImage image = detail::decode_png(bytes);
  if (image.bit_depth != 16) {
    throw WrongBitDepth("KITTI flow PNG must be 16-bit, got " +
                        std::to_string(image.bit_depth));
  }
  if (image.channels != 3) {
    throw WrongChannelCount("KITTI flow PNG must have 3 channels, got " +
                            std::to_string(image.channels));
  }
  FlowMap flow({image.width, image.height}, FlowUnits::kPixels);
  for (int v = 0; v < image.height; ++v) {
    for (int u = 0; u < image.width; ++u) {
      const std::size_t i = 3 * flow.index(u, v);
      const FlowVector f{kitti_decode(image.samples[i]), kitti_decode(image.samples[i + 1])};
      if (image.samples[i + 2] != 0) {
        flow.set(u, v, f);
      } else {
        flow.fu_data()[flow.index(u, v)] = f.fu;
        flow.fv_data()[flow.index(u, v)] = f.fv;
      }
    }
  }
  return flow;
}

std::vector<std::uint8_t> encode_kitti_png(const FlowMap& flow, WriteReport* report) {
  detail::PngImage image;
  image.width = flow.width();
  image.height = flow.height();
  image.channels = 3;
  image.bit_depth = 16;
  image.samples.resize(3 * flow.size().area());
  std::size_t saturated = 0;
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    const bool valid = flow.valid_data()[i] != 0;
    image.samples[3 * i] = kitti_encode(flow.fu_data()[i], saturated);
    image.samples[3 * i + 1] = kitti_encode(flow.fv_data()[i], saturated);
    image.samples[3 * i + 2] = valid ? 1 : 0;
  }
  if (report) report->saturated = saturated;
  return detail::encode_png(image);
}

FlowMap decode_flo(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw TruncatedFile(".flo file shorter than its magic number");
  if (std::bit_cast<float>(load_le32(bytes.data())) != kFloMagic) {
    throw BadMagic(".flo magic number mismatch");
  }
  if (bytes.size() < 12) throw TruncatedFile(".flo header is incomplete");
  const auto width = static_cast<std::int32_t>(load_le32(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(load_le32(bytes.data() + 8));
  if (width < 0 || height < 0) {
    throw BadMagic(".flo header has negative dimensions");
  }
  const std::size_t count =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if ((bytes.size() - 12) / 8 < count) {
    throw TruncatedFile(".flo payload is shorter than width * height");
  }
  FlowMap flow({width, height}, FlowUnits::kPixels);
  const std::uint8_t* p = bytes.data() + 12;
  for (std::size_t i = 0; i < count; ++i, p += 8) {
    const double fu = std::bit_cast<float>(load_le32(p));
    const double fv = std::bit_cast<float>(load_le32(p + 4));
    const bool known = std::isfinite(fu) && std::isfinite(fv) &&
                       std::abs(fu) <= kFloUnknownThreshold &&
                       std::abs(fv) <= kFloUnknownThreshold;
    if (known) {
      flow.fu_data()[i] = fu;
      flow.fv_data()[i] = fv;
      flow.valid_data()[i] = 1;
    }
  }
  return flow;
}

std::vector<std::uint8_t> encode_flo(const FlowMap& flow) {
  std::vector<std::uint8_t> out;
  out.reserve(12 + 8 * flow.size().area());
  store_le32(out, std::bit_cast<std::uint32_t>(kFloMagic));
  store_le32(out, static_cast<std::uint32_t>(flow.width()));
  store_le32(out, static_cast<std::uint32_t>(flow.height()));
  const float nan = std::numeric_limits<float>::quiet_NaN();
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    const bool valid = flow.valid_data()[i] != 0;
    store_le32(out, std::bit_cast<std::uint32_t>(
                        valid ? static_cast<float>(flow.fu_data()[i]) : nan));
    store_le32(out, std::bit_cast<std::uint32_t>(
                        valid ? static_cast<float>(flow.fv_data()[i]) : nan));
  }
  return out;
}

FreespaceMask decode_mask_png(std::span<const std::uint8_t> bytes) {
  const detail::PngImage image = detail::decode_png(bytes);
  if (image.bit_depth != 8) {
    throw WrongBitDepth("mask PNG must be 8-bit, got " + std::to_string(image.bit_depth));
  }
  if (image.channels != 1) {
    throw WrongChannelCount("mask PNG must be single-channel, got " +
                            std::to_string(image.channels));
  }
  FreespaceMask mask({image.width, image.height}, false);
  for (std::size_t i = 0; i < image.samples.size(); ++i) {
    mask.data()[i] = image.samples[i] != 0 ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> encode_mask_png(const FreespaceMask& mask) {
  detail::PngImage image;
  image.width = mask.width();
  image.height = mask.height();
  image.channels = 1;
  image.bit_depth = 8;
  image.samples.resize(mask.data().size());
  for (std::size_t i = 0; i < image.samples.size(); ++i) {
    image.samples[i] = mask.data()[i] ? 255 : 0;
  }
  return detail::encode_png(image);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FlowMap read_kitti_png(const std::filesystem::path& path) {
  return decode_kitti_png(read_file_bytes(path));
}

WriteReport write_kitti_png(const FlowMap& flow, const std::filesystem::path& path) {
  WriteReport report;
  write_file_bytes(path, encode_kitti_png(flow, &report));
  return report;
}

FlowMap read_flo(const std::filesystem::path& path) {
  return decode_flo(read_file_bytes(path));
}

void write_flo(const FlowMap& flow, const std::filesystem::path& path) {
  write_file_bytes(path, encode_flo(flow));
}

FreespaceMask read_mask_png(const std::filesystem::path& path) {
  return decode_mask_png(read_file_bytes(path));
}

void write_mask_png(const FreespaceMask& mask, const std::filesystem::path& path) {
  write_file_bytes(path, encode_mask_png(mask));
}

std::filesystem::path units_sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path sidecar = path;
  sidecar += ".json";
  return sidecar;
}

FlowMap read_flow(const std::filesystem::path& path) {
  FlowMap flow = flow_format_for(path) == FlowFileFormat::kKittiPng16
                     ? read_kitti_png(path)
                     : read_flo(path);
  const std::filesystem::path sidecar = units_sidecar_path(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream in(sidecar);
    const nlohmann::json meta = nlohmann::json::parse(in, nullptr, false);
    if (meta.is_discarded() || !meta.is_object() || !meta.contains("units") ||
        !meta["units"].is_string()) {
      throw ConfigError("malformed units sidecar '" + sidecar.string() + "'");
    }
    flow.set_units(parse_flow_units(meta["units"].get<std::string>()));
  }
  return flow;
}

WriteReport write_flow(const FlowMap& flow, const std::filesystem::path& path) {
  WriteReport report;
  if (flow_format_for(path) == FlowFileFormat::kKittiPng16) {
    report = write_kitti_png(flow, path);
  } else {
    write_flo(flow, path);
  }
  const nlohmann::json meta = {{"units", std::string(to_string(flow.units()))}};
  std::ofstream out(units_sidecar_path(path));
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("cannot write units sidecar for '" + path.string() + "'");
  return report;
}

}  // namespace fsof
