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

#include "fsof/visualize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "fsof/flow_io.hpp"
#include "png_codec.hpp"

namespace fsof {

namespace {

// Segment lengths of the Middlebury wheel: red-yellow, yellow-green,
// green-cyan, cyan-blue, blue-magenta, magenta-red.
constexpr std::array<int, 6> kSegments{15, 6, 4, 11, 13, 6};
constexpr int kWheelSize = 15 + 6 + 4 + 11 + 13 + 6;

using WheelColor = std::array<double, 3>;

std::array<WheelColor, kWheelSize> make_wheel() {
  std::array<WheelColor, kWheelSize> wheel{};
  int i = 0;
  const auto ramp = [&](int n, int rising, int full, int falling) {
    for (int j = 0; j < n; ++j, ++i) {
      WheelColor c{0.0, 0.0, 0.0};
      c[full] = 255.0;
      if (rising >= 0) c[rising] = std::floor(255.0 * j / n);
      if (falling >= 0) c[falling] = 255.0 - std::floor(255.0 * j / n);
      wheel[i] = c;
    }
  };
  ramp(kSegments[0], 1, 0, -1);  // R -> Y
  ramp(kSegments[1], -1, 1, 0);  // Y -> G
  ramp(kSegments[2], 2, 1, -1);  // G -> C
  ramp(kSegments[3], -1, 2, 1);  // C -> B
  ramp(kSegments[4], 0, 2, -1);  // B -> M
  ramp(kSegments[5], -1, 0, 2);  // M -> R
  return wheel;
}

const std::array<WheelColor, kWheelSize>& wheel() {
  static const auto w = make_wheel();
  return w;
}

std::string format_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

Rgb flow_color(double fu, double fv) {
  const double radius = std::hypot(fu, fv);
  const double angle = std::atan2(-fv, -fu) / std::numbers::pi;
  const double fk = (angle + 1.0) / 2.0 * (kWheelSize - 1);
  const int k0 = static_cast<int>(std::floor(fk));
  const int k1 = (k0 + 1) % kWheelSize;
  const double f = fk - k0;
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    double col = ((1.0 - f) * wheel()[k0][c] + f * wheel()[k1][c]) / 255.0;
    col = radius <= 1.0 ? 1.0 - radius * (1.0 - col) : col * 0.75;
    out[c] = static_cast<std::uint8_t>(std::lround(std::clamp(col, 0.0, 1.0) * 255.0));
  }
  return {out[0], out[1], out[2]};
}

double max_flow_magnitude(const FlowMap& flow) {
  double m = 0.0;
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    if (flow.valid_data()[i]) m = std::max(m, std::hypot(flow.fu_data()[i], flow.fv_data()[i]));
  }
  return m;
}

std::vector<std::uint8_t> encode_flow_visualization(const FlowMap& flow,
                                                    double max_magnitude) {
  if (!(max_magnitude > 0.0)) max_magnitude = max_flow_magnitude(flow);
  const double scale = max_magnitude > 0.0 ? 1.0 / max_magnitude : 0.0;
  detail::PngImage image;
  image.width = flow.width();
  image.height = flow.height();
  image.channels = 3;
  image.bit_depth = 8;
  image.samples.assign(3 * flow.size().area(), 0);
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    if (!flow.valid_data()[i]) continue;
    const Rgb c = flow_color(flow.fu_data()[i] * scale, flow.fv_data()[i] * scale);
    image.samples[3 * i] = c.r;
    image.samples[3 * i + 1] = c.g;
    image.samples[3 * i + 2] = c.b;
  }
  image.text.emplace_back("max_magnitude", format_double(max_magnitude));
  image.text.emplace_back("units", std::string(to_string(flow.units())));
  return detail::encode_png(image);
}

void write_flow_visualization(const FlowMap& flow, const std::filesystem::path& path,
                              double max_magnitude) {
  write_file_bytes(path, encode_flow_visualization(flow, max_magnitude));
}

std::vector<std::uint8_t> encode_error_heatmap(const FlowMap& gt, const FlowMap& est) {
  require_same_size(gt.size(), est.size(), "error heat map");
  std::vector<double> err(gt.size().area(), -1.0);
  double max_err = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    if (!gt.valid_data()[i] || !est.valid_data()[i]) continue;
    err[i] = std::hypot(gt.fu_data()[i] - est.fu_data()[i], gt.fv_data()[i] - est.fv_data()[i]);
    max_err = std::max(max_err, err[i]);
  }
  detail::PngImage image;
  image.width = gt.width();
  image.height = gt.height();
  image.channels = 3;
  image.bit_depth = 8;
  image.samples.assign(3 * err.size(), 0);
  for (std::size_t i = 0; i < err.size(); ++i) {
    if (err[i] < 0.0) {
      image.samples[3 * i + 2] = 64;  // not evaluated: dark blue
      continue;
    }
    const double t = max_err > 0.0 ? err[i] / max_err : 0.0;
    // Black -> red -> yellow -> white.
    image.samples[3 * i] = static_cast<std::uint16_t>(std::lround(255.0 * std::clamp(3.0 * t, 0.0, 1.0)));
    image.samples[3 * i + 1] =
        static_cast<std::uint16_t>(std::lround(255.0 * std::clamp(3.0 * t - 1.0, 0.0, 1.0)));
    image.samples[3 * i + 2] =
        static_cast<std::uint16_t>(std::lround(255.0 * std::clamp(3.0 * t - 2.0, 0.0, 1.0)));
  }
  image.text.emplace_back("max_error", format_double(max_err));
  return detail::encode_png(image);
}

void write_error_heatmap(const FlowMap& gt, const FlowMap& est,
                         const std::filesystem::path& path) {
  write_file_bytes(path, encode_error_heatmap(gt, est));
}

}  // namespace fsof
