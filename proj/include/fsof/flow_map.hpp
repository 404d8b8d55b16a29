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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fsof {

struct ImageSize {
  int width = 0;
  int height = 0;

  std::size_t area() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

// Displacement flow is pixels per frame; velocity flow is pixels per second.
enum class FlowUnits : std::uint8_t { kPixels, kPixelsPerSecond };

std::string_view to_string(FlowUnits units);
FlowUnits parse_flow_units(std::string_view text);

struct FlowVector {
  double fu = 0.0;
  double fv = 0.0;
};

/// Dense two-channel flow field with a per-pixel validity mask. Storage is
/// row-major; index = v * width + u.
class FlowMap {
 public:
  FlowMap() = default;
  FlowMap(ImageSize size, FlowUnits units);

  ImageSize size() const { return size_; }
  int width() const { return size_.width; }
  int height() const { return size_.height; }
  FlowUnits units() const { return units_; }
  void set_units(FlowUnits units) { units_ = units; }

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(size_.width) +
           static_cast<std::size_t>(u);
  }

  double fu(int u, int v) const { return fu_[index(u, v)]; }
  double fv(int u, int v) const { return fv_[index(u, v)]; }
  bool valid(int u, int v) const { return valid_[index(u, v)] != 0; }

  void set(int u, int v, FlowVector f) {
    const std::size_t i = index(u, v);
    fu_[i] = f.fu;
    fv_[i] = f.fv;
    valid_[i] = 1;
  }
  void invalidate(int u, int v) {
    const std::size_t i = index(u, v);
    fu_[i] = 0.0;
    fv_[i] = 0.0;
    valid_[i] = 0;
  }

  std::vector<double>& fu_data() { return fu_; }
  std::vector<double>& fv_data() { return fv_; }
  std::vector<std::uint8_t>& valid_data() { return valid_; }
  const std::vector<double>& fu_data() const { return fu_; }
  const std::vector<double>& fv_data() const { return fv_; }
  const std::vector<std::uint8_t>& valid_data() const { return valid_; }

  std::size_t valid_count() const;

  friend bool operator==(const FlowMap&, const FlowMap&) = default;

 private:
  ImageSize size_{};
  FlowUnits units_ = FlowUnits::kPixels;
  std::vector<double> fu_;
  std::vector<double> fv_;
  std::vector<std::uint8_t> valid_;
};

/// Per-pixel freespace labels (true = drivable ground).
class FreespaceMask {
 public:
  FreespaceMask() = default;
  FreespaceMask(ImageSize size, bool fill);

  ImageSize size() const { return size_; }
  int width() const { return size_.width; }
  int height() const { return size_.height; }

  bool at(int u, int v) const { return data_[index(u, v)] != 0; }
  void set(int u, int v, bool value) { data_[index(u, v)] = value ? 1 : 0; }

  std::size_t index(int u, int v) const {
    return static_cast<std::size_t>(v) * static_cast<std::size_t>(size_.width) +
           static_cast<std::size_t>(u);
  }

  std::vector<std::uint8_t>& data() { return data_; }
  const std::vector<std::uint8_t>& data() const { return data_; }

  std::size_t count() const;

  friend bool operator==(const FreespaceMask&, const FreespaceMask&) = default;

 private:
  ImageSize size_{};
  std::vector<std::uint8_t> data_;
};

// Throws DimensionMismatch / UnitsMismatch.
void require_same_size(ImageSize a, ImageSize b, std::string_view what);
void require_same_units(FlowUnits a, FlowUnits b, std::string_view what);

}  // namespace fsof
