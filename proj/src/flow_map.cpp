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

#include "fsof/flow_map.hpp"

#include <algorithm>
#include <string>

#include "fsof/errors.hpp"

namespace fsof {

std::string_view to_string(FlowUnits units) {
  return units == FlowUnits::kPixels ? "px" : "px/s";
}

FlowUnits parse_flow_units(std::string_view text) {
  if (text == "px") return FlowUnits::kPixels;
  if (text == "px/s") return FlowUnits::kPixelsPerSecond;
  throw ConfigError("unknown flow units '" + std::string(text) +
                    "' (expected px or px/s)");
}

FlowMap::FlowMap(ImageSize size, FlowUnits units)
    : size_(size),
      units_(units),
      fu_(size.area(), 0.0),
      fv_(size.area(), 0.0),
      valid_(size.area(), 0) {
  if (size.width < 0 || size.height < 0) {
    throw InvalidArgument("negative flow map dimensions");
  }
}

std::size_t FlowMap::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(valid_.begin(), valid_.end(), [](auto x) { return x != 0; }));
}

FreespaceMask::FreespaceMask(ImageSize size, bool fill)
    : size_(size), data_(size.area(), fill ? 1 : 0) {
  if (size.width < 0 || size.height < 0) {
    throw InvalidArgument("negative mask dimensions");
  }
}

std::size_t FreespaceMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](auto x) { return x != 0; }));
}

void require_same_size(ImageSize a, ImageSize b, std::string_view what) {
  if (!(a == b)) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width) +
                            "x" + std::to_string(a.height) + " vs " +
                            std::to_string(b.width) + "x" +
                            std::to_string(b.height));
  }
}

void require_same_units(FlowUnits a, FlowUnits b, std::string_view what) {
  if (a != b) {
    throw UnitsMismatch(std::string(what) + ": " + std::string(to_string(a)) +
                        " vs " + std::string(to_string(b)));
  }
}

}  // namespace fsof
