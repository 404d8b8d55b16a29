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

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fsof::detail {

// Decoded 8- or 16-bit PNG; samples are widened to uint16 and interleaved.
struct PngImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<std::uint16_t> samples;
  std::vector<std::pair<std::string, std::string>> text;
};

// Throws BadMagic, WrongBitDepth, WrongChannelCount, TruncatedFile, IoError.
PngImage decode_png(std::span<const std::uint8_t> bytes);

// channels in {1, 3}; bit_depth in {8, 16}.
std::vector<std::uint8_t> encode_png(const PngImage& image);

}  // namespace fsof::detail
