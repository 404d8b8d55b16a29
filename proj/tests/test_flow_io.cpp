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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "fsof/errors.hpp"
#include "fsof/flow_io.hpp"
#include "../src/png_codec.hpp"
#include "test_support.hpp"

namespace fsof {
namespace {

std::vector<std::uint8_t> kitti_bytes(int width, int height,
                                      const std::vector<std::uint16_t>& samples) {
  detail::PngImage image;
  image.width = width;
  image.height = height;
  image.channels = 3;
  image.bit_depth = 16;
  image.samples = samples;
  return detail::encode_png(image);
}

FlowMap random_flow(ImageSize size, std::uint64_t seed) {
  FlowMap flow(size, FlowUnits::kPixels);
  test::Rng rng(seed);
  for (int v = 0; v < size.height; ++v) {
    for (int u = 0; u < size.width; ++u) {
      if (rng.uniform(0, 1) < 0.8) flow.set(u, v, {rng.uniform(-100, 100), rng.uniform(-100, 100)});
    }
  }
  return flow;
}

TEST(KittiPng, DecodeScale) {
  const FlowMap flow = decode_kitti_png(
      kitti_bytes(3, 1, {32768, 32768, 1, 32832, 32704, 1, 40000, 0, 0}));
  EXPECT_EQ(flow.fu(0, 0), 0.0);
  EXPECT_EQ(flow.fv(0, 0), 0.0);
  EXPECT_EQ(flow.fu(1, 0), 1.0);
  EXPECT_EQ(flow.fv(1, 0), -1.0);
  EXPECT_TRUE(flow.valid(0, 0));
  EXPECT_TRUE(flow.valid(1, 0));
  EXPECT_FALSE(flow.valid(2, 0));
  EXPECT_EQ(flow.units(), FlowUnits::kPixels);
}

TEST(KittiPng, EveryRawValueRoundTrips) {
  // 256 x 128 pixels, two channels: every uint16 appears exactly once.
  std::vector<std::uint16_t> samples;
  for (std::uint32_t i = 0; i < 65536; i += 2) {
    samples.push_back(static_cast<std::uint16_t>(i));
    samples.push_back(static_cast<std::uint16_t>(i + 1));
    samples.push_back(1);
  }
  const std::vector<std::uint8_t> bytes = kitti_bytes(256, 128, samples);
  const FlowMap flow = decode_kitti_png(bytes);
  WriteReport report;
  const std::vector<std::uint8_t> again = encode_kitti_png(flow, &report);
  EXPECT_EQ(report.saturated, 0u);
  EXPECT_EQ(decode_kitti_png(again), flow);
  EXPECT_EQ(detail::decode_png(again).samples, samples);
}

TEST(KittiPng, QuantisesToSixtyFourthsAndSaturates) {
  FlowMap flow(ImageSize{4, 1}, FlowUnits::kPixels);
  flow.set(0, 0, {0.3, -0.3});
  flow.set(1, 0, {511.984375, -512.0});
  flow.set(2, 0, {512.0, -600.0});
  flow.set(3, 0, {std::numeric_limits<double>::quiet_NaN(), 0.0});
  WriteReport report;
  const FlowMap back = decode_kitti_png(encode_kitti_png(flow, &report));
  EXPECT_EQ(back.fu(0, 0), std::round(0.3 * 64) / 64);
  EXPECT_EQ(back.fv(0, 0), -std::round(0.3 * 64) / 64);
  EXPECT_EQ(back.fu(1, 0), 511.984375);
  EXPECT_EQ(back.fv(1, 0), -512.0);
  EXPECT_EQ(back.fu(2, 0), 511.984375);
  EXPECT_EQ(back.fv(2, 0), -512.0);
  EXPECT_EQ(report.saturated, 3u);
}

TEST(KittiPng, QuantisationErrorIsBounded) {
  const FlowMap flow = random_flow({64, 48}, 3);
  const FlowMap back = decode_kitti_png(encode_kitti_png(flow));
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    EXPECT_EQ(back.valid_data()[i], flow.valid_data()[i]);
    if (!flow.valid_data()[i]) continue;
    EXPECT_LE(std::abs(back.fu_data()[i] - flow.fu_data()[i]), 1.0 / 128 + 1e-12);
    EXPECT_LE(std::abs(back.fv_data()[i] - flow.fv_data()[i]), 1.0 / 128 + 1e-12);
  }
}

TEST(KittiPng, RejectsWrongLayouts) {
  detail::PngImage gray;
  gray.width = 2;
  gray.height = 2;
  gray.channels = 1;
  gray.bit_depth = 16;
  gray.samples.assign(4, 0);
  EXPECT_THROW(decode_kitti_png(detail::encode_png(gray)), WrongChannelCount);

  detail::PngImage rgb8;
  rgb8.width = 2;
  rgb8.height = 2;
  rgb8.channels = 3;
  rgb8.bit_depth = 8;
  rgb8.samples.assign(12, 0);
  EXPECT_THROW(decode_kitti_png(detail::encode_png(rgb8)), WrongBitDepth);

  const std::vector<std::uint8_t> junk = {'n', 'o', 't', ' ', 'p', 'n', 'g', '!', 0};
  EXPECT_THROW(decode_kitti_png(junk), BadMagic);
}

TEST(Flo, OnePixelLayout) {
  FlowMap flow(ImageSize{1, 1}, FlowUnits::kPixels);
  flow.set(0, 0, {1.5, -2.25});
  const std::vector<std::uint8_t> bytes = encode_flo(flow);
  ASSERT_EQ(bytes.size(), 20u);
  const std::uint8_t expected[20] = {
      0x50, 0x49, 0x45, 0x48,  // "PIEH"
      1,    0,    0,    0,    1, 0, 0, 0,
      0x00, 0x00, 0xc0, 0x3f,  // 1.5f
      0x00, 0x00, 0x10, 0xc0,  // -2.25f
  };
  EXPECT_EQ(std::memcmp(bytes.data(), expected, 20), 0);
}

TEST(Flo, RoundTripIsExactForFloats) {
  FlowMap flow = random_flow({37, 23}, 4);
  for (auto& f : flow.fu_data()) f = static_cast<float>(f);
  for (auto& f : flow.fv_data()) f = static_cast<float>(f);
  const FlowMap back = decode_flo(encode_flo(flow));
  ASSERT_EQ(back.size(), flow.size());
  for (std::size_t i = 0; i < flow.size().area(); ++i) {
    ASSERT_EQ(back.valid_data()[i], flow.valid_data()[i]);
    if (!flow.valid_data()[i]) continue;
    EXPECT_EQ(back.fu_data()[i], flow.fu_data()[i]);
    EXPECT_EQ(back.fv_data()[i], flow.fv_data()[i]);
  }
}

TEST(Flo, UnknownConventionReadsInvalid) {
  FlowMap flow(ImageSize{2, 1}, FlowUnits::kPixels);
  flow.set(0, 0, {2e9, 0.0});
  flow.set(1, 0, {1.0, 1.0});
  const FlowMap back = decode_flo(encode_flo(flow));
  EXPECT_FALSE(back.valid(0, 0));
  EXPECT_TRUE(back.valid(1, 0));
}

TEST(Flo, RejectsBadInput) {
  std::vector<std::uint8_t> bytes = encode_flo(random_flow({4, 4}, 5));
  std::vector<std::uint8_t> bad = bytes;
  bad[0] ^= 0xff;
  EXPECT_THROW(decode_flo(bad), BadMagic);
  bad = bytes;
  bad.resize(bytes.size() - 1);
  EXPECT_THROW(decode_flo(bad), TruncatedFile);
  bad = bytes;
  bad[7] = 0x80;  // negative width
  EXPECT_THROW(decode_flo(bad), BadMagic);
}

TEST(MaskPng, RoundTripAndNonZeroIsFreespace) {
  FreespaceMask mask({5, 3}, false);
  mask.set(0, 0, true);
  mask.set(4, 2, true);
  mask.set(2, 1, true);
  EXPECT_EQ(decode_mask_png(encode_mask_png(mask)), mask);

  detail::PngImage image;
  image.width = 3;
  image.height = 1;
  image.channels = 1;
  image.bit_depth = 8;
  image.samples = {0, 1, 200};
  const FreespaceMask read = decode_mask_png(detail::encode_png(image));
  EXPECT_FALSE(read.at(0, 0));
  EXPECT_TRUE(read.at(1, 0));
  EXPECT_TRUE(read.at(2, 0));

  image.bit_depth = 16;
  EXPECT_THROW(decode_mask_png(detail::encode_png(image)), WrongBitDepth);
}

TEST(FlowFiles, FormatByExtensionAndUnitsSidecar) {
  EXPECT_EQ(flow_format_for("a/b.PNG"), FlowFileFormat::kKittiPng16);
  EXPECT_EQ(flow_format_for("x.flo"), FlowFileFormat::kMiddleburyFlo);
  EXPECT_THROW(flow_format_for("x.txt"), ConfigError);

  test::TempDir dir("io");
  FlowMap flow = random_flow({16, 8}, 6);
  flow.set_units(FlowUnits::kPixelsPerSecond);
  for (const char* name : {"v.flo", "v.png"}) {
    write_flow(flow, dir / name);
    EXPECT_TRUE(std::filesystem::exists(units_sidecar_path(dir / name)));
    const FlowMap back = read_flow(dir / name);
    EXPECT_EQ(back.units(), FlowUnits::kPixelsPerSecond);
    EXPECT_EQ(back.valid_data(), flow.valid_data());
  }
  write_flo(flow, dir / "bare.flo");
  EXPECT_EQ(read_flow(dir / "bare.flo").units(), FlowUnits::kPixels);

  std::ofstream(units_sidecar_path(dir / "bare.flo")) << "{\"units\": 3}";
  EXPECT_THROW(read_flow(dir / "bare.flo"), ConfigError);
  EXPECT_THROW(read_flow(dir / "missing.flo"), IoError);
}

TEST(FlowFiles, TruncationFuzzFailsCleanly) {
  const std::vector<std::uint8_t> png = encode_kitti_png(random_flow({40, 30}, 7));
  const std::vector<std::uint8_t> flo = encode_flo(random_flow({40, 30}, 8));
  const std::vector<std::uint8_t> mask = encode_mask_png(FreespaceMask({40, 30}, true));
  test::Rng rng(9);
  int clean_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const int which = i % 3;
    const std::vector<std::uint8_t>& full = which == 0 ? png : which == 1 ? flo : mask;
    std::vector<std::uint8_t> cut(full.begin(),
                                  full.begin() + rng.integer(0, static_cast<int>(full.size()) - 1));
    if (i % 2 == 1 && !cut.empty()) {
      cut[static_cast<std::size_t>(rng.integer(0, static_cast<int>(cut.size()) - 1))] ^= 0x5a;
    }
    try {
      if (which == 0) decode_kitti_png(cut);
      if (which == 1) decode_flo(cut);
      if (which == 2) decode_mask_png(cut);
      // A flipped byte may shrink the declared size; it must not crash.
      EXPECT_EQ(i % 2, 1) << "truncated stream decoded at case " << i;
    } catch (const Error&) {
      if (i % 2 == 0) ++clean_failures;
    }
  }
  EXPECT_EQ(clean_failures, 500);
}

}  // namespace
}  // namespace fsof
