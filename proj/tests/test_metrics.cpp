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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fsof/errors.hpp"
#include "fsof/metrics.hpp"
#include "test_support.hpp"

namespace fsof {
namespace {

FlowMap single(double fu, double fv) {
  FlowMap f({1, 1}, FlowUnits::kPixels);
  f.set(0, 0, {fu, fv});
  return f;
}

FlowMap random_map(ImageSize size, test::Rng& rng, double invalid_fraction = 0.1) {
  FlowMap f(size, FlowUnits::kPixels);
  for (int v = 0; v < size.height; ++v) {
    for (int u = 0; u < size.width; ++u) {
      if (rng.uniform(0, 1) < invalid_fraction) continue;
      f.set(u, v, {rng.uniform(-20, 20), rng.uniform(-20, 20)});
    }
  }
  return f;
}

TEST(Evaluate, IdenticalMapsGiveZero) {
  test::Rng rng(20);
  const FlowMap f = random_map({40, 30}, rng);
  const MetricsReport r = evaluate(f, f);
  EXPECT_EQ(r.e_A, 0.0);
  EXPECT_EQ(r.e_E, 0.0);
  EXPECT_EQ(r.e_U, 0.0);
  EXPECT_EQ(r.e_V, 0.0);
  EXPECT_EQ(r.n, f.valid_count());
}

TEST(Evaluate, PythagoreanPixel) {
  const MetricsReport r = evaluate(single(3, 4), single(0, 0));
  EXPECT_NEAR(r.e_E, 5.0, 1e-12);
  EXPECT_NEAR(r.e_U, 3.0, 1e-12);
  EXPECT_NEAR(r.e_V, 4.0, 1e-12);
  EXPECT_EQ(r.n, 1u);
}

TEST(Evaluate, AngularErrorUsesAugmentedVectors) {
  const MetricsReport r = evaluate(single(1, 0), single(0, 1));
  EXPECT_NEAR(r.e_A, std::numbers::pi / 3, 1e-12);
}

TEST(Evaluate, SymmetricAndTriangleBounded) {
  test::Rng rng(21);
  for (int i = 0; i < 20; ++i) {
    const FlowMap a = random_map({17, 13}, rng);
    const FlowMap b = random_map({17, 13}, rng);
    const MetricsReport ab = evaluate(a, b);
    const MetricsReport ba = evaluate(b, a);
    EXPECT_NEAR(ab.e_A, ba.e_A, 1e-12);
    EXPECT_NEAR(ab.e_E, ba.e_E, 1e-12);
    EXPECT_NEAR(ab.e_U, ba.e_U, 1e-12);
    EXPECT_NEAR(ab.e_V, ba.e_V, 1e-12);
    EXPECT_GE(ab.e_E, std::max(ab.e_U, ab.e_V) - 1e-12);
    EXPECT_LE(ab.e_E, ab.e_U + ab.e_V + 1e-12);
    EXPECT_GE(ab.e_A, 0.0);
  }
}

TEST(Evaluate, NeverNaNForNearlyParallelVectors) {
  const MetricsReport r = evaluate(single(1e8, 1e8), single(1e8, 1e8 + 1e-6));
  EXPECT_FALSE(std::isnan(r.e_A));
}

TEST(Evaluate, MaskedPixelsDoNotMatter) {
  test::Rng rng(22);
  const FlowMap gt = random_map({20, 20}, rng, 0.0);
  FlowMap est = random_map({20, 20}, rng, 0.0);
  FreespaceMask mask({20, 20}, false);
  for (int v = 0; v < 10; ++v) {
    for (int u = 0; u < 20; ++u) mask.set(u, v, true);
  }
  const MetricsReport before = evaluate(gt, est, mask);
  for (int v = 10; v < 20; ++v) {
    for (int u = 0; u < 20; ++u) est.set(u, v, {1e6, -1e6});
  }
  const MetricsReport after = evaluate(gt, est, mask);
  EXPECT_EQ(before.e_A, after.e_A);
  EXPECT_EQ(before.e_E, after.e_E);
  EXPECT_EQ(before.n, 200u);
}

TEST(Evaluate, OnlyPixelsValidInBothMapsCount) {
  FlowMap gt({2, 1}, FlowUnits::kPixels);
  FlowMap est({2, 1}, FlowUnits::kPixels);
  gt.set(0, 0, {1, 1});
  gt.set(1, 0, {5, 5});
  est.set(0, 0, {1, 2});
  const MetricsReport r = evaluate(gt, est);
  EXPECT_EQ(r.n, 1u);
  EXPECT_NEAR(r.e_E, 1.0, 1e-15);
}

TEST(Evaluate, Errors) {
  const FlowMap a({4, 4}, FlowUnits::kPixels);
  EXPECT_THROW(evaluate(a, a), EmptyOverlap);
  EXPECT_THROW(evaluate(single(1, 1), FlowMap({2, 1}, FlowUnits::kPixels)), DimensionMismatch);
  FlowMap velocity = single(1, 1);
  velocity.set_units(FlowUnits::kPixelsPerSecond);
  EXPECT_THROW(evaluate(single(1, 1), velocity), UnitsMismatch);
  EXPECT_THROW(evaluate(single(1, 1), single(1, 1), FreespaceMask({2, 2}, true)), DimensionMismatch);
}

TEST(Evaluate, UnitsCarriedIntoReport) {
  FlowMap a = single(1, 1);
  a.set_units(FlowUnits::kPixelsPerSecond);
  EXPECT_EQ(evaluate(a, a).units, FlowUnits::kPixelsPerSecond);
}

TEST(Evaluate, MatchesNaiveReference) {
  test::Rng rng(23);
  const FlowMap gt = random_map({123, 77}, rng);
  const FlowMap est = random_map({123, 77}, rng);
  FreespaceMask mask({123, 77}, true);
  const MetricsReport fast = evaluate(gt, est, mask);
  const MetricsReport slow = reference::evaluate(gt, est, mask);
  EXPECT_EQ(fast.n, slow.n);
  EXPECT_NEAR(fast.e_A, slow.e_A, 1e-12);
  EXPECT_NEAR(fast.e_E, slow.e_E, 1e-12);
  EXPECT_NEAR(fast.e_U, slow.e_U, 1e-12);
  EXPECT_NEAR(fast.e_V, slow.e_V, 1e-12);
}

}  // namespace
}  // namespace fsof
