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

#include <omp.h>

#include <gtest/gtest.h>

#include "fsof/fitting.hpp"
#include "fsof/flow_models.hpp"
#include "fsof/metrics.hpp"
#include "fsof/scene_synth.hpp"
#include "test_support.hpp"

// The parallel kernels must reproduce the serial reference bit for bit for
// any thread count.
namespace fsof {
namespace {

class ThreadCounts : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override {
    saved_ = omp_get_max_threads();
    omp_set_num_threads(GetParam());
  }
  void TearDown() override { omp_set_num_threads(saved_); }

 private:
  int saved_ = 1;
};

const CameraIntrinsics kCamera{721.5377, 721.5377, 609.5593, 172.854};
const MountConfig kMount{1.65, 0.01};
const ImageSize kSize{1242, 375};

TEST_P(ThreadCounts, RenderMatchesReference) {
  const FlowModel models[] = {
      FullDisplacement{{0.05, 1.0, 0.01}}, FullVelocity{{10.0, 0.03, 2.7, 0.01}},
      SimplifiedDisplacement{1.0},          SimplifiedVelocity{10.0},
      SimplestDisplacement{1.0},            SimplestVelocity{10.0},
  };
  for (const FlowModel& model : models) {
    EXPECT_EQ(render_flow_map(model, kCamera, kMount, kSize),
              reference::render_flow_map(model, kCamera, kMount, kSize));
  }
  FreespaceMask region(kSize, false);
  test::Rng rng(50);
  for (auto& m : region.data()) m = rng.uniform(0, 1) < 0.5;
  EXPECT_EQ(render_flow_map(models[0], kCamera, kMount, kSize, region),
            reference::render_flow_map(models[0], kCamera, kMount, kSize, region));
}

TEST_P(ThreadCounts, NoiseMatchesReference) {
  const FlowMap flow = render_flow_map(FullDisplacement{{0.05, 1.0, 0.01}}, kCamera, kMount, kSize);
  const NoiseSpec noise{0.5, 123};
  EXPECT_EQ(add_noise(flow, noise), reference::add_noise(flow, noise));
}

TEST_P(ThreadCounts, RowProjectionMatchesReference) {
  const FlowMap flow = add_noise(
      render_flow_map(FullDisplacement{{0.0, 1.0, 0.0}}, kCamera, kMount, kSize), {0.3, 7});
  const FreespaceMask mask = test::mask_from_validity(flow);
  const FitConfig cfg;
  const RowProjection a = row_projection(flow, mask, cfg);
  const RowProjection b = reference::row_projection(flow, mask, cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].populated, b.rows[i].populated);
    EXPECT_EQ(a.rows[i].support, b.rows[i].support);
    EXPECT_EQ(a.rows[i].value, b.rows[i].value);
  }
}

TEST_P(ThreadCounts, MetricsMatchReference) {
  const FlowMap gt = render_flow_map(FullDisplacement{{0.05, 1.0, 0.01}}, kCamera, kMount, kSize);
  const FlowMap est = add_noise(gt, {0.7, 8});
  const FreespaceMask mask = test::mask_from_validity(gt);
  const MetricsReport a = evaluate(gt, est, mask);
  const MetricsReport b = reference::evaluate(gt, est, mask);
  EXPECT_EQ(a.n, b.n);
  EXPECT_EQ(a.e_A, b.e_A);
  EXPECT_EQ(a.e_E, b.e_E);
  EXPECT_EQ(a.e_U, b.e_U);
  EXPECT_EQ(a.e_V, b.e_V);
}

INSTANTIATE_TEST_SUITE_P(Parallel, ThreadCounts, ::testing::Values(1, 2, 3, 8));

}  // namespace
}  // namespace fsof
