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

// Serial reference kernels against their OpenMP counterparts.
//
//   ./fsof_bench --benchmark_filter=Render
//
// The thread count of the parallel variants is the benchmark argument.
#include <omp.h>

#include <benchmark/benchmark.h>

#include "fsof/fitting.hpp"
#include "fsof/flow_models.hpp"
#include "fsof/metrics.hpp"
#include "fsof/runtime.hpp"
#include "fsof/scene_synth.hpp"

namespace {

using namespace fsof;

const ImageSize kSize{1242, 375};

FlowMap bench_flow() {
  return render_flow_map(benchmark_model(), benchmark_camera(kSize), benchmark_mount(), kSize);
}

FreespaceMask all_valid(const FlowMap& flow) {
  FreespaceMask mask(flow.size(), false);
  mask.data() = flow.valid_data();
  return mask;
}

void set_frames(benchmark::State& state) {
  state.SetItemsProcessed(state.iterations());
  state.counters["fps"] = benchmark::Counter(static_cast<double>(state.iterations()),
                                             benchmark::Counter::kIsRate);
}

void BM_RenderReference(benchmark::State& state) {
  const CameraIntrinsics k = benchmark_camera(kSize);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::render_flow_map(benchmark_model(), k, benchmark_mount(), kSize));
  }
  set_frames(state);
}
BENCHMARK(BM_RenderReference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RenderParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const CameraIntrinsics k = benchmark_camera(kSize);
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_flow_map(benchmark_model(), k, benchmark_mount(), kSize));
  }
  set_frames(state);
}
BENCHMARK(BM_RenderParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_NoiseReference(benchmark::State& state) {
  const FlowMap flow = bench_flow();
  for (auto _ : state) benchmark::DoNotOptimize(reference::add_noise(flow, {0.5, 1}));
  set_frames(state);
}
BENCHMARK(BM_NoiseReference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_NoiseParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const FlowMap flow = bench_flow();
  for (auto _ : state) benchmark::DoNotOptimize(add_noise(flow, {0.5, 1}));
  set_frames(state);
}
BENCHMARK(BM_NoiseParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RowProjectionReference(benchmark::State& state) {
  const FlowMap flow = add_noise(bench_flow(), {0.3, 2});
  const FreespaceMask mask = all_valid(flow);
  for (auto _ : state) benchmark::DoNotOptimize(reference::row_projection(flow, mask, FitConfig{}));
  set_frames(state);
}
BENCHMARK(BM_RowProjectionReference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RowProjectionParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const FlowMap flow = add_noise(bench_flow(), {0.3, 2});
  const FreespaceMask mask = all_valid(flow);
  for (auto _ : state) benchmark::DoNotOptimize(row_projection(flow, mask, FitConfig{}));
  set_frames(state);
}
BENCHMARK(BM_RowProjectionParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EvaluateReference(benchmark::State& state) {
  const FlowMap gt = bench_flow();
  const FlowMap est = add_noise(gt, {0.5, 3});
  const FreespaceMask mask = all_valid(gt);
  for (auto _ : state) benchmark::DoNotOptimize(reference::evaluate(gt, est, mask));
  set_frames(state);
}
BENCHMARK(BM_EvaluateReference)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EvaluateParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const FlowMap gt = bench_flow();
  const FlowMap est = add_noise(gt, {0.5, 3});
  const FreespaceMask mask = all_valid(gt);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(gt, est, mask));
  set_frames(state);
}
BENCHMARK(BM_EvaluateParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
