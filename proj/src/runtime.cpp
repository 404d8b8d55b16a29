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

#include "fsof/runtime.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <string_view>
#include <thread>

#include "fsof/errors.hpp"

namespace fsof {

int configure_threads(std::optional<int> requested) {
  if (!requested) {
    if (const char* env = std::getenv("FSOF_THREADS"); env && *env) {
      const std::string_view text(env);
      int value = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidArgument("FSOF_THREADS must be an integer, got '" + std::string(text) + "'");
      }
      requested = value;
    }
  }
  if (requested) {
    if (*requested < 1) throw InvalidArgument("thread count must be >= 1");
    omp_set_num_threads(*requested);
  }
  return omp_get_max_threads();
}

nlohmann::json environment_json() {
  std::string cpu = "unknown";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
#if defined(__clang__)
  const std::string compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  const std::string compiler = "gcc " __VERSION__;
#else
  const std::string compiler = "unknown";
#endif
  return {{"cpu", cpu},
          {"logical_cores", std::thread::hardware_concurrency()},
          {"compiler", compiler},
          {"openmp_max_threads", omp_get_max_threads()}};
}

ThroughputResult measure_render_throughput(const FlowModel& model,
                                           const CameraIntrinsics& k,
                                           const MountConfig& m, ImageSize size,
                                           int frames) {
  if (frames < 1) throw InvalidArgument("frame count must be >= 1");
  volatile std::size_t sink = render_flow_map(model, k, m, size).valid_count();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  for (int i = 0; i < frames; ++i) {
    const FlowMap flow = render_flow_map(model, k, m, size);
    sink = sink + flow.valid_data()[flow.valid_data().size() - 1];
  }
  const auto stop = Clock::now();
  ThroughputResult r;
  r.size = size;
  r.frames = frames;
  r.threads = omp_get_max_threads();
  r.seconds = std::chrono::duration<double>(stop - start).count();
  return r;
}

CameraIntrinsics benchmark_camera(ImageSize size) {
  // KITTI colour camera focal length; principal point at the image centre
  // with the horizon in the upper half.
  return {721.5377, 721.5377, 0.5 * size.width, 0.46 * size.height};
}

MountConfig benchmark_mount() { return {1.65, 0.0}; }

FlowModel benchmark_model() { return FullDisplacement{PoseDelta{0.05, 1.0, 0.01}}; }

}  // namespace fsof
