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

// Acceptance suite: prints one PASS / FAIL / SKIP line per criterion and
// exits nonzero when a required criterion fails.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsof/errors.hpp"
#include "fsof/fitting.hpp"
#include "fsof/flow_io.hpp"
#include "fsof/flow_models.hpp"
#include "fsof/metrics.hpp"
#include "fsof/pose_estimation.hpp"
#include "fsof/runtime.hpp"
#include "fsof/scene_synth.hpp"
#include "../src/png_codec.hpp"

namespace {

using namespace fsof;
using Clock = std::chrono::steady_clock;

constexpr double kDeg = std::numbers::pi / 180.0;

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kFail;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome verdict(bool ok, std::string detail) {
  return {ok ? Outcome::kPass : Outcome::kFail, std::move(detail)};
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

// Closed-form displacement flow against the literal pinhole chain. A tuple
// counts when the ground point is visible in both 1242 x 375 frames.
Outcome oracle_equivalence() {
  const auto start = Clock::now();
  Uniform rnd(1001);
  int checked = 0;
  int undefined = 0;
  int left_frame = 0;
  double worst = 0.0;
  while (checked < 10000) {
    const CameraIntrinsics k{rnd(400, 1200), rnd(400, 1200), rnd(300, 900), rnd(100, 250)};
    const MountConfig m{rnd(0.5, 2.5), rnd(-0.2, 0.2)};
    const PoseDelta d{rnd(-1, 1), rnd(0, 5), rnd(-10, 10) * kDeg};
    const Pixel p{rnd(0, 1242), rnd(0, 375)};
    FlowVector closed;
    FlowVector oracle;
    try {
      closed = displacement_flow(p, k, m, d);
      oracle = flow_oracle(p, k, m, d);
    } catch (const Error&) {
      ++undefined;  // horizon or behind the camera: no flow to compare
      continue;
    }
    const double u2 = p.u + oracle.fu;
    const double v2 = p.v + oracle.fv;
    if (!(u2 >= 0.0 && u2 <= 1242.0 && v2 >= 0.0 && v2 <= 375.0)) {
      ++left_frame;
      continue;
    }
    worst = std::max({worst, std::abs(closed.fu - oracle.fu), std::abs(closed.fv - oracle.fv)});
    ++checked;
  }
  const double elapsed = seconds_since(start);
  return verdict(worst <= 1e-6 && elapsed < 5.0,
                 fmt("%d tuples, max |diff| = %.3g px, %.3f s (drawn and skipped: %d undefined, "
                     "%d leaving the frame)",
                     checked, worst, elapsed, undefined, left_frame));
}

// f_d(dt) / dt converges to f_v at first order.
Outcome limit_consistency() {
  Uniform rnd(1002);
  const double steps[] = {1e-3, 5e-4, 2.5e-4};
  double min_order = std::numeric_limits<double>::infinity();
  int states = 0;
  while (states < 100) {
    const CameraIntrinsics k{rnd(600, 900), rnd(600, 900), rnd(500, 700), rnd(150, 200)};
    const MountConfig m{rnd(1.0, 2.0), rnd(-0.1, 0.1)};
    const VelocityState s{rnd(1, 30), rnd(-0.5, 0.5), rnd(2, 4), rnd(-0.3, 0.3)};
    const Pixel p{rnd(k.u0 - 300, k.u0 + 300), rnd(k.v0 + 40, k.v0 + 200)};
    double err[3];
    try {
      const FlowVector fv = velocity_flow(p, k, m, s);
      for (int i = 0; i < 3; ++i) {
        const FlowVector fd =
            displacement_flow(p, k, m, integrate_rates(ackermann_rates(s), steps[i]));
        err[i] = std::hypot(fd.fu / steps[i] - fv.fu, fd.fv / steps[i] - fv.fv);
      }
    } catch (const Error&) {
      continue;
    }
    // Least-squares slope of log(err) against log(dt).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
      const double x = std::log(steps[i]);
      const double y = std::log(err[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    min_order = std::min(min_order, (3 * sxy - sx * sy) / (3 * sxx - sx * sx));
    ++states;
  }
  return verdict(min_order >= 0.9,
                 fmt("%d states, min empirical order = %.4f", states, min_order));
}

// Noiseless straight-ahead scene: the fitted V-flow curve reproduces Fv.
Outcome special_case_fit() {
  const auto start = Clock::now();
  SceneSpec spec;
  spec.camera = {721.5377, 721.5377, 609.5593, 172.854};
  spec.mount = {1.65, 0.0};
  spec.size = {1242, 375};
  const FlowMap observed = synth_ground_truth(spec, {0.0, 1.0, 0.0});
  const FitConfig cfg;
  const CurveFit fit =
      fit_fv_curve(row_projection(observed, cfg), spec.camera, FitKind::kRationalDisplacement);
  const FlowMap fitted = render_fitted_fv(fit, spec.size, spec.camera);
  double worst = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < observed.size().area(); ++i) {
    if (!observed.valid_data()[i] || !fitted.valid_data()[i]) continue;
    worst = std::max(worst, std::abs(observed.fv_data()[i] - fitted.fv_data()[i]));
    ++n;
  }
  const double elapsed = seconds_since(start);
  const double k_true = 1.0 / (spec.mount.h * spec.camera.fy);
  return verdict(n > 0 && worst < 1.0 && elapsed < 1.0,
                 fmt("%zu px, max |Fv - fit| = %.3g px, k = %.9g (true %.9g), %.3f s", n, worst,
                     fit.k, k_true, elapsed));
}

SceneSpec pose_scene() {
  SceneSpec s;
  s.camera = {700.0, 700.0, 320.0, 96.0};
  s.mount = {1.5, 0.0};
  s.size = {640, 192};
  s.lateral_extent = 4.0;
  s.z_min = 5.0;
  s.z_max = 25.0;
  s.grid_spacing = 0.35;
  s.sparse = true;
  return s;
}

PoseDelta random_pose(Uniform& rnd, const PoseSearchConfig& bounds) {
  return {rnd(bounds.x_d.lo, bounds.x_d.hi), rnd(bounds.z_d.lo, bounds.z_d.hi),
          rnd(bounds.phi.lo, bounds.phi.hi)};
}

// 20 poses x 20 noise seeds at sigma = 0.5 px.
Outcome pose_under_noise() {
  const auto start = Clock::now();
  const SceneSpec scene = pose_scene();
  const PoseSearchConfig cfg;
  Uniform rnd(1004);
  double sum_disp = 0.0;
  double sum_yaw = 0.0;
  int runs = 0;
  for (int pose_index = 0; pose_index < 20; ++pose_index) {
    const PoseDelta truth = random_pose(rnd, cfg);
    const FlowMap clean = synth_ground_truth(scene, truth);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const FlowMap noisy = add_noise(clean, {0.5, 1000 * pose_index + seed});
      FreespaceMask mask(noisy.size(), false);
      mask.data() = noisy.valid_data();
      const PoseEstimate e = estimate_pose(noisy, mask, scene.camera, scene.mount, cfg);
      sum_disp += std::hypot(e.pose.x_d - truth.x_d, e.pose.z_d - truth.z_d);
      sum_yaw += std::abs(e.pose.phi - truth.phi);
      ++runs;
    }
  }
  const double mean_disp = sum_disp / runs;
  const double mean_yaw_deg = sum_yaw / runs / kDeg;
  const double elapsed = seconds_since(start);
  return verdict(mean_disp < 0.07 && mean_yaw_deg < 0.3 && elapsed < 120.0,
                 fmt("%d runs, mean displacement error = %.4g m, mean yaw error = %.4g deg, "
                     "%.1f s",
                     runs, mean_disp, mean_yaw_deg, elapsed));
}

// 100 poses without noise.
Outcome pose_noiseless() {
  const auto start = Clock::now();
  const SceneSpec scene = pose_scene();
  PoseSearchConfig cfg;
  cfg.max_iterations = 300;
  Uniform rnd(1005);
  double worst_pos = 0.0;
  double worst_yaw = 0.0;
  double worst_cost = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PoseDelta truth = random_pose(rnd, cfg);
    const FlowMap flow = synth_ground_truth(scene, truth);
    FreespaceMask mask(flow.size(), false);
    mask.data() = flow.valid_data();
    const PoseEstimate e = estimate_pose(flow, mask, scene.camera, scene.mount, cfg);
    worst_pos = std::max({worst_pos, std::abs(e.pose.x_d - truth.x_d),
                          std::abs(e.pose.z_d - truth.z_d)});
    worst_yaw = std::max(worst_yaw, std::abs(e.pose.phi - truth.phi));
    worst_cost = std::max(worst_cost, e.cost);
  }
  const double worst_yaw_deg = worst_yaw / kDeg;
  return verdict(worst_pos < 1e-3 && worst_yaw_deg < 0.01 && worst_cost < 1e-6,
                 fmt("100 poses, %d iterations, max position error = %.3g m, max yaw error = "
                     "%.3g deg, max cost = %.3g px, %.1f s",
                     cfg.max_iterations, worst_pos, worst_yaw_deg, worst_cost,
                     seconds_since(start)));
}

// Single-threaded full-frame rendering at 1242 x 375.
Outcome throughput() {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const ImageSize size{1242, 375};
  const ThroughputResult r = measure_render_throughput(
      benchmark_model(), benchmark_camera(size), benchmark_mount(), size, 100);
  omp_set_num_threads(saved);
  const nlohmann::json env = environment_json();
  const double fps = r.fps();
  const std::string where = env.dump();
  if (fps >= 34.5) {
    return verdict(true, fmt("%.1f fps (%.2f ms/frame), threads = 1, environment = %s", fps,
                             r.ms_per_frame(), where.c_str()));
  }
  return verdict(fps >= 25.0,
                 fmt("%.1f fps (%.2f ms/frame) below 34.5, fallback bar 25 fps, threads = 1, "
                     "environment = %s",
                     fps, r.ms_per_frame(), where.c_str()));
}

// The three worked metric examples.
Outcome metric_examples() {
  const auto single = [](FlowVector g, FlowVector e) {
    FlowMap gt(ImageSize{1, 1}, FlowUnits::kPixels);
    FlowMap est(ImageSize{1, 1}, FlowUnits::kPixels);
    gt.set(0, 0, g);
    est.set(0, 0, e);
    return evaluate(gt, est);
  };
  FlowMap gt(ImageSize{8, 4}, FlowUnits::kPixels);
  for (int v = 0; v < 4; ++v) {
    for (int u = 0; u < 8; ++u) gt.set(u, v, {0.3 * u - 1.0, 0.7 * v + 0.1});
  }
  const MetricsReport same = evaluate(gt, gt);
  const MetricsReport pyth = single({3, 4}, {0, 0});
  const MetricsReport angle = single({1, 0}, {0, 1});
  const double tol = 1e-12;
  const bool ok = same.e_A == 0.0 && same.e_E == 0.0 && same.e_U == 0.0 && same.e_V == 0.0 &&
                  std::abs(pyth.e_E - 5.0) <= tol && std::abs(pyth.e_U - 3.0) <= tol &&
                  std::abs(pyth.e_V - 4.0) <= tol &&
                  std::abs(angle.e_A - std::numbers::pi / 3) <= tol;
  return verdict(ok, fmt("zero case e_E = %g; 3-4-5 case (%g, %g, %g); e_A = %.15f (pi/3 = "
                         "%.15f)",
                         same.e_E, pyth.e_E, pyth.e_U, pyth.e_V, angle.e_A,
                         std::numbers::pi / 3));
}

// Model flow from odometry against user-supplied ground truth.
//
// FSOF_DATASET_MANIFEST names a JSON array of scenes:
//   [{"flow": "gt_flow.png", "mask": "freespace.png",
//     "camera": {"fx", "fy", "u0", "v0"}, "mount": {"h", "theta"},
//     "pose": {"x_d", "z_d", "phi"}}, ...]
// Relative paths resolve against the manifest's directory.
Outcome dataset_checks() {
  const char* manifest = std::getenv("FSOF_DATASET_MANIFEST");
  if (!manifest || !*manifest) return {Outcome::kSkip, "FSOF_DATASET_MANIFEST not set"};
  try {
    const std::filesystem::path path(manifest);
    std::ifstream in(path);
    const nlohmann::json scenes = nlohmann::json::parse(in);
    const auto resolve = [&](const std::string& p) {
      const std::filesystem::path q(p);
      return q.is_absolute() ? q : path.parent_path() / q;
    };
    double worst_e = 0.0;
    double worst_a = 0.0;
    for (const auto& s : scenes) {
      const FlowMap gt = read_flow(resolve(s.at("flow").get<std::string>()));
      const FreespaceMask mask = read_mask_png(resolve(s.at("mask").get<std::string>()));
      const auto& c = s.at("camera");
      const CameraIntrinsics k{c.at("fx").get<double>(), c.at("fy").get<double>(),
                               c.at("u0").get<double>(), c.at("v0").get<double>()};
      const MountConfig m{s.at("mount").at("h").get<double>(),
                          s.at("mount").value("theta", 0.0)};
      const auto& p = s.at("pose");
      const PoseDelta d{p.value("x_d", 0.0), p.at("z_d").get<double>(), p.value("phi", 0.0)};
      const MetricsReport r =
          evaluate(gt, render_flow_map(FullDisplacement{d}, k, m, gt.size()), mask);
      worst_e = std::max(worst_e, r.e_E);
      worst_a = std::max(worst_a, r.e_A);
    }
    return verdict(!scenes.empty() && worst_e < 1.0 && worst_a < 0.05,
                   fmt("%zu scenes, max e_E = %.4g px, max e_A = %.4g rad", scenes.size(),
                       worst_e, worst_a));
  } catch (const std::exception& e) {
    return {Outcome::kFail, std::string("manifest error: ") + e.what()};
  }
}

// KITTI and .flo round trips plus truncation fuzzing.
Outcome codec_round_trips() {
  detail::PngImage grid;
  grid.width = 256;
  grid.height = 128;
  grid.channels = 3;
  grid.bit_depth = 16;
  for (std::uint32_t i = 0; i < 65536; i += 2) {
    grid.samples.push_back(static_cast<std::uint16_t>(i));
    grid.samples.push_back(static_cast<std::uint16_t>(i + 1));
    grid.samples.push_back(static_cast<std::uint16_t>((i / 2) % 2));
  }
  const std::vector<std::uint8_t> png = detail::encode_png(grid);
  const FlowMap decoded = decode_kitti_png(png);
  const detail::PngImage again = detail::decode_png(encode_kitti_png(decoded));
  const bool kitti_ok = again.samples == grid.samples;

  FlowMap flow(ImageSize{97, 41}, FlowUnits::kPixels);
  Uniform rnd(1009);
  for (int v = 0; v < flow.height(); ++v) {
    for (int u = 0; u < flow.width(); ++u) {
      if (rnd(0, 1) < 0.9) {
        flow.set(u, v, {static_cast<float>(rnd(-300, 300)), static_cast<float>(rnd(-300, 300))});
      }
    }
  }
  const std::vector<std::uint8_t> flo = encode_flo(flow);
  const bool flo_ok = decode_flo(flo) == flow;

  const std::vector<std::uint8_t>* sources[] = {&png, &flo};
  std::mt19937_64 engine(1010);
  int clean = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::vector<std::uint8_t>& full = *sources[i % 2];
    const std::size_t cut =
        std::uniform_int_distribution<std::size_t>(0, full.size() - 1)(engine);
    const std::vector<std::uint8_t> part(full.begin(), full.begin() + cut);
    try {
      if (i % 2 == 0) {
        decode_kitti_png(part);
      } else {
        decode_flo(part);
      }
    } catch (const Error&) {
      ++clean;
    }
  }
  return verdict(kitti_ok && flo_ok && clean == 1000,
                 fmt("KITTI grid of all 65536 raw values %s, .flo float32 round trip %s, "
                     "%d/1000 truncated files rejected with a library error",
                     kitti_ok ? "bit-identical" : "differs", flo_ok ? "identical" : "differs",
                     clean));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    bool required;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "oracle equivalence", true, oracle_equivalence},
      {2, "limit consistency", true, limit_consistency},
      {3, "special-case fit error", true, special_case_fit},
      {4, "pose recovery under noise", true, pose_under_noise},
      {5, "noiseless pose recovery", true, pose_noiseless},
      {6, "throughput", true, throughput},
      {7, "metric unit tests", true, metric_examples},
      {8, "dataset-backed checks", false, dataset_checks},
      {9, "codec round-trips", true, codec_round_trips},
  };
  int required_failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Outcome::kPass ? "PASS" : o.status == Outcome::kSkip ? "SKIP" : "FAIL";
    std::printf("%s criterion %d (%s): %s\n", tag, c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (o.status == Outcome::kFail && c.required) ++required_failures;
  }
  return required_failures == 0 ? 0 : 1;
}
