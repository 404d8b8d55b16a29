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

#include "fsof/scene_synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fsof/errors.hpp"

namespace fsof {

void validate(const SceneSpec& spec) {
  validate(spec.camera);
  validate(spec.mount);
  if (spec.size.width <= 0 || spec.size.height <= 0) {
    throw InvalidArgument("scene image size must be positive");
  }
  if (!(spec.lateral_extent > 0.0) || !(spec.z_min > 0.0) ||
      !(spec.z_max > spec.z_min)) {
    throw InvalidArgument("scene extents must be positive and well ordered");
  }
  if (!(spec.grid_spacing > 0.0)) {
    throw InvalidArgument("grid spacing must be positive");
  }
}

namespace {

struct OracleResult {
  FlowVector flow;
  GroundPoint ground;
  FlowStatus status = FlowStatus::kOk;
};

OracleResult oracle(Pixel p, const Eigen::Matrix3d& K_inv,
                    const Eigen::Matrix3d& roll, const CameraIntrinsics& k,
                    const MountConfig& m, const PoseDelta& d) {
  OracleResult out;
  const Eigen::Vector3d ray = roll.transpose() * (K_inv * Eigen::Vector3d(p.u, p.v, 1.0));
  if (!(ray.y() > kHorizonEpsilon)) {
    out.status = FlowStatus::kAboveHorizon;
    return out;
  }
  const Eigen::Vector3d ground = (m.h / ray.y()) * ray;
  out.ground = {ground.x(), ground.y(), ground.z()};
  const Eigen::Vector3d moved =
      yaw_rotation(d.phi) * (ground - Eigen::Vector3d(d.x_d, 0.0, d.z_d));
  if (!(moved.z() > 0.0)) {
    out.status = FlowStatus::kBehindCamera;
    return out;
  }
  const Pixel next = project(moved, k, m.theta);
  out.flow = {next.u - p.u, next.v - p.v};
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on (0, 1].
double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

FlowVector flow_oracle(Pixel p, const CameraIntrinsics& k, const MountConfig& m,
                       const PoseDelta& d) {
  const OracleResult r =
      oracle(p, intrinsic_matrix(k).inverse(), roll_rotation(m.theta), k, m, d);
  if (r.status == FlowStatus::kAboveHorizon) {
    throw HorizonError("oracle: pixel ray does not hit the road plane");
  }
  if (r.status == FlowStatus::kBehindCamera) {
    throw PointBehindCameraError("oracle: moved ground point is behind the camera");
  }
  return r.flow;
}

std::vector<GroundPoint> sample_virtual_plane(const SceneSpec& spec) {
  validate(spec);
  const auto nx = static_cast<long>(
      std::floor(2.0 * spec.lateral_extent / spec.grid_spacing + 1e-9)) + 1;
  const auto nz = static_cast<long>(
      std::floor((spec.z_max - spec.z_min) / spec.grid_spacing + 1e-9)) + 1;
  std::vector<GroundPoint> points;
  points.reserve(static_cast<std::size_t>(nx * nz));
  for (long iz = 0; iz < nz; ++iz) {
    for (long ix = 0; ix < nx; ++ix) {
      points.push_back({-spec.lateral_extent + ix * spec.grid_spacing,
                        spec.mount.h, spec.z_min + iz * spec.grid_spacing});
    }
  }
  return points;
}

FlowMap synth_ground_truth(const SceneSpec& spec, const PoseDelta& d) {
  validate(spec);
  const ImageSize size = spec.size;
  FreespaceMask support(size, !spec.sparse);
  if (spec.sparse) {
    for (const GroundPoint& q : sample_virtual_plane(spec)) {
      const Pixel px = project(q, spec.camera, spec.mount.theta);
      const long u = std::lround(px.u);
      const long v = std::lround(px.v);
      if (u >= 0 && v >= 0 && u < size.width && v < size.height) {
        support.set(static_cast<int>(u), static_cast<int>(v), true);
      }
    }
  }

  FlowMap out(size, FlowUnits::kPixels);
  const Eigen::Matrix3d K_inv = intrinsic_matrix(spec.camera).inverse();
  const Eigen::Matrix3d roll = roll_rotation(spec.mount.theta);
  // Absorbs rounding for pixels whose ray lands exactly on the region edge.
  const double tol = 1e-9 * std::max(spec.z_max, spec.lateral_extent);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < size.height; ++v) {
    for (int u = 0; u < size.width; ++u) {
      if (!support.at(u, v)) continue;
      const OracleResult r =
          oracle(Pixel{static_cast<double>(u), static_cast<double>(v)}, K_inv,
                 roll, spec.camera, spec.mount, d);
      if (r.status != FlowStatus::kOk) continue;
      if (!spec.sparse &&
          (std::abs(r.ground.x) > spec.lateral_extent + tol ||
           r.ground.z < spec.z_min - tol || r.ground.z > spec.z_max + tol)) {
        continue;
      }
      out.set(u, v, r.flow);
    }
  }
  return out;
}

double counter_gaussian(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t base = splitmix64(seed ^ splitmix64(counter));
  const double u1 = to_unit(splitmix64(base));
  const double u2 = to_unit(splitmix64(base + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FlowMap add_noise(const FlowMap& flow, const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  FlowMap out = flow;
  if (noise.sigma == 0.0) return out;
  const auto n = static_cast<long>(out.size().area());
  auto& fu = out.fu_data();
  auto& fv = out.fv_data();
  const auto& valid = out.valid_data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    if (!valid[i]) continue;
    const auto c = static_cast<std::uint64_t>(i) * 2;
    fu[i] += noise.sigma * counter_gaussian(noise.seed, c);
    fv[i] += noise.sigma * counter_gaussian(noise.seed, c + 1);
  }
  return out;
}

ObstacleScene insert_obstacle(const FlowMap& flow, const PixelRect& rect,
                              FlowVector offset) {
  if (rect.width <= 0 || rect.height <= 0 || rect.u < 0 || rect.v < 0 ||
      rect.u + rect.width > flow.width() || rect.v + rect.height > flow.height()) {
    throw OutOfBounds("obstacle rectangle (" + std::to_string(rect.u) + ", " +
                      std::to_string(rect.v) + ", " + std::to_string(rect.width) +
                      ", " + std::to_string(rect.height) +
                      ") does not fit the flow map");
  }
  ObstacleScene scene{flow, FreespaceMask(flow.size(), false)};
  scene.freespace.data() = flow.valid_data();
  for (int v = rect.v; v < rect.v + rect.height; ++v) {
    for (int u = rect.u; u < rect.u + rect.width; ++u) {
      const bool was_valid = flow.valid(u, v);
      scene.flow.set(u, v,
                     {(was_valid ? flow.fu(u, v) : 0.0) + offset.fu,
                      (was_valid ? flow.fv(u, v) : 0.0) + offset.fv});
      scene.freespace.set(u, v, false);
    }
  }
  return scene;
}

namespace reference {

FlowMap add_noise(const FlowMap& flow, const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  FlowMap out = flow;
  if (noise.sigma == 0.0) return out;
  for (int v = 0; v < out.height(); ++v) {
    for (int u = 0; u < out.width(); ++u) {
      if (!out.valid(u, v)) continue;
      const auto c = static_cast<std::uint64_t>(out.index(u, v)) * 2;
      out.set(u, v, {out.fu(u, v) + noise.sigma * counter_gaussian(noise.seed, c),
                     out.fv(u, v) + noise.sigma * counter_gaussian(noise.seed, c + 1)});
    }
  }
  return out;
}

}  // namespace reference

}  // namespace fsof
