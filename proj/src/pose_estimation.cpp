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

#include "fsof/pose_estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fsof/errors.hpp"
#include "fsof/flow_models.hpp"

namespace fsof {

void validate(const PoseSearchConfig& cfg) {
  for (const Interval& b : {cfg.x_d, cfg.z_d, cfg.phi}) {
    if (!(b.lo <= b.hi) || !std::isfinite(b.lo) || !std::isfinite(b.hi)) {
      throw InvalidArgument("pose search bounds must be finite and ordered");
    }
  }
  if (cfg.swarm_size < 2) throw InvalidArgument("swarm size must be >= 2");
  if (cfg.max_iterations < 0) throw InvalidArgument("iteration cap must be >= 0");
  if (!(cfg.inertia > 0.0) || !(cfg.cognitive > 0.0) || !(cfg.social > 0.0)) {
    throw InvalidArgument("PSO coefficients must be positive");
  }
  if (!(cfg.tolerance >= 0.0) || cfg.stall_window < 1) {
    throw InvalidArgument("convergence tolerance/window must be non-negative/positive");
  }
}

namespace {

struct Observation {
  std::vector<Lambda12> lambdas;
  std::vector<FlowVector> flow;
};

Observation gather(const FlowMap& observed, const FreespaceMask& mask,
                   const CameraIntrinsics& k, const MountConfig& m) {
  validate(k);
  validate(m);
  require_same_size(observed.size(), mask.size(), "pose estimation");
  const AngleTrig roll(m.theta);
  Observation obs;
  for (int v = 0; v < observed.height(); ++v) {
    for (int u = 0; u < observed.width(); ++u) {
      if (!observed.valid(u, v) || !mask.at(u, v)) continue;
      obs.lambdas.push_back(
          lambda12(Pixel{static_cast<double>(u), static_cast<double>(v)}, k, roll));
      obs.flow.push_back({observed.fu(u, v), observed.fv(u, v)});
    }
  }
  if (obs.flow.empty()) {
    throw EmptyOverlap("pose estimation: mask and observed validity do not overlap");
  }
  return obs;
}

double mean_endpoint_error(const PoseDelta& candidate, const Observation& obs,
                           const CameraIntrinsics& k, const MountConfig& m) {
  const DisplacementFlowKernel kernel(k, m, candidate);
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.flow.size(); ++i) {
    const FlowResult r = kernel.from_lambdas(obs.lambdas[i]);
    const double du = r.flow.fu - obs.flow[i].fu;
    const double dv = r.flow.fv - obs.flow[i].fv;
    sum += r.ok() ? std::sqrt(du * du + dv * dv) : kUndefinedModelPenalty;
  }
  return sum / static_cast<double>(obs.flow.size());
}

using Vec3 = std::array<double, 3>;

PoseDelta to_pose(const Vec3& x) { return {x[0], x[1], x[2]}; }

class UnitRandom {
 public:
  explicit UnitRandom(std::uint64_t seed) : engine_(seed) {}
  // 53-bit uniform on [0, 1); mt19937_64's output sequence is standardised.
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

double sanitize(double cost) {
  return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

}  // namespace

double pose_cost(const PoseDelta& candidate, const FlowMap& observed,
                 const FreespaceMask& mask, const CameraIntrinsics& k,
                 const MountConfig& m) {
  return mean_endpoint_error(candidate, gather(observed, mask, k, m), k, m);
}

PoseEstimate estimate_pose(const FlowMap& observed, const FreespaceMask& mask,
                           const CameraIntrinsics& k, const MountConfig& m,
                           const PoseSearchConfig& cfg) {
  validate(cfg);
  const Observation obs = gather(observed, mask, k, m);

  const std::array<Interval, 3> bounds{cfg.x_d, cfg.z_d, cfg.phi};
  Vec3 vmax{};
  for (int d = 0; d < 3; ++d) vmax[d] = 0.2 * bounds[d].width();

  const auto n = static_cast<std::size_t>(cfg.swarm_size);
  UnitRandom rand(cfg.seed);
  std::vector<Vec3> position(n);
  std::vector<Vec3> velocity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < 3; ++d) {
      position[i][d] = bounds[d].lo + rand() * bounds[d].width();
      velocity[i][d] = (2.0 * rand() - 1.0) * vmax[d];
    }
  }

  std::vector<double> cost(n);
  const auto evaluate_all = [&] {
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
      cost[i] = sanitize(mean_endpoint_error(to_pose(position[i]), obs, k, m));
    }
  };

  evaluate_all();
  std::vector<Vec3> personal = position;
  std::vector<double> personal_cost = cost;
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (personal_cost[i] < personal_cost[best]) best = i;
  }
  if (!std::isfinite(personal_cost[best])) {
    throw NonFinite("pose cost is not finite for any particle; check the observed flow");
  }

  // Best cost after each iteration; index 0 is the initial swarm.
  std::vector<double> history{personal_cost[best]};
  for (int iteration = 0; iteration < cfg.max_iterations; ++iteration) {
    const Vec3 global = personal[best];
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 3; ++d) {
        double vel = cfg.inertia * velocity[i][d] +
                     cfg.cognitive * rand() * (personal[i][d] - position[i][d]) +
                     cfg.social * rand() * (global[d] - position[i][d]);
        vel = std::clamp(vel, -vmax[d], vmax[d]);
        double x = position[i][d] + vel;
        if (x < bounds[d].lo || x > bounds[d].hi) {
          x = std::clamp(x, bounds[d].lo, bounds[d].hi);
          vel = 0.0;
        }
        position[i][d] = x;
        velocity[i][d] = vel;
      }
    }
    evaluate_all();
    for (std::size_t i = 0; i < n; ++i) {
      if (cost[i] < personal_cost[i]) {
        personal_cost[i] = cost[i];
        personal[i] = position[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (personal_cost[i] < personal_cost[best] ||
          (personal_cost[i] == personal_cost[best] && i < best)) {
        best = i;
      }
    }
    history.push_back(personal_cost[best]);
  }

  // A stalled swarm often escapes again, so the search always runs to the
  // iteration cap; the stall test only sets the flag.
  const auto w = static_cast<std::size_t>(cfg.stall_window);
  PoseEstimate result;
  result.converged = history.size() > w &&
                     history[history.size() - 1 - w] - history.back() < cfg.tolerance;
  result.pose = to_pose(personal[best]);
  result.cost = personal_cost[best];
  result.iterations = cfg.max_iterations;
  return result;
}

}  // namespace fsof
