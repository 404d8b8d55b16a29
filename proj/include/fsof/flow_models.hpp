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

// Closed-form optical flow of the road plane.
//
// Two families are provided:
//  * displacement flow (pixels/frame) for an inter-frame motion PoseDelta,
//  * velocity flow (pixels/second) for an instantaneous Ackermann state,
// each with simplified variants for straight driving and, for theta = 0,
// the "simplest" forms in which the vertical flow is a quadratic (velocity)
// or rational (displacement) function of v - v0.
//
// Per-pixel kernels never throw; they report a FlowStatus. The free
// functions wrap them and throw HorizonError / PointBehindCameraError.

#include <cstdint>
#include <variant>

#include "fsof/flow_map.hpp"
#include "fsof/geometry.hpp"

namespace fsof {

struct VelocityState {
  double v_r = 0.0;      // rear-axle speed, m/s
  double delta_f = 0.0;  // front-wheel steering angle, rad
  double l = 1.0;        // wheelbase, m
  double heading = 0.0;  // current yaw relative to the vehicle frame, rad
};

void validate(const VelocityState& s);

struct AckermannRates {
  double phi_dot = 0.0;  // rad/s
  double x_dot = 0.0;    // m/s
  double z_dot = 0.0;    // m/s
};

AckermannRates ackermann_rates(const VelocityState& s);

/// First-order pose increment over dt: (x_dot*dt, z_dot*dt, phi_dot*dt).
PoseDelta integrate_rates(const AckermannRates& r, double dt);

enum class FlowStatus : std::uint8_t { kOk, kAboveHorizon, kBehindCamera };

struct FlowResult {
  FlowVector flow;
  FlowStatus status = FlowStatus::kOk;

  bool ok() const { return status == FlowStatus::kOk; }
};

class DisplacementFlowKernel {
 public:
  DisplacementFlowKernel(const CameraIntrinsics& k, const MountConfig& m,
                         const PoseDelta& d);
  FlowResult operator()(Pixel p) const noexcept;
  // For callers that evaluate many poses on the same pixels.
  FlowResult from_lambdas(const Lambda12& l) const noexcept;

 private:
  CameraIntrinsics k_;
  double h_;
  AngleTrig roll_;
  AngleTrig yaw_;
  PoseDelta d_;
};

class VelocityFlowKernel {
 public:
  VelocityFlowKernel(const CameraIntrinsics& k, const MountConfig& m,
                     const VelocityState& s);
  FlowResult operator()(Pixel p) const noexcept;

 private:
  CameraIntrinsics k_;
  double h_;
  AngleTrig roll_;
  AckermannRates rates_;
};

class SimplifiedDisplacementKernel {
 public:
  SimplifiedDisplacementKernel(const CameraIntrinsics& k, const MountConfig& m,
                               double z_d);
  FlowResult operator()(Pixel p) const noexcept;

 private:
  CameraIntrinsics k_;
  double h_;
  AngleTrig roll_;
  double z_d_;
};

class SimplifiedVelocityKernel {
 public:
  SimplifiedVelocityKernel(const CameraIntrinsics& k, const MountConfig& m,
                           double v_r);
  FlowResult operator()(Pixel p) const noexcept;

 private:
  CameraIntrinsics k_;
  double h_;
  AngleTrig roll_;
  double v_r_;
};

// theta = 0, phi = 0, x_d = 0.
class SimplestDisplacementKernel {
 public:
  SimplestDisplacementKernel(const CameraIntrinsics& k, double h, double z_d);
  FlowResult operator()(Pixel p) const noexcept;

 private:
  CameraIntrinsics k_;
  double h_;
  double z_d_;
};

class SimplestVelocityKernel {
 public:
  SimplestVelocityKernel(const CameraIntrinsics& k, double h, double v_r);
  FlowResult operator()(Pixel p) const noexcept;

 private:
  CameraIntrinsics k_;
  double h_;
  double v_r_;
};

// Throwing per-pixel entry points.
FlowVector displacement_flow(Pixel p, const CameraIntrinsics& k,
                             const MountConfig& m, const PoseDelta& d);
FlowVector velocity_flow(Pixel p, const CameraIntrinsics& k,
                         const MountConfig& m, const VelocityState& s);
FlowVector displacement_flow_simplified(Pixel p, const CameraIntrinsics& k,
                                        const MountConfig& m, double z_d);
FlowVector velocity_flow_simplified(Pixel p, const CameraIntrinsics& k,
                                    const MountConfig& m, double v_r);

// Model descriptors; a FlowModel selects one closed form for rendering.
struct FullDisplacement {
  PoseDelta pose;
};
struct FullVelocity {
  VelocityState state;
};
struct SimplifiedDisplacement {
  double z_d = 0.0;
};
struct SimplifiedVelocity {
  double v_r = 0.0;
};
struct SimplestDisplacement {
  double z_d = 0.0;
};
struct SimplestVelocity {
  double v_r = 0.0;
};

using StraightMotion = std::variant<SimplestDisplacement, SimplestVelocity>;

FlowVector simplest_flows(Pixel p, const CameraIntrinsics& k, double h,
                          const StraightMotion& motion);

using FlowModel =
    std::variant<FullDisplacement, FullVelocity, SimplifiedDisplacement,
                 SimplifiedVelocity, SimplestDisplacement, SimplestVelocity>;

FlowUnits units_of(const FlowModel& model);

/// Evaluates the model at every integer pixel (u, v). Pixels above the
/// horizon or whose ground point leaves the camera's view are left invalid.
/// Rows are rendered in parallel; the result does not depend on the number
/// of threads.
FlowMap render_flow_map(const FlowModel& model, const CameraIntrinsics& k,
                        const MountConfig& m, ImageSize size);

/// As above but only pixels inside `region` are evaluated.
FlowMap render_flow_map(const FlowModel& model, const CameraIntrinsics& k,
                        const MountConfig& m, ImageSize size,
                        const FreespaceMask& region);

namespace reference {

// Single-threaded reference renderers used to check the parallel path.
FlowMap render_flow_map(const FlowModel& model, const CameraIntrinsics& k,
                        const MountConfig& m, ImageSize size);
FlowMap render_flow_map(const FlowModel& model, const CameraIntrinsics& k,
                        const MountConfig& m, ImageSize size,
                        const FreespaceMask& region);

}  // namespace reference

}  // namespace fsof
