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

#include "fsof/flow_models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fsof/errors.hpp"
#include "model_dispatch.hpp"

namespace fsof {

void validate(const VelocityState& s) {
  if (!(s.l > 0.0) || !std::isfinite(s.l)) {
    throw InvalidArgument("wheelbase must be positive");
  }
  if (!(std::abs(s.delta_f) < std::numbers::pi / 2.0)) {
    throw InvalidArgument("steering angle must satisfy |delta_f| < pi/2");
  }
  if (!std::isfinite(s.v_r) || !std::isfinite(s.heading)) {
    throw InvalidArgument("velocity state must be finite");
  }
}

AckermannRates ackermann_rates(const VelocityState& s) {
  return {s.v_r * std::tan(s.delta_f) / s.l, s.v_r * std::sin(s.heading),
          s.v_r * std::cos(s.heading)};
}

PoseDelta integrate_rates(const AckermannRates& r, double dt) {
  return {r.x_dot * dt, r.z_dot * dt, r.phi_dot * dt};
}

namespace {

constexpr FlowResult above_horizon() {
  return {{0.0, 0.0}, FlowStatus::kAboveHorizon};
}
constexpr FlowResult behind_camera() {
  return {{0.0, 0.0}, FlowStatus::kBehindCamera};
}

// Applies M = [[fx c, fx s], [-fy s, fy c]] to (a, b).
FlowVector apply_m(const CameraIntrinsics& k, const AngleTrig& roll, double a,
                   double b) {
  return {k.fx * (roll.cos * a + roll.sin * b),
          k.fy * (-roll.sin * a + roll.cos * b)};
}

FlowVector unwrap(const FlowResult& r, Pixel p) {
  switch (r.status) {
    case FlowStatus::kOk:
      return r.flow;
    case FlowStatus::kAboveHorizon:
      throw HorizonError("pixel (" + std::to_string(p.u) + ", " +
                         std::to_string(p.v) + ") is at or above the horizon");
    case FlowStatus::kBehindCamera:
      break;
  }
  throw PointBehindCameraError("ground point under pixel (" +
                               std::to_string(p.u) + ", " +
                               std::to_string(p.v) +
                               ") is not in front of the camera after the motion");
}

}  // namespace

DisplacementFlowKernel::DisplacementFlowKernel(const CameraIntrinsics& k,
                                               const MountConfig& m,
                                               const PoseDelta& d)
    : k_(k), h_(m.h), roll_(m.theta), yaw_(d.phi), d_(d) {}

FlowResult DisplacementFlowKernel::operator()(Pixel p) const noexcept {
  return from_lambdas(lambda12(p, k_, roll_));
}

FlowResult DisplacementFlowKernel::from_lambdas(const Lambda12& l) const noexcept {
  if (!(l.lambda1 > kHorizonEpsilon)) return above_horizon();
  const double l3 = l.lambda2 * h_ - l.lambda1 * d_.x_d;
  const double l4 = h_ - l.lambda1 * d_.z_d;
  // lambda1 times the second-frame depth.
  const double den = l3 * yaw_.sin + l4 * yaw_.cos;
  if (!(den > 0.0)) return behind_camera();
  // The "- lambda2" and "- lambda1" terms are folded into the numerators so
  // that zero motion gives exactly zero flow.
  const double inv = 1.0 / den;
  const double a = (l3 * yaw_.cos - l4 * yaw_.sin - l.lambda2 * den) * inv;
  const double b = l.lambda1 * (h_ - den) * inv;
  return {apply_m(k_, roll_, a, b), FlowStatus::kOk};
}

VelocityFlowKernel::VelocityFlowKernel(const CameraIntrinsics& k,
                                       const MountConfig& m,
                                       const VelocityState& s)
    : k_(k), h_(m.h), roll_(m.theta), rates_(ackermann_rates(s)) {}

FlowResult VelocityFlowKernel::operator()(Pixel p) const noexcept {
  const Lambda12 l = lambda12(p, k_, roll_);
  if (!(l.lambda1 > kHorizonEpsilon)) return above_horizon();
  const double l1 = l.lambda1;
  const double l2 = l.lambda2;
  // With heading = 0 (x_dot = 0, z_dot = v_r) this is
  //   (v_r / h) * M * [l1 l2 - h (1 + l2^2) tan(delta)/l ; l1^2 - l1 l2 h tan(delta)/l].
  const double a =
      (l1 * l2 * rates_.z_dot - l1 * rates_.x_dot) / h_ -
      (1.0 + l2 * l2) * rates_.phi_dot;
  const double b = l1 * l1 * rates_.z_dot / h_ - l1 * l2 * rates_.phi_dot;
  return {apply_m(k_, roll_, a, b), FlowStatus::kOk};
}

SimplifiedDisplacementKernel::SimplifiedDisplacementKernel(
    const CameraIntrinsics& k, const MountConfig& m, double z_d)
    : k_(k), h_(m.h), roll_(m.theta), z_d_(z_d) {}

FlowResult SimplifiedDisplacementKernel::operator()(Pixel p) const noexcept {
  const Lambda12 l = lambda12(p, k_, roll_);
  if (!(l.lambda1 > kHorizonEpsilon)) return above_horizon();
  // lambda1 / (h / z_d - lambda1), multiplied through by z_d so z_d = 0 and
  // reversing (z_d < 0) stay well defined.
  const double den = h_ - l.lambda1 * z_d_;
  if (!(den > 0.0)) return behind_camera();
  const double scale = l.lambda1 * z_d_ / den;
  return {{scale * (p.u - k_.u0), scale * (p.v - k_.v0)}, FlowStatus::kOk};
}

SimplifiedVelocityKernel::SimplifiedVelocityKernel(const CameraIntrinsics& k,
                                                   const MountConfig& m,
                                                   double v_r)
    : k_(k), h_(m.h), roll_(m.theta), v_r_(v_r) {}

FlowResult SimplifiedVelocityKernel::operator()(Pixel p) const noexcept {
  const Lambda12 l = lambda12(p, k_, roll_);
  if (!(l.lambda1 > kHorizonEpsilon)) return above_horizon();
  const double scale = v_r_ * l.lambda1 / h_;
  return {{scale * (p.u - k_.u0), scale * (p.v - k_.v0)}, FlowStatus::kOk};
}

SimplestDisplacementKernel::SimplestDisplacementKernel(const CameraIntrinsics& k,
                                                       double h, double z_d)
    : k_(k), h_(h), z_d_(z_d) {}

FlowResult SimplestDisplacementKernel::operator()(Pixel p) const noexcept {
  const double dv = p.v - k_.v0;
  if (!(dv / k_.fy > kHorizonEpsilon)) return above_horizon();
  const double den = h_ * k_.fy - z_d_ * dv;
  if (!(den > 0.0)) return behind_camera();
  const double scale = z_d_ * dv / den;
  return {{scale * (p.u - k_.u0), scale * dv}, FlowStatus::kOk};
}

SimplestVelocityKernel::SimplestVelocityKernel(const CameraIntrinsics& k,
                                               double h, double v_r)
    : k_(k), h_(h), v_r_(v_r) {}

FlowResult SimplestVelocityKernel::operator()(Pixel p) const noexcept {
  const double dv = p.v - k_.v0;
  if (!(dv / k_.fy > kHorizonEpsilon)) return above_horizon();
  const double scale = v_r_ * dv / (h_ * k_.fy);
  return {{scale * (p.u - k_.u0), scale * dv}, FlowStatus::kOk};
}

FlowVector displacement_flow(Pixel p, const CameraIntrinsics& k,
                             const MountConfig& m, const PoseDelta& d) {
  return unwrap(DisplacementFlowKernel(k, m, d)(p), p);
}

FlowVector velocity_flow(Pixel p, const CameraIntrinsics& k,
                         const MountConfig& m, const VelocityState& s) {
  validate(s);
  return unwrap(VelocityFlowKernel(k, m, s)(p), p);
}

FlowVector displacement_flow_simplified(Pixel p, const CameraIntrinsics& k,
                                        const MountConfig& m, double z_d) {
  return unwrap(SimplifiedDisplacementKernel(k, m, z_d)(p), p);
}

FlowVector velocity_flow_simplified(Pixel p, const CameraIntrinsics& k,
                                    const MountConfig& m, double v_r) {
  return unwrap(SimplifiedVelocityKernel(k, m, v_r)(p), p);
}

FlowVector simplest_flows(Pixel p, const CameraIntrinsics& k, double h,
                          const StraightMotion& motion) {
  const FlowResult r = std::visit(
      [&](const auto& mo) -> FlowResult {
        using T = std::decay_t<decltype(mo)>;
        if constexpr (std::is_same_v<T, SimplestDisplacement>) {
          return SimplestDisplacementKernel(k, h, mo.z_d)(p);
        } else {
          return SimplestVelocityKernel(k, h, mo.v_r)(p);
        }
      },
      motion);
  return unwrap(r, p);
}

FlowUnits units_of(const FlowModel& model) {
  return std::visit(
      [](const auto& mo) {
        using T = std::decay_t<decltype(mo)>;
        if constexpr (std::is_same_v<T, FullVelocity> ||
                      std::is_same_v<T, SimplifiedVelocity> ||
                      std::is_same_v<T, SimplestVelocity>) {
          return FlowUnits::kPixelsPerSecond;
        } else {
          return FlowUnits::kPixels;
        }
      },
      model);
}

namespace {

template <class Kernel>
void render_rows(const Kernel& kernel, const FreespaceMask* region,
                 FlowMap& out) {
  const int width = out.width();
  const int height = out.height();
  double* fu = out.fu_data().data();
  double* fv = out.fv_data().data();
  std::uint8_t* valid = out.valid_data().data();
  const std::uint8_t* inside = region ? region->data().data() : nullptr;
#pragma omp parallel for schedule(static)
  for (int v = 0; v < height; ++v) {
    const std::size_t row = static_cast<std::size_t>(v) * width;
    for (int u = 0; u < width; ++u) {
      const std::size_t i = row + u;
      if (inside && !inside[i]) continue;
      const FlowResult r = kernel(Pixel{static_cast<double>(u),
                                        static_cast<double>(v)});
      if (r.ok()) {
        fu[i] = r.flow.fu;
        fv[i] = r.flow.fv;
        valid[i] = 1;
      }
    }
  }
}

FlowMap render(const FlowModel& model, const CameraIntrinsics& k,
               const MountConfig& m, ImageSize size,
               const FreespaceMask* region) {
  validate(k);
  validate(m);
  if (region) require_same_size(size, region->size(), "render region");
  FlowMap out(size, units_of(model));
  detail::with_kernel(model, k, m,
                      [&](const auto& kernel) { render_rows(kernel, region, out); });
  return out;
}

}  // namespace

FlowMap render_flow_map(const FlowModel& model, const CameraIntrinsics& k,
                        const MountConfig& m, ImageSize size) {
  return render(model, k, m, size, nullptr);
}

FlowMap render_flow_map(const FlowModel& model, const CameraIntrinsics& k,
                        const MountConfig& m, ImageSize size,
                        const FreespaceMask& region) {
  return render(model, k, m, size, &region);
}

}  // namespace fsof
