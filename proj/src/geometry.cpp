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

#include "fsof/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fsof/errors.hpp"

namespace fsof {

AngleTrig::AngleTrig(double angle) : sin(std::sin(angle)), cos(std::cos(angle)) {}

void validate(const CameraIntrinsics& k) {
  if (!(k.fx > 0.0) || !(k.fy > 0.0) || !std::isfinite(k.fx) ||
      !std::isfinite(k.fy)) {
    throw InvalidArgument("focal lengths must be positive and finite");
  }
  if (!std::isfinite(k.u0) || !std::isfinite(k.v0)) {
    throw InvalidArgument("principal point must be finite");
  }
}

void validate(const MountConfig& m) {
  if (!(m.h > 0.0) || !std::isfinite(m.h)) {
    throw InvalidArgument("mount height must be positive, got " +
                          std::to_string(m.h));
  }
  if (!(std::abs(m.theta) < std::numbers::pi / 2.0)) {
    throw InvalidArgument("roll angle must satisfy |theta| < pi/2, got " +
                          std::to_string(m.theta));
  }
}

Eigen::Matrix3d intrinsic_matrix(const CameraIntrinsics& k) {
  Eigen::Matrix3d K;
  K << k.fx, 0.0, k.u0,
       0.0, k.fy, k.v0,
       0.0, 0.0, 1.0;
  return K;
}

Eigen::Matrix3d roll_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix3d R;
  R << c, s, 0.0,
       -s, c, 0.0,
       0.0, 0.0, 1.0;
  return R;
}

Eigen::Matrix3d yaw_rotation(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix3d R;
  R << c, 0.0, -s,
       0.0, 1.0, 0.0,
       s, 0.0, c;
  return R;
}

Lambda12 lambda12(Pixel p, const CameraIntrinsics& k, const AngleTrig& roll) {
  const double a = (p.u - k.u0) / k.fx;
  const double b = (p.v - k.v0) / k.fy;
  return {a * roll.sin + b * roll.cos, a * roll.cos - b * roll.sin};
}

Lambda12 lambda12(Pixel p, const CameraIntrinsics& k, double theta) {
  return lambda12(p, k, AngleTrig(theta));
}

LambdaTerms lambda_terms(Pixel p, const CameraIntrinsics& k,
                         const MountConfig& m, const PoseDelta& d) {
  const Lambda12 l = lambda12(p, k, m.theta);
  return {l.lambda1, l.lambda2, l.lambda2 * m.h - l.lambda1 * d.x_d,
          m.h - l.lambda1 * d.z_d};
}

GroundPoint backproject_ground(Pixel p, const CameraIntrinsics& k,
                               const MountConfig& m) {
  const Lambda12 l = lambda12(p, k, m.theta);
  if (!(l.lambda1 > kHorizonEpsilon)) {
    throw HorizonError("pixel (" + std::to_string(p.u) + ", " +
                       std::to_string(p.v) +
                       ") is at or above the horizon");
  }
  const double depth = m.h / l.lambda1;
  return {depth * l.lambda2, m.h, depth};
}

Pixel project(const Eigen::Vector3d& q, const CameraIntrinsics& k,
              double theta) {
  const Eigen::Vector3d h = intrinsic_matrix(k) * (roll_rotation(theta) * q);
  if (!(h.z() > 0.0)) {
    throw BehindCameraError("point has non-positive camera depth " +
                            std::to_string(h.z()));
  }
  return {h.x() / h.z(), h.y() / h.z()};
}

}  // namespace fsof
