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

// Coordinate systems
// ------------------
// The vehicle (VCS) and camera (CCS) frames share their origin. Both use
//
//        Z (forward, direction of travel)
//       /
//      o----- X (right)
//      |
//      Y (down)
//
// The road is the plane y = h in the VCS. The CCS is the VCS rolled by
// theta about Z:  p_cam = R_roll(theta) * p_vehicle.  Pixels (PCS) follow
// the usual pinhole convention, u to the right and v downwards, so ground
// pixels lie below the horizon row (v > v0 when theta = 0).

#include <Eigen/Core>

namespace fsof {

// Rays with lambda1 at or below this threshold are treated as not hitting
// the ground (depth h / lambda1 would exceed 1e6 * h).
inline constexpr double kHorizonEpsilon = 1e-6;

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double u0 = 0.0;
  double v0 = 0.0;
};

struct MountConfig {
  double h = 0.0;      // height above the road, metres
  double theta = 0.0;  // roll about Z, radians
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

struct GroundPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
};

// Inter-frame vehicle motion: translation d = [x_d, 0, z_d] and yaw phi.
struct PoseDelta {
  double x_d = 0.0;
  double z_d = 0.0;
  double phi = 0.0;
};

struct Lambda12 {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct LambdaTerms {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;  // metres
  double lambda4 = 0.0;  // metres
};

// Cached sine/cosine of an angle; the per-pixel kernels take these so the
// trigonometry is evaluated once per frame.
struct AngleTrig {
  double sin = 0.0;
  double cos = 1.0;

  AngleTrig() = default;
  explicit AngleTrig(double angle);
};

// Throws InvalidArgument when an invariant does not hold.
void validate(const CameraIntrinsics& k);
void validate(const MountConfig& m);

Eigen::Matrix3d intrinsic_matrix(const CameraIntrinsics& k);

/// Roll about the Z axis, p_cam = R * p_vehicle.
Eigen::Matrix3d roll_rotation(double theta);

/// Yaw about the Y axis between consecutive vehicle frames.
Eigen::Matrix3d yaw_rotation(double phi);

Lambda12 lambda12(Pixel p, const CameraIntrinsics& k, double theta);
Lambda12 lambda12(Pixel p, const CameraIntrinsics& k, const AngleTrig& roll);

/// All four lambda terms for a pixel under a given inter-frame motion.
LambdaTerms lambda_terms(Pixel p, const CameraIntrinsics& k,
                         const MountConfig& m, const PoseDelta& d);

/// Intersection of the pixel's viewing ray with the road plane y = h.
/// Throws HorizonError when lambda1 <= kHorizonEpsilon.
GroundPoint backproject_ground(Pixel p, const CameraIntrinsics& k,
                               const MountConfig& m);

/// Pinhole projection z_c * [u, v, 1]^T = K * R_roll(theta) * q.
/// Throws BehindCameraError when the camera-frame depth is not positive.
Pixel project(const Eigen::Vector3d& q, const CameraIntrinsics& k,
              double theta);

inline Pixel project(const GroundPoint& q, const CameraIntrinsics& k,
                     double theta) {
  return project(q.vec(), k, theta);
}

}  // namespace fsof
