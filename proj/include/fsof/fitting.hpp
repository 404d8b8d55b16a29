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

// V-flow analysis: the vertical flow of a road plane, seen straight ahead,
// depends only on the row. Each row is summarised by the mode of its Fv
// histogram, a one-parameter curve is fitted through the row summaries, and
// pixels whose Fv departs from the fitted curve are rejected as non-road.

#include <optional>
#include <string_view>
#include <vector>

#include "fsof/flow_map.hpp"
#include "fsof/geometry.hpp"

namespace fsof {

enum class FitKind {
  kRationalDisplacement,  // f(v) = k s^2 / (1 - k s), s = v - v0, k = z_d / (h f_y)
  kQuadraticVelocity,     // f(v) = k s^2,              k = v_r / (h f_y)
  kGenericQuadratic,      // f(v) = a v^2 + b v + c
};

std::string_view to_string(FitKind kind);
FitKind parse_fit_kind(std::string_view text);

struct FitConfig {
  double bin_w = 0.25;       // histogram bin width, px
  int min_row_support = 10;  // pixels needed near the mode to report a row
  double tau = 1.0;          // segmentation threshold, px
  FitKind kind = FitKind::kRationalDisplacement;
};

void validate(const FitConfig& cfg);

struct RowSample {
  double value = 0.0;  // representative Fv, meaningful only when populated
  int support = 0;     // samples inside the final mode window
  bool populated = false;
};

struct RowProjection {
  ImageSize size;
  FlowUnits units = FlowUnits::kPixels;
  std::vector<RowSample> rows;  // one entry per image row

  int populated_count() const;
};

/// Per-row mode of the Fv histogram. The mode bin seeds a flat-kernel mean
/// shift (half-width 1.5 bins) whose converged window mean is the row value.
/// Throws EmptyInput when no pixel is valid (and inside `mask`).
RowProjection row_projection(const FlowMap& flow, const FitConfig& cfg);
RowProjection row_projection(const FlowMap& flow, const FreespaceMask& mask,
                             const FitConfig& cfg);

struct CurveFit {
  FitKind kind = FitKind::kRationalDisplacement;
  double k = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double v0 = 0.0;
  double residual_rms = 0.0;  // over inlier rows, px
  int inliers = 0;
  FlowUnits units = FlowUnits::kPixels;

  /// Fitted Fv at row v, or nullopt where the curve does not describe road
  /// (above the horizon, or past the pole of the rational form).
  std::optional<double> evaluate(double v) const;
};

/// Least squares over populated rows followed by one Tukey-reweighted pass
/// (c = 3 * RMS). The single-parameter kinds use rows below the horizon only.
/// Throws InsufficientRows or DegenerateFit.
CurveFit fit_fv_curve(const RowProjection& rp, const CameraIntrinsics& k,
                      FitKind kind);

/// Fv-only map: the fitted curve broadcast across every column (Fu = 0).
FlowMap render_fitted_fv(const CurveFit& fit, ImageSize size,
                         const CameraIntrinsics& k);

/// Freespace iff both maps are valid and |Fv_obs - Fv_fit| <= tau.
FreespaceMask segment_freespace(const FlowMap& observed, const FlowMap& fitted,
                                double tau);

namespace reference {

RowProjection row_projection(const FlowMap& flow, const FreespaceMask& mask,
                             const FitConfig& cfg);

}  // namespace reference

}  // namespace fsof
