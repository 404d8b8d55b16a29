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

#include "fsof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fsof/errors.hpp"

namespace fsof {

namespace {

struct Sums {
  double angular = 0.0;
  double endpoint = 0.0;
  double abs_u = 0.0;
  double abs_v = 0.0;
  std::size_t n = 0;

  Sums& operator+=(const Sums& o) {
    angular += o.angular;
    endpoint += o.endpoint;
    abs_u += o.abs_u;
    abs_v += o.abs_v;
    n += o.n;
    return *this;
  }
};

struct PixelErrors {
  double angular;
  double endpoint;
  double abs_u;
  double abs_v;
};

PixelErrors pixel_errors(double fu, double fv, double gu, double gv) {
  const double dot = fu * gu + fv * gv + 1.0;
  const double den = std::sqrt((fu * fu + fv * fv + 1.0) * (gu * gu + gv * gv + 1.0));
  const double cosine = std::clamp(dot / den, -1.0, 1.0);
  const double du = fu - gu;
  const double dv = fv - gv;
  return {std::acos(cosine), std::hypot(du, dv), std::abs(du), std::abs(dv)};
}

void check_inputs(const FlowMap& gt, const FlowMap& est, const FreespaceMask& mask) {
  require_same_size(gt.size(), est.size(), "evaluate: gt vs est");
  require_same_size(gt.size(), mask.size(), "evaluate: flow vs mask");
  require_same_units(gt.units(), est.units(), "evaluate: gt vs est");
}

// Fixed-shape pairwise combination; the tree depends only on the length.
Sums pairwise(std::span<const Sums> parts) {
  if (parts.empty()) return {};
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  Sums left = pairwise(parts.first(half));
  left += pairwise(parts.subspan(half));
  return left;
}

MetricsReport finish(const Sums& total, FlowUnits units) {
  if (total.n == 0) {
    throw EmptyOverlap("no pixel is valid in both maps and inside the mask");
  }
  const auto n = static_cast<double>(total.n);
  return {total.angular / n, total.endpoint / n, total.abs_u / n,
          total.abs_v / n, total.n, units};
}

}  // namespace

MetricsReport evaluate(const FlowMap& gt, const FlowMap& est,
                       const FreespaceMask& mask) {
  check_inputs(gt, est, mask);
  const int width = gt.width();
  const int height = gt.height();
  std::vector<Sums> rows(static_cast<std::size_t>(height));
#pragma omp parallel for schedule(static)
  for (int v = 0; v < height; ++v) {
    Sums s;
    for (int u = 0; u < width; ++u) {
      const std::size_t i = gt.index(u, v);
      if (!mask.data()[i] || !gt.valid_data()[i] || !est.valid_data()[i]) continue;
      const PixelErrors e = pixel_errors(gt.fu_data()[i], gt.fv_data()[i],
                                         est.fu_data()[i], est.fv_data()[i]);
      s.angular += e.angular;
      s.endpoint += e.endpoint;
      s.abs_u += e.abs_u;
      s.abs_v += e.abs_v;
      ++s.n;
    }
    rows[static_cast<std::size_t>(v)] = s;
  }
  return finish(pairwise(rows), gt.units());
}

MetricsReport evaluate(const FlowMap& gt, const FlowMap& est) {
  return evaluate(gt, est, FreespaceMask(gt.size(), true));
}

namespace reference {

MetricsReport evaluate(const FlowMap& gt, const FlowMap& est,
                       const FreespaceMask& mask) {
  check_inputs(gt, est, mask);
  // Serial, but with the parallel path's per-row sums and combination tree.
  std::vector<Sums> rows(static_cast<std::size_t>(gt.height()));
  for (int v = 0; v < gt.height(); ++v) {
    for (int u = 0; u < gt.width(); ++u) {
      if (!mask.at(u, v) || !gt.valid(u, v) || !est.valid(u, v)) continue;
      const PixelErrors e =
          pixel_errors(gt.fu(u, v), gt.fv(u, v), est.fu(u, v), est.fv(u, v));
      rows[static_cast<std::size_t>(v)] += Sums{e.angular, e.endpoint, e.abs_u, e.abs_v, 1};
    }
  }
  return finish(pairwise(rows), gt.units());
}

}  // namespace reference

}  // namespace fsof
