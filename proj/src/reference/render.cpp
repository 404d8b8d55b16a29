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

#include "../model_dispatch.hpp"

namespace fsof::reference {

namespace {

FlowMap render(const FlowModel& model, const CameraIntrinsics& k,
               const MountConfig& m, ImageSize size,
               const FreespaceMask* region) {
  validate(k);
  validate(m);
  if (region) require_same_size(size, region->size(), "render region");
  FlowMap out(size, units_of(model));
  detail::with_kernel(model, k, m, [&](const auto& kernel) {
    for (int v = 0; v < size.height; ++v) {
      for (int u = 0; u < size.width; ++u) {
        if (region && !region->at(u, v)) continue;
        const FlowResult r =
            kernel(Pixel{static_cast<double>(u), static_cast<double>(v)});
        if (r.ok()) out.set(u, v, r.flow);
      }
    }
  });
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

}  // namespace fsof::reference
