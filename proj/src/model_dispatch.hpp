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

#include <type_traits>
#include <variant>

#include "fsof/flow_models.hpp"

namespace fsof::detail {

// Builds the per-pixel kernel selected by `model` and hands it to `fn`.
template <class Fn>
void with_kernel(const FlowModel& model, const CameraIntrinsics& k,
                 const MountConfig& m, Fn&& fn) {
  std::visit(
      [&](const auto& mo) {
        using T = std::decay_t<decltype(mo)>;
        if constexpr (std::is_same_v<T, FullDisplacement>) {
          fn(DisplacementFlowKernel(k, m, mo.pose));
        } else if constexpr (std::is_same_v<T, FullVelocity>) {
          validate(mo.state);
          fn(VelocityFlowKernel(k, m, mo.state));
        } else if constexpr (std::is_same_v<T, SimplifiedDisplacement>) {
          fn(SimplifiedDisplacementKernel(k, m, mo.z_d));
        } else if constexpr (std::is_same_v<T, SimplifiedVelocity>) {
          fn(SimplifiedVelocityKernel(k, m, mo.v_r));
        } else if constexpr (std::is_same_v<T, SimplestDisplacement>) {
          fn(SimplestDisplacementKernel(k, m.h, mo.z_d));
        } else {
          fn(SimplestVelocityKernel(k, m.h, mo.v_r));
        }
      },
      model);
}

}  // namespace fsof::detail
