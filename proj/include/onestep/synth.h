//
// Copyright 2026 The Onestep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef ONESTEP_SYNTH_H_
#define ONESTEP_SYNTH_H_

#include <cstdint>

#include "onestep/models.h"
#include "onestep/randcore.h"

namespace onestep {

// Audit record of one run of the one-step synthetic-data procedure.
struct SyntheticResult {
  Dataset data;              // the synthetic sample Y
  Dataset intermediate;      // Z, drawn at theta_hat_x with the same seeds
  ParamVector theta_hat_x;
  ParamVector theta_hat_z;
  ParamVector theta_star;    // Proj(2 theta_hat_x - theta_hat_z)
  ParamVector theta_hat_y;   // estimate(Y), recomputed for audit
  bool projected = false;    // clamping changed some coordinate
  int retries = 0;           // fresh seed blocks drawn after a failed fit of Z
};

// One-step synthetic data from a fixed seed block:
//   Z = X_{theta_hat_x}(omega), theta* = Proj(2 theta_hat_x - theta_hat_z),
//   Y = X_{theta*}(omega).
// Z and Y consume the identical block. Estimation failures propagate.
SyntheticResult one_step_from_block(const Model& model,
                                    const ParamVector& theta_hat_x,
                                    const UniformBlock& block);

// Draws one n x k seed block from `stream` and runs one_step_from_block.
// If estimating theta from Z fails, retries once on a block drawn from a
// derived sub-stream, then rethrows with context.
SyntheticResult one_step(const Model& model, const ParamVector& theta_hat_x,
                         std::int64_t n, SeedStream& stream);

// Plain sample from the fitted model (the parametric bootstrap).
Dataset parametric_bootstrap(const Model& model, const ParamVector& theta_hat_x,
                             std::int64_t n, SeedStream& stream);

// Purpose id of the sub-stream used for the retry block.
inline constexpr std::uint64_t kRetryPurpose = 0xFFFF'0001;

}  // namespace onestep

#endif  // ONESTEP_SYNTH_H_
