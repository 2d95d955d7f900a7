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

#include "onestep/synth.h"

#include <string>

#include "onestep/errors.h"

namespace onestep {

SyntheticResult one_step_from_block(const Model& model,
                                    const ParamVector& theta_hat_x,
                                    const UniformBlock& block) {
  SyntheticResult r;
  r.theta_hat_x = theta_hat_x;
  r.intermediate = model.sample_from_seeds(theta_hat_x, block);
  r.theta_hat_z = model.estimate(r.intermediate);
  const ParamVector raw = 2.0 * theta_hat_x - r.theta_hat_z;
  r.theta_star = model.project(raw);
  r.projected = (r.theta_star.array() != raw.array()).any();
  r.data = model.sample_from_seeds(r.theta_star, block);
  r.theta_hat_y = model.estimate(r.data);
  return r;
}

SyntheticResult one_step(const Model& model, const ParamVector& theta_hat_x,
                         std::int64_t n, SeedStream& stream) {
  if (n < 1) throw ArgumentError("one_step: n must be positive");
  const UniformBlock block = uniform_block(stream, n, model.uniforms_per_obs());
  try {
    return one_step_from_block(model, theta_hat_x, block);
  } catch (const EstimationError& first) {
    SeedStream retry = stream.child(kRetryPurpose);
    const UniformBlock fresh = uniform_block(retry, n, model.uniforms_per_obs());
    try {
      SyntheticResult r = one_step_from_block(model, theta_hat_x, fresh);
      r.retries = 1;
      return r;
    } catch (const EstimationError& second) {
      throw EstimationError(std::string(model.name()) +
                                ": one-step failed twice (" + first.what() +
                                "; retry: " + second.what() + ")",
                            second.last_iterate(), second.gradient_norm());
    }
  }
}

Dataset parametric_bootstrap(const Model& model, const ParamVector& theta_hat_x,
                             std::int64_t n, SeedStream& stream) {
  const UniformBlock block = uniform_block(stream, n, model.uniforms_per_obs());
  return model.sample_from_seeds(theta_hat_x, block);
}

}  // namespace onestep
