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

#include "onestep/dptest.h"

#include <algorithm>

#include "onestep/dists.h"
#include "onestep/errors.h"
#include "onestep/models.h"
#include "onestep/privacy.h"
#include "onestep/synth.h"

namespace onestep {
namespace {

void validate(const DpTwoPropProblem& prob, std::int64_t reps) {
  if (prob.n < 1 || prob.m < 1) throw ArgumentError("dp2prop: need n, m >= 1");
  if (!(prob.epsilon > 0.0)) throw ArgumentError("dp2prop: need epsilon > 0");
  if (reps < 100) throw ArgumentError("dp2prop: need reps >= 100");
}

double null_estimate(const DpTwoPropProblem& prob) {
  return std::clamp((prob.x_tilde + prob.y_tilde) /
                        static_cast<double>(prob.n + prob.m),
                    0.0, 1.0);
}

TestOutcome finish(const DpTwoPropProblem& prob,
                   const std::vector<double>& reference, TestMethod method) {
  TestOutcome out;
  out.method = method;
  out.replicates_used = static_cast<std::int64_t>(reference.size());
  out.p_value = upper_tail_pvalue(reference, prob.y_tilde);
  out.theta_hat = null_estimate(prob);
  out.degenerate = out.theta_hat == 0.0 || out.theta_hat == 1.0;
  return out;
}

}  // namespace

double upper_tail_pvalue(const std::vector<double>& reference, double observed) {
  const auto at_least = std::count_if(reference.begin(), reference.end(),
                                      [observed](double y) { return y >= observed; });
  return (1.0 + static_cast<double>(at_least)) /
         (static_cast<double>(reference.size()) + 1.0);
}

std::vector<double> dp2prop_onestep_reference(const DpTwoPropProblem& prob,
                                              std::int64_t reps,
                                              const SeedStream& stream) {
  validate(prob, reps);
  const TulapTwoSampleModel model(prob.n, prob.m, prob.epsilon);
  ParamVector theta_hat(1);
  theta_hat[0] = null_estimate(prob);
  std::vector<double> reference(static_cast<std::size_t>(reps));
  for (std::int64_t r = 0; r < reps; ++r) {
    SeedStream s = stream.child(static_cast<std::uint64_t>(r));
    const SyntheticResult res = one_step(model, theta_hat, 1, s);
    reference[static_cast<std::size_t>(r)] = res.data.observations(0, 1);
  }
  return reference;
}

std::vector<double> dp2prop_bootstrap_reference(const DpTwoPropProblem& prob,
                                                std::int64_t reps,
                                                const SeedStream& stream) {
  validate(prob, reps);
  const DistSpec binom = DistSpec::binomial(prob.m, null_estimate(prob));
  std::vector<double> reference(static_cast<std::size_t>(reps));
  for (std::int64_t r = 0; r < reps; ++r) {
    SeedStream s = stream.child(static_cast<std::uint64_t>(r));
    const double count = quantile(binom, s.next_uniform());
    reference[static_cast<std::size_t>(r)] =
        tulap_mechanism(static_cast<std::int64_t>(count), prob.epsilon, s);
  }
  return reference;
}

TestOutcome dp2prop_onestep_pvalue(const DpTwoPropProblem& prob,
                                   std::int64_t reps, const SeedStream& stream) {
  return finish(prob, dp2prop_onestep_reference(prob, reps, stream),
                TestMethod::kOneStep);
}

TestOutcome dp2prop_bootstrap_pvalue(const DpTwoPropProblem& prob,
                                     std::int64_t reps, const SeedStream& stream) {
  return finish(prob, dp2prop_bootstrap_reference(prob, reps, stream),
                TestMethod::kBootstrap);
}

DpTwoPropProblem simulate_dp2prop(std::int64_t n, std::int64_t m, double theta_x,
                                  double theta_y, double epsilon,
                                  SeedStream& stream) {
  DpTwoPropProblem prob;
  prob.n = n;
  prob.m = m;
  prob.epsilon = epsilon;
  const double x = quantile(DistSpec::binomial(n, theta_x), stream.next_uniform());
  const double y = quantile(DistSpec::binomial(m, theta_y), stream.next_uniform());
  prob.x_tilde = tulap_mechanism(static_cast<std::int64_t>(x), epsilon, stream);
  prob.y_tilde = tulap_mechanism(static_cast<std::int64_t>(y), epsilon, stream);
  return prob;
}

}  // namespace onestep
