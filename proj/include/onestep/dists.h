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

#ifndef ONESTEP_DISTS_H_
#define ONESTEP_DISTS_H_

#include <cstdint>
#include <variant>

namespace onestep {

// Parameter structs. Construct them through DistSpec's factories, which
// enforce the parameter domains.
struct NormalParams {
  double mean;
  double sd;
};
struct UniformParams {
  double lo;
  double hi;
};
struct LaplaceParams {
  double location;
  double scale;
};
// Number of failures before the first success; support {0, 1, 2, ...}.
struct GeometricParams {
  double success_prob;
};
struct BernoulliParams {
  double p;
};
struct BinomialParams {
  std::int64_t trials;
  double p;
};
struct BetaParams {
  double alpha;
  double beta;
};
// Burr Type XII: F(x) = 1 - (1 + x^c)^(-k), x > 0.
struct BurrParams {
  double c;
  double k;
};
// Tulap{0, exp(-epsilon), 0}: G1 - G2 + U with G1, G2 ~ Geometric(1 - e^-eps)
// and U ~ Uniform(-1/2, 1/2).
struct TulapParams {
  double epsilon;
};

using DistKind =
    std::variant<NormalParams, UniformParams, LaplaceParams, GeometricParams,
                 BernoulliParams, BinomialParams, BetaParams, BurrParams,
                 TulapParams>;

// An immutable, validated distribution.
class DistSpec {
 public:
  static DistSpec normal(double mean, double sd);
  static DistSpec uniform(double lo, double hi);
  static DistSpec laplace(double location, double scale);
  static DistSpec geometric(double success_prob);
  static DistSpec bernoulli(double p);
  static DistSpec binomial(std::int64_t trials, double p);
  static DistSpec beta(double alpha, double beta);
  static DistSpec burr(double c, double k);
  static DistSpec tulap(double epsilon);

  const DistKind& kind() const { return kind_; }
  bool is_continuous() const;

 private:
  explicit DistSpec(DistKind kind) : kind_(kind) {}
  DistKind kind_;
};

// Natural log of the density (continuous kinds) or mass (discrete kinds);
// -infinity off the support.
double log_pdf(const DistSpec& d, double x);

// P(X <= x).
double cdf(const DistSpec& d, double x);

// inf{x : cdf(x) >= u}. Throws ArgumentError unless 0 < u < 1.
double quantile(const DistSpec& d, double u);

// G1 - G2 + (u3 - 1/2) with G_j the Geometric(1 - e^-eps) quantile of u_j.
double tulap_from_uniforms(double u1, double u2, double u3, double epsilon);

// Regularized incomplete beta function I_x(a, b) by continued fraction.
// Throws ArgumentError unless a > 0, b > 0 and 0 <= x <= 1.
double reg_inc_beta(double a, double b, double x);

// Standard normal cdf and quantile, exposed for hot loops.
double normal_cdf(double z);
double normal_quantile(double u);

}  // namespace onestep

#endif  // ONESTEP_DISTS_H_
