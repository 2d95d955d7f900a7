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

#include "onestep/dists.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "onestep/errors.h"
#include "onestep/special.h"

namespace onestep {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw ArgumentError(what);
}

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

// Continued fraction for I_x(a, b) (modified Lentz). Valid and fast for
// x < (a + 1) / (a + b + 2).
double beta_cont_frac(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 100000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta_unchecked(double a, double b, double x, double lbeta) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - lbeta;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_cont_frac(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_cont_frac(b, a, 1.0 - x) / b;
}

// Initial guess for the Beta quantile (Abramowitz & Stegun 26.5.22 for
// a, b >= 1, a power-law tail approximation otherwise).
double beta_quantile_guess(double a, double b, double u) {
  if (a >= 1.0 && b >= 1.0) {
    const double pp = u < 0.5 ? u : 1.0 - u;
    const double t = std::sqrt(-2.0 * std::log(pp));
    double x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
    if (u < 0.5) x = -x;
    const double al = (x * x - 3.0) / 6.0;
    const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
    const double w = x * std::sqrt(al + h) / h -
                     (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) *
                         (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
    return a / (a + b * std::exp(2.0 * w));
  }
  const double lna = std::log(a / (a + b));
  const double lnb = std::log(b / (a + b));
  const double t = std::exp(a * lna) / a;
  const double w = t + std::exp(b * lnb) / b;
  if (u < t / w) return std::pow(a * w * u, 1.0 / a);
  return 1.0 - std::pow(b * w * (1.0 - u), 1.0 / b);
}

// Safeguarded Newton on I_x(a, b) = u, bisection whenever a Newton step
// leaves the current bracket.
double beta_quantile(double a, double b, double u) {
  const double lbeta = log_beta(a, b);
  double lo = 0.0;
  double hi = 1.0;
  double x = beta_quantile_guess(a, b, u);
  if (!(x > 0.0 && x < 1.0)) x = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    const double f = reg_inc_beta_unchecked(a, b, x, lbeta) - u;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double log_dens =
        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta;
    const double dens = std::exp(log_dens);
    double next = x - f / dens;
    if (!(next > lo && next < hi) || !std::isfinite(next)) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 1e-12 * std::max(x, 1e-3) ||
        hi - lo <= 1e-15) {
      return next;
    }
    x = next;
  }
  return x;
}

double geometric_cdf(double q, double x) {
  if (x < 0.0) return 0.0;
  return -std::expm1((std::floor(x) + 1.0) * std::log(q));
}

// Smallest g >= 0 with 1 - q^(g+1) >= u, where q is the failure probability.
double geometric_quantile_failures(double q, double u) {
  if (q <= 0.0) return 0.0;
  const double log_q = std::log(q);
  double g = std::ceil(std::log1p(-u) / log_q - 1.0);
  g = std::max(g, 0.0);
  while (g > 0.0 && -std::expm1(g * log_q) >= u) g -= 1.0;
  while (-std::expm1((g + 1.0) * log_q) < u) g += 1.0;
  return g;
}

double binomial_log_pmf(std::int64_t n, double p, double k) {
  if (p == 0.0) return k == 0.0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == static_cast<double>(n) ? 0.0 : kNegInf;
  const double nn = static_cast<double>(n);
  return std::lgamma(nn + 1.0) - std::lgamma(k + 1.0) -
         std::lgamma(nn - k + 1.0) + k * std::log(p) +
         (nn - k) * std::log1p(-p);
}

double binomial_cdf(std::int64_t n, double p, double x) {
  if (x < 0.0) return 0.0;
  const double k = std::floor(x);
  if (k >= static_cast<double>(n)) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return reg_inc_beta_unchecked(static_cast<double>(n) - k, k + 1.0, 1.0 - p,
                                log_beta(static_cast<double>(n) - k, k + 1.0));
}

double binomial_quantile(std::int64_t n, double p, double u) {
  if (p == 0.0) return 0.0;
  if (p == 1.0) return static_cast<double>(n);
  const double nn = static_cast<double>(n);
  const double log_pmf0 = nn * std::log1p(-p);
  if (log_pmf0 > -690.0) {
    // Linear scan with the pmf updated by the ratio pmf(k+1)/pmf(k).
    const double odds = p / (1.0 - p);
    double pmf = std::exp(log_pmf0);
    double acc = pmf;
    std::int64_t k = 0;
    while (acc < u && k < n) {
      pmf *= static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
      ++k;
      acc += pmf;
    }
    return static_cast<double>(k);
  }
  // (1-p)^n underflows: bisect on the exact cdf.
  std::int64_t lo = 0;
  std::int64_t hi = n;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (binomial_cdf(n, p, static_cast<double>(mid)) >= u) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return static_cast<double>(lo);
}

// Discrete Laplace D = G1 - G2 with P(D = d) = (1-b)/(1+b) b^|d|.
double discrete_laplace_cdf(double b, double k) {
  if (k < 0.0) return std::exp(-k * std::log(b)) / (1.0 + b);
  return 1.0 - std::exp((k + 1.0) * std::log(b)) / (1.0 + b);
}

double discrete_laplace_pmf(double b, double d) {
  return (1.0 - b) / (1.0 + b) * std::exp(std::abs(d) * std::log(b));
}

double tulap_cdf(double epsilon, double x) {
  if (x == kInf) return 1.0;
  if (x == kNegInf) return 0.0;
  const double b = std::exp(-epsilon);
  const double r = std::floor(x + 0.5);
  if (b == 0.0) {
    if (r < 0.0) return 0.0;
    if (r > 0.0) return 1.0;
    return x + 0.5;
  }
  return discrete_laplace_cdf(b, r - 1.0) +
         discrete_laplace_pmf(b, r) * (x - r + 0.5);
}

double tulap_quantile(double epsilon, double u) {
  const double b = std::exp(-epsilon);
  if (b == 0.0) return u - 0.5;
  const double log_b = std::log(b);
  double d;
  if (u <= b / (1.0 + b)) {
    d = -std::floor(std::log(u * (1.0 + b)) / log_b);
  } else {
    d = std::max(0.0, std::ceil(std::log((1.0 - u) * (1.0 + b)) / log_b - 1.0));
  }
  while (discrete_laplace_cdf(b, d - 1.0) >= u) d -= 1.0;
  while (discrete_laplace_cdf(b, d) < u) d += 1.0;
  const double below = discrete_laplace_cdf(b, d - 1.0);
  return d - 0.5 + (u - below) / discrete_laplace_pmf(b, d);
}

}  // namespace

DistSpec DistSpec::normal(double mean, double sd) {
  require(std::isfinite(mean) && sd > 0.0 && std::isfinite(sd),
          "Normal: need finite mean and sd > 0");
  return DistSpec(NormalParams{mean, sd});
}

DistSpec DistSpec::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "Uniform: need finite lo < hi");
  return DistSpec(UniformParams{lo, hi});
}

DistSpec DistSpec::laplace(double location, double scale) {
  require(std::isfinite(location) && scale > 0.0 && std::isfinite(scale),
          "Laplace: need finite location and scale > 0");
  return DistSpec(LaplaceParams{location, scale});
}

DistSpec DistSpec::geometric(double success_prob) {
  require(success_prob > 0.0 && success_prob <= 1.0,
          "Geometric: need 0 < success_prob <= 1");
  return DistSpec(GeometricParams{success_prob});
}

DistSpec DistSpec::bernoulli(double p) {
  require(p >= 0.0 && p <= 1.0, "Bernoulli: need 0 <= p <= 1");
  return DistSpec(BernoulliParams{p});
}

DistSpec DistSpec::binomial(std::int64_t trials, double p) {
  require(trials >= 0, "Binomial: need trials >= 0");
  require(p >= 0.0 && p <= 1.0, "Binomial: need 0 <= p <= 1");
  return DistSpec(BinomialParams{trials, p});
}

DistSpec DistSpec::beta(double alpha, double beta) {
  require(alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) &&
              std::isfinite(beta),
          "Beta: need alpha > 0 and beta > 0");
  return DistSpec(BetaParams{alpha, beta});
}

DistSpec DistSpec::burr(double c, double k) {
  require(c > 0.0 && k > 0.0 && std::isfinite(c) && std::isfinite(k),
          "BurrXII: need c > 0 and k > 0");
  return DistSpec(BurrParams{c, k});
}

DistSpec DistSpec::tulap(double epsilon) {
  require(epsilon > 0.0, "Tulap: need epsilon > 0");
  return DistSpec(TulapParams{epsilon});
}

bool DistSpec::is_continuous() const {
  return std::visit(
      Overloaded{
          [](const GeometricParams&) { return false; },
          [](const BernoulliParams&) { return false; },
          [](const BinomialParams&) { return false; },
          [](const auto&) { return true; },
      },
      kind_);
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Wichura's AS 241 (PPND16): rational approximations accurate to about
// 1e-16, with no erfc or exp in the central region.
double normal_quantile(double u) {
  static constexpr double a[] = {
      3.3871328727963666080e0,  1.3314166789178437745e+2, 1.9715909503065514427e+3,
      1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {
      1.0,                      4.2313330701600911252e+1, 6.8718700749205790830e+2,
      5.3941960214247511077e+3, 2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr double c[] = {
      1.42343711074968357734e0,  4.63033784615654529590e0,  5.76949722146069140550e0,
      3.64784832476320460504e0,  1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {
      1.0,                       2.05319162663775882187e0,  1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr double e[] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,  1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {
      1.0,                       5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};
  auto poly = [](const double* k, double x) {
    double v = k[7];
    for (int i = 6; i >= 0; --i) v = v * x + k[i];
    return v;
  };
  const double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(a, r) / poly(b, r);
  }
  // log of the smaller tail probability, without cancellation near 1
  double r = std::sqrt(-(q < 0.0 ? std::log(u) : std::log1p(-u)));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = poly(c, r) / poly(d, r);
  } else {
    r -= 5.0;
    x = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -x : x;
}

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ArgumentError("reg_inc_beta: need a > 0 and b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ArgumentError("reg_inc_beta: need 0 <= x <= 1");
  }
  return reg_inc_beta_unchecked(a, b, x, log_beta(a, b));
}

double log_pdf(const DistSpec& dist, double x) {
  return std::visit(
      Overloaded{
          [x](const NormalParams& p) {
            const double z = (x - p.mean) / p.sd;
            return -0.5 * z * z - std::log(p.sd) -
                   0.5 * std::log(2.0 * std::numbers::pi);
          },
          [x](const UniformParams& p) {
            return (x >= p.lo && x <= p.hi) ? -std::log(p.hi - p.lo) : kNegInf;
          },
          [x](const LaplaceParams& p) {
            return -std::abs(x - p.location) / p.scale -
                   std::log(2.0 * p.scale);
          },
          [x](const GeometricParams& p) {
            if (!is_integer(x) || x < 0.0) return kNegInf;
            if (p.success_prob == 1.0) return x == 0.0 ? 0.0 : kNegInf;
            return std::log(p.success_prob) + x * std::log1p(-p.success_prob);
          },
          [x](const BernoulliParams& p) {
            if (x == 0.0) return std::log1p(-p.p);
            if (x == 1.0) return std::log(p.p);
            return kNegInf;
          },
          [x](const BinomialParams& p) {
            if (!is_integer(x) || x < 0.0 || x > static_cast<double>(p.trials)) {
              return kNegInf;
            }
            return binomial_log_pmf(p.trials, p.p, x);
          },
          [x](const BetaParams& p) {
            if (x < 0.0 || x > 1.0) return kNegInf;
            return (p.alpha - 1.0) * std::log(x) +
                   (p.beta - 1.0) * std::log1p(-x) - log_beta(p.alpha, p.beta);
          },
          [x](const BurrParams& p) {
            if (!(x > 0.0)) return kNegInf;
            return std::log(p.c) + std::log(p.k) + (p.c - 1.0) * std::log(x) -
                   (p.k + 1.0) * std::log1p(std::pow(x, p.c));
          },
          [x](const TulapParams& p) {
            if (!std::isfinite(x)) return kNegInf;
            const double b = std::exp(-p.epsilon);
            const double r = std::floor(x + 0.5);
            if (b == 0.0) return r == 0.0 ? 0.0 : kNegInf;
            return std::log(discrete_laplace_pmf(b, r));
          },
      },
      dist.kind());
}

double cdf(const DistSpec& dist, double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  return std::visit(
      Overloaded{
          [x](const NormalParams& p) { return normal_cdf((x - p.mean) / p.sd); },
          [x](const UniformParams& p) {
            return std::clamp((x - p.lo) / (p.hi - p.lo), 0.0, 1.0);
          },
          [x](const LaplaceParams& p) {
            const double z = (x - p.location) / p.scale;
            return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
          },
          [x](const GeometricParams& p) {
            if (p.success_prob == 1.0) return x < 0.0 ? 0.0 : 1.0;
            return geometric_cdf(1.0 - p.success_prob, x);
          },
          [x](const BernoulliParams& p) {
            if (x < 0.0) return 0.0;
            if (x < 1.0) return 1.0 - p.p;
            return 1.0;
          },
          [x](const BinomialParams& p) { return binomial_cdf(p.trials, p.p, x); },
          [x](const BetaParams& p) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return reg_inc_beta_unchecked(p.alpha, p.beta, x,
                                          log_beta(p.alpha, p.beta));
          },
          [x](const BurrParams& p) {
            if (!(x > 0.0)) return 0.0;
            if (x == kInf) return 1.0;
            return -std::expm1(-p.k * std::log1p(std::pow(x, p.c)));
          },
          [x](const TulapParams& p) { return tulap_cdf(p.epsilon, x); },
      },
      dist.kind());
}

double quantile(const DistSpec& dist, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw ArgumentError("quantile: u must lie in (0, 1), got " +
                        std::to_string(u));
  }
  return std::visit(
      Overloaded{
          [u](const NormalParams& p) {
            return p.mean + p.sd * normal_quantile(u);
          },
          [u](const UniformParams& p) { return p.lo + u * (p.hi - p.lo); },
          [u](const LaplaceParams& p) {
            return u < 0.5 ? p.location + p.scale * std::log(2.0 * u)
                           : p.location - p.scale * std::log(2.0 * (1.0 - u));
          },
          [u](const GeometricParams& p) {
            return geometric_quantile_failures(1.0 - p.success_prob, u);
          },
          [u](const BernoulliParams& p) { return u <= 1.0 - p.p ? 0.0 : 1.0; },
          [u](const BinomialParams& p) {
            return binomial_quantile(p.trials, p.p, u);
          },
          [u](const BetaParams& p) { return beta_quantile(p.alpha, p.beta, u); },
          [u](const BurrParams& p) {
            return std::pow(std::expm1(-std::log1p(-u) / p.k), 1.0 / p.c);
          },
          [u](const TulapParams& p) { return tulap_quantile(p.epsilon, u); },
      },
      dist.kind());
}

double tulap_from_uniforms(double u1, double u2, double u3, double epsilon) {
  const double q = std::exp(-epsilon);
  return geometric_quantile_failures(q, u1) -
         geometric_quantile_failures(q, u2) + (u3 - 0.5);
}

}  // namespace onestep
