// Copyright 2026 The EnQSP Authors
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

#ifndef ENQSP_POLYAPPROX_H_
#define ENQSP_POLYAPPROX_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "enqsp/qsp.h"

namespace enqsp {

using RealFunction = std::function<double(double)>;

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

// A domain on which the polynomial must track `reference`.
struct Band {
  Interval domain;
  RealFunction reference;
};

struct CertifiedApproximant {
  TargetPolynomial polynomial;
  std::string target;
  std::vector<Band> bands;
  std::vector<double> certified_errors;  // one per band

  std::size_t degree() const { return polynomial.degree(); }
  double max_error() const;
};

// Points per interval used for certification.
inline constexpr std::size_t kCertifyGridPoints = 2001;

// Interpolant of f at the d+1 first-kind Chebyshev nodes, with the
// opposite-parity coefficients zeroed. Scaled by (1 - 1e-6) / sup when the
// sup-grid maximum exceeds 1.
TargetPolynomial chebyshev_fit(const RealFunction& f, std::size_t degree, Parity parity);

// max |p - reference| over `points` Chebyshev points of the band.
double certify(const TargetPolynomial& p, const Band& band,
               std::size_t points = kCertifyGridPoints);

// Re-certifies every band on a grid of `points` points.
std::vector<double> recertify(const CertifiedApproximant& approx, std::size_t points);

// Degree bound e^{q+1} beta / 2 + ln(4 / (5 eps)) / q + 1 at one q.
double trig_degree_bound(double beta, double eps, double q);
// Minimum of the bound over q = 0.1, 0.2, ..., 3.0.
double trig_degree_bound(double beta, double eps);

struct TrigApproximation {
  CertifiedApproximant cos_part;  // even, ~ cos(beta x) / 2
  CertifiedApproximant sin_part;  // odd, ~ sin(beta x) / 2
  std::size_t degree = 0;         // max of the two degrees
};

// Each part certified to eps / 2 on [-1, 1].
TrigApproximation trig_approx(double beta, double eps);

// Odd p with |3 / (4 kappa x) - p(x)| <= eps on [-1, -1/kappa] and
// [1/kappa, 1], and |p| <= 1 - 1e-6 on [-1, 1].
CertifiedApproximant inverse_approx(double kappa, double eps);

// Even F with |F - 1| <= eps for x in [cos(mu - Delta/2), cos(eta)] and
// |F| <= eps for x in [cos(1 - eta), cos(mu + Delta/2)], |F| < 1.
CertifiedApproximant gsp_filter_approx(double mu, double delta, double eta, double eps);

}  // namespace enqsp

#endif  // ENQSP_POLYAPPROX_H_
