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

#include <gtest/gtest.h>

#include <cmath>

#include "enqsp/polyapprox.h"

namespace enqsp {
namespace {

void expect_bounded_and_parity(const CertifiedApproximant& a) {
  for (double x : chebyshev_grid(kCertifyGridPoints)) EXPECT_LE(std::abs(a.polynomial(x)), 1.0);
  const std::vector<double>& c = a.polynomial.coefficients();
  std::size_t p = a.polynomial.parity() == Parity::kOdd ? 1 : 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j % 2 != p) EXPECT_EQ(c[j], 0.0);
  }
  for (const Band& b : a.bands) EXPECT_GE(b.domain.hi, b.domain.lo);
}

// Refining the certification grid barely moves the reported error.
void expect_stable_certificate(const CertifiedApproximant& a) {
  std::vector<double> fine = recertify(a, 4001);
  ASSERT_EQ(fine.size(), a.certified_errors.size());
  for (std::size_t i = 0; i < fine.size(); ++i) {
    EXPECT_LE(std::abs(fine[i] - a.certified_errors[i]), 0.1 * a.certified_errors[i] + 1e-15);
  }
}

TEST(ChebyshevFit, CubeIdentity) {
  TargetPolynomial p = chebyshev_fit([](double x) { return x * x * x; }, 3, Parity::kOdd);
  EXPECT_NEAR(p.coefficients()[1], 0.75, 1e-14);
  EXPECT_NEAR(p.coefficients()[3], 0.25, 1e-14);
  EXPECT_EQ(p.coefficients()[0], 0.0);
  EXPECT_EQ(p.coefficients()[2], 0.0);
}

TEST(ChebyshevFit, ConstantAndSmoothFunction) {
  TargetPolynomial c = chebyshev_fit([](double) { return 0.5; }, 0, Parity::kEven);
  ASSERT_EQ(c.coefficients().size(), 1u);
  EXPECT_NEAR(c.coefficients()[0], 0.5, 1e-15);
  TargetPolynomial p = chebyshev_fit([](double x) { return 0.5 * std::cos(2 * x); }, 14, Parity::kEven);
  for (double x : chebyshev_grid(kCertifyGridPoints)) EXPECT_NEAR(p(x), 0.5 * std::cos(2 * x), 1e-10);
}

TEST(ChebyshevFit, RescalesWhenTooLarge) {
  TargetPolynomial p = chebyshev_fit([](double x) { return 2 * x; }, 1, Parity::kOdd);
  EXPECT_NEAR(p.sup_norm(), 1 - 1e-6, 1e-12);
}

TEST(TrigApprox, SmallBetaLimit) {
  TrigApproximation t = trig_approx(1e-3, 1e-3);
  EXPECT_NEAR(t.cos_part.polynomial(0.3), 0.5, 1e-3);
  EXPECT_NEAR(t.sin_part.polynomial(0.3), 0.5e-3 * 0.3, 1e-3);
}

TEST(TrigApprox, CertifiedAndWithinBound) {
  TrigApproximation t = trig_approx(5.0, 1e-3);
  EXPECT_LE(t.cos_part.max_error(), 5e-4);
  EXPECT_LE(t.sin_part.max_error(), 5e-4);
  for (double x : chebyshev_grid(kCertifyGridPoints)) {
    EXPECT_LE(std::abs(t.cos_part.polynomial(x) - 0.5 * std::cos(5 * x)), 5e-4);
    EXPECT_LE(std::abs(t.sin_part.polynomial(x) - 0.5 * std::sin(5 * x)), 5e-4);
  }
  double bound = 1e300;
  for (int i = 1; i <= 30; ++i) {
    double q = 0.1 * i;
    bound = std::min(bound, std::exp(q + 1) * 5.0 / 2 + std::log(4 / (5 * 1e-3)) / q + 1);
  }
  EXPECT_LE(static_cast<double>(t.degree), bound);
  EXPECT_EQ(t.cos_part.polynomial.parity(), Parity::kEven);
  EXPECT_EQ(t.sin_part.polynomial.parity(), Parity::kOdd);
  expect_bounded_and_parity(t.cos_part);
  expect_bounded_and_parity(t.sin_part);
  expect_stable_certificate(t.cos_part);
  expect_stable_certificate(t.sin_part);
}

TEST(TrigApprox, Rejections) {
  EXPECT_THROW(trig_approx(0.0, 1e-3), std::invalid_argument);
  EXPECT_THROW(trig_approx(1.0, 0.5), std::invalid_argument);
}

TEST(InverseApprox, KappaOne) {
  CertifiedApproximant a = inverse_approx(1.0, 0.1);
  EXPECT_LE(a.max_error(), 0.1);
  EXPECT_NEAR(a.polynomial(1.0), 0.75, 0.1);
  expect_bounded_and_parity(a);
}

TEST(InverseApprox, OddAndCertified) {
  CertifiedApproximant a = inverse_approx(8.0, 0.01);
  EXPECT_LE(a.max_error(), 0.01);
  for (double x : chebyshev_grid(kCertifyGridPoints, 0.125, 1.0)) {
    EXPECT_LE(std::abs(a.polynomial(x) - 0.75 / (8 * x)), 0.01);
    EXPECT_EQ(a.polynomial(-x), -a.polynomial(x));
  }
  expect_bounded_and_parity(a);
  expect_stable_certificate(a);
}

TEST(InverseApprox, DegreeGrowsWithKappa) {
  std::size_t d2 = inverse_approx(2.0, 0.01).degree();
  std::size_t d4 = inverse_approx(4.0, 0.01).degree();
  std::size_t d8 = inverse_approx(8.0, 0.01).degree();
  EXPECT_LT(d2, d4);
  EXPECT_LT(d4, d8);
}

TEST(InverseApprox, QlspParameters) {
  CertifiedApproximant a = inverse_approx(8.0, 3 * 0.05 / 64);
  EXPECT_LE(a.max_error(), 3 * 0.05 / 64);
  expect_stable_certificate(a);
}

TEST(Filter, WideGap) {
  CertifiedApproximant f = gsp_filter_approx(0.5, 0.8, 0.05, 0.1);
  EXPECT_LE(f.max_error(), 0.1);
  EXPECT_LE(f.degree(), 30u);
  ASSERT_EQ(f.bands.size(), 2u);
  for (double x : chebyshev_grid(kCertifyGridPoints, std::cos(0.1), std::cos(0.05))) {
    EXPECT_LE(std::abs(f.polynomial(x) - 1.0), 0.1);
  }
  for (double x : chebyshev_grid(kCertifyGridPoints, std::cos(0.95), std::cos(0.9))) {
    EXPECT_LE(std::abs(f.polynomial(x)), 0.1);
  }
  for (double x : chebyshev_grid(101)) EXPECT_EQ(f.polynomial(-x), f.polynomial(x));
  expect_bounded_and_parity(f);
  expect_stable_certificate(f);
}

TEST(Filter, DegreeGrowsAsGapShrinks) {
  std::size_t a = gsp_filter_approx(0.5, 0.6, 0.05, 0.01).degree();
  std::size_t b = gsp_filter_approx(0.5, 0.3, 0.05, 0.01).degree();
  std::size_t c = gsp_filter_approx(0.5, 0.15, 0.05, 0.01).degree();
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
}

TEST(Filter, RejectsInfeasibleBands) {
  EXPECT_THROW(gsp_filter_approx(0.2, 0.6, 0.05, 0.1), std::invalid_argument);
  EXPECT_THROW(gsp_filter_approx(0.8, 0.4, 0.05, 0.1), std::invalid_argument);
}

}  // namespace
}  // namespace enqsp
