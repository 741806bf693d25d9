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

#include "enqsp/polyapprox.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace enqsp {

double CertifiedApproximant::max_error() const {
  double e = 0.0;
  for (double v : certified_errors) e = std::max(e, v);
  return e;
}

TargetPolynomial chebyshev_fit(const RealFunction& f, std::size_t degree, Parity parity) {
  if (parity_of(degree) != parity) {
    throw std::invalid_argument("degree " + std::to_string(degree) + " does not match the parity");
  }
  std::size_t n = degree + 1;
  std::vector<double> theta(n), fx(n);
  for (std::size_t k = 0; k < n; ++k) {
    theta[k] = std::numbers::pi * (2.0 * static_cast<double>(k) + 1.0) / (2.0 * static_cast<double>(n));
    fx[k] = f(std::cos(theta[k]));
    if (!std::isfinite(fx[k])) throw std::invalid_argument("function is not finite on [-1, 1]");
  }
  std::vector<double> c(n, 0.0);
  std::size_t wrong = parity == Parity::kEven ? 1 : 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j % 2 == wrong) continue;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += fx[k] * std::cos(static_cast<double>(j) * theta[k]);
    c[j] = 2.0 * sum / static_cast<double>(n);
  }
  c[0] *= 0.5;
  double sup = 0.0;
  for (double x : chebyshev_grid(kSupGridPoints)) sup = std::max(sup, std::abs(chebyshev_eval(c, x)));
  if (sup > 1.0) {
    double s = (1.0 - kSolverMargin) / sup;
    for (double& v : c) v *= s;
  }
  return TargetPolynomial(std::move(c), parity);
}

double certify(const TargetPolynomial& p, const Band& band, std::size_t points) {
  double err = 0.0;
  for (double x : chebyshev_grid(points, band.domain.lo, band.domain.hi)) {
    err = std::max(err, std::abs(p(x) - band.reference(x)));
  }
  return err;
}

std::vector<double> recertify(const CertifiedApproximant& approx, std::size_t points) {
  std::vector<double> out;
  for (const Band& b : approx.bands) out.push_back(certify(approx.polynomial, b, points));
  return out;
}

namespace {

// Fits `f` at one degree and returns the approximant if every band meets `eps`
// and the polynomial keeps the phase-solver margin.
std::optional<CertifiedApproximant> try_degree(const RealFunction& f, std::size_t degree,
                                               Parity parity, const std::vector<Band>& bands,
                                               double eps, const std::string& target) {
  TargetPolynomial p = chebyshev_fit(f, degree, parity);
  if (degree > 0 && p.sup_norm() > 1.0 - kSolverMargin + kSupSlack) return std::nullopt;
  std::vector<double> errors;
  for (const Band& b : bands) {
    double e = certify(p, b);
    if (!(e <= eps)) return std::nullopt;
    errors.push_back(e);
  }
  return CertifiedApproximant{std::move(p), target, bands, std::move(errors)};
}

// Finds the smallest certified degree near `seed`: walks down by 2 while
// certification holds, or up by 2 until it does, failing past `max_degree`.
CertifiedApproximant search_degree(const RealFunction& f, std::size_t seed, std::size_t min_degree,
                                   std::size_t max_degree, Parity parity,
                                   const std::vector<Band>& bands, double eps,
                                   const std::string& target) {
  std::size_t p = parity == Parity::kOdd ? 1 : 0;
  auto fix = [&](std::size_t d) { return d % 2 == p ? d : d + 1; };
  std::size_t d = fix(std::max(seed, min_degree));
  max_degree = std::max(max_degree, d);
  std::optional<CertifiedApproximant> best = try_degree(f, d, parity, bands, eps, target);
  if (best) {
    while (d >= min_degree + 2) {
      auto lower = try_degree(f, d - 2, parity, bands, eps, target);
      if (!lower) break;
      best = std::move(lower);
      d -= 2;
    }
    return std::move(*best);
  }
  while (d + 2 <= max_degree) {
    d += 2;
    best = try_degree(f, d, parity, bands, eps, target);
    if (best) return std::move(*best);
  }
  TargetPolynomial last = chebyshev_fit(f, d, parity);
  double residual = 0.0;
  for (const Band& b : bands) residual = std::max(residual, certify(last, b));
  std::ostringstream msg;
  msg << "could not certify " << target << " to " << eps << " up to degree " << max_degree;
  throw ConvergenceError(msg.str(), residual);
}

// Inverse of erfc on (0, 2) by bisection.
double erfc_inverse(double y) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (std::erfc(mid) > y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double trig_degree_bound(double beta, double eps, double q) {
  return std::exp(q + 1.0) * beta / 2.0 + std::log(4.0 / (5.0 * eps)) / q + 1.0;
}

double trig_degree_bound(double beta, double eps) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 30; ++i) best = std::min(best, trig_degree_bound(beta, eps, 0.1 * i));
  return best;
}

TrigApproximation trig_approx(double beta, double eps) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be positive");
  if (!(eps > 0.0 && eps < 1.0 / std::numbers::e)) {
    throw std::invalid_argument("eps must lie in (0, 1/e)");
  }
  auto bound = static_cast<std::size_t>(std::floor(trig_degree_bound(beta, eps)));
  auto cos_f = [beta](double x) { return 0.5 * std::cos(beta * x); };
  auto sin_f = [beta](double x) { return 0.5 * std::sin(beta * x); };
  std::vector<Band> cos_bands{{Interval{-1.0, 1.0}, cos_f}};
  std::vector<Band> sin_bands{{Interval{-1.0, 1.0}, sin_f}};
  std::size_t even_seed = bound % 2 == 0 ? bound : bound - 1;
  std::size_t odd_seed = bound % 2 == 1 ? bound : (bound == 0 ? 1 : bound - 1);
  std::ostringstream name;
  name << "cos(" << beta << " x) / 2";
  CertifiedApproximant c =
      search_degree(cos_f, even_seed, 0, 2 * std::max<std::size_t>(bound, 1), Parity::kEven,
                    cos_bands, 0.5 * eps, name.str());
  name.str("");
  name << "sin(" << beta << " x) / 2";
  CertifiedApproximant s =
      search_degree(sin_f, odd_seed, 1, 2 * std::max<std::size_t>(bound, 1), Parity::kOdd,
                    sin_bands, 0.5 * eps, name.str());
  std::size_t d = std::max(c.degree(), s.degree());
  return TrigApproximation{std::move(c), std::move(s), d};
}

CertifiedApproximant inverse_approx(double kappa, double eps) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  double k = 1.5 * kappa;
  auto reference = [kappa](double x) { return 0.75 / (kappa * x); };
  // Smooth quartic-exponential cutoff removes the pole at 0.
  auto f = [kappa, k](double x) {
    if (x == 0.0) return 0.0;
    double t = k * x;
    return -0.75 / (kappa * x) * std::expm1(-(t * t) * (t * t));
  };
  std::vector<Band> bands{{Interval{-1.0, -1.0 / kappa}, reference},
                          {Interval{1.0 / kappa, 1.0}, reference}};
  auto seed = static_cast<std::size_t>(std::ceil(2.0 * kappa * std::log(1.0 / eps)));
  std::ostringstream name;
  name << "3 / (4 * " << kappa << " x)";
  return search_degree(f, seed, 1, 2 * std::max<std::size_t>(seed, 1), Parity::kOdd, bands, eps,
                       name.str());
}

CertifiedApproximant gsp_filter_approx(double mu, double delta, double eta, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(eta > 0.0 && eta <= mu - 0.5 * delta && mu - 0.5 * delta < mu + 0.5 * delta &&
        mu + 0.5 * delta < 1.0 - eta)) {
    std::ostringstream msg;
    msg << "infeasible filter bands: need 0 < eta <= mu - Delta/2 < mu + Delta/2 < 1 - eta, got"
        << " mu = " << mu << ", Delta = " << delta << ", eta = " << eta;
    throw std::invalid_argument(msg.str());
  }
  double pass_lo = std::cos(mu - 0.5 * delta);
  double pass_hi = std::cos(eta);
  double reject_lo = std::cos(1.0 - eta);
  double reject_hi = std::cos(mu + 0.5 * delta);
  double center = std::cos(mu);
  double half_gap = std::min(pass_lo - center, center - reject_hi);
  double scale = 1.0 - 0.5 * eps;
  // erfc(k h) / 2 <= eps / 4 at the band edges.
  double k = erfc_inverse(0.5 * eps) / half_gap;
  auto f = [=](double x) {
    return scale * (0.5 * (std::erf(k * (x - center)) - std::erf(k * (x + center))) + 1.0);
  };
  std::vector<Band> bands{{Interval{pass_lo, pass_hi}, [](double) { return 1.0; }},
                          {Interval{reject_lo, reject_hi}, [](double) { return 0.0; }}};
  auto seed = static_cast<std::size_t>(std::ceil(2.0 * std::log(1.0 / eps) / (pass_lo - reject_hi)));
  std::ostringstream name;
  name << "ground-state filter (mu = " << mu << ", Delta = " << delta << ", eta = " << eta << ")";
  return search_degree(f, seed, 2, 2 * std::max<std::size_t>(seed, 2), Parity::kEven, bands, eps,
                       name.str());
}

}  // namespace enqsp
