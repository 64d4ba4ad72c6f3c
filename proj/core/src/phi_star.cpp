#include "expfunc/phi_star.hpp"

#include <cmath>

namespace expfunc {

namespace {

// phi*'(v) = 1/phi(v) - v phi'(v)/phi(v)^2, real positive v.
double phi_star_slope(const BernsteinSpec& spec, double v) {
  const double p = phi(spec, v).real();
  return 1.0 / p - v * phi_deriv(spec, v, 1).real() / (p * p);
}

}  // namespace

PhiStarContext::PhiStarContext(BernsteinSpec spec) : spec_(std::move(spec)) {
  if (spec_.q() > 0.0) {
    domain_left_ = 0.0;
    return;
  }
  // phi'(0+) = int y mu(dy): finite iff the slope probe stabilizes as
  // v -> 0 (divergence shows as growth between scales).
  const double s8 = phi_deriv(spec_, 1e-8, 1).real();
  const double s10 = phi_deriv(spec_, 1e-10, 1).real();
  const bool diverges = s10 > 1e12 || s10 > 1.5 * s8;
  domain_left_ = diverges ? 0.0 : 1.0 / s10;
}

Complex PhiStarContext::phi_star(Complex z) const {
  return z / phi(spec_, z);
}

double PhiStarContext::check_domain(double x) const {
  if (spec_.d() != 0.0)
    throw DomainError("varphi_star requires a driftless spec (d = 0)");
  if (!(x > domain_left_ + 1e-6))
    throw DomainError("x is at or below the domain guard of varphi_star");
  return x;
}

double PhiStarContext::varphi_star(double x) const {
  check_domain(x);
  auto f = [&](double v) { return v / phi(spec_, v).real(); };

  // Bracket by doubling/halving from v0 = x phi(1), exact for constant phi.
  double v = x * phi(spec_, 1.0).real();
  if (!(v > 0.0) || !std::isfinite(v)) v = 1.0;
  double lo = v, hi = v;
  int guard = 0;
  while (f(lo) > x) {
    lo *= 0.5;
    if (++guard > 2000)
      throw NonconvergentRootFind("varphi_star: lower bracket not found");
  }
  guard = 0;
  while (f(hi) < x) {
    hi *= 2.0;
    if (++guard > 2000)
      throw NonconvergentRootFind("varphi_star: upper bracket not found");
  }

  // Safeguarded Newton on v/phi(v) - x with bisection fallback.
  v = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fv = f(v);
    if (fv < x)
      lo = v;
    else
      hi = v;
    const double resid = fv - x;
    if (std::abs(resid) <= 1e-13 * x || hi - lo <= 1e-15 * v) return v;
    const double slope = phi_star_slope(spec_, v);
    double next = v - resid / slope;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    v = next;
  }
  throw NonconvergentRootFind("varphi_star: no convergence in 200 iterations");
}

double PhiStarContext::varphi_star_deriv(double x) const {
  const double v = varphi_star(x);
  const double slope = phi_star_slope(spec_, v);
  if (!(slope > 0.0))
    throw NonconvergentRootFind("varphi_star_deriv: nonpositive slope");
  return 1.0 / slope;
}

std::pair<double, double> PhiStarContext::saddle_window(double x) const {
  const double v = varphi_star(x);
  const double dv = varphi_star_deriv(x);
  const double H = 0.1 * v / (x * dv);
  const double g = std::pow(v, 7.0 / 12.0);
  return {H, g};
}

}  // namespace expfunc
