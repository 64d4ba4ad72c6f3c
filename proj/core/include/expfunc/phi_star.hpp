#pragma once

#include <utility>

#include "expfunc/bernstein.hpp"

namespace expfunc {

// phi*(z) = z/phi(z), its inverse varphi* on the positive axis, and the
// saddle-window quantities H(x), g(x) used by contour planning.
class PhiStarContext {
 public:
  explicit PhiStarContext(BernsteinSpec spec);

  const BernsteinSpec& spec() const { return spec_; }
  // Left endpoint 1{q=0}/phi'(0+) of Dom(varphi*); 0 when q > 0 or
  // phi'(0+) = inf.
  double domain_left() const { return domain_left_; }

  Complex phi_star(Complex z) const;

  // Unique v > 0 with v/phi(v) = x, to 1e-12 relative. Requires d = 0 and
  // x > domain_left (with a 1e-6 guard band at the endpoint).
  double varphi_star(double x) const;

  // (varphi*)'(x) = 1 / phi*'(varphi*(x)).
  double varphi_star_deriv(double x) const;

  // (H(x), g(x)) with H = (1/10) varphi*(x)/(x varphi*'(x)) <= 1/10 and
  // g = varphi*(x)^{7/12}.
  std::pair<double, double> saddle_window(double x) const;

 private:
  double check_domain(double x) const;

  BernsteinSpec spec_;
  double domain_left_;
};

}  // namespace expfunc
