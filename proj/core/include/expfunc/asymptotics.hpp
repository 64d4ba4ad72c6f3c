#pragma once

#include <vector>

#include "expfunc/bernstein.hpp"

namespace expfunc {

struct AsymptoticConstant {
  double C_abs = 0.0;  // e^{-T_{phi*}} / sqrt(2 pi phi*(1))
  int sign = +1;       // (-1)^n
  int n = 0;
  double T = 0.0;      // T_{phi*}
};

struct AsymptoticValue {
  double value = 0.0;
  // Positive increase could not be certified (verdict false/inconclusive);
  // the value is computed anyway.
  bool positive_increase_warning = false;
};

enum class CppRegime { IntegrableSmallJumps, NonIntegrableSmallJumps };

struct CppAsymptotic {
  double value = 0.0;
  CppRegime regime = CppRegime::IntegrableSmallJumps;
  // NonIntegrable regime: the exponent carries an unquantified o(x)
  // correction; only the leading constant is returned.
  bool correction_caveat = false;
};

struct RatioRow {
  double x = 0.0;
  double density = 0.0;
  double asymptotic = 0.0;
  double ratio = 0.0;
  bool warning = false;
};

// int_{phi*(1)}^x varphi*(y)/y dy, computed in the substituted form
// int_1^{varphi*(x)} (1 - v phi'(v)/phi(v)) dv.
double exponent_integral(const BernsteinSpec& spec, double x);

AsymptoticConstant asymptotic_constant(const BernsteinSpec& spec, int n);

// Saddle-point asymptotic of f^{(n)}(x):
// C varphi*(x)^n sqrt(varphi*'(x)) x^{-n} e^{-exponent_integral(x)}.
AsymptoticValue asymptotic_density_deriv(const BernsteinSpec& spec, double x,
                                         int n);

// Compound Poisson asymptotic C e^{-phi(inf) x} with the regime-dependent
// explicit constant.
CppAsymptotic cpp_asymptotic(const BernsteinSpec& spec, double x, int n);

// Density vs asymptotic rows; use_corollary selects cpp_asymptotic.
std::vector<RatioRow> ratio_table(const BernsteinSpec& spec,
                                  const std::vector<double>& xs, int n,
                                  double tol, bool use_corollary = false);

}  // namespace expfunc
