#pragma once

#include "expfunc/bernstein.hpp"
#include "expfunc/bernstein_gamma.hpp"

namespace expfunc {

struct ContourPlan {
  double a = 0.0;          // contour abscissa (saddle, or fallback)
  double B_central = 0.0;  // half-width of the central window
  double B_max = 0.0;      // truncation height
  long node_budget = 0;
  double tail_bound = 0.0;  // envelope bound on the discarded mass
  bool saddle_fallback = false;  // x at/below the domain guard, a fixed
  DecayEnvelope envelope;
};

struct EvalResult {
  double value = 0.0;
  double abs_err = 0.0;     // combined quadrature + truncation + residue
  double im_residue = 0.0;  // |Im| of the unfolded contour integral
};

ContourPlan contour_plan(const BernsteinSpec& spec, double x, int n,
                         double tol);

// f^{(n)}(x) of the exponential functional, by Mellin-Barnes inversion
// along Re z = a from the plan.
EvalResult density_deriv(const BernsteinSpec& spec, double x, int n,
                         double tol);

// P(I > x), inverted from M(z+1)/z on the same contour machinery.
EvalResult tail(const BernsteinSpec& spec, double x, double tol);

// E[I^n] = n! / prod_{k=1}^n phi(k).
double moment(const BernsteinSpec& spec, int n);

}  // namespace expfunc
