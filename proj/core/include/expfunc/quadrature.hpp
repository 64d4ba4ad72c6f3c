#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "expfunc/errors.hpp"

namespace expfunc {

template <class T>
struct QuadResult {
  T value{};
  double abs_err = 0.0;
  std::size_t evals = 0;
};

namespace quad_detail {

// Gauss-Kronrod 7-15 abscissae (positive half) and weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline double norm_of(double v) { return std::abs(v); }
inline double norm_of(const std::complex<double>& v) { return std::abs(v); }

}  // namespace quad_detail

// Single GK15 panel. Error estimate is the (conservative) |K15 - G7|.
template <class F>
auto gk15(F&& f, double a, double b)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T gauss{};
  T kron{};
  for (int i = 0; i < 8; ++i) {
    const double x = quad_detail::kXgk[i];
    if (i == 7) {
      const T fc = f(c);
      gauss += quad_detail::kWg[3] * fc;
      kron += quad_detail::kWgk[7] * fc;
      continue;
    }
    const T fl = f(c - h * x);
    const T fr = f(c + h * x);
    kron += quad_detail::kWgk[i] * (fl + fr);
    if (i % 2 == 1) gauss += quad_detail::kWg[i / 2] * (fl + fr);
  }
  QuadResult<T> r;
  r.value = kron * h;
  r.abs_err = quad_detail::norm_of((kron - gauss) * h);
  r.evals = 15;
  return r;
}

namespace quad_detail {

template <class T, class F>
void adapt(F& f, double a, double b, double tol, int depth, QuadResult<T>& acc) {
  auto r = gk15(f, a, b);
  acc.evals += r.evals;
  if (r.abs_err <= tol || depth <= 0) {
    acc.value += r.value;
    acc.abs_err += r.abs_err;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, 0.5 * tol, depth - 1, acc);
  adapt(f, m, b, 0.5 * tol, depth - 1, acc);
}

}  // namespace quad_detail

// Adaptive GK15 over [a, b]. Accepts a panel once |K15-G7| <= local
// tolerance; on exhausted depth the panel is accepted with its error
// folded into abs_err, so the estimate stays honest.
template <class F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-12,
               double rel_tol = 1e-10, int max_depth = 45)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> acc;
  if (a == b) return acc;
  auto probe = gk15(f, a, b);
  double tol = abs_tol + rel_tol * quad_detail::norm_of(probe.value);
  quad_detail::adapt<T>(f, a, b, tol, max_depth, acc);
  return acc;
}

// Adaptive integration over a pre-split panel list (e.g. half-period
// panels of an oscillatory integrand), with compensated accumulation.
template <class F>
auto integrate_panels(F&& f, const std::vector<double>& breaks,
                      double abs_tol = 1e-12, double rel_tol = 1e-10,
                      int max_depth = 40)
    -> QuadResult<std::decay_t<decltype(f(breaks.front()))>> {
  using T = std::decay_t<decltype(f(breaks.front()))>;
  QuadResult<T> acc;
  if (breaks.size() < 2) return acc;
  const std::size_t n = breaks.size() - 1;
  const double panel_tol = abs_tol / static_cast<double>(n);
  T comp{};
  for (std::size_t i = 0; i < n; ++i) {
    QuadResult<T> part;
    quad_detail::adapt<T>(f, breaks[i], breaks[i + 1],
                          panel_tol + rel_tol * 0.0, max_depth, part);
    // Kahan step: panels of oscillatory integrands cancel heavily.
    T y = part.value - comp;
    T t = acc.value + y;
    comp = (t - acc.value) - y;
    acc.value = t;
    acc.abs_err += part.abs_err;
    acc.evals += part.evals;
  }
  return acc;
}

}  // namespace expfunc
