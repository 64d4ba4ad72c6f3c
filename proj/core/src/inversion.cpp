#include "expfunc/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "expfunc/phi_star.hpp"
#include "expfunc/quadrature.hpp"

namespace expfunc {

namespace {

constexpr double kGuardBand = 1e-6;
constexpr double kMinAbscissa = 0.3;
constexpr double kCapFactor = 64.0;

double safe_exp(double x) { return std::exp(std::min(x, 700.0)); }

// Two-sided contour integral of S(b) = F(b) + F(-b) over [0, B_max in
// doublings], with half-period panel spacing for the x^{-ib} oscillator.
struct ContourIntegral {
  Complex total{};
  double quad_err = 0.0;
  double tail_est = 0.0;
  std::size_t evals = 0;
  bool truncated_ok = false;
};

template <class F>
ContourIntegral sweep_contour(F&& S, const ContourPlan& plan, double h0,
                              double abs_target, double tol) {
  ContourIntegral out;
  auto breaks_for = [&](double lo, double hi) {
    std::vector<double> br;
    const int m = std::max(1, static_cast<int>(std::ceil((hi - lo) / h0)));
    br.reserve(m + 1);
    for (int i = 0; i <= m; ++i)
      br.push_back(lo + (hi - lo) * i / static_cast<double>(m));
    return br;
  };

  auto central =
      integrate_panels(S, breaks_for(0.0, plan.B_central), abs_target, 0.0);
  out.total = central.value;
  out.quad_err = central.abs_err;
  out.evals = central.evals;

  double B = plan.B_central;
  double last_block = std::numeric_limits<double>::infinity();
  while (B < plan.B_max * (1.0 + 1e-12)) {
    const double hi = std::min(2.0 * B, plan.B_max);
    auto block = integrate_panels(S, breaks_for(B, hi), abs_target, 0.0);
    out.total += block.value;
    out.quad_err += block.abs_err;
    out.evals += block.evals;
    last_block = std::abs(block.value);
    B = hi;
    const double thr =
        0.1 * std::max(abs_target, tol * std::abs(out.total.real()));
    if (last_block < thr) {
      out.truncated_ok = true;
      out.tail_est = last_block;
      return out;
    }
  }
  // Cap hit: certified only if the fitted envelope says the rest decays.
  if (plan.envelope.mode == DecayEnvelope::Mode::ExponentialDecay &&
      plan.tail_bound <
          std::max(abs_target, tol * std::abs(out.total.real()))) {
    out.truncated_ok = true;
    out.tail_est = plan.tail_bound;
    return out;
  }
  throw TruncationUnbounded(
      "contour truncation cap reached without certified decay");
}

}  // namespace

ContourPlan contour_plan(const BernsteinSpec& spec, double x, int n,
                         double tol) {
  if (spec.d() != 0.0)
    throw DomainError("inversion requires a driftless spec (d = 0)");
  if (!(x > 0.0)) throw DomainError("x must be positive");
  if (!(tol > 0.0) || tol > 1e-2)
    throw DomainError("tol must lie in (0, 1e-2]");
  if (n < 0) throw DomainError("derivative order must be >= 0");

  PhiStarContext ctx(spec);
  ContourPlan plan;
  if (x <= ctx.domain_left() + kGuardBand) {
    plan.saddle_fallback = true;
    plan.a = 1.0;
    plan.B_central = 16.0;
  } else {
    const double v = ctx.varphi_star(x);
    const double vd = ctx.varphi_star_deriv(x);
    const double g = ctx.saddle_window(x).second;
    plan.a = std::max(v, kMinAbscissa);
    plan.B_central = std::max({8.0 * std::sqrt(x * vd), g, 4.0});
  }

  plan.envelope = decay_envelope(spec, plan.a);
  const double cap = kCapFactor * plan.B_central;
  if (plan.envelope.mode == DecayEnvelope::Mode::ExponentialDecay) {
    const double eps = plan.envelope.epsilon;
    const double need = std::log(10.0 / (tol * eps * 2.0 * M_PI));
    double bmax = plan.B_central;
    for (int it = 0; it < 3; ++it) {
      const double growth = n * std::log(2.0 + bmax / plan.a);
      bmax = std::max(plan.B_central,
                      plan.envelope.b0 * plan.a + (need + growth) / eps);
    }
    plan.B_max = std::min(bmax, cap);
    const double lnx = std::log(x);
    const double log_bound =
        std::log(plan.envelope.bound(plan.B_max) /
                 (2.0 * M_PI * std::max(eps, 1e-3))) -
        (plan.a + n) * lnx + n * std::log(2.0 + plan.B_max / plan.a);
    plan.tail_bound = safe_exp(log_bound);
  } else {
    plan.B_max = cap;
    plan.tail_bound = 0.0;  // determined empirically by the doubling rule
  }
  const double osc = std::max(std::abs(std::log(x)), 1.0);
  plan.node_budget =
      static_cast<long>(std::ceil(plan.B_max * osc / M_PI)) * 30 + 1000;
  return plan;
}

EvalResult density_deriv(const BernsteinSpec& spec, double x, int n,
                         double tol) {
  const ContourPlan plan = contour_plan(spec, x, n, tol);
  const double tol_comp = std::clamp(tol / 30.0, 1e-14, 1e-6);
  MellinEvaluator ev(spec, plan.a, tol_comp);
  const double lnx = std::log(x);
  const double a = plan.a;

  auto F = [&](double b) -> Complex {
    const Complex z{a, b};
    Complex w = ev.log_mellin_at(b) - (z + static_cast<double>(n)) * lnx;
    for (int k = 0; k < n; ++k) w += std::log(z + static_cast<double>(k));
    return std::exp(w);
  };
  auto S = [&](double b) -> Complex { return F(b) + F(-b); };

  const double w_eff =
      plan.saddle_fallback ? 2.0 : plan.B_central / 8.0;
  const double peak = std::abs(F(0.0));
  const double abs_target = std::max(tol * peak * w_eff * 0.3, 1e-305);
  const double h0 =
      std::min(plan.B_central / 8.0,
               M_PI / (2.0 * std::max(std::abs(lnx), 0.25)));

  auto ci = sweep_contour(S, plan, h0, abs_target, tol);

  EvalResult r;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  r.value = sign * ci.total.real() / (2.0 * M_PI);
  r.im_residue = std::abs(ci.total.imag()) / (2.0 * M_PI);
  r.abs_err = (ci.quad_err + ci.tail_est) / (2.0 * M_PI) + r.im_residue;
  return r;
}

EvalResult tail(const BernsteinSpec& spec, double x, double tol) {
  const ContourPlan plan = contour_plan(spec, x, 0, tol);
  const double tol_comp = std::clamp(tol / 30.0, 1e-14, 1e-6);
  // M(z+1) along Re z = a is the Mellin line at abscissa a+1.
  MellinEvaluator ev(spec, plan.a + 1.0, tol_comp);
  const double lnx = std::log(x);
  const double a = plan.a;

  auto F = [&](double b) -> Complex {
    const Complex z{a, b};
    return std::exp(ev.log_mellin_at(b) - z * lnx) / z;
  };
  auto S = [&](double b) -> Complex { return F(b) + F(-b); };

  const double w_eff =
      plan.saddle_fallback ? 2.0 : plan.B_central / 8.0;
  const double peak = std::abs(F(0.0));
  const double abs_target = std::max(tol * peak * w_eff * 0.3, 1e-305);
  const double h0 =
      std::min(plan.B_central / 8.0,
               M_PI / (2.0 * std::max(std::abs(lnx), 0.25)));

  auto ci = sweep_contour(S, plan, h0, abs_target, tol);

  EvalResult r;
  r.value = ci.total.real() / (2.0 * M_PI);
  r.im_residue = std::abs(ci.total.imag()) / (2.0 * M_PI);
  r.abs_err = (ci.quad_err + ci.tail_est) / (2.0 * M_PI) + r.im_residue;
  return r;
}

double moment(const BernsteinSpec& spec, int n) {
  if (n < 0) throw DomainError("moment order must be >= 0");
  double m = 1.0;
  for (int k = 1; k <= n; ++k)
    m *= static_cast<double>(k) / phi(spec, static_cast<double>(k)).real();
  return m;
}

}  // namespace expfunc
