#include "expfunc/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "expfunc/bernstein_gamma.hpp"
#include "expfunc/inversion.hpp"
#include "expfunc/phi_star.hpp"
#include "expfunc/quadrature.hpp"

namespace expfunc {

namespace {

double phi_star_1(const BernsteinSpec& spec) {
  return 1.0 / phi(spec, 1.0).real();
}

bool positive_increase_ok(const BernsteinSpec& spec) {
  // Slowly varying failures (regular variation of index 1) only cross the
  // inconclusive margin far out, so the probe runs to 1e10.
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(std::pow(10.0, i / 4.0));
  return positive_increase_report(spec, grid, /*enforce=*/false).verdict;
}

// Finiteness probe for int_0^1 y^{-2} mu((0,y]) dy, the Fubini form of
// int_0^1 mu(dv)/v up to the finite term mu((0,1]).
bool small_jumps_integrable(const BernsteinSpec& spec) {
  const double mass0 = spec.jump_mass();
  double total = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double hi = std::pow(2.0, -k);
    const double lo = 0.5 * hi;
    const double block =
        integrate([&](double y) { return (mass0 - levy_tail(spec, y)) / (y * y); },
                  lo, hi, 1e-11, 1e-9)
            .value;
    total += block;
    if (block < 1e-10 * (1.0 + total)) return true;
  }
  return false;
}

// D = int_0^inf [ int_1^inf e^{-wv} phi*'(w) dw ] mu(dv).
double corollary_double_integral(const BernsteinSpec& spec) {
  auto inner = [&](double v) {
    auto f = [&](double w) {
      const double p = phi(spec, w).real();
      const double slope =
          1.0 / p - w * phi_deriv(spec, w, 1).real() / (p * p);
      return std::exp(-w * v) * slope;
    };
    const double hi = 1.0 + 80.0 / v;
    return integrate(f, 1.0, hi, 1e-12, 1e-10).value;
  };
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NoJumps>) {
          return 0.0;
        } else if constexpr (std::is_same_v<M, AtomJumps>) {
          double s = 0.0;
          for (const auto& at : m.atoms) s += at.mass * inner(at.location);
          return s;
        } else if constexpr (std::is_same_v<M, DensityJumps>) {
          double s = 0.0;
          for (int k = -40; k < 20; ++k) {
            const double lo = std::pow(2.0, k);
            const double hi = 2.0 * lo;
            const double block =
                integrate([&](double v) { return m.density(v) * inner(v); },
                          lo, hi, 1e-12, 1e-9)
                    .value;
            s += block;
            if (k > 2 && block < 1e-12 * (1.0 + s)) break;
          }
          return s;
        } else {
          throw DomainError(
              "Corollary constant needs an atomic or density measure");
        }
      },
      spec.measure());
}

}  // namespace

double exponent_integral(const BernsteinSpec& spec, double x) {
  PhiStarContext ctx(spec);
  if (!(x > phi_star_1(spec)))
    throw DomainError("exponent integral needs x > phi*(1)");
  const double top = ctx.varphi_star(x);
  // Integration by parts: int_1^V (1 - v (ln phi)') dv
  //   = (V - 1) - V ln phi(V) + ln phi(1) + int_1^V ln phi dv,
  // which needs only phi (one quadrature per node for density measures)
  // and a smooth, slowly varying integrand.
  auto f = [&](double v) { return std::log(phi(spec, v).real()); };
  const double lead = (top - 1.0) - top * f(top) + f(1.0);
  return lead + integrate(f, 1.0, top, 1e-10, 1e-12).value;
}

AsymptoticConstant asymptotic_constant(const BernsteinSpec& spec, int n) {
  AsymptoticConstant c;
  c.n = n;
  c.sign = (n % 2 == 0) ? +1 : -1;
  c.T = T_phis(spec);
  c.C_abs = std::exp(-c.T) / std::sqrt(2.0 * M_PI * phi_star_1(spec));
  return c;
}

AsymptoticValue asymptotic_density_deriv(const BernsteinSpec& spec, double x,
                                         int n) {
  if (n < 0) throw DomainError("derivative order must be >= 0");
  AsymptoticValue out;
  out.positive_increase_warning = !positive_increase_ok(spec);

  PhiStarContext ctx(spec);
  const auto c = asymptotic_constant(spec, n);
  const double v = ctx.varphi_star(x);
  const double vd = ctx.varphi_star_deriv(x);
  const double expo = exponent_integral(spec, x);
  // Assembled in logs: v^n and e^{-expo} overflow separately at large x.
  const double log_mag = n * std::log(v) + 0.5 * std::log(vd) -
                         n * std::log(x) - expo + std::log(c.C_abs);
  out.value = c.sign * std::exp(log_mag);
  return out;
}

CppAsymptotic cpp_asymptotic(const BernsteinSpec& spec, double x, int n) {
  if (spec.d() != 0.0)
    throw DomainError("compound Poisson asymptotic requires d = 0");
  const double B = spec.phi_at_infinity();
  if (!std::isfinite(B))
    throw DomainError("spec is not compound Poisson (infinite activity)");
  if (n < 0) throw DomainError("derivative order must be >= 0");

  CppAsymptotic out;
  const auto c = asymptotic_constant(spec, n);
  const double ps1 = phi_star_1(spec);
  double log_mag = n * std::log(B) + 0.5 * std::log(B) + B * ps1 +
                   std::log(c.C_abs) - B * x;
  if (small_jumps_integrable(spec)) {
    out.regime = CppRegime::IntegrableSmallJumps;
    log_mag += corollary_double_integral(spec);
  } else {
    out.regime = CppRegime::NonIntegrableSmallJumps;
    out.correction_caveat = true;
  }
  out.value = c.sign * std::exp(log_mag);
  return out;
}

std::vector<RatioRow> ratio_table(const BernsteinSpec& spec,
                                  const std::vector<double>& xs, int n,
                                  double tol, bool use_corollary) {
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1]))
      throw DomainError("x grid must be strictly increasing");
  std::vector<RatioRow> rows;
  rows.reserve(xs.size());
  for (double x : xs) {
    RatioRow row;
    row.x = x;
    row.density = density_deriv(spec, x, n, tol).value;
    if (use_corollary) {
      const auto ca = cpp_asymptotic(spec, x, n);
      row.asymptotic = ca.value;
      row.warning = ca.correction_caveat;
    } else {
      const auto av = asymptotic_density_deriv(spec, x, n);
      row.asymptotic = av.value;
      row.warning = av.positive_increase_warning;
    }
    row.ratio = row.density / row.asymptotic;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace expfunc
