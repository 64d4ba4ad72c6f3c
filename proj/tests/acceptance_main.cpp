// Acceptance suite: each criterion prints exactly one PASS/FAIL line.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "expfunc/asymptotics.hpp"
#include "expfunc/bernstein.hpp"
#include "expfunc/bernstein_gamma.hpp"
#include "expfunc/inversion.hpp"
#include "expfunc/montecarlo.hpp"
#include "expfunc/phi_star.hpp"
#include "expfunc/quadrature.hpp"

using namespace expfunc;

namespace {

const BernsteinSpec kStable03(0.0, 0.0, StableJumps{1.0, 0.3});
const BernsteinSpec kStable05(0.0, 0.0, StableJumps{1.0, 0.5});
const BernsteinSpec kStable07(0.0, 0.0, StableJumps{1.0, 0.7});
const BernsteinSpec kGamma(0.0, 0.0, GammaJumps{1.0, 1.0});
const BernsteinSpec kPureKill(1.0, 0.0, NoJumps{});
const BernsteinSpec kAtoms(0.0, 0.0, AtomJumps{{{1.0, 1.0}}});
const BernsteinSpec kExpCpp(0.0, 0.0, ExpJumps{1.0, 1.0});

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class F>
void criterion(int number, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    detail = body(pass);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  char buf[64];
  std::snprintf(buf, sizeof buf, " [%.1fs]", secs);
  report(number, pass, detail + buf);
}

// 1. Bernstein-gamma integer consistency across all five fixture families.
std::string c1(bool& pass) {
  const BernsteinSpec* specs[] = {&kStable05, &kGamma, &kPureKill, &kExpCpp,
                                  &kAtoms};
  double worst = 0.0;
  for (const auto* spec : specs) {
    double prod = 1.0;
    for (int n = 1; n <= 15; ++n) {
      prod *= phi(*spec, {static_cast<double>(n), 0.0}).real();
      const double w = std::exp(log_W(*spec, {n + 1.0, 0.0}).real());
      worst = std::max(worst, std::abs(w - prod) / prod);
    }
  }
  pass = worst <= 1e-8;
  return "Bernstein-gamma recurrence, 5 families, n=1..15, worst rel err " +
         std::to_string(worst);
}

// 2. Pure-kill end-to-end exactness plus the T constant.
std::string c2(bool& pass) {
  const double t_ref = 1.0 - 0.5 * std::log(2.0 * M_PI);
  const double t = T_phis(kPureKill);
  double worst = std::abs(t - t_ref) > 1e-7 ? 1.0 : 0.0;
  double worst_rel = 0.0;
  for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (int n : {0, 1, 2}) {
      const double ref = (n % 2 == 0 ? 1.0 : -1.0) * std::exp(-x);
      const double inv = density_deriv(kPureKill, x, n, 1e-9).value;
      worst_rel = std::max(worst_rel, std::abs(inv - ref) / std::abs(ref));
      // The asymptotic exponent lives on x > phi*(1) = 1/q only.
      if (x > 1.0 / kPureKill.q() + 1e-9) {
        const double asy = asymptotic_density_deriv(kPureKill, x, n).value;
        worst_rel = std::max(worst_rel, std::abs(asy - ref) / std::abs(ref));
      }
    }
  }
  pass = worst == 0.0 && worst_rel <= 1e-6;
  return "pure kill: |T - (1 - ln(2pi)/2)| = " + std::to_string(std::abs(t - t_ref)) +
         ", worst rel err (inversion & asymptotic) " + std::to_string(worst_rel);
}

// 3. Gamma(2,1) law for phi(z) = z/(z+1).
std::string c3(bool& pass) {
  double worst = 0.0;
  for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double f_ref = x * std::exp(-x);
    const double t_ref = (1.0 + x) * std::exp(-x);
    worst = std::max(worst, std::abs(density_deriv(kExpCpp, x, 0, 1e-7).value -
                                     f_ref) /
                                f_ref);
    worst = std::max(worst,
                     std::abs(tail(kExpCpp, x, 1e-7).value - t_ref) / t_ref);
  }
  double moment_err = 0.0;
  double fact = 1.0;
  for (int n = 0; n <= 6; ++n) {
    if (n > 0) fact *= n + 1.0;
    moment_err =
        std::max(moment_err, std::abs(moment(kExpCpp, n) - fact) / fact);
  }
  pass = worst <= 1e-4 && moment_err <= 1e-12;
  return "Gamma(2,1) law: worst density/tail rel err " + std::to_string(worst) +
         ", moment rel err " + std::to_string(moment_err);
}

// 4. Theorem 3.1 convergence probe for the stable family.
std::string c4(bool& pass) {
  pass = true;
  std::string detail = "stable ratio -> 1:";
  for (const auto* spec : {&kStable03, &kStable05, &kStable07}) {
    const double alpha = std::get<StableJumps>(spec->measure()).alpha;
    // varphi = x^{1/(1-alpha)}: varphi = V at x = V^{1-alpha}.
    const double x10 = std::pow(10.0, 1.0 - alpha);
    const double x50 = std::pow(50.0, 1.0 - alpha);
    for (int n : {0, 1}) {
      const auto rows = ratio_table(*spec, {x10, x50}, n, 1e-9, false);
      const double far = std::abs(rows[1].ratio - 1.0);
      const double near = std::abs(rows[0].ratio - 1.0);
      if (!(far <= 0.05) || !(far < near)) pass = false;
      char buf[96];
      std::snprintf(buf, sizeof buf, " a=%.1f n=%d |r-1|=%.4f(<%.4f)", alpha,
                    n, far, near);
      detail += buf;
    }
  }
  const double closed = asymptotic_density_deriv(kStable05, 2.0, 0).value;
  if (std::abs(closed - 0.17096) > 1e-3 * 0.17096) pass = false;
  detail += " ; alpha=1/2 x=2 asymptotic " + std::to_string(closed);
  return detail;
}

// 5. Corollary 3.3 probe on the Atoms fixture.
std::string c5(bool& pass) {
  const double x = 30.0;
  const double f = density_deriv(kAtoms, x, 0, 1e-9).value;
  const auto ca = cpp_asymptotic(kAtoms, x, 0);
  const double ratio = f / ca.value;
  pass = ratio >= 0.95 && ratio <= 1.05 &&
         ca.regime == CppRegime::IntegrableSmallJumps;
  return "Atoms density/corollary constant at x=30: ratio " +
         std::to_string(ratio);
}

// 6. Appendix A inequality suite + Theorem 5.2 arg diagnostic.
std::string c6(bool& pass) {
  const BernsteinSpec* specs[] = {&kStable03, &kStable05, &kStable07, &kGamma,
                                  &kPureKill, &kExpCpp, &kAtoms};
  long violations = 0;
  for (const auto* spec : specs) {
    const auto rep = validate_inequalities(*spec, 10000, 20260823);
    for (const auto& r : rep.records) violations += r.violations;
  }
  std::vector<double> a_grid{0.5, 1.0, 2.0, 5.0, 20.0};
  std::vector<double> t_grid{0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0};
  long negatives = 0;
  double min_arg = 0.0;
  for (const auto* spec : {&kStable05, &kGamma, &kPureKill, &kAtoms}) {
    const auto diag = arg_phistar_diagnostic(*spec, a_grid, t_grid);
    negatives += diag.negatives;
    min_arg = std::min(min_arg, diag.min_arg);
  }
  pass = violations == 0 && negatives == 0;
  return "Prop A.1: 10^4 samples x 7 fixtures, " + std::to_string(violations) +
         " violations; arg phi* grid negatives " + std::to_string(negatives) +
         ", min arg " + std::to_string(min_arg);
}

// 7. Stirling parts: closed-form A and E(200) -> T uniformly in Im z.
std::string c7(bool& pass) {
  const auto parts = stirling_parts(kPureKill, {1.0, 1.0});
  const double a_ref = M_PI / 4.0 - 0.5 * std::log(2.0);
  const double a_err = std::abs(parts.A - a_ref);
  double worst = 0.0;
  for (const auto* spec : {&kPureKill, &kStable03, &kStable05, &kStable07}) {
    const double t = T_phis(*spec);
    for (double im : {0.0, 10.0, 100.0}) {
      const Complex e = E_phis(*spec, {200.0, im});
      worst = std::max(worst, std::abs(e - Complex{t, 0.0}));
    }
  }
  pass = a_err <= 1e-10 && worst <= 1e-3;
  return "pure-kill A(1+i) err " + std::to_string(a_err) +
         "; |E(200+i Im) - T| worst " + std::to_string(worst);
}

// 8. Monte Carlo cross-check with bit-identical reruns.
std::string c8(bool& pass) {
  pass = true;
  std::string detail = "MC 10^6 draws:";
  for (const auto* spec : {&kAtoms, &kExpCpp}) {
    SimConfig cfg;
    cfg.sample_count = 1000000;
    cfg.seed = 1234;
    cfg.worker_count = 4;
    const auto batch = sample_batch(*spec, cfg);
    const double se =
        std::sqrt(batch.summary.variance / cfg.sample_count);
    const double m1 = moment(*spec, 1);
    const double mean_z = std::abs(batch.summary.mean - m1) / se;
    if (mean_z > 3.0) pass = false;
    double worst_z = 0.0;
    for (double x : {1.0, 2.0, 4.0}) {
      long hits = 0;
      for (double v : batch.draws) hits += v > x;
      const double p_hat = static_cast<double>(hits) / cfg.sample_count;
      const double p = tail(*spec, x, 1e-8).value;
      const double z =
          std::abs(p_hat - p) / std::sqrt(p * (1.0 - p) / cfg.sample_count);
      worst_z = std::max(worst_z, z);
    }
    if (worst_z > 4.0) pass = false;
    // Bit-identical rerun (spot check on a smaller batch for time).
    SimConfig small = cfg;
    small.sample_count = 20000;
    const auto r1 = sample_batch(*spec, small);
    const auto r2 = sample_batch(*spec, small);
    if (r1.draws != r2.draws) pass = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, " mean_z=%.2f tail_z=%.2f", mean_z,
                  worst_z);
    detail += buf;
  }
  return detail;
}

// 9. Inversion self-consistency across the positive-increase fixtures.
std::string c9(bool& pass) {
  pass = true;
  std::string detail = "inversion:";
  struct Case {
    const BernsteinSpec* spec;
    double hi;       // upper cutoff for the normalization integral
    double fd_x;     // abscissa for the finite-difference check
  };
  const Case cases[] = {{&kPureKill, 40.0, 2.0},
                        {&kStable03, 32.0, 2.0},
                        {&kStable05, 12.0, 2.0},
                        {&kStable07, 7.0, 1.5},
                        {&kGamma, 16.0, 3.0}};
  for (const auto& c : cases) {
    // Normalization on geometric panels from 1e-8 (these densities do not
    // vanish at 0, so the truncated mass is ~ f(0+) * lo).
    std::vector<double> breaks{1e-8};
    while (breaks.back() < c.hi) breaks.push_back(breaks.back() * 2.0);
    breaks.back() = c.hi;
    auto f = [&](double x) {
      return density_deriv(*c.spec, x, 0, 1e-8).value;
    };
    const double mass = integrate_panels(f, breaks, 1e-8, 0.0, 4).value;
    if (std::abs(mass - 1.0) > 1e-6) pass = false;

    const double h = 1e-4 * c.fd_x;
    const double fd = (density_deriv(*c.spec, c.fd_x + h, 0, 1e-11).value -
                       density_deriv(*c.spec, c.fd_x - h, 0, 1e-11).value) /
                      (2.0 * h);
    const double d1 = density_deriv(*c.spec, c.fd_x, 1, 1e-10).value;
    const double fd_rel = std::abs(d1 - fd) / std::abs(d1);
    if (fd_rel > 1e-4) pass = false;

    // Imaginary residue relative to the real part, measured where the
    // density sits above the inversion's own error floor (elsewhere the
    // ratio compares two error terms).
    double max_residue = 0.0;
    for (double x : {1e-2, 3e-2, 1e-1, 3e-1, 1.0, 3.0}) {
      const auto r = density_deriv(*c.spec, x, 0, 1e-10);
      if (std::abs(r.value) > 10.0 * r.abs_err)
        max_residue = std::max(max_residue, r.im_residue / std::abs(r.value));
    }
    if (max_residue > 1e-10) pass = false;
    char buf[128];
    std::snprintf(buf, sizeof buf, " |int f - 1|=%.1e fd_rel=%.1e res=%.1e;",
                  std::abs(mass - 1.0), fd_rel, max_residue);
    detail += buf;
  }
  return detail;
}

}  // namespace

int main() {
  criterion(1, c1);
  criterion(2, c2);
  criterion(3, c3);
  criterion(4, c4);
  criterion(5, c5);
  criterion(6, c6);
  criterion(7, c7);
  criterion(8, c8);
  criterion(9, c9);
  return failures;
}
