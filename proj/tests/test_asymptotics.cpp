#include <cmath>

#include "doctest.h"
#include "expfunc/asymptotics.hpp"
#include "expfunc/bernstein_gamma.hpp"
#include "expfunc/model_config.hpp"
#include "expfunc/phi_star.hpp"

using namespace expfunc;

namespace {

const BernsteinSpec kPureKill(1.0, 0.0, NoJumps{});
const BernsteinSpec kAtoms(0.0, 0.0, AtomJumps{{{1.0, 1.0}}});

BernsteinSpec stable(double alpha) {
  return BernsteinSpec(0.0, 0.0, StableJumps{1.0, alpha});
}

}  // namespace

TEST_CASE("exponent integral closed forms") {
  // Stable: integrand 1 - alpha, so the integral is (1-alpha)(varphi - 1).
  for (double alpha : {0.3, 0.5, 0.7}) {
    const BernsteinSpec st = stable(alpha);
    PhiStarContext ctx(st);
    for (double x : {2.0, 5.0, 40.0}) {
      const double v = ctx.varphi_star(x);
      CHECK(exponent_integral(st, x) ==
            doctest::Approx((1.0 - alpha) * (v - 1.0)).epsilon(1e-9));
    }
  }
  // Pure kill: integrand 1, varphi = qx, integral q x - 1.
  CHECK(exponent_integral(kPureKill, 3.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(exponent_integral(kPureKill, 0.5), DomainError);
}

TEST_CASE("asymptotic constant") {
  const auto c = asymptotic_constant(kPureKill, 0);
  // T = 1 - (1/2) ln 2pi, phi*(1) = 1, so C = e^{-1+ln sqrt(2pi)}/sqrt(2pi)
  //   = e^{-1}.
  CHECK(c.C_abs == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(c.sign == 1);
  CHECK(asymptotic_constant(kPureKill, 3).sign == -1);
}

TEST_CASE("pure kill asymptotic is exact: (-1)^n q^{n+1} e^{-qx}") {
  for (double q : {1.0, 2.0}) {
    const BernsteinSpec pk(q, 0.0, NoJumps{});
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      if (!(x > 1.0 / q)) continue;  // need x > phi*(1)
      for (int n : {0, 1, 2}) {
        const auto a = asymptotic_density_deriv(pk, x, n);
        const double ref = (n % 2 == 0 ? 1.0 : -1.0) *
                           std::pow(q, n + 1.0) * std::exp(-q * x);
        CHECK(a.value == doctest::Approx(ref).epsilon(1e-7));
        CHECK_FALSE(a.positive_increase_warning);
      }
    }
  }
}

TEST_CASE("stable alpha=1/2 closed-form value at x=2") {
  const BernsteinSpec st = stable(0.5);
  const auto a = asymptotic_density_deriv(st, 2.0, 0);
  CHECK(a.value == doctest::Approx(0.17096).epsilon(1e-3));
}

TEST_CASE("index-1 fixture carries a positive-increase warning") {
  const BernsteinSpec rv = spec_from_json(
      R"({"model":"custom_density","params":{"family":"index1_rv"}})");
  PhiStarContext ctx(rv);
  const double x = ctx.domain_left() * 4.0 + 4.0;
  const auto a = asymptotic_density_deriv(rv, x, 0);
  CHECK(a.positive_increase_warning);
}

TEST_CASE("cpp_asymptotic: Atoms is in the integrable regime") {
  const auto ca = cpp_asymptotic(kAtoms, 10.0, 0);
  CHECK(ca.regime == CppRegime::IntegrableSmallJumps);
  CHECK_FALSE(ca.correction_caveat);
  CHECK(ca.value > 0.0);
  // e^{-phi(inf) x} scaling: doubling x divides by e^{phi(inf) dx}.
  const auto ca2 = cpp_asymptotic(kAtoms, 11.0, 0);
  CHECK(ca2.value / ca.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("cpp_asymptotic guards") {
  CHECK_THROWS_AS(cpp_asymptotic(stable(0.5), 5.0, 0), DomainError);
  CHECK_THROWS_AS(cpp_asymptotic(BernsteinSpec(1.0, 1.0, NoJumps{}), 5.0, 0),
                  DomainError);
}

TEST_CASE("ratio_table: pure kill ratios are all 1") {
  const auto rows = ratio_table(kPureKill, {2.0, 3.0, 5.0}, 0, 1e-9, false);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(r.warning);
  }
  CHECK_THROWS_AS(ratio_table(kPureKill, {3.0, 2.0}, 0, 1e-9, false),
                  DomainError);
}

TEST_CASE("Theorem 3.1: stable ratio approaches 1") {
  const BernsteinSpec st = stable(0.5);
  // varphi = x^2: varphi = 10 at x ~ 3.16, varphi = 50 at x ~ 7.07.
  const auto rows =
      ratio_table(st, {std::sqrt(10.0), std::sqrt(50.0)}, 0, 1e-9, false);
  CHECK(std::abs(rows[1].ratio - 1.0) <= 0.05);
  CHECK(std::abs(rows[1].ratio - 1.0) < std::abs(rows[0].ratio - 1.0));
}
