#include <cmath>

#include "doctest.h"
#include "expfunc/loggamma.hpp"
#include "expfunc/quadrature.hpp"

using namespace expfunc;
using Complex = std::complex<double>;

TEST_CASE("log_gamma reproduces factorials") {
  for (int n = 1; n <= 20; ++n) {
    double lf = 0.0;
    for (int k = 2; k < n; ++k) lf += std::log(static_cast<double>(k));
    CHECK(log_gamma(Complex{static_cast<double>(n), 0.0}).real() ==
          doctest::Approx(lf).epsilon(1e-13));
  }
}

TEST_CASE("log_gamma half-integer and reflection values") {
  // Gamma(1/2) = sqrt(pi); Gamma(3/2) = sqrt(pi)/2.
  CHECK(log_gamma(Complex{0.5, 0.0}).real() ==
        doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
  CHECK(log_gamma(Complex{1.5, 0.0}).real() ==
        doctest::Approx(0.5 * std::log(M_PI) - std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("log_gamma matches |Gamma(1+i)| reference") {
  // |Gamma(1+i)| = sqrt(pi / sinh(pi)).
  const Complex lg = log_gamma(Complex{1.0, 1.0});
  const double ref = 0.5 * std::log(M_PI / std::sinh(M_PI));
  CHECK(lg.real() == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("log_gamma functional equation on complex arguments") {
  const Complex zs[] = {{0.7, 2.3}, {3.1, -5.0}, {1.0, 40.0}, {12.0, 0.5}};
  for (Complex z : zs) {
    const Complex lhs = log_gamma(z + 1.0);
    const Complex rhs = log_gamma(z) + std::log(z);
    CHECK(std::abs(lhs - rhs) < 1e-11 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("binet equals the sawtooth integral oracle") {
  // mu_B(z) = (1/2) int_0^inf P({t}) (t+z)^{-2} dt, P(u) = u(1-u) on [0,1).
  auto oracle = [](double z) {
    double total = 0.0;
    const int periods = 2000;
    for (int k = 0; k < periods; ++k) {
      auto f = [k, z](double t) {
        const double u = t - std::floor(t);
        return 0.5 * u * (1.0 - u) / ((t + z) * (t + z));
      };
      total += gk15(f, static_cast<double>(k), k + 1.0).value;
    }
    // Euler-Maclaurin closure of the truncated sawtooth tail: the kernel
    // mean is 1/6, so the remainder is ~ (1/12)/(U + z).
    return total + 1.0 / (12.0 * (periods + z));
  };
  for (double z : {1.0, 2.0, 5.5, 20.0}) {
    CHECK(binet(Complex{z, 0.0}).real() ==
          doctest::Approx(oracle(z)).epsilon(1e-6));
  }
}

TEST_CASE("binet consistency with Stirling") {
  // log Gamma(z) = (z - 1/2) log z - z + (1/2) log 2pi + binet(z).
  for (double z : {1.0, 3.0, 7.5, 50.0}) {
    const double lhs = log_gamma(Complex{z, 0.0}).real();
    const double rhs = (z - 0.5) * std::log(z) - z +
                       0.5 * std::log(2.0 * M_PI) +
                       binet(Complex{z, 0.0}).real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}
