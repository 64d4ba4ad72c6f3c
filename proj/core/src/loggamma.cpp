#include "expfunc/loggamma.hpp"

#include <cmath>

namespace expfunc {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

constexpr double kLanczos[9] = {
    0.99999999999980993,    676.5203681218851,     -1259.1392167224028,
    771.32342877765313,     -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  // Shift small real parts up with log Gamma(z) = log Gamma(z+1) - log z;
  // Lanczos is least accurate near the left edge of the half-plane.
  std::complex<double> shift = 0.0;
  while (z.real() < 1.5) {
    shift -= std::log(z);
    z += 1.0;
  }
  const std::complex<double> zm1 = z - 1.0;
  std::complex<double> x = kLanczos[0];
  for (int k = 1; k < 9; ++k) x += kLanczos[k] / (zm1 + static_cast<double>(k));
  const std::complex<double> t = zm1 + 7.5;
  return shift + kHalfLog2Pi + (zm1 + 0.5) * std::log(t) - t + std::log(x);
}

std::complex<double> binet(std::complex<double> z) {
  return log_gamma(z) - (z - 0.5) * std::log(z) + z - kHalfLog2Pi;
}

}  // namespace expfunc
