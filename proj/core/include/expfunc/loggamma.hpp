#pragma once

#include <complex>

namespace expfunc {

// Principal branch of log Gamma(z) for Re(z) > 0, Lanczos approximation
// (g = 7, 9 coefficients), accurate to ~1e-13 relative.
std::complex<double> log_gamma(std::complex<double> z);

// Binet's function mu(z) = log Gamma(z) - (z - 1/2) log z + z - (1/2) log 2 pi,
// the Stirling remainder. mu(1) = 1 - (1/2) log 2 pi.
std::complex<double> binet(std::complex<double> z);

}  // namespace expfunc
