#pragma once

#include <map>
#include <vector>

#include "expfunc/bernstein.hpp"

namespace expfunc {

// Components of the Stirling-type representation of log M at z:
// L_{phi*}(z-1) = G - A + iU, plus the correction E = E_{phi*}(z).
struct StirlingParts {
  double G = 0.0;  // int_1^{Re z} ln phi*(w) dw
  double A = 0.0;  // int_0^{Im z} arg phi*(Re z + iw) dw
  double U = 0.0;  // int_0^{Im z} ln|phi*(Re z + iw)| dw
  Complex E{};     // E_{phi*}(z)
  double G_err = 0.0;
  double A_err = 0.0;
  double U_err = 0.0;
  double E_err = 0.0;
};

struct DecayEnvelope {
  enum class Mode { ExponentialDecay, ModulusBoundOnly };
  Mode mode = Mode::ModulusBoundOnly;
  double epsilon = 0.0;  // fitted exponential decay rate of |M(a+ib)|
  double b0 = 0.0;       // onset slope: decay asserted for |b| >= b0 * a
  double base = 0.0;     // multiplicative constant dominating |M(a)|
  double abscissa = 0.0;

  // Upper-bound estimate for |M(a+ib)|.
  double bound(double b) const;
};

struct ArgDiagRow {
  double a = 0.0;
  double t = 0.0;
  double arg = 0.0;    // arg phi*(a(1+it))
  double t_arg = 0.0;  // t * arg phi*(a(1+it))
};

struct ArgDiagnostic {
  std::vector<ArgDiagRow> rows;
  double min_arg = 0.0;
  double min_t_arg = 0.0;
  long negatives = 0;  // rows with arg < -1e-12 (should be none)
};

// log W_phi(z) via the Stirling representation on the bent contour
// 1 -> Re z + 1 -> Re z + 1 + i Im z; exp of the result satisfies
// W(z+1) = phi(z) W(z).
Complex log_W(const BernsteinSpec& spec, Complex z, double tol = 1e-10);

// log M(z) with M(z) = Gamma(z)/W_phi(z) = E[I^{z-1}].
Complex log_mellin(const BernsteinSpec& spec, Complex z, double tol = 1e-10);

StirlingParts stirling_parts(const BernsteinSpec& spec, Complex z,
                             double tol = 1e-10);

// E_{phi*}(z) = E_{phi_0}(z) - E_phi(z), phi_0(w) = w.
Complex E_phis(const BernsteinSpec& spec, Complex z, double tol = 1e-10);

// T_{phi*} = (1/2) int_1^inf P(u)(1/u^2 - (phi'/phi)^2 + phi''/phi) du,
// the limit of E_{phi*}(z) as Re z -> inf.
double T_phis(const BernsteinSpec& spec, double tol = 1e-10);

DecayEnvelope decay_envelope(const BernsteinSpec& spec, double a);

ArgDiagnostic arg_phistar_diagnostic(const BernsteinSpec& spec,
                                     const std::vector<double>& a_grid,
                                     const std::vector<double>& t_grid);

namespace detail {

// Period-by-period quadrature of the E-correction for phi, with cached
// z-independent half and Euler-Maclaurin tail corrections.
class PeriodEngine {
 public:
  PeriodEngine(const BernsteinSpec* spec, double tol);

  Complex E_phi(Complex z) const;
  double T_phi_sum() const;  // sum_k int P(u) R(u) du + tail, R = (log phi)''
  double tail_err() const { return tail_err_; }
  int periods() const { return periods_; }

 private:
  const BernsteinSpec* spec_;
  int periods_ = 0;
  bool trivial_ = false;   // E_phi = coeff * E_base, no quadrature
  double coeff_ = 0.0;
  double u_sum_ = 0.0;     // sum_k int_k^{k+1} P(u) R(u) du
  double u_slope_ = 0.0;   // phi'/phi at the truncation point
  double u_rprime_ = 0.0;  // finite-difference R' at the truncation point
  double tail_err_ = 0.0;
  std::vector<double> r_nodes_;  // R(k + t_j) at GK nodes, all periods
};

// Cumulative integral of a real integrand from 0, with anchor reuse so a
// sweep over b revisits earlier work instead of re-integrating from 0.
class AnchoredLine {
 public:
  AnchoredLine() = default;
  template <class F>
  AnchoredLine(F f, double tol_per_unit)
      : f_(std::move(f)), tol_per_unit_(tol_per_unit) {}

  double eval(double b);

 private:
  std::function<double(double)> f_;
  double tol_per_unit_ = 1e-12;
  std::map<double, double> anchors_{{0.0, 0.0}};
};

}  // namespace detail

// Evaluator of log M(a+ib) along a fixed vertical line, reusing the
// z-independent Stirling pieces across calls. Not thread-safe (internal
// anchor caches); use one instance per thread.
class MellinEvaluator {
 public:
  MellinEvaluator(const BernsteinSpec& spec, double a, double tol = 1e-12);
  MellinEvaluator(const MellinEvaluator&) = delete;
  MellinEvaluator& operator=(const MellinEvaluator&) = delete;

  Complex log_mellin_at(double b);
  double abscissa() const { return a_; }
  const BernsteinSpec& spec() const { return spec_; }

 private:
  BernsteinSpec spec_;
  double a_;
  double tol_;
  double log_phistar_1_;  // ln phi*(1)
  double G_;              // int_1^{a+1} ln phi*(w) dw
  detail::PeriodEngine periods_;
  detail::AnchoredLine arg_line_;  // A at abscissa a+1
  detail::AnchoredLine mod_line_;  // U at abscissa a+1
};

}  // namespace expfunc
