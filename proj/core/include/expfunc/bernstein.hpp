#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "expfunc/errors.hpp"

namespace expfunc {

using Complex = std::complex<double>;

// A point z with Re(z) > 0 where evaluations occur.
struct ComplexPoint {
  double re = 0.0;
  double im = 0.0;
  operator Complex() const { return {re, im}; }
};

// --- Lévy measure variants -------------------------------------------------

// No jumps at all (pure killing and/or drift).
struct NoJumps {};

// mu(dy) = c * y^{-1-alpha} / Gamma(1-alpha) dy, the stable subordinator:
// jump part of phi is c z^alpha.
struct StableJumps {
  double c = 1.0;
  double alpha = 0.5;
};

// mu(dy) = a y^{-1} e^{-b y} dy, the Gamma subordinator:
// jump part of phi is a log(1 + z/b).
struct GammaJumps {
  double a = 1.0;
  double b = 1.0;
};

// mu(dy) = rate * scale * e^{-scale y} dy, compound Poisson with
// exponential jumps: jump part of phi is rate * z / (z + scale).
struct ExpJumps {
  double rate = 1.0;
  double scale = 1.0;
};

// Finite list of atoms: compound Poisson with discrete jumps.
struct AtomJumps {
  struct Atom {
    double location = 1.0;
    double mass = 1.0;
  };
  std::vector<Atom> atoms;
};

// Callable density m(y) plus callable tail mubar(y); phi and its
// derivatives are computed by adaptive quadrature of the tail form.
struct DensityJumps {
  std::function<double(double)> density;
  std::function<double(double)> tail;
  // Index of regular variation of the tail at 0, if known.
  std::optional<double> reg_var_index;
  // I(x) = int_0^x tail(y) dy in closed form, if known.
  std::optional<std::function<double(double)>> small_integral;
  // mubar(0+); +inf for infinite activity.
  double mass0 = std::numeric_limits<double>::infinity();
};

// Custom analytic triple for the jump part J(z) = int (1 - e^{-zy}) mu(dy).
struct AnalyticJumps {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> d1;
  std::function<Complex(Complex)> d2;
  std::function<double(double)> tail;
  double mass0 = std::numeric_limits<double>::infinity();
};

using MeasureSpec = std::variant<NoJumps, StableJumps, GammaJumps, ExpJumps,
                                 AtomJumps, DensityJumps, AnalyticJumps>;

// Laplace exponent phi(z) = q + d z + int (1 - e^{-zy}) mu(dy) of a
// potentially killed subordinator. Immutable after construction.
class BernsteinSpec {
 public:
  BernsteinSpec(double q, double d, MeasureSpec measure);

  double q() const { return q_; }
  double d() const { return d_; }
  const MeasureSpec& measure() const { return measure_; }

  bool has_jumps() const;
  // mubar(0+) = total jump rate; +inf for infinite activity.
  double jump_mass() const;
  // phi(+inf) = q + mubar(0+); finite exactly for compound Poisson.
  double phi_at_infinity() const;
  // True when phi requires numerical quadrature (Density variant).
  bool uses_quadrature() const;

 private:
  double q_;
  double d_;
  MeasureSpec measure_;
};

// --- Evaluation -------------------------------------------------------------

Complex phi(const BernsteinSpec& spec, Complex z);
Complex phi_deriv(const BernsteinSpec& spec, Complex z, int order);

// (log phi)''(z) = phi''/phi - (phi'/phi)^2, with fast paths for the
// closed-form families; the workhorse of the Stirling correction term.
Complex log_phi_dd(const BernsteinSpec& spec, Complex z);

// Tail mubar(y) of the Lévy measure.
double levy_tail(const BernsteinSpec& spec, double y);

// I(x) = int_0^x mubar(y) dy (closed form where available, quadrature
// otherwise). Finite for every admissible spec.
double tail_integral(const BernsteinSpec& spec, double x);

// --- Diagnostics ------------------------------------------------------------

struct PositiveIncreaseRow {
  double lambda = 0.0;
  double criterion_iii = 0.0;  // phi(2 lambda) / phi(lambda)
  double criterion_iv = 0.0;   // lambda phi'(lambda) / phi(lambda)
};

struct SmallScaleRow {
  double x = 0.0;
  double criterion_i = 0.0;   // x mubar(x) / I(x)
  double criterion_ii = 0.0;  // I(2x) / I(x)
};

struct PositiveIncreaseReport {
  std::vector<PositiveIncreaseRow> large_scale;
  std::vector<SmallScaleRow> small_scale;
  // Max of criterion (iv) over the top two decades of the grid.
  double sup_ratio = 0.0;
  // Min of criterion (ii) over the smallest two decades of the dual grid.
  double liminf_estimate = 0.0;
  bool verdict = false;
};

// Margin between sup_ratio and 1 below which the verdict is withheld.
inline constexpr double kPositiveIncreaseMargin = 0.05;

// Proposition A.2 criteria on lambda_grid (strictly increasing, >= 4
// decades). Throws InconclusiveDiagnostic when criterion (iv) on the top
// window comes within the margin of 1; pass enforce=false to get the
// report (with verdict=false) instead of the exception.
PositiveIncreaseReport positive_increase_report(
    const BernsteinSpec& spec, const std::vector<double>& lambda_grid,
    bool enforce = true);

struct InequalityRecord {
  std::string id;
  long samples = 0;
  long violations = 0;
  double worst_margin = 0.0;  // min over samples of (allowed - observed)
};

struct ValidationReport {
  std::vector<InequalityRecord> records;
  bool pass() const;
};

// Samples z log-uniformly in Re in [1e-3,1e3], Im in [-1e3,1e3] and checks
// the Proposition A.1 inequalities with a quadrature-error allowance.
ValidationReport validate_inequalities(const BernsteinSpec& spec,
                                       long sample_count, std::uint64_t seed);

namespace detail {
// splitmix64: seed expansion for deterministic sub-streams.
std::uint64_t splitmix64(std::uint64_t& state);
double uniform01(std::uint64_t& state);
}  // namespace detail

}  // namespace expfunc
