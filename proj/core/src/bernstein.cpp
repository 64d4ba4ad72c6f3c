#include "expfunc/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "expfunc/quadrature.hpp"

namespace expfunc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_right_half(Complex z) {
  if (!(z.real() > 0.0))
    throw DomainError("evaluation requires Re(z) > 0");
}

// E1(x) = -Ei(-x), exponential integral for x > 0.
double expint_e1(double x) { return -std::expint(-x); }

// Half-period panel breaks for e^{-i Im(z) y} over [lo, hi].
std::vector<double> osc_breaks(double lo, double hi, double im) {
  std::vector<double> br;
  double step = hi - lo;
  const double half_period = std::abs(im) > 0 ? M_PI / std::abs(im) : kInf;
  step = std::min(step, half_period);
  step = std::max(step, (hi - lo) / 4096.0);
  for (double t = lo; t < hi; t += step) br.push_back(t);
  br.push_back(hi);
  return br;
}

// Breaks for (0, 1]: dyadic grading down past the Laplace scale 1/Re(z)
// (a uniform grid cannot see the e^{-zy} spike for large Re z), each
// dyadic panel further split to the oscillation half-period.
std::vector<double> graded_breaks(double re, double im) {
  const int m = std::min(
      60, static_cast<int>(std::ceil(std::log2(std::max(1.0, re)))) + 14);
  const double half_period = std::abs(im) > 0 ? M_PI / std::abs(im) : kInf;
  std::vector<double> br{0.0, std::ldexp(1.0, -m)};
  for (int j = m - 1; j >= 0; --j) {
    const double lo = br.back();
    const double hi = std::ldexp(1.0, -j);
    const double width = hi - lo;
    const int parts =
        half_period < width
            ? static_cast<int>(std::min(4096.0, std::ceil(width / half_period)))
            : 1;
    for (int i = 1; i <= parts; ++i)
      br.push_back(lo + width * i / static_cast<double>(parts));
  }
  return br;
}

// int_0^inf e^{-zy} w_kind(y) mubar(y) dy with
//   kind 0: w = 1          (the phi tail form)
//   kind 1: w = 1 - z y    (phi')
//   kind 2: w = 2y - z y^2 (-phi'')
Complex tail_form_integral(const std::function<double(double)>& mubar,
                           Complex z, int kind) {
  auto f = [&](double y) -> Complex {
    const double t = mubar(y);
    if (t == 0.0) return {0.0, 0.0};
    Complex w;
    switch (kind) {
      case 0: w = 1.0; break;
      case 1: w = 1.0 - z * y; break;
      default: w = 2.0 * y - z * (y * y); break;
    }
    return std::exp(-z * y) * w * t;
  };

  // (0,1]: tail form tames any integrable singularity of the density.
  auto near = integrate_panels(f, graded_breaks(z.real(), z.imag()),
                               1e-13, 1e-11);
  Complex acc = near.value;
  double err = near.abs_err;

  // (1,inf): doubling blocks until two consecutive blocks are negligible.
  double lo = 1.0;
  int quiet = 0;
  for (int k = 0; k < 60 && quiet < 2; ++k) {
    const double hi = 2.0 * lo;
    auto part = integrate_panels(f, osc_breaks(lo, hi, z.imag()),
                                 1e-14, 1e-12);
    acc += part.value;
    err += part.abs_err;
    const double scale = std::abs(acc) + 1e-30;
    if (std::abs(part.value) < 1e-13 * scale + 1e-16)
      ++quiet;
    else
      quiet = 0;
    lo = hi;
  }
  if (quiet < 2)
    throw NonconvergentQuadrature("tail-form Laplace integral did not settle",
                                  err);
  return acc;
}

// Integrated-by-parts form for densities whose tail is only marginally
// integrable at 0 (e.g. regular variation of index 1): with
// I(y) = int_0^y mubar bounded,
//   phi_jumps   = int e^{-zy} (z^2) I dy                (kind 0)
//   phi_jumps'  = int e^{-zy} (2z - z^2 y) I dy         (kind 1)
//   phi_jumps'' = int e^{-zy} (2 - 4zy + z^2 y^2) I dy  (kind 2)
Complex parts_form_integral(const std::function<double(double)>& I, Complex z,
                            int kind) {
  // The leading power of z is factored out of the weight so the quadrature
  // tolerances act at O(1) scale (otherwise the absolute tolerance is
  // unreachable for large |z| and the adaptive refinement crawls).
  const Complex s = kind == 0 ? z * z : (kind == 1 ? z : Complex{1.0, 0.0});
  auto f = [&](double y) -> Complex {
    Complex w;
    switch (kind) {
      case 0: w = 1.0; break;
      case 1: w = 2.0 - z * y; break;
      default: w = 2.0 - 4.0 * z * y + z * z * (y * y); break;
    }
    return std::exp(-z * y) * w * I(y);
  };

  auto near = integrate_panels(f, graded_breaks(z.real(), z.imag()),
                               1e-13, 1e-11);
  Complex acc = near.value;
  double err = near.abs_err;

  // Compactly supported measure: I is constant past 1 and the tail of the
  // Laplace integral closes in elementary terms.
  const double plateau = I(1.0);
  if (I(2.0) == plateau && I(64.0) == plateau) {
    const Complex ez = std::exp(-z);
    switch (kind) {
      case 0: acc += plateau * ez / z; break;
      case 1: acc += plateau * ez * (1.0 / z - 1.0); break;
      default: acc += plateau * ez * (z - 2.0); break;
    }
    return s * acc;
  }

  double lo = 1.0;
  int quiet = 0;
  for (int k = 0; k < 80 && quiet < 2; ++k) {
    const double hi = 2.0 * lo;
    auto part = integrate_panels(f, osc_breaks(lo, hi, z.imag()),
                                 1e-14, 1e-12);
    acc += part.value;
    err += part.abs_err;
    const double scale = std::abs(acc) + 1e-30;
    if (std::abs(part.value) < 1e-13 * scale + 1e-16)
      ++quiet;
    else
      quiet = 0;
    lo = hi;
  }
  if (quiet < 2)
    throw NonconvergentQuadrature("Laplace integral of I did not settle", err);
  return s * acc;
}

template <class... Fs>
struct overload : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overload(Fs...) -> overload<Fs...>;

}  // namespace

BernsteinSpec::BernsteinSpec(double q, double d, MeasureSpec measure)
    : q_(q), d_(d), measure_(std::move(measure)) {
  if (!(q >= 0.0) || !(d >= 0.0))
    throw DomainError("killing rate and drift must be nonnegative");
  std::visit(
      overload{
          [&](const NoJumps&) {
            if (q == 0.0 && d == 0.0)
              throw DomainError("spec is identically zero");
          },
          [](const StableJumps& s) {
            if (!(s.c > 0.0) || !(s.alpha > 0.0) || !(s.alpha < 1.0))
              throw DomainError("stable jumps need c > 0, alpha in (0,1)");
          },
          [](const GammaJumps& g) {
            if (!(g.a > 0.0) || !(g.b > 0.0))
              throw DomainError("gamma jumps need a > 0, b > 0");
          },
          [](const ExpJumps& e) {
            if (!(e.rate > 0.0) || !(e.scale > 0.0))
              throw DomainError("exponential jumps need rate > 0, scale > 0");
          },
          [](const AtomJumps& a) {
            if (a.atoms.empty()) throw DomainError("atom list is empty");
            for (const auto& at : a.atoms) {
              if (!(at.location > 0.0) || !(at.mass > 0.0))
                throw DomainError("atoms need positive location and mass");
            }
            for (std::size_t i = 0; i < a.atoms.size(); ++i)
              for (std::size_t j = i + 1; j < a.atoms.size(); ++j)
                if (a.atoms[i].location == a.atoms[j].location)
                  throw DomainError("atom locations must be distinct");
          },
          [](const DensityJumps& dj) {
            if (!dj.density || !dj.tail)
              throw DomainError("density variant needs both callables");
            // Admissibility: int_0^1 mubar must converge (checked by the
            // same log-substituted quadrature used for tail_integral).
            double s = 0.0;
            for (int k = 0; k < 60; ++k) {
              const double hi = std::pow(2.0, -k);
              const double lo = 0.5 * hi;
              s += gk15([&](double y) { return dj.tail(y); }, lo, hi).value;
              if (k > 20 && dj.tail(lo) * lo < 1e-12) break;
              if (s > 1e12)
                throw DomainError(
                    "Levy tail is not integrable at 0 (no subordinator)");
            }
            // Spot-check monotonicity of the tail.
            double prev = dj.tail(1e-6);
            for (double y : {1e-4, 1e-2, 1.0, 10.0}) {
              const double cur = dj.tail(y);
              if (cur > prev * (1.0 + 1e-9))
                throw DomainError("Levy tail must be non-increasing");
              prev = cur;
            }
          },
          [](const AnalyticJumps& aj) {
            if (!aj.value || !aj.d1 || !aj.d2 || !aj.tail)
              throw DomainError("analytic variant needs all four callables");
          }},
      measure_);
}

bool BernsteinSpec::has_jumps() const {
  return !std::holds_alternative<NoJumps>(measure_);
}

double BernsteinSpec::jump_mass() const {
  return std::visit(
      overload{[](const NoJumps&) { return 0.0; },
               [](const StableJumps&) { return kInf; },
               [](const GammaJumps&) { return kInf; },
               [](const ExpJumps& e) { return e.rate; },
               [](const AtomJumps& a) {
                 double m = 0.0;
                 for (const auto& at : a.atoms) m += at.mass;
                 return m;
               },
               [](const DensityJumps& d) { return d.mass0; },
               [](const AnalyticJumps& a) { return a.mass0; }},
      measure_);
}

double BernsteinSpec::phi_at_infinity() const { return q_ + jump_mass(); }

bool BernsteinSpec::uses_quadrature() const {
  return std::holds_alternative<DensityJumps>(measure_);
}

Complex phi(const BernsteinSpec& spec, Complex z) {
  require_right_half(z);
  const Complex base = spec.q() + spec.d() * z;
  return base +
         std::visit(
             overload{
                 [&](const NoJumps&) -> Complex { return 0.0; },
                 [&](const StableJumps& s) -> Complex {
                   return s.c * std::pow(z, s.alpha);
                 },
                 [&](const GammaJumps& g) -> Complex {
                   return g.a * std::log(1.0 + z / g.b);
                 },
                 [&](const ExpJumps& e) -> Complex {
                   return e.rate * z / (z + e.scale);
                 },
                 [&](const AtomJumps& a) -> Complex {
                   Complex s = 0.0;
                   for (const auto& at : a.atoms)
                     s += at.mass * (1.0 - std::exp(-z * at.location));
                   return s;
                 },
                 [&](const DensityJumps& d) -> Complex {
                   if (d.small_integral && !std::isfinite(d.mass0))
                     return parts_form_integral(*d.small_integral, z, 0);
                   return z * tail_form_integral(d.tail, z, 0);
                 },
                 [&](const AnalyticJumps& a) -> Complex { return a.value(z); }},
             spec.measure());
}

Complex phi_deriv(const BernsteinSpec& spec, Complex z, int order) {
  require_right_half(z);
  if (order != 1 && order != 2)
    throw DomainError("phi_deriv supports orders 1 and 2");
  if (order == 1) {
    return spec.d() +
           std::visit(
               overload{
                   [&](const NoJumps&) -> Complex { return 0.0; },
                   [&](const StableJumps& s) -> Complex {
                     return s.c * s.alpha * std::pow(z, s.alpha - 1.0);
                   },
                   [&](const GammaJumps& g) -> Complex {
                     return g.a / (g.b + z);
                   },
                   [&](const ExpJumps& e) -> Complex {
                     const Complex den = z + e.scale;
                     return e.rate * e.scale / (den * den);
                   },
                   [&](const AtomJumps& a) -> Complex {
                     Complex s = 0.0;
                     for (const auto& at : a.atoms)
                       s += at.mass * at.location *
                            std::exp(-z * at.location);
                     return s;
                   },
                   [&](const DensityJumps& d) -> Complex {
                     if (d.small_integral && !std::isfinite(d.mass0))
                       return parts_form_integral(*d.small_integral, z, 1);
                     return tail_form_integral(d.tail, z, 1);
                   },
                   [&](const AnalyticJumps& a) -> Complex { return a.d1(z); }},
               spec.measure());
  }
  return std::visit(
      overload{
          [&](const NoJumps&) -> Complex { return 0.0; },
          [&](const StableJumps& s) -> Complex {
            return s.c * s.alpha * (s.alpha - 1.0) * std::pow(z, s.alpha - 2.0);
          },
          [&](const GammaJumps& g) -> Complex {
            const Complex den = g.b + z;
            return -g.a / (den * den);
          },
          [&](const ExpJumps& e) -> Complex {
            const Complex den = z + e.scale;
            return -2.0 * e.rate * e.scale / (den * den * den);
          },
          [&](const AtomJumps& a) -> Complex {
            Complex s = 0.0;
            for (const auto& at : a.atoms)
              s -= at.mass * at.location * at.location *
                   std::exp(-z * at.location);
            return s;
          },
          [&](const DensityJumps& d) -> Complex {
            if (d.small_integral && !std::isfinite(d.mass0))
              return parts_form_integral(*d.small_integral, z, 2);
            return -tail_form_integral(d.tail, z, 2);
          },
          [&](const AnalyticJumps& a) -> Complex { return a.d2(z); }},
      spec.measure());
}

Complex log_phi_dd(const BernsteinSpec& spec, Complex z) {
  require_right_half(z);
  if (spec.q() == 0.0 && spec.d() == 0.0) {
    if (const auto* s = std::get_if<StableJumps>(&spec.measure()))
      return -s->alpha / (z * z);
    if (const auto* g = std::get_if<GammaJumps>(&spec.measure())) {
      const Complex L = std::log(1.0 + z / g->b);
      const Complex den = (g->b + z) * (g->b + z) * L * L;
      return -(L + 1.0) / den;
    }
  }
  const Complex p = phi(spec, z);
  const Complex r1 = phi_deriv(spec, z, 1) / p;
  return phi_deriv(spec, z, 2) / p - r1 * r1;
}

double levy_tail(const BernsteinSpec& spec, double y) {
  if (!(y > 0.0)) throw DomainError("levy_tail requires y > 0");
  return std::visit(
      overload{[&](const NoJumps&) { return 0.0; },
               [&](const StableJumps& s) {
                 return s.c * std::pow(y, -s.alpha) /
                        std::tgamma(1.0 - s.alpha);
               },
               [&](const GammaJumps& g) { return g.a * expint_e1(g.b * y); },
               [&](const ExpJumps& e) {
                 return e.rate * std::exp(-e.scale * y);
               },
               [&](const AtomJumps& a) {
                 double s = 0.0;
                 for (const auto& at : a.atoms)
                   if (at.location > y) s += at.mass;
                 return s;
               },
               [&](const DensityJumps& d) { return d.tail(y); },
               [&](const AnalyticJumps& a) { return a.tail(y); }},
      spec.measure());
}

namespace {

// Quadrature fallback for I(x) = int_0^x mubar, via y = x e^{-t}.
double tail_integral_quad(const std::function<double(double)>& mubar,
                          double x) {
  auto f = [&](double t) {
    const double y = x * std::exp(-t);
    return y * mubar(y);
  };
  double s = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double part = integrate(f, 5.0 * k, 5.0 * (k + 1), 1e-12, 1e-10).value;
    s += part;
    if (k > 2 && std::abs(part) < 1e-12 * (std::abs(s) + 1e-30)) break;
  }
  return s;
}

}  // namespace

double tail_integral(const BernsteinSpec& spec, double x) {
  if (!(x > 0.0)) throw DomainError("tail_integral requires x > 0");
  return std::visit(
      overload{
          [&](const NoJumps&) { return 0.0; },
          [&](const StableJumps& s) {
            return s.c * std::pow(x, 1.0 - s.alpha) /
                   ((1.0 - s.alpha) * std::tgamma(1.0 - s.alpha));
          },
          [&](const GammaJumps& g) {
            // int_0^s E1 = 1 - e^{-s} + s E1(s), s = b x.
            const double s = g.b * x;
            return (g.a / g.b) * (1.0 - std::exp(-s) + s * expint_e1(s));
          },
          [&](const ExpJumps& e) {
            return e.rate * (1.0 - std::exp(-e.scale * x)) / e.scale;
          },
          [&](const AtomJumps& a) {
            double s = 0.0;
            for (const auto& at : a.atoms)
              s += at.mass * std::min(x, at.location);
            return s;
          },
          [&](const DensityJumps& d) {
            if (d.small_integral) return (*d.small_integral)(x);
            return tail_integral_quad(d.tail, x);
          },
          [&](const AnalyticJumps& a) {
            return tail_integral_quad(a.tail, x);
          }},
      spec.measure());
}

PositiveIncreaseReport positive_increase_report(
    const BernsteinSpec& spec, const std::vector<double>& lambda_grid,
    bool enforce) {
  if (spec.d() != 0.0)
    throw DomainError("positive-increase criteria require d = 0");
  if (lambda_grid.size() < 2)
    throw DomainError("lambda grid too small");
  for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] < lambda_grid[i + 1]) || !(lambda_grid[i] > 0.0))
      throw DomainError("lambda grid must be positive, strictly increasing");
  const double decades =
      std::log10(lambda_grid.back() / lambda_grid.front());
  if (decades < 4.0 - 1e-9)
    throw DomainError("lambda grid must span at least four decades");

  PositiveIncreaseReport rep;
  const bool has_tail = spec.has_jumps();
  for (double lam : lambda_grid) {
    PositiveIncreaseRow row;
    row.lambda = lam;
    const double p = phi(spec, lam).real();
    row.criterion_iv = lam * phi_deriv(spec, lam, 1).real() / p;
    row.criterion_iii = phi(spec, 2.0 * lam).real() / p;
    rep.large_scale.push_back(row);
  }
  if (has_tail) {
    for (auto it = lambda_grid.rbegin(); it != lambda_grid.rend(); ++it) {
      SmallScaleRow row;
      row.x = 1.0 / *it;
      const double ix = tail_integral(spec, row.x);
      if (ix > 0.0) {
        row.criterion_i = row.x * levy_tail(spec, row.x) / ix;
        row.criterion_ii = tail_integral(spec, 2.0 * row.x) / ix;
        rep.small_scale.push_back(row);
      }
    }
  }

  const double top_cut = lambda_grid.back() / 100.0;
  double sup = 0.0;
  for (const auto& row : rep.large_scale)
    if (row.lambda >= top_cut) sup = std::max(sup, row.criterion_iv);
  rep.sup_ratio = sup;

  double liminf = kInf;
  const double small_cut = 100.0 / lambda_grid.back();
  for (const auto& row : rep.small_scale)
    if (row.x <= small_cut) liminf = std::min(liminf, row.criterion_ii);
  rep.liminf_estimate = std::isfinite(liminf) ? liminf : 0.0;

  rep.verdict = sup < 1.0 - kPositiveIncreaseMargin;
  if (!rep.verdict && enforce)
    throw InconclusiveDiagnostic(
        "criterion (iv) reaches " + std::to_string(sup) +
        " on the top window; positive increase cannot be certified");
  return rep;
}

namespace detail {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace detail

bool ValidationReport::pass() const {
  for (const auto& r : records)
    if (r.violations != 0) return false;
  return true;
}

ValidationReport validate_inequalities(const BernsteinSpec& spec,
                                       long sample_count,
                                       std::uint64_t seed) {
  if (sample_count < 1) throw DomainError("sample_count must be >= 1");
  const double rel_allow = spec.uses_quadrature() ? 1e-6 : 1e-9;
  const double abs_allow = spec.uses_quadrature() ? 1e-9 : 1e-12;

  struct Check {
    std::string id;
    // Returns (observed, allowed): violation when observed > allowed + tol.
    std::function<std::pair<double, double>(Complex)> eval;
  };

  std::vector<Check> checks;
  checks.push_back({"x_phi_prime_over_phi", [&](Complex z) {
                      const double x = z.real();
                      const double v =
                          x * phi_deriv(spec, x, 1).real() / phi(spec, x).real();
                      return std::pair{v, 1.0};
                    }});
  checks.push_back({"modulus_ratio", [&](Complex z) {
                      const double v = std::abs(phi(spec, z.real()).real() /
                                                phi(spec, z));
                      return std::pair{v, 1.0};
                    }});
  checks.push_back({"re_phi_positive", [&](Complex z) {
                      return std::pair{0.0, phi(spec, z).real()};
                    }});
  checks.push_back({"deriv_modulus_n1", [&](Complex z) {
                      return std::pair{std::abs(phi_deriv(spec, z, 1)),
                                       std::abs(phi_deriv(spec, z.real(), 1))};
                    }});
  checks.push_back({"deriv_modulus_n2", [&](Complex z) {
                      return std::pair{std::abs(phi_deriv(spec, z, 2)),
                                       std::abs(phi_deriv(spec, z.real(), 2))};
                    }});
  checks.push_back({"phi_prime_ratio", [&](Complex z) {
                      const double v =
                          std::abs(phi_deriv(spec, z, 1) / phi(spec, z));
                      return std::pair{v, 2.0 / z.real()};
                    }});
  checks.push_back({"phi_second_ratio", [&](Complex z) {
                      const double v =
                          std::abs(phi_deriv(spec, z, 2) / phi(spec, z));
                      return std::pair{v, 4.0 / (z.real() * z.real())};
                    }});
  checks.push_back({"imag_increment", [&](Complex z) {
                      const double px = phi(spec, z.real()).real();
                      const double v = std::abs(phi(spec, z) - px) / px;
                      return std::pair{v, std::abs(z.imag()) / z.real()};
                    }});
  checks.push_back({"arg_bound", [&](Complex z) {
                      return std::pair{std::abs(std::arg(phi(spec, z))),
                                       std::abs(std::arg(z))};
                    }});

  ValidationReport rep;
  for (const auto& c : checks)
    rep.records.push_back({c.id, sample_count, 0, kInf});

  for (long i = 0; i < sample_count; ++i) {
    std::uint64_t sub = seed ^ (0xa076'1d64'78bd'642fULL * (i + 1));
    const double re = std::pow(10.0, -3.0 + 6.0 * detail::uniform01(sub));
    double im = std::pow(10.0, -3.0 + 6.0 * detail::uniform01(sub));
    if (detail::uniform01(sub) < 0.5) im = -im;
    const Complex z{re, im};
    for (std::size_t k = 0; k < checks.size(); ++k) {
      const auto [observed, allowed] = checks[k].eval(z);
      const double tol =
          rel_allow * (std::abs(observed) + std::abs(allowed)) + abs_allow;
      const double margin = allowed - observed;
      rep.records[k].worst_margin =
          std::min(rep.records[k].worst_margin, margin);
      if (margin < -tol) ++rep.records[k].violations;
    }
  }
  return rep;
}

}  // namespace expfunc
