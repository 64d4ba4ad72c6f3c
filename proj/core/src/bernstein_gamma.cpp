#include "expfunc/bernstein_gamma.hpp"

#include <algorithm>
#include <cmath>

#include "expfunc/loggamma.hpp"
#include "expfunc/quadrature.hpp"

namespace expfunc {

namespace {

// mu_B(1) = 1 - (1/2) ln 2 pi, the Stirling remainder at 1.
const double kBinet1 = binet(1.0).real();

// E correction of the base function phi_0(w) = w:
// E_{phi_0}(z) = mu_B(1) - mu_B(z+1).
Complex E_base(Complex z) { return kBinet1 - binet(z + 1.0); }

// GK15 nodes/weights mapped to the unit period, with the sawtooth factor
// P(t) = t(1-t) folded into the weights.
struct PeriodRule {
  double t[15];
  double wp[15];
  PeriodRule() {
    int m = 0;
    for (int i = 0; i < 8; ++i) {
      const double x = quad_detail::kXgk[i];
      const double w = 0.5 * quad_detail::kWgk[i];
      if (i == 7) {
        t[m] = 0.5;
        wp[m++] = w * 0.25;
        continue;
      }
      for (double s : {-x, x}) {
        const double tj = 0.5 + 0.5 * s;
        t[m] = tj;
        wp[m++] = w * tj * (1.0 - tj);
      }
    }
  }
};

const PeriodRule kPeriodRule;

double phi_log_slope(const BernsteinSpec& spec, double u) {
  return phi_deriv(spec, u, 1).real() / phi(spec, u).real();
}

}  // namespace

namespace detail {

PeriodEngine::PeriodEngine(const BernsteinSpec* spec, double tol)
    : spec_(spec) {
  // Closed forms: E_phi = coeff * E_base with
  //   coeff = 0 for pure killing, 1 for pure drift, alpha for pure stable.
  if (const auto* s = std::get_if<StableJumps>(&spec->measure())) {
    if (spec->q() == 0.0 && spec->d() == 0.0) {
      trivial_ = true;
      coeff_ = s->alpha;
      return;
    }
  }
  if (std::holds_alternative<NoJumps>(spec->measure())) {
    if (spec->d() == 0.0) {
      trivial_ = true;
      coeff_ = 0.0;
      return;
    }
    if (spec->q() == 0.0) {
      trivial_ = true;
      coeff_ = 1.0;
      return;
    }
  }

  tol = std::max(tol, 1e-14);
  periods_ = static_cast<int>(
      std::clamp(3.0 * std::pow(1.0 / tol, 0.2), 40.0, 600.0));

  r_nodes_.resize(static_cast<std::size_t>(periods_) * 15);
  u_sum_ = 0.0;
  for (int k = 0; k < periods_; ++k) {
    double s = 0.0;
    for (int j = 0; j < 15; ++j) {
      const double r =
          log_phi_dd(*spec_, static_cast<double>(k + 1) + kPeriodRule.t[j])
              .real();
      r_nodes_[static_cast<std::size_t>(k) * 15 + j] = r;
      s += kPeriodRule.wp[j] * r;
    }
    u_sum_ += s;
  }
  const double U = static_cast<double>(periods_ + 1);
  u_slope_ = phi_log_slope(*spec_, U);
  u_rprime_ = (log_phi_dd(*spec_, U + 0.5).real() -
               log_phi_dd(*spec_, U - 0.5).real());
  tail_err_ = std::abs(u_rprime_) / 360.0 * (10.0 / U) + 1e-16;
}

Complex PeriodEngine::E_phi(Complex z) const {
  if (trivial_) return coeff_ == 0.0 ? Complex{0.0, 0.0} : coeff_ * E_base(z);
  Complex zsum = 0.0;
  for (int k = 0; k < periods_; ++k) {
    Complex s = 0.0;
    for (int j = 0; j < 15; ++j)
      s += kPeriodRule.wp[j] *
           log_phi_dd(*spec_, static_cast<double>(k + 1) + kPeriodRule.t[j] + z);
    zsum += s;
  }
  const double U = static_cast<double>(periods_ + 1);
  const Complex pz = phi(*spec_, U + z);
  const Complex slope_z = phi_deriv(*spec_, U + z, 1) / pz;
  const Complex rprime_z = log_phi_dd(*spec_, U + z + 0.5) -
                           log_phi_dd(*spec_, U + z - 0.5);
  // Euler-Maclaurin tail: mean value of P is 1/6; first periodic
  // correction kernel has mean -1/360.
  const Complex tail =
      (u_slope_ - slope_z) / 6.0 + (rprime_z - u_rprime_) / 360.0;
  return 0.5 * (zsum - u_sum_ + tail);
}

double PeriodEngine::T_phi_sum() const {
  if (trivial_) return -2.0 * coeff_ * kBinet1;
  const double tail = -u_slope_ / 6.0 + u_rprime_ / 360.0;
  return u_sum_ + tail;
}

double AnchoredLine::eval(double b) {
  auto it = anchors_.lower_bound(b);
  if (it != anchors_.end() && it->first == b) return it->second;
  // Nearest existing anchor (0 always present).
  double a0, v0;
  if (it == anchors_.end()) {
    a0 = anchors_.rbegin()->first;
    v0 = anchors_.rbegin()->second;
  } else if (it == anchors_.begin()) {
    a0 = it->first;
    v0 = it->second;
  } else {
    auto lo = std::prev(it);
    if (b - lo->first <= it->first - b) {
      a0 = lo->first;
      v0 = lo->second;
    } else {
      a0 = it->first;
      v0 = it->second;
    }
  }
  const double len = std::abs(b - a0);
  const double seg =
      integrate(f_, a0, b, tol_per_unit_ * std::max(0.5, len), 0.0).value;
  const double v = v0 + seg;
  anchors_.emplace(b, v);
  return v;
}

}  // namespace detail

namespace {

struct FieldFuncs {
  std::function<double(double)> ln_real;     // ln f(w), w real > 0
  std::function<double(double)> arg_vert;    // arg f(c + iw) for fixed c
  std::function<double(double)> mod_vert;    // ln|f(c + iw)| for fixed c
};

FieldFuncs phi_field(const BernsteinSpec& spec, double c) {
  FieldFuncs ff;
  ff.ln_real = [&spec](double w) { return std::log(phi(spec, w).real()); };
  ff.arg_vert = [&spec, c](double w) {
    return std::arg(phi(spec, Complex{c, w}));
  };
  ff.mod_vert = [&spec, c](double w) {
    return std::log(std::abs(phi(spec, Complex{c, w})));
  };
  return ff;
}

FieldFuncs phistar_field(const BernsteinSpec& spec, double c) {
  FieldFuncs ff;
  ff.ln_real = [&spec](double w) {
    return std::log(w) - std::log(phi(spec, w).real());
  };
  ff.arg_vert = [&spec, c](double w) {
    const Complex z{c, w};
    return std::arg(z) - std::arg(phi(spec, z));
  };
  ff.mod_vert = [&spec, c](double w) {
    const Complex z{c, w};
    return std::log(std::abs(z)) - std::log(std::abs(phi(spec, z)));
  };
  return ff;
}

struct BentContour {
  double G = 0.0, A = 0.0, U = 0.0;
  double G_err = 0.0, A_err = 0.0, U_err = 0.0;
};

// G over [1, c] and A, U over [0, b] at abscissa c.
BentContour bent_contour(const FieldFuncs& ff, double c, double b,
                         double tol) {
  BentContour r;
  auto g = integrate(ff.ln_real, 1.0, c, tol, tol);
  r.G = g.value;
  r.G_err = g.abs_err;
  if (b != 0.0) {
    auto a = integrate(ff.arg_vert, 0.0, b, tol, tol);
    auto u = integrate(ff.mod_vert, 0.0, b, tol, tol);
    r.A = a.value;
    r.A_err = a.abs_err;
    r.U = u.value;
    r.U_err = u.abs_err;
  }
  return r;
}

Complex log_principal(Complex w) { return std::log(w); }

}  // namespace

Complex log_W(const BernsteinSpec& spec, Complex z, double tol) {
  if (!(z.real() > 0.0)) throw DomainError("log_W requires Re(z) > 0");
  const auto ff = phi_field(spec, z.real() + 1.0);
  const auto bc = bent_contour(ff, z.real() + 1.0, z.imag(), tol * 0.1);
  const Complex L{bc.G - bc.A, bc.U};
  detail::PeriodEngine pe(&spec, tol * 0.3);
  return 0.5 * std::log(phi(spec, 1.0).real()) -
         log_principal(phi(spec, z)) -
         0.5 * log_principal(phi(spec, z + 1.0)) + L - pe.E_phi(z);
}

Complex log_mellin(const BernsteinSpec& spec, Complex z, double tol) {
  if (!(z.real() > 0.0)) throw DomainError("log_mellin requires Re(z) > 0");
  MellinEvaluator ev(spec, z.real(), tol);
  return ev.log_mellin_at(z.imag());
}

StirlingParts stirling_parts(const BernsteinSpec& spec, Complex z,
                             double tol) {
  if (!(z.real() > 0.0))
    throw DomainError("stirling_parts requires Re(z) > 0");
  const auto ff = phistar_field(spec, z.real());
  const auto bc = bent_contour(ff, z.real(), z.imag(), tol * 0.1);
  StirlingParts p;
  p.G = bc.G;
  p.A = bc.A;
  p.U = bc.U;
  p.G_err = bc.G_err;
  p.A_err = bc.A_err;
  p.U_err = bc.U_err;
  detail::PeriodEngine pe(&spec, tol * 0.3);
  p.E = E_base(z) - pe.E_phi(z);
  p.E_err = pe.tail_err();
  return p;
}

Complex E_phis(const BernsteinSpec& spec, Complex z, double tol) {
  if (!(z.real() > 0.0)) throw DomainError("E_phis requires Re(z) > 0");
  detail::PeriodEngine pe(&spec, tol * 0.5);
  return E_base(z) - pe.E_phi(z);
}

double T_phis(const BernsteinSpec& spec, double tol) {
  detail::PeriodEngine pe(&spec, tol * 0.5);
  return kBinet1 + 0.5 * pe.T_phi_sum();
}

double DecayEnvelope::bound(double b) const {
  if (mode == Mode::ModulusBoundOnly) return base;
  return base * std::exp(-epsilon * std::max(0.0, std::abs(b) - b0 * abscissa));
}

DecayEnvelope decay_envelope(const BernsteinSpec& spec, double a) {
  if (!(a > 0.0)) throw DomainError("decay_envelope requires a > 0");
  DecayEnvelope env;
  env.abscissa = a;
  env.b0 = 5.0;
  // Factor 2 absorbs the bounded non-A factors of the Stirling form.
  env.base = 2.0 * std::exp(log_mellin(spec, a, 1e-9).real());

  // Probe A(a+ib) on a geometric grid past the onset and fit a line; the
  // secant slope of the convex A under-estimates the eventual decay.
  const auto ff = phistar_field(spec, a);
  constexpr int kProbes = 8;
  double bs[kProbes], As[kProbes];
  double acc = 0.0, prev = 0.0;
  for (int i = 0; i < kProbes; ++i) {
    bs[i] = 5.0 * a * std::pow(8.0, i / static_cast<double>(kProbes - 1));
    acc += integrate(ff.arg_vert, prev, bs[i], 1e-10, 1e-10).value;
    prev = bs[i];
    As[i] = acc;
  }
  double sb = 0, sa = 0, sbb = 0, sba = 0;
  for (int i = 0; i < kProbes; ++i) {
    sb += bs[i];
    sa += As[i];
    sbb += bs[i] * bs[i];
    sba += bs[i] * As[i];
  }
  const double det = kProbes * sbb - sb * sb;
  const double slope = (kProbes * sba - sb * sa) / det;
  const double icept = (sa - slope * sb) / kProbes;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_a = sa / kProbes;
  for (int i = 0; i < kProbes; ++i) {
    const double r = As[i] - (icept + slope * bs[i]);
    ss_res += r * r;
    ss_tot += (As[i] - mean_a) * (As[i] - mean_a);
  }
  const bool stable_fit =
      slope > 1e-6 && ss_tot > 0.0 && std::sqrt(ss_res / ss_tot) < 0.05;
  if (stable_fit) {
    env.mode = DecayEnvelope::Mode::ExponentialDecay;
    env.epsilon = slope;
  }
  return env;
}

ArgDiagnostic arg_phistar_diagnostic(const BernsteinSpec& spec,
                                     const std::vector<double>& a_grid,
                                     const std::vector<double>& t_grid) {
  ArgDiagnostic diag;
  diag.min_arg = std::numeric_limits<double>::infinity();
  diag.min_t_arg = std::numeric_limits<double>::infinity();
  for (double a : a_grid) {
    if (!(a > 0.0)) throw DomainError("a grid must be positive");
    for (double t : t_grid) {
      if (!(t > 0.0)) throw DomainError("t grid must be positive");
      const Complex z = a * Complex{1.0, t};
      ArgDiagRow row;
      row.a = a;
      row.t = t;
      row.arg = std::arg(z) - std::arg(phi(spec, z));
      row.t_arg = t * row.arg;
      if (row.arg < -1e-12) ++diag.negatives;
      diag.min_arg = std::min(diag.min_arg, row.arg);
      diag.min_t_arg = std::min(diag.min_t_arg, row.t_arg);
      diag.rows.push_back(row);
    }
  }
  return diag;
}

MellinEvaluator::MellinEvaluator(const BernsteinSpec& spec, double a,
                                 double tol)
    : spec_(spec), a_(a), tol_(tol), periods_(&spec_, tol * 0.3) {
  if (!(a > 0.0)) throw DomainError("MellinEvaluator requires a > 0");
  log_phistar_1_ = -std::log(phi(spec_, 1.0).real());
  const double c = a_ + 1.0;
  const auto ff = phistar_field(spec_, c);
  G_ = integrate(ff.ln_real, 1.0, c, 1e-13, 1e-13).value;
  const double per_unit = std::min(tol_, 1e-11);
  arg_line_ = detail::AnchoredLine(
      [this, c](double w) {
        const Complex z{c, w};
        return std::arg(z) - std::arg(phi(spec_, z));
      },
      per_unit);
  mod_line_ = detail::AnchoredLine(
      [this, c](double w) {
        const Complex z{c, w};
        return std::log(std::abs(z)) - std::log(std::abs(phi(spec_, z)));
      },
      per_unit);
}

Complex MellinEvaluator::log_mellin_at(double b) {
  const Complex z{a_, b};
  const double A = b == 0.0 ? 0.0 : arg_line_.eval(b);
  const double U = b == 0.0 ? 0.0 : mod_line_.eval(b);
  const Complex L{G_ - A, U};
  const Complex lp = std::log(z) - log_principal(phi(spec_, z));
  const Complex lp1 = std::log(z + 1.0) - log_principal(phi(spec_, z + 1.0));
  const Complex E = E_base(z) - periods_.E_phi(z);
  return 0.5 * log_phistar_1_ - lp - 0.5 * lp1 + L - E;
}

}  // namespace expfunc
