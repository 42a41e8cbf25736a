#pragma once

// Phase-plane analysis of the reduced dynamics: turning points of the first
// integral, regime prediction, and the collapse-threshold bisection in the
// initial focusing speed.

#include <cmath>
#include <limits>
#include <vector>

#include "shnls/dynamics.hpp"
#include "shnls/errors.hpp"

namespace shnls {

enum class PredictedRegime {
  MonotoneDefocus,
  ArrestThenDefocus,
  Oscillation,
  Collapse,
  Indeterminate
};

inline std::string to_string(PredictedRegime r) {
  switch (r) {
    case PredictedRegime::MonotoneDefocus: return "Defocus";
    case PredictedRegime::ArrestThenDefocus: return "ArrestThenDefocus";
    case PredictedRegime::Oscillation: return "Oscillation";
    case PredictedRegime::Collapse: return "Collapse";
    case PredictedRegime::Indeterminate: return "Indeterminate";
  }
  return "?";
}

struct RegimeReport {
  PredictedRegime predicted = PredictedRegime::Indeterminate;
  double H0 = 0.0;  // M * (o1 first integral); sign decides boundedness
  double y_m = std::numeric_limits<double>::quiet_NaN();  // inner turning, y=L^2
  double y_M = std::numeric_limits<double>::quiet_NaN();  // outer turning
  double K = std::numeric_limits<double>::quiet_NaN();    // o2 threshold gap
  double r_low = std::numeric_limits<double>::quiet_NaN();
  double r_high = std::numeric_limits<double>::quiet_NaN();
  bool beta_small_ok = false, eps_small_ok = false;
};

struct ValidityFlags {
  bool beta_small = false;  // beta0 << 1
  bool eps_small = false;   // alpha / L(0) << 1
};

inline ValidityFlags check_validity(const ModelSpec& spec, double L0) {
  ValidityFlags v;
  v.beta_small = std::abs(spec.beta0) < 0.1;
  v.eps_small = spec.alpha / L0 < 0.1;
  return v;
}

// ---- order 1: closed-form turning points --------------------------------

inline RegimeReport classify_o1(double L0, double dL0, const ModelSpec& spec) {
  if (!(L0 > 0.0)) throw DomainError("classify_o1: L(0) must be positive");
  const auto& c = spec.constants;
  const double a2 = spec.alpha * spec.alpha;
  const double D0 = dL0 * dL0 - spec.beta0 / (L0 * L0) +
                    0.25 * a2 * c.C1.value() / c.M / (L0 * L0 * L0 * L0);
  RegimeReport rep;
  rep.H0 = c.M * D0;
  const auto v = check_validity(spec, L0);
  rep.beta_small_ok = v.beta_small;
  rep.eps_small_ok = v.eps_small;

  if (spec.alpha == 0.0) {
    // unperturbed critical NLS: no repulsive core, no inner turning point
    rep.predicted = (dL0 < 0.0 || D0 < 0.0 || dL0 == 0.0)
                        ? PredictedRegime::Collapse
                        : PredictedRegime::MonotoneDefocus;
    return rep;
  }

  const double scale =
      c.M * (dL0 * dL0 + std::abs(spec.beta0) / (L0 * L0) +
             0.25 * a2 * c.C1.value() / c.M / (L0 * L0 * L0 * L0) + 1e-300);
  if (std::abs(rep.H0) < 1e-14 * scale)
    throw DegenerateData("classify_o1: H0 at the regime boundary");

  const double b0 = spec.beta0;
  const double disc = b0 * b0 + a2 * c.C1.value() * rep.H0 / (c.M * c.M);
  const double rt = std::sqrt(std::max(disc, 0.0));
  rep.y_m = 0.5 * a2 * c.C1.value() / c.M / (rt + b0);
  if (rep.H0 < 0.0) {
    rep.y_M = (rt + b0) / (-2.0 * rep.H0 / c.M);
    rep.predicted = PredictedRegime::Oscillation;
  } else {
    rep.predicted = dL0 < 0.0 ? PredictedRegime::ArrestThenDefocus
                              : PredictedRegime::MonotoneDefocus;
  }
  return rep;
}

// ---- order 2: cubic barrier analysis ------------------------------------

namespace detail {

// roots of p(y) = E0 y^3 + 4 b0 y^2 - a y + b on (0, inf), ascending
inline std::vector<double> positive_cubic_roots(double E0, double b0, double a,
                                                double b, double y_ref) {
  auto p = [&](double y) { return ((E0 * y + 4.0 * b0) * y - a) * y + b; };
  std::vector<double> roots;
  const double ylo = 1e-14 * y_ref, yhi = 1e14 * y_ref;
  double yprev = ylo, pprev = p(ylo);
  const int n = 4000;
  const double f = std::pow(yhi / ylo, 1.0 / n);
  double yc = ylo;
  for (int i = 1; i <= n; ++i) {
    yc *= f;
    const double pc = p(yc);
    if (pprev == 0.0) roots.push_back(yprev);
    else if (pprev * pc < 0.0) {
      double lo = yprev, hi = yc;
      for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double m = 0.5 * (lo + hi);
        (p(m) * p(lo) <= 0.0 ? hi : lo) = m;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    yprev = yc;
    pprev = pc;
  }
  return roots;
}

}  // namespace detail

inline RegimeReport classify_o2(double L0, double dL0, const ModelSpec& spec) {
  if (!(L0 > 0.0)) throw DomainError("classify_o2: L(0) must be positive");
  const auto& c = spec.constants;
  const double C1 = c.C1.value(), C2 = c.C2.value(), M = c.M;
  const double a2 = spec.alpha * spec.alpha;
  const double b0 = spec.beta0;

  RegimeReport rep;
  rep.K = C1 * C1 / (8.0 * M * C2) - b0;
  // roots of beta_eff(alpha/L) in the ratio r = alpha/L; real iff K >= 0
  const double disc = C1 * C1 - 8.0 * M * C2 * b0;  // = 8 M C2 K
  if (disc >= 0.0) {
    const double rd = std::sqrt(disc);
    rep.r_low = std::sqrt((C1 - rd) / (2.0 * C2));
    rep.r_high = std::sqrt((C1 + rd) / (2.0 * C2));
  }
  const auto v = check_validity(spec, L0);
  rep.beta_small_ok = v.beta_small;
  rep.eps_small_ok = v.eps_small;

  // (y_t)^2 = p(y) / y^2 with p the cubic below; E0 is the o2 first integral
  ReducedState s;
  s.L = L0;
  s.dL = dL0;
  ModelSpec o2 = spec;
  o2.order = ModelOrder::Order2;
  const double E0 = first_integral(s, o2);
  const double a = a2 * C1 / M;
  const double b = (2.0 / 3.0) * a2 * a2 * C2 / M;
  rep.H0 = M * E0 / 4.0;  // same normalization as o1 for reporting

  const double y0 = L0 * L0;
  const auto roots = detail::positive_cubic_roots(E0, b0, a, b, y0);
  double inner = -1.0, outer = -1.0;
  for (double r : roots) {
    if (r < y0 * (1.0 - 1e-12)) inner = r;               // largest below y0
    if (r > y0 * (1.0 + 1e-12) && outer < 0.0) outer = r;  // smallest above
  }
  const bool escapes = E0 > 0.0 || (E0 == 0.0 && b0 > 0.0);

  bool inward;
  if (dL0 < 0.0) inward = true;
  else if (dL0 > 0.0) inward = false;
  else {
    // starting at rest y0 is a turning point (p(y0)=0 up to rounding); the
    // motion heads into the side where p is positive
    auto p = [&](double y) { return ((E0 * y + 4.0 * b0) * y - a) * y + b; };
    inward = !(p(y0 * (1.0 + 1e-9)) > 0.0);
  }

  if (inward) {
    if (inner < 0.0) {
      rep.predicted = PredictedRegime::Collapse;
    } else if (outer < 0.0 && escapes) {
      rep.y_m = inner;
      rep.predicted = PredictedRegime::ArrestThenDefocus;
    } else {
      rep.y_m = inner;
      rep.y_M = outer > 0.0 ? outer : y0;
      rep.predicted = PredictedRegime::Oscillation;
    }
  } else {
    if (outer < 0.0 && escapes) {
      rep.predicted = PredictedRegime::MonotoneDefocus;
    } else if (inner < 0.0) {
      rep.predicted = PredictedRegime::Collapse;  // reflected off the outer wall
    } else {
      rep.y_m = inner;
      rep.y_M = outer > 0.0 ? outer : y0;
      rep.predicted = PredictedRegime::Oscillation;
    }
  }
  return rep;
}

// ---- collapse threshold in the initial focusing speed -------------------

struct ThresholdResult {
  double dL_threshold = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int iterations = 0;
  double t_max_used = 0.0;
};

inline ThresholdResult threshold_bisect(const ReducedState& tmpl,
                                        const ModelSpec& spec, double dL_lo,
                                        double dL_hi, double width = 1e-4,
                                        double t_max = -1.0) {
  if (!(dL_hi > dL_lo)) throw BracketError("threshold_bisect: empty bracket");
  StepControl ctrl;
  ctrl.t_max = t_max > 0.0 ? t_max : 1e3 * tmpl.L * tmpl.L;
  ctrl.store_series = false;

  auto collapses = [&](double dL0) {
    ReducedState s = tmpl;
    s.t = 0.0;
    s.dL = dL0;
    const auto out = integrate(s, spec, ctrl);
    return out.event.kind == Event::Kind::Collapse;
  };

  bool clo = collapses(dL_lo), chi = collapses(dL_hi);
  if (clo == chi)
    throw BracketError("threshold_bisect: both endpoints classify alike");
  ThresholdResult res;
  res.bracket_lo = dL_lo;
  res.bracket_hi = dL_hi;
  res.t_max_used = ctrl.t_max;
  double lo = dL_lo, hi = dL_hi;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (collapses(mid) == clo ? lo : hi) = mid;
    if (++res.iterations > 200)
      throw NoConvergenceError("threshold_bisect: too many iterations");
  }
  res.dL_threshold = 0.5 * (lo + hi);
  return res;
}

}  // namespace shnls
