#pragma once

// Reduced modulation dynamics for the beam width L(t):
//   L_tt = -beta_eff(L) / L^3
// with beta_eff truncated at order 1..3 in (alpha/L)^2, evaluated exactly
// through the screened-Poisson f1, or held at the unperturbed NLS form.
// Adaptive Dormand-Prince 5(4) with Hermite-refined event detection.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shnls/errors.hpp"
#include "shnls/functionals.hpp"
#include "shnls/helmholtz.hpp"

namespace shnls {

enum class ModelOrder { Unperturbed, Order1, Order2, Order3, Exact };

inline std::string to_string(ModelOrder o) {
  switch (o) {
    case ModelOrder::Unperturbed: return "unperturbed";
    case ModelOrder::Order1: return "o1";
    case ModelOrder::Order2: return "o2";
    case ModelOrder::Order3: return "o3";
    case ModelOrder::Exact: return "exact";
  }
  return "?";
}

struct ModelSpec {
  ModelOrder order = ModelOrder::Order1;
  double alpha = 0.0;
  double beta0 = 0.0;  // conserved beta_0 (initial beta for Unperturbed)
  ModulationConstants constants;
  bool loss_term = false;                // Unperturbed only
  std::shared_ptr<const F1Engine> f1;    // required for Exact
};

struct ReducedState {
  double t = 0.0;
  double L = 1.0;
  double dL = 0.0;
  double beta = 0.0;
  double tau = 0.0;  // stretched time, tau' = 1/L^2
};

struct StepControl {
  double t_max = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double L_collapse = -1.0;  // <=0: auto 1e-4 * L(0)
  double L_escape = -1.0;    // <=0: auto 1e3 * L(0)
  double h_init = 0.0;       // <=0: auto
  std::size_t max_steps = 100000000;
  std::size_t max_samples = 400000;
  bool store_series = true;
};

struct Event {
  enum class Kind { Collapse, Arrest, Defocus, Oscillation, Horizon } kind =
      Kind::Horizon;
  double t_event = 0.0;
  double L_min = 0.0, L_max = 0.0;
  double period = 0.0;  // Oscillation only
};

inline std::string to_string(Event::Kind k) {
  switch (k) {
    case Event::Kind::Collapse: return "Collapse";
    case Event::Kind::Arrest: return "ArrestThenDefocus";
    case Event::Kind::Defocus: return "Defocus";
    case Event::Kind::Oscillation: return "Oscillation";
    case Event::Kind::Horizon: return "HorizonReached";
  }
  return "?";
}

struct SimulationOutcome {
  std::vector<ReducedState> series;
  ReducedState final_state;
  Event event;
  std::optional<double> first_integral_drift;  // o1..o3 only
  std::size_t steps_accepted = 0, steps_rejected = 0;
  double L_min_overall = 0.0;
};

// effective beta as a function of L for the truncated orders
inline double beta_of(double L, const ModelSpec& spec) {
  if (!(L > 0.0)) throw DomainError("beta_of: L must be positive");
  const auto& c = spec.constants;
  const double l2 = (spec.alpha / L) * (spec.alpha / L);
  switch (spec.order) {
    case ModelOrder::Unperturbed:
      throw UnsupportedOrder("beta_of: unperturbed beta is a state variable");
    case ModelOrder::Order1:
      return spec.beta0 - 0.5 * c.C1.value() / c.M * l2;
    case ModelOrder::Order2:
      return spec.beta0 - 0.5 * c.C1.value() / c.M * l2 +
             0.5 * c.C2.value() / c.M * l2 * l2;
    case ModelOrder::Order3:
      return spec.beta0 - 0.5 * c.C1.value() / c.M * l2 +
             0.5 * c.C2.value() / c.M * l2 * l2 -
             0.5 * c.C3.value() / c.M * l2 * l2 * l2;
    case ModelOrder::Exact: {
      if (!spec.f1) throw UnsupportedOrder("beta_of: exact order needs an F1Engine");
      return spec.beta0 +
             0.5 * spec.alpha * spec.alpha / spec.constants.M *
                 spec.f1->f1_exact(L, spec.alpha);
    }
  }
  throw UnsupportedOrder("beta_of: unknown order");
}

// resolve the conserved beta0 from a prescribed initial beta(0)
inline double beta0_from_initial_beta(const ModelSpec& spec, double beta_init,
                                      double L0) {
  ModelSpec probe = spec;
  probe.beta0 = 0.0;
  if (spec.order == ModelOrder::Unperturbed) return beta_init;
  return beta_init - beta_of(L0, probe);
}

// Conserved first integral (energy-like, zero-drift along exact solutions):
//   o1:  L_t^2 - b0/L^2 + (a^2 C1 / 4M)/L^4
//   o2:  4 L_t^2 - 4 b0/L^2 + (a^2 C1/M)/L^4 - (2 a^4 C2/3M)/L^6
//   o3:  o2 form + (a^6 C3 / 2M)/L^8
inline double first_integral(const ReducedState& s, const ModelSpec& spec) {
  const auto& c = spec.constants;
  const double a2 = spec.alpha * spec.alpha;
  const double L2 = s.L * s.L, L4 = L2 * L2, L6 = L4 * L2, L8 = L4 * L4;
  switch (spec.order) {
    case ModelOrder::Order1:
      return s.dL * s.dL - spec.beta0 / L2 + 0.25 * a2 * c.C1.value() / c.M / L4;
    case ModelOrder::Order2:
      return 4.0 * s.dL * s.dL - 4.0 * spec.beta0 / L2 +
             a2 * c.C1.value() / c.M / L4 -
             (2.0 / 3.0) * a2 * a2 * c.C2.value() / c.M / L6;
    case ModelOrder::Order3:
      return 4.0 * s.dL * s.dL - 4.0 * spec.beta0 / L2 +
             a2 * c.C1.value() / c.M / L4 -
             (2.0 / 3.0) * a2 * a2 * c.C2.value() / c.M / L6 +
             0.5 * a2 * a2 * a2 * c.C3.value() / c.M / L8;
    default:
      throw UnsupportedOrder("first_integral: defined for orders 1-3 only");
  }
}

// magnitude scale of the first-integral terms, for drift normalization
inline double first_integral_scale(const ReducedState& s, const ModelSpec& spec) {
  const auto& c = spec.constants;
  const double a2 = spec.alpha * spec.alpha;
  const double L2 = s.L * s.L, L4 = L2 * L2, L6 = L4 * L2, L8 = L4 * L4;
  double sc = std::abs(s.dL * s.dL) + std::abs(spec.beta0) / L2;
  if (spec.order != ModelOrder::Unperturbed && spec.order != ModelOrder::Exact) {
    sc += 0.25 * a2 * c.C1.value() / c.M / L4;
    if (spec.order != ModelOrder::Order1)
      sc += (1.0 / 6.0) * a2 * a2 * c.C2.value() / c.M / L6;
    if (spec.order == ModelOrder::Order3)
      sc += 0.125 * a2 * a2 * a2 * c.C3.value() / c.M / L8;
  }
  return std::max(1.0, sc);
}

struct Derivatives {
  double dL = 0.0, ddL = 0.0, dbeta = 0.0, dtau = 0.0;
};

inline Derivatives rhs(const ReducedState& s, const ModelSpec& spec) {
  if (!(s.L > 0.0)) throw DomainError("rhs: L must be positive");
  Derivatives d;
  d.dL = s.dL;
  d.dtau = 1.0 / (s.L * s.L);
  if (spec.order == ModelOrder::Unperturbed) {
    d.ddL = -s.beta / (s.L * s.L * s.L);
    if (spec.loss_term && s.beta > 1e-12)
      d.dbeta = -std::exp(-M_PI / std::sqrt(s.beta)) / (s.L * s.L);
  } else {
    d.ddL = -beta_of(s.L, spec) / (s.L * s.L * s.L);
  }
  return d;
}

namespace detail {

// Smooth surrogate for f1's reduced kernel along an exact-mode trajectory:
// Catmull-Rom in log(eps) over a dense table, direct solves outside it.
class F1Table {
 public:
  F1Table(const F1Engine& eng, double eps_lo, double eps_hi) : eng_(eng) {
    eps_lo = std::max(eps_lo, 1e-8);
    eps_hi = std::max(std::min(eps_hi, 1e3), 2.0 * eps_lo);
    x0_ = std::log(eps_lo);
    const double x1 = std::log(eps_hi);
    n_ = std::size_t((x1 - x0_) / 0.03) + 4;
    dx_ = (x1 - x0_) / double(n_ - 3);  // one guard node on each side
    t_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i)
      t_[i] = eng.reduced(std::exp(x0_ + (double(i) - 1.0) * dx_));
  }

  double reduced(double eps) const {
    const double x = std::log(eps);
    const double u = (x - x0_) / dx_ + 1.0;
    const double fi = std::floor(u);
    const std::size_t i = std::size_t(std::max(0.0, fi));
    if (i < 1 || i + 2 >= n_) return eng_.reduced(eps);
    const double s = u - fi;
    const double m0 = 0.5 * (t_[i + 1] - t_[i - 1]);
    const double m1 = 0.5 * (t_[i + 2] - t_[i]);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * t_[i] + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * t_[i + 1] + (s3 - s2) * m1;
  }

 private:
  const F1Engine& eng_;
  double x0_ = 0.0, dx_ = 1.0;
  std::size_t n_ = 0;
  std::vector<double> t_;
};

struct HermiteSeg {
  double t0, h, L0, d0, L1, d1;
  double L(double th) const {
    const double t2 = th * th, t3 = t2 * th;
    return (2 * t3 - 3 * t2 + 1) * L0 + (t3 - 2 * t2 + th) * h * d0 +
           (-2 * t3 + 3 * t2) * L1 + (t3 - t2) * h * d1;
  }
  double dL(double th) const {
    const double t2 = th * th;
    return ((6 * t2 - 6 * th) * L0 + (3 * t2 - 4 * th + 1) * h * d0 +
            (-6 * t2 + 6 * th) * L1 + (3 * t2 - 2 * th) * h * d1) / h;
  }
};

}  // namespace detail

inline SimulationOutcome integrate(const ReducedState& init,
                                   const ModelSpec& spec,
                                   const StepControl& ctrl) {
  if (!(init.L > 0.0)) throw DomainError("integrate: L(0) must be positive");
  if (!(ctrl.t_max > init.t)) throw DomainError("integrate: t_max <= t(0)");
  if (spec.order == ModelOrder::Exact && !spec.f1)
    throw UnsupportedOrder("integrate: exact order needs an F1Engine");

  const double L_collapse =
      ctrl.L_collapse > 0.0 ? ctrl.L_collapse : 1e-4 * init.L;
  const double L_escape = ctrl.L_escape > 0.0 ? ctrl.L_escape : 1e3 * init.L;

  // Exact mode evaluates f1 through a precomputed eps-table for speed.
  std::unique_ptr<detail::F1Table> table;
  if (spec.order == ModelOrder::Exact)
    table = std::make_unique<detail::F1Table>(
        *spec.f1, spec.alpha / L_escape, spec.alpha / (0.5 * L_collapse));

  const bool evolves_beta = (spec.order == ModelOrder::Unperturbed);
  const std::size_t dim = evolves_beta ? 4 : 3;  // (L, dL, tau[, beta])
  using Vec = std::array<double, 4>;

  auto deriv = [&](const Vec& y, Vec& dy) -> bool {
    if (!(y[0] > 0.0)) return false;  // stage outside the domain: reject step
    const double L = y[0];
    dy[0] = y[1];
    dy[2] = 1.0 / (L * L);
    if (evolves_beta) {
      dy[1] = -y[3] / (L * L * L);
      dy[3] = (spec.loss_term && y[3] > 1e-12)
                  ? -std::exp(-M_PI / std::sqrt(y[3])) / (L * L)
                  : 0.0;
    } else {
      double b;
      if (spec.order == ModelOrder::Exact) {
        b = spec.beta0 + 0.5 * spec.alpha * spec.alpha / spec.constants.M *
                             (2.0 * table->reduced(spec.alpha / L) / (L * L));
      } else {
        b = beta_of(L, spec);
      }
      dy[1] = -b / (L * L * L);
      dy[3] = 0.0;
    }
    return true;
  };

  auto beta_at = [&](const Vec& y) {
    if (evolves_beta) return y[3];
    if (spec.order == ModelOrder::Exact)
      return spec.beta0 + 0.5 * spec.alpha * spec.alpha / spec.constants.M *
                              (2.0 * table->reduced(spec.alpha / y[0]) /
                               (y[0] * y[0]));
    return beta_of(y[0], spec);
  };

  Vec y{init.L, init.dL, init.tau, evolves_beta ? init.beta : 0.0};
  double t = init.t;

  SimulationOutcome out;
  auto make_state = [&](double tt, const Vec& yy) {
    ReducedState s;
    s.t = tt;
    s.L = yy[0];
    s.dL = yy[1];
    s.tau = yy[2];
    s.beta = beta_at(yy);
    return s;
  };

  std::size_t keep_mod = 1, accept_count = 0;
  auto push_sample = [&](const ReducedState& s) {
    if (!ctrl.store_series) return;
    if (accept_count % keep_mod != 0) return;
    out.series.push_back(s);
    if (out.series.size() > ctrl.max_samples) {
      std::vector<ReducedState> thin;
      thin.reserve(out.series.size() / 2 + 1);
      for (std::size_t i = 0; i < out.series.size(); i += 2)
        thin.push_back(out.series[i]);
      out.series.swap(thin);
      keep_mod *= 2;
    }
  };
  push_sample(make_state(t, y));

  // first-integral monitoring (orders 1-3)
  const bool has_fi = spec.order == ModelOrder::Order1 ||
                      spec.order == ModelOrder::Order2 ||
                      spec.order == ModelOrder::Order3;
  double fi0 = 0.0, fi_scale = 1.0, fi_drift = 0.0;
  const ReducedState s0 = make_state(t, y);
  if (has_fi) {
    fi0 = first_integral(s0, spec);
    fi_scale = first_integral_scale(s0, spec);
  }

  out.L_min_overall = init.L;

  // extremum bookkeeping for Arrest / Oscillation
  std::vector<std::pair<double, double>> mins, maxs;  // (t, L)

  // Dormand-Prince 5(4) coefficients (autonomous system: nodes unused)
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  // initial step from the characteristic oscillation time L^2/sqrt(|beta|)
  double h;
  if (ctrl.h_init > 0.0) {
    h = ctrl.h_init;
  } else {
    double b0;
    try {
      b0 = std::abs(beta_at(y));
    } catch (const Error&) {
      b0 = 1.0;
    }
    const double tau_c = init.L * init.L / std::sqrt(std::max(b0, 1e-12));
    h = std::min(1e-3 * tau_c, 0.1 * (ctrl.t_max - init.t));
    h = std::max(h, 1e-12);
  }
  const double h_min = 1e-14 * std::max(1.0, std::abs(ctrl.t_max));

  Vec k1;
  if (!deriv(y, k1)) throw DomainError("integrate: invalid initial state");
  double err_prev = 1.0;
  bool done = false;

  for (std::size_t step = 0; !done; ++step) {
    if (step >= ctrl.max_steps)
      throw NoConvergenceError("integrate: step budget exhausted");
    if (h < h_min) {
      // Finite-time blow-up: the remaining time to reach L_collapse shrinks
      // like L^3, so a deep threshold can sit below machine step resolution.
      // A step-size collapse while the solution is contracting well inside
      // the initial scale is the numerical signature of that singularity.
      if (y[1] < 0.0 && y[0] < 0.01 * init.L) {
        out.event.kind = Event::Kind::Collapse;
        out.event.t_event = t;
        out.event.L_min = y[0];
        out.L_min_overall = std::min(out.L_min_overall, y[0]);
        out.final_state = make_state(t, y);
        break;
      }
      throw StepUnderflow("integrate: step size underflow");
    }
    bool clipped = false;
    if (t + h >= ctrl.t_max) {
      h = ctrl.t_max - t;
      clipped = true;
    }

    Vec k2, k3, k4, k5, k6, k7, yt, y5;
    bool ok = true;
    {
      for (std::size_t i = 0; i < dim; ++i) yt[i] = y[i] + h * a21 * k1[i];
      ok = deriv(yt, k2);
      if (ok) {
        for (std::size_t i = 0; i < dim; ++i)
          yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        ok = deriv(yt, k3);
      }
      if (ok) {
        for (std::size_t i = 0; i < dim; ++i)
          yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        ok = deriv(yt, k4);
      }
      if (ok) {
        for (std::size_t i = 0; i < dim; ++i)
          yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                              a54 * k4[i]);
        ok = deriv(yt, k5);
      }
      if (ok) {
        for (std::size_t i = 0; i < dim; ++i)
          yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                              a64 * k4[i] + a65 * k5[i]);
        ok = deriv(yt, k6);
      }
      if (ok) {
        for (std::size_t i = 0; i < dim; ++i)
          y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                              b5 * k5[i] + b6 * k6[i]);
        ok = deriv(y5, k7);
      }
    }

    double en = std::numeric_limits<double>::infinity();
    if (ok) {
      double acc = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                               e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc =
            ctrl.abs_tol +
            ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        acc += (ei / sc) * (ei / sc);
      }
      en = std::sqrt(acc / double(dim));
    }

    if (!(en <= 1.0)) {  // reject
      ++out.steps_rejected;
      h *= ok ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.5;
      continue;
    }

    // accepted
    ++out.steps_accepted;
    ++accept_count;
    const detail::HermiteSeg seg{t, h, y[0], y[1], y5[0], y5[1]};
    const double t_new = clipped ? ctrl.t_max : t + h;

    auto refine_L_cross = [&](double target) {
      double a = 0.0, b = 1.0;
      for (int it = 0; it < 40; ++it) {
        const double m = 0.5 * (a + b);
        ((seg.L(m) - target) * (seg.L(a) - target) <= 0.0 ? b : a) = m;
      }
      return 0.5 * (a + b);
    };

    bool terminal = false;
    Event ev;

    if (y5[0] <= L_collapse) {
      const double th = refine_L_cross(L_collapse);
      ev.kind = Event::Kind::Collapse;
      ev.t_event = t + th * h;
      ev.L_min = L_collapse;
      terminal = true;
    }

    // extremum of L inside the step (sign change of dL)
    if (!terminal && y[1] * y5[1] < 0.0) {
      double a = 0.0, b = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        (seg.dL(m) * seg.dL(a) <= 0.0 ? b : a) = m;
      }
      const double th = 0.5 * (a + b);
      const double te = t + th * h, Le = seg.L(th);
      const bool is_min = y[1] < 0.0;
      (is_min ? mins : maxs).emplace_back(te, Le);
      // oscillation: >= 3 direction changes with stationary repeat extrema
      const auto stationary = [](const std::vector<std::pair<double, double>>& v) {
        if (v.size() < 2) return false;
        const double A = v[v.size() - 2].second, B = v.back().second;
        return std::abs(A - B) <= 1e-3 * std::max(std::abs(A), std::abs(B));
      };
      const std::size_t total = mins.size() + maxs.size();
      if (total >= 3) {
        const bool smin = stationary(mins), smax = stationary(maxs);
        const bool have_pair = mins.size() >= 2 || maxs.size() >= 2;
        const bool all_pairs_ok =
            (mins.size() < 2 || smin) && (maxs.size() < 2 || smax);
        if (have_pair && all_pairs_ok) {
          ev.kind = Event::Kind::Oscillation;
          ev.t_event = te;
          ev.L_min = mins.empty() ? Le : mins.back().second;
          ev.L_max = maxs.empty() ? Le : maxs.back().second;
          double per = 0.0;
          int np = 0;
          if (mins.size() >= 2) {
            per += mins.back().first - mins[mins.size() - 2].first;
            ++np;
          }
          if (maxs.size() >= 2) {
            per += maxs.back().first - maxs[maxs.size() - 2].first;
            ++np;
          }
          ev.period = per / double(np);
          terminal = true;
        }
      }
    }

    if (!terminal && y5[0] >= L_escape && y5[1] > 0.0) {
      const double th = refine_L_cross(L_escape);
      if (mins.empty()) {
        ev.kind = Event::Kind::Defocus;
        ev.t_event = t + th * h;
      } else {
        ev.kind = Event::Kind::Arrest;
        ev.t_event = mins.back().first;
        ev.L_min = mins.back().second;
      }
      terminal = true;
    }

    t = t_new;
    y = y5;
    k1 = k7;  // FSAL
    out.L_min_overall = std::min(out.L_min_overall, y[0]);

    const ReducedState snow = make_state(t, y);
    push_sample(snow);
    if (has_fi)
      fi_drift = std::max(
          fi_drift,
          std::abs(first_integral(snow, spec) - fi0) /
              std::max(fi_scale, first_integral_scale(snow, spec)));

    if (terminal) {
      out.event = ev;
      out.final_state = snow;
      done = true;
      break;
    }
    if (clipped || t >= ctrl.t_max) {
      out.event.kind = Event::Kind::Horizon;
      out.event.t_event = t;
      out.final_state = snow;
      done = true;
      break;
    }

    // PI controller
    const double fac =
        0.9 * std::pow(std::max(en, 1e-10), -0.7 / 5.0) *
        std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
    err_prev = std::max(en, 1e-10);
    h *= std::min(5.0, std::max(0.2, fac));
  }

  if (has_fi) out.first_integral_drift = fi_drift;
  if (ctrl.store_series) {
    if (!out.series.empty() && out.series.back().t == out.final_state.t)
      out.series.back() = out.final_state;
    else
      out.series.push_back(out.final_state);
  }
  return out;
}

// Hermite interpolation of L(t) on a stored trajectory.
inline double interpolate_L(const std::vector<ReducedState>& series, double t) {
  if (series.size() < 2) throw DegenerateData("interpolate_L: short series");
  if (t <= series.front().t) return series.front().L;
  if (t >= series.back().t) return series.back().L;
  std::size_t lo = 0, hi = series.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (series[mid].t <= t ? lo : hi) = mid;
  }
  const auto& A = series[lo];
  const auto& B = series[lo + 1];
  const detail::HermiteSeg seg{A.t, B.t - A.t, A.L, A.dL, B.L, B.dL};
  return seg.L((t - A.t) / (B.t - A.t));
}

}  // namespace shnls
