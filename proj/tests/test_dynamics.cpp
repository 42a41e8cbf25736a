#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "shnls/dynamics.hpp"
#include "shnls/figures.hpp"
#include "shnls/functionals.hpp"

using namespace shnls;

namespace {
const SolitonProfile& profile() {
  static SolitonProfile p = solve_townes();
  return p;
}
const ModulationConstants& constants() {
  static ModulationConstants c = compute_all(profile());
  return c;
}
std::shared_ptr<const F1Engine> engine() {
  static auto e = std::make_shared<const F1Engine>(profile());
  return e;
}
}  // namespace

TEST_CASE("figure recipes terminate with the expected event") {
  for (const auto& name : figure_names()) {
    const auto r = figure_recipe(name, constants());
    const auto out = integrate(r.init, r.spec, r.ctrl);
    INFO(name << " -> " << to_string(out.event.kind));
    CHECK(out.event.kind == r.expected);
    if (out.first_integral_drift)
      CHECK(*out.first_integral_drift < 1e-8);
  }
}

TEST_CASE("oscillation extrema match the first-integral turning points") {
  const auto r = figure_recipe("fig1c", constants());
  const auto out = integrate(r.init, r.spec, r.ctrl);
  REQUIRE(out.event.kind == Event::Kind::Oscillation);
  CHECK(out.event.period > 0.0);
  // turning points: dL = 0 in  D0 = dL^2 - b0/L^2 + k/L^4, y = L^2
  const double k = 0.25 * r.spec.alpha * r.spec.alpha *
                   constants().C1.value() / constants().M;
  const double D0 = first_integral(r.init, r.spec);
  const double disc = r.spec.beta0 * r.spec.beta0 + 4.0 * D0 * k;
  REQUIRE(disc > 0.0);
  const double y_a = (-r.spec.beta0 + std::sqrt(disc)) / (2.0 * D0);
  const double y_b = (-r.spec.beta0 - std::sqrt(disc)) / (2.0 * D0);
  const double Lm = std::sqrt(std::min(y_a, y_b));
  const double LM = std::sqrt(std::max(y_a, y_b));
  CHECK(out.event.L_min == Catch::Approx(Lm).epsilon(5e-3));
  CHECK(out.event.L_max == Catch::Approx(LM).epsilon(5e-3));
}

TEST_CASE("exact closure tracks the third-order model at small eps") {
  ModelSpec o3;
  o3.order = ModelOrder::Order3;
  o3.alpha = 0.01;
  o3.beta0 = 0.01;
  o3.constants = constants();
  ModelSpec ex = o3;
  ex.order = ModelOrder::Exact;
  ex.f1 = engine();
  ReducedState init;
  init.L = 1.0;
  init.dL = 0.0;
  StepControl ctrl;
  ctrl.t_max = 30.0;
  ctrl.store_series = true;
  const auto a = integrate(init, o3, ctrl);
  const auto b = integrate(init, ex, ctrl);
  for (double t : {5.0, 12.0, 21.0, 29.0}) {
    const double La = interpolate_L(a.series, t);
    const double Lb = interpolate_L(b.series, t);
    INFO("t=" << t);
    CHECK(std::abs(La - Lb) < 1e-3 * La);
  }
}

TEST_CASE("integration is time-reversible") {
  auto r = figure_recipe("fig3b", constants());
  r.ctrl.t_max = 5.0;
  r.ctrl.store_series = false;
  const auto fwd = integrate(r.init, r.spec, r.ctrl);
  ReducedState back = fwd.final_state;
  back.t = 0.0;
  back.dL = -back.dL;
  StepControl ctrl = r.ctrl;
  ctrl.t_max = fwd.final_state.t;
  const auto rev = integrate(back, r.spec, ctrl);
  CHECK(rev.final_state.L == Catch::Approx(r.init.L).epsilon(1e-7));
  CHECK(-rev.final_state.dL == Catch::Approx(r.init.dL).margin(1e-7));
}

TEST_CASE("effective beta vanishes at the analytic stationary radii") {
  ModelSpec o2;
  o2.order = ModelOrder::Order2;
  o2.alpha = 0.01;
  o2.beta0 = 0.01;
  o2.constants = constants();
  const double r_low = 0.023441088885330717;
  const double r_high = 0.31348613766404143;
  CHECK(std::abs(beta_of(o2.alpha / r_low, o2)) < 1e-10);
  CHECK(std::abs(beta_of(o2.alpha / r_high, o2)) < 1e-10);
  // between the roots the quartic is negative (defocusing window)
  const double mid = 0.5 * (r_low + r_high);
  CHECK(beta_of(o2.alpha / mid, o2) < 0.0);
}

TEST_CASE("third-order core is repulsive") {
  ModelSpec o3;
  o3.order = ModelOrder::Order3;
  o3.alpha = 0.01;
  o3.beta0 = 0.01;
  o3.constants = constants();
  ReducedState s;
  s.L = o3.alpha / 10.0;  // eps = 10, deep inside the core
  s.dL = 0.0;
  CHECK(rhs(s, o3).ddL > 0.0);
}

TEST_CASE("unperturbed loss term only drains positive beta") {
  ModelSpec up;
  up.order = ModelOrder::Unperturbed;
  up.loss_term = true;
  up.constants = constants();
  ReducedState s;
  s.L = 1.0;
  s.beta = 0.04;
  CHECK(rhs(s, up).dbeta < 0.0);
  s.beta = 0.0;
  CHECK(rhs(s, up).dbeta == 0.0);
}

TEST_CASE("dynamics domain guards") {
  ModelSpec o1;
  o1.order = ModelOrder::Order1;
  o1.constants = constants();
  ReducedState bad;
  bad.L = -1.0;
  StepControl ctrl;
  ctrl.t_max = 1.0;
  CHECK_THROWS_AS(integrate(bad, o1, ctrl), DomainError);
  ReducedState ok;
  ok.L = 1.0;
  StepControl past;
  past.t_max = -1.0;
  CHECK_THROWS_AS(integrate(ok, o1, past), DomainError);
  ModelSpec ex;
  ex.order = ModelOrder::Exact;
  ex.constants = constants();
  CHECK_THROWS_AS(integrate(ok, ex, ctrl), UnsupportedOrder);
  StepControl tiny = ctrl;
  tiny.max_steps = 3;
  ModelSpec osc = figure_recipe("fig1c", constants()).spec;
  ReducedState oi = figure_recipe("fig1c", constants()).init;
  CHECK_THROWS_AS(integrate(oi, osc, tiny), NoConvergenceError);
}
