#pragma once

// Canonical simulation recipes for the named trajectory panels.
// Panels quoting beta = 0.01 prescribe the *initial* beta; the conserved
// beta0 is resolved through beta0_from_initial_beta at the stated L(0).

#include <string>
#include <vector>

#include "shnls/dynamics.hpp"
#include "shnls/errors.hpp"

namespace shnls {

struct FigureRecipe {
  std::string name;
  ModelSpec spec;
  ReducedState init;
  StepControl ctrl;
  Event::Kind expected = Event::Kind::Horizon;
};

inline std::vector<std::string> figure_names() {
  return {"fig1a", "fig1b", "fig1c", "fig2",  "fig3a",
          "fig3b", "fig3c", "fig4a", "fig4b", "fig4c"};
}

inline FigureRecipe figure_recipe(const std::string& name,
                                  const ModulationConstants& c) {
  FigureRecipe r;
  r.name = name;
  r.spec.constants = c;
  r.spec.alpha = 0.01;
  r.ctrl.rel_tol = 1e-10;
  r.ctrl.abs_tol = 1e-12;

  auto converter = [&](ModelOrder ord, double beta_init, double L0) {
    r.spec.order = ord;
    r.init.L = L0;
    r.spec.beta0 = beta0_from_initial_beta(r.spec, beta_init, L0);
  };

  if (name == "fig1a") {
    converter(ModelOrder::Order1, 0.01, 10.0);
    r.init.dL = 1.0;
    r.ctrl.t_max = 1e6;
    r.expected = Event::Kind::Defocus;
  } else if (name == "fig1b") {
    converter(ModelOrder::Order1, 0.01, 10.0);
    r.init.dL = -1.0;
    r.ctrl.t_max = 1e6;
    r.expected = Event::Kind::Arrest;
  } else if (name == "fig1c") {
    converter(ModelOrder::Order1, 0.01, 0.08);
    r.init.dL = 0.0;
    r.ctrl.t_max = 10.0;
    r.expected = Event::Kind::Oscillation;
  } else if (name == "fig2") {
    // beta0 well above the oscillation window C1^2/(8 M C2)
    r.spec.order = ModelOrder::Order2;
    const double Kc = c.C1.value() * c.C1.value() / (8.0 * c.M * c.C2.value());
    r.spec.beta0 = 2.0 * Kc;
    r.init.L = 0.1;
    r.init.dL = -2.0;
    r.ctrl.t_max = 10.0;
    r.expected = Event::Kind::Collapse;
  } else if (name == "fig3a" || name == "fig3b" || name == "fig3c") {
    r.spec.order = ModelOrder::Order2;
    r.spec.beta0 = 0.01;
    const double disc = c.C1.value() * c.C1.value() -
                        8.0 * c.M * c.C2.value() * r.spec.beta0;
    const double r_low = std::sqrt((c.C1.value() - std::sqrt(disc)) /
                                   (2.0 * c.C2.value()));
    r.init.L = r.spec.alpha / (0.5 * r_low);
    if (name == "fig3a") {
      r.init.dL = 1.0;
      r.ctrl.t_max = 1e6;
      r.expected = Event::Kind::Defocus;
    } else if (name == "fig3b") {
      r.init.dL = 0.0;
      r.ctrl.t_max = 1e3;
      r.expected = Event::Kind::Oscillation;
    } else {
      r.init.dL = -60.0;
      r.ctrl.t_max = 10.0;
      r.expected = Event::Kind::Collapse;
    }
  } else if (name == "fig4a") {
    converter(ModelOrder::Order3, 0.01, 10.0);
    r.init.dL = 1.0;
    r.ctrl.t_max = 1e6;
    r.expected = Event::Kind::Defocus;
  } else if (name == "fig4b") {
    converter(ModelOrder::Order3, 0.01, 10.0);
    r.init.dL = -1.0;
    r.ctrl.t_max = 1e6;
    r.expected = Event::Kind::Arrest;
  } else if (name == "fig4c") {
    converter(ModelOrder::Order3, 0.01, 0.08);
    r.init.dL = 0.0;
    r.ctrl.t_max = 10.0;
    r.expected = Event::Kind::Oscillation;
  } else {
    throw Error("figure_recipe: unknown figure '" + name + "'");
  }
  return r;
}

}  // namespace shnls
