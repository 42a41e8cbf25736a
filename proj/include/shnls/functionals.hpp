#pragma once

// Integral functionals of the ground-state profile: critical power, virial
// mass, and the perturbation constants C1..C3, each computed in two
// algebraically equivalent forms (integration-by-parts vs direct) as a
// consistency check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "shnls/errors.hpp"
#include "shnls/quadrature.hpp"
#include "shnls/soliton.hpp"

namespace shnls {

struct DualConstant {
  double value_direct = 0.0;
  double value_ibp = 0.0;
  double rel_discrepancy = 0.0;
  double value() const { return value_ibp; }
};

struct ModulationConstants {
  double Nc = 0.0;        // int R^2 rho drho  (critical power, radial convention)
  double M = 0.0;         // (1/4) int R^2 rho^3 drho
  double P4 = 0.0;        // int R^4 rho drho
  double grad_norm = 0.0; // int R'^2 rho drho
  DualConstant C1, C2, C3;
  double pohozaev_p4 = 0.0;    // |P4 - 2 Nc| / Nc
  double pohozaev_grad = 0.0;  // |grad_norm - Nc| / Nc
};

namespace detail {

// radial integral  int f(rho) rho drho  over the profile grid
template <class F>
inline double radial_integral(const SolitonProfile& p, F&& f) {
  std::vector<double> g(p.n());
  g[0] = 0.0;
  for (std::size_t i = 1; i < p.n(); ++i) g[i] = f(i) * p.r[i];
  return composite_simpson(g, p.grid_step);
}

}  // namespace detail

inline double compute_Nc(const SolitonProfile& p) {
  return detail::radial_integral(p, [&](std::size_t i) { return p.R[i] * p.R[i]; });
}

inline double compute_M(const SolitonProfile& p) {
  return 0.25 * detail::radial_integral(p, [&](std::size_t i) {
           return p.R[i] * p.R[i] * p.r[i] * p.r[i];
         });
}

inline double compute_P4(const SolitonProfile& p) {
  return detail::radial_integral(p, [&](std::size_t i) {
    const double s = p.R[i] * p.R[i];
    return s * s;
  });
}

inline double compute_grad_norm(const SolitonProfile& p) {
  return detail::radial_integral(p, [&](std::size_t i) { return p.dR[i] * p.dR[i]; });
}

namespace detail {

inline DualConstant make_dual(double direct, double ibp, double bound,
                              const char* name) {
  DualConstant d;
  d.value_direct = direct;
  d.value_ibp = ibp;
  d.rel_discrepancy =
      std::abs(direct - ibp) / std::max(std::abs(direct), std::abs(ibp));
  if (d.rel_discrepancy > bound)
    throw IdentityViolation(std::string(name) + ": dual-form discrepancy " +
                            std::to_string(d.rel_discrepancy) + " exceeds bound");
  return d;
}

}  // namespace detail

// G = R (R + rho R') is the virial weight appearing in all direct forms.
inline double virial_weight(const SolitonProfile& p, std::size_t i) {
  return p.R[i] * (p.R[i] + p.r[i] * p.dR[i]);
}

inline DualConstant compute_C1(const SolitonProfile& p, double bound = 1e-6) {
  const double ibp = 2.0 * detail::radial_integral(p, [&](std::size_t i) {
    const double d = 2.0 * p.R[i] * p.dR[i];  // (R^2)'
    return d * d;
  });
  const double direct = -2.0 * detail::radial_integral(p, [&](std::size_t i) {
    return r2_laplacians(p, i).lap * virial_weight(p, i);
  });
  return detail::make_dual(direct, ibp, bound, "C1");
}

inline DualConstant compute_C2(const SolitonProfile& p, double bound = 1e-5) {
  const double ibp = 3.0 * detail::radial_integral(p, [&](std::size_t i) {
    const double l = r2_laplacians(p, i).lap;
    return l * l;
  });
  const double direct = 2.0 * detail::radial_integral(p, [&](std::size_t i) {
    return r2_laplacians(p, i).bilap * virial_weight(p, i);
  });
  return detail::make_dual(direct, ibp, bound, "C2");
}

inline DualConstant compute_C3(const SolitonProfile& p, double bound = 1e-4) {
  const double ibp = 4.0 * detail::radial_integral(p, [&](std::size_t i) {
    const double d = r2_laplacians(p, i).lap_d;  // (lap R^2)'
    return d * d;
  });
  const double direct = -2.0 * detail::radial_integral(p, [&](std::size_t i) {
    return r2_laplacians(p, i).trilap * virial_weight(p, i);
  });
  return detail::make_dual(direct, ibp, bound, "C3");
}

inline ModulationConstants compute_all(const SolitonProfile& p) {
  ModulationConstants c;
  c.Nc = compute_Nc(p);
  c.M = compute_M(p);
  c.P4 = compute_P4(p);
  c.grad_norm = compute_grad_norm(p);
  c.C1 = compute_C1(p);
  c.C2 = compute_C2(p);
  c.C3 = compute_C3(p);
  c.pohozaev_p4 = std::abs(c.P4 - 2.0 * c.Nc) / c.Nc;
  c.pohozaev_grad = std::abs(c.grad_norm - c.Nc) / c.Nc;
  return c;
}

// Imaginary part of conj(psi) * psi * lap(u) for psi = (R/L) e^{iS}: the
// phase cancels identically, so the first-order phase correction f2
// vanishes term by term.  Assembled with complex arithmetic on purpose.
inline double f2_integrand_imag(const SolitonProfile& p, std::size_t i,
                                double L, double phase, double lap_u) {
  if (i >= p.n()) throw std::out_of_range("f2_integrand_imag: node index");
  const std::complex<double> psi = std::polar(p.R[i] / L, phase);
  const std::complex<double> val = std::conj(psi) * psi * lap_u;
  return val.imag();
}

}  // namespace shnls
