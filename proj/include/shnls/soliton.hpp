#pragma once

// Ground-state radial profile of  R'' + R'/rho - R + R^3 = 0,  R'(0)=0,
// R(rho) -> 0 as rho -> inf, solved by shooting on R(0), plus derivative
// towers of R and of Laplacian powers of R^2 used by the functional layer.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "shnls/errors.hpp"

namespace shnls {

struct SolitonConfig {
  double r_max = 25.0;
  double grid_step = 1e-3;
  double shoot_tol = 1e-12;    // |R| at the probe radius below this counts as decayed
  double bracket_lo = 2.0;
  double bracket_hi = 2.5;
  int max_iter = 200;
  double match_radius = 6.0;   // forward/backward matching point for the tail

  void validate() const {
    if (!(grid_step > 0.0) || !(r_max > 0.0))
      throw GridError("soliton: r_max and grid_step must be positive");
    if (!(match_radius > 0.0) || !(r_max > 2.0 * match_radius))
      throw GridError("soliton: need 0 < 2*match_radius < r_max");
    if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
      throw BracketError("soliton: invalid shooting bracket");
    if (max_iter < 8) throw NoConvergenceError("soliton: max_iter too small");
    const double n = r_max / grid_step;
    if (std::abs(n - std::round(n)) > 1e-9 * n)
      throw GridError("soliton: r_max must be an integer multiple of grid_step");
  }
};

struct SolitonProfile {
  std::vector<double> r, R, dR;
  double R0 = 0.0;
  double tail_coeff = 0.0;    // R ~ tail_coeff * exp(-r)/sqrt(r) at large r
  double residual_max = 0.0;  // max |R''_fd + R'/r - R + R^3| (5-point FD)
  double grid_step = 0.0;
  double r_max = 0.0;
  std::vector<double> taylor;  // even-series coefficients: R = sum a_k rho^{2k}

  std::size_t n() const { return r.size(); }
};

namespace detail {

// Even Taylor coefficients of the profile about the origin, from R(0):
// 4 (k+1)^2 a_{k+1} = a_k - [rho^{2k}] R^3.
inline std::vector<double> townes_taylor(double R0, std::size_t K = 16) {
  std::vector<double> a(K + 1, 0.0), sq(K + 1, 0.0), cu(K + 1, 0.0);
  a[0] = R0;
  sq[0] = R0 * R0;
  cu[0] = sq[0] * R0;
  for (std::size_t k = 0; k < K; ++k) {
    a[k + 1] = (a[k] - cu[k]) / (4.0 * double(k + 1) * double(k + 1));
    for (std::size_t j = 0; j <= k + 1; ++j) sq[k + 1] += a[j] * a[k + 1 - j];
    for (std::size_t j = 0; j <= k + 1; ++j) cu[k + 1] += sq[j] * a[k + 1 - j];
  }
  return a;
}

inline double even_series(const std::vector<double>& a, double rho) {
  const double x = rho * rho;
  double s = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) s = s * x + a[k];
  return s;
}

inline double even_series_d(const std::vector<double>& a, double rho) {
  const double x = rho * rho;
  double s = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) s = s * x + double(2 * k) * a[k];
  return s * rho;
}

// m-th derivative of sum a_k rho^{2k}
inline double even_series_dm(const std::vector<double>& a, double rho, int m) {
  double s = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    const int p = int(2 * k);
    if (p < m) continue;
    double fall = 1.0;
    for (int j = 0; j < m; ++j) fall *= double(p - j);
    s += a[k] * fall * std::pow(rho, double(p - m));
  }
  return s;
}

// lap sum c_j rho^{2j} = sum c_{j+1} * 4 (j+1)^2 rho^{2j}
inline std::vector<double> series_laplacian(const std::vector<double>& c) {
  std::vector<double> out(c.size() > 0 ? c.size() - 1 : 0, 0.0);
  for (std::size_t j = 0; j + 1 < c.size(); ++j)
    out[j] = c[j + 1] * 4.0 * double(j + 1) * double(j + 1);
  return out;
}

inline std::vector<double> series_square(const std::vector<double>& a) {
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) c[k] += a[j] * a[k - j];
  return c;
}

inline void townes_rhs(double rho, double u, double v, double& du, double& dv) {
  du = v;
  dv = u - u * u * u - v / rho;
}

inline void rk4_step(double rho, double h, double& u, double& v) {
  double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
  townes_rhs(rho, u, v, k1u, k1v);
  townes_rhs(rho + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
  townes_rhs(rho + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
  townes_rhs(rho + h, u + h * k3u, v + h * k3v, k4u, k4v);
  u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
  v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

enum class ShotClass { CrossZero, DivergeUp, Decay };

// Integrate a shot from the origin; stop at the first qualitative event.
// The horizon extends well past r_max: a shot that merely reaches r_max
// without an event can still carry a growing-mode component of order one
// *at* r_max, which back-propagates as e^{r - r_max} contamination into
// the matching region.  Pushing the event horizon out by Delta shrinks
// the accepted shot's contamination by a further factor e^{-Delta}.
inline ShotClass classify_shot(double R0, const SolitonConfig& cfg) {
  const double h = cfg.grid_step;
  // Seed node 1 from the full Taylor series — identical to the seed used
  // when the profile is assembled.  Any seed mismatch between the
  // classification flow and the assembly flow re-enters the assembled
  // trajectory as growing-mode contamination the bisection cannot remove.
  const auto a = townes_taylor(R0);
  const std::size_t is = std::size_t(std::llround(0.1 / h));
  double rho = double(is) * h;
  double u = even_series(a, rho);
  double v = even_series_d(a, rho);
  const std::size_t n = std::size_t(std::llround((cfg.r_max + 15.0) / h));
  for (std::size_t i = is; i < n; ++i) {
    rk4_step(rho, h, u, v);
    rho += h;
    if (u <= 0.0) return ShotClass::CrossZero;
    if (v > 0.0 && u > 0.5 * R0) return ShotClass::DivergeUp;
    if (u > 2.0 * R0) return ShotClass::DivergeUp;
  }
  return ShotClass::Decay;
}

// Build the grid profile for a given R(0): forward trajectory to
// match_radius, decaying tail by backward integration from r_max
// (the forward shot is growing-mode contaminated long before r_max),
// amplitude matched at the joint.
inline SolitonProfile assemble_profile(const SolitonConfig& cfg, double R0) {
  const double h = cfg.grid_step;
  const std::size_t n = std::size_t(std::llround(cfg.r_max / h));

  SolitonProfile p;
  p.R0 = R0;
  p.grid_step = h;
  p.r_max = cfg.r_max;
  p.taylor = townes_taylor(R0);
  p.r.resize(n + 1);
  p.R.resize(n + 1);
  p.dR.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p.r[i] = double(i) * h;

  const std::size_t im = std::size_t(std::llround(cfg.match_radius / h));
  // Seed the first few nodes straight from the Taylor series: the 1/rho
  // coefficient makes the first RK4 steps the least accurate of the whole
  // sweep, and a node error delta there shows up in the verification
  // stencil amplified by 30/(12 h^2).
  const std::size_t is = std::size_t(std::llround(0.1 / h));
  for (std::size_t i = 0; i <= is; ++i) {
    p.R[i] = even_series(p.taylor, p.r[i]);
    p.dR[i] = even_series_d(p.taylor, p.r[i]);
  }
  double u = p.R[is];
  double v = p.dR[is];
  for (std::size_t i = is; i < im; ++i) {
    rk4_step(p.r[i], h, u, v);
    p.R[i + 1] = u;
    p.dR[i + 1] = v;
  }

  // three-term decaying asymptote seeds the backward sweep
  auto asym = [](double r, double& A, double& Ap) {
    const double P = 1.0 - 1.0 / (8.0 * r) + 9.0 / (128.0 * r * r);
    const double Pp = 1.0 / (8.0 * r * r) - 9.0 / (64.0 * r * r * r);
    const double e = std::exp(-r) / std::sqrt(r);
    A = e * P;
    Ap = e * (Pp - P - 0.5 * P / r);
  };
  // The ODE is nonlinear, so a backward sweep cannot simply be rescaled to
  // match the forward value at the joint -- scaling by sigma leaves an
  // O((sigma^3 - sigma) R^3) defect.  Instead iterate on the seed
  // amplitude until the matching factor converges to one, so the stored
  // tail is a genuine trajectory at the correct amplitude.
  std::vector<double> bw(n + 1 - im), bwd(n + 1 - im);
  double seed_amp = 1.0;
  double sigma = 0.0;
  for (int pass = 0; pass < 12; ++pass) {
    double ub, vb;
    asym(cfg.r_max, ub, vb);
    ub *= seed_amp;
    vb *= seed_amp;
    bw.back() = ub;
    bwd.back() = vb;
    for (std::size_t i = n; i > im; --i) {
      rk4_step(p.r[i], -h, ub, vb);
      bw[i - 1 - im] = ub;
      bwd[i - 1 - im] = vb;
    }
    sigma = p.R[im] / bw[0];
    if (std::abs(sigma - 1.0) < 1e-13) break;
    seed_amp *= sigma;
  }
  for (std::size_t i = im; i <= n; ++i) {
    p.R[i] = sigma * bw[i - im];
    p.dR[i] = sigma * bwd[i - im];
  }

  // tail amplitude: log-space mean fit of R ~ c exp(-r)/sqrt(r) over the
  // last 5 units (a single-point fit at r_max misses the -1/(8r) correction)
  {
    const std::size_t i0 = std::size_t(std::llround((cfg.r_max - 5.0) / h));
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = i0; i <= n; ++i, ++cnt)
      acc += std::log(p.R[i] * std::sqrt(p.r[i])) + p.r[i];
    p.tail_coeff = std::exp(acc / double(cnt));
  }

  // ODE residual with 4th-order central differences
  {
    double worst = 0.0;
    const double c = 1.0 / (12.0 * h * h);
    for (std::size_t i = 2; i + 2 <= n; ++i) {
      const double d2 = c * (-p.R[i + 2] + 16.0 * p.R[i + 1] - 30.0 * p.R[i] +
                             16.0 * p.R[i - 1] - p.R[i - 2]);
      const double res =
          d2 + p.dR[i] / p.r[i] - p.R[i] + p.R[i] * p.R[i] * p.R[i];
      worst = std::max(worst, std::abs(res));
    }
    p.residual_max = worst;
  }
  return p;
}

}  // namespace detail

inline SolitonProfile solve_townes(const SolitonConfig& cfg = {}) {
  using namespace detail;
  cfg.validate();

  double lo = cfg.bracket_lo, hi = cfg.bracket_hi;
  const ShotClass clo = classify_shot(lo, cfg);
  const ShotClass chi = classify_shot(hi, cfg);
  if (clo == ShotClass::Decay) hi = lo;  // endpoint already on the solution
  if (chi == ShotClass::Decay) lo = hi;
  if (lo < hi) {
    if (clo == chi)
      throw BracketError("solve_townes: bracket endpoints classify identically");
    // Orientation is detected, not assumed: below threshold the shot turns
    // upward, above it crosses zero.
    // Bisection on the event classification, taken to machine width.  Any
    // smooth shot functional (e.g. R at a probe radius) has its root
    // displaced from the true threshold by the decaying solution's own
    // probe value, which contaminates the tail matching; the binary
    // classification is the unbiased criterion and stays decidable down to
    // 1-ulp brackets because the growing mode still overtakes the tail
    // inside the domain.
    const ShotClass low_side = clo;
    int it = 0;
    while (hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi) {
      if (++it > cfg.max_iter)
        throw NoConvergenceError("solve_townes: bisection stalled");
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const ShotClass cm = classify_shot(mid, cfg);
      if (cm == ShotClass::Decay) { lo = hi = mid; break; }
      (cm == low_side ? lo : hi) = mid;
    }
    lo = 0.5 * (lo + hi);
  }
  return assemble_profile(cfg, lo);
}

// Re-build a profile from a known R(0) (snapshot fast path; no shooting).
inline SolitonProfile solve_townes_from_R0(const SolitonConfig& cfg, double R0) {
  cfg.validate();
  if (!(R0 > 0.0)) throw DomainError("solve_townes_from_R0: R0 must be positive");
  return detail::assemble_profile(cfg, R0);
}

// Decaying tail model R ~ tail_coeff exp(-r)/sqrt(r)
inline double tail_model(const SolitonProfile& p, double r) {
  return p.tail_coeff * std::exp(-r) / std::sqrt(r);
}

// ---------------------------------------------------------------------------
// Derivative towers
// ---------------------------------------------------------------------------

namespace detail {
constexpr double kSeriesSwitch = 0.25;  // Taylor series below, ODE closure above

inline double binom(int n, int k) {
  double b = 1.0;
  for (int j = 1; j <= k; ++j) b = b * double(n - k + j) / double(j);
  return b;
}

// Derivatives 0..6 of R at rho from (R, R') via the ODE:
// R'' = R - R^3 - R'/rho, differentiated with Leibniz closure.
inline std::array<double, 7> far_deriv_tower(double rho, double R, double dR) {
  std::array<double, 7> D{};   // derivatives of R
  std::array<double, 7> G2{};  // derivatives of R^2
  D[0] = R;
  D[1] = dR;
  for (int k = 0; k + 2 <= 6; ++k) {
    double g = 0.0;
    for (int j = 0; j <= k; ++j) g += binom(k, j) * D[j] * D[k - j];
    G2[k] = g;
    double t3 = 0.0;  // k-th derivative of R^3 = R^2 * R
    for (int j = 0; j <= k; ++j) t3 += binom(k, j) * G2[j] * D[k - j];
    double pr = 0.0, rp = 1.0 / rho, sgnf = 1.0;  // k-th derivative of R'/rho
    for (int j = 0; j <= k; ++j) {
      pr += binom(k, j) * D[k + 1 - j] * sgnf * rp;
      sgnf *= -double(j + 1);
      rp /= rho;
    }
    D[k + 2] = D[k] - t3 - pr;
  }
  return D;
}

template <std::size_t M>
inline std::array<double, M + 1> square_tower(const std::array<double, 7>& D) {
  std::array<double, M + 1> G{};
  for (std::size_t k = 0; k <= M; ++k) {
    double g = 0.0;
    for (std::size_t j = 0; j <= k; ++j)
      g += binom(int(k), int(j)) * D[j] * D[k - j];
    G[k] = g;
  }
  return G;
}

// Given derivatives F[0..NI-1] of f, derivatives 0..NO-1 of f'' + f'/rho.
template <std::size_t NO, std::size_t NI>
inline std::array<double, NO> lap_tower(const std::array<double, NI>& F,
                                        double rho) {
  static_assert(NO + 2 <= NI);
  std::array<double, NO> L{};
  for (std::size_t j = 0; j < NO; ++j) {
    double pr = 0.0, rp = 1.0 / rho, sgnf = 1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      pr += binom(int(j), int(i)) * F[j + 1 - i] * sgnf * rp;
      sgnf *= -double(i + 1);
      rp /= rho;
    }
    L[j] = F[j + 2] + pr;
  }
  return L;
}

}  // namespace detail

// Derivatives R, R', ..., R^(6) at grid node i.
inline std::array<double, 7> deriv_tower(const SolitonProfile& p, std::size_t i) {
  if (i >= p.n()) throw std::out_of_range("deriv_tower: node index");
  const double rho = p.r[i];
  if (rho < detail::kSeriesSwitch) {
    std::array<double, 7> D{};
    for (int m = 0; m <= 6; ++m) D[m] = detail::even_series_dm(p.taylor, rho, m);
    return D;
  }
  return detail::far_deriv_tower(rho, p.R[i], p.dR[i]);
}

inline double second_derivative(const SolitonProfile& p, std::size_t i) {
  if (i >= p.n()) throw std::out_of_range("second_derivative: node index");
  if (i == 0) return 0.5 * (p.R0 - p.R0 * p.R0 * p.R0);
  return p.R[i] - p.R[i] * p.R[i] * p.R[i] - p.dR[i] / p.r[i];
}

// Laplacian powers of R^2 and the first radial derivative of lap(R^2).
struct R2Laplacians {
  double lap;      // lap(R^2)
  double lap_d;    // d/drho lap(R^2)
  double bilap;    // lap^2(R^2)
  double trilap;   // lap^3(R^2)
};

inline R2Laplacians r2_laplacians(const SolitonProfile& p, std::size_t i) {
  using namespace detail;
  if (i >= p.n()) throw std::out_of_range("r2_laplacians: node index");
  const double rho = p.r[i];
  if (rho < kSeriesSwitch) {
    const auto sq = series_square(p.taylor);
    const auto l1 = series_laplacian(sq);
    const auto l2 = series_laplacian(l1);
    const auto l3 = series_laplacian(l2);
    return {even_series(l1, rho), even_series_d(l1, rho), even_series(l2, rho),
            even_series(l3, rho)};
  }
  const auto D = far_deriv_tower(rho, p.R[i], p.dR[i]);
  const auto G2 = square_tower<6>(D);
  const auto L1 = lap_tower<5>(G2, rho);  // derivatives 0..4 of lap R^2
  const auto L2 = lap_tower<3>(L1, rho);  // derivatives 0..2 of lap^2 R^2
  const auto L3 = lap_tower<1>(L2, rho);  // lap^3 R^2
  return {L1[0], L1[1], L2[0], L3[0]};
}

inline double laplacian_of_R2(const SolitonProfile& p, std::size_t i) {
  return r2_laplacians(p, i).lap;
}

}  // namespace shnls
