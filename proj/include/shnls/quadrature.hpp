#pragma once

#include <cstddef>
#include <vector>

#include "shnls/errors.hpp"

namespace shnls {

// Composite Simpson on a uniform grid of n = f.size()-1 intervals.
// Odd interval counts are handled with a 3/8 rule on the last three
// intervals, keeping the overall order at 4.
inline double composite_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() > 0 ? f.size() - 1 : 0;
  if (n < 2) throw GridError("composite_simpson: need at least 2 intervals");
  std::size_t m = n;              // intervals covered by the 1/3 rule
  double tail = 0.0;
  if (n % 2 != 0) {
    if (n < 3) throw GridError("composite_simpson: odd grid too small");
    m = n - 3;
    const std::size_t j = m;
    tail = 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  double s = 0.0;
  if (m >= 2) {
    s = f[0] + f[m];
    for (std::size_t i = 1; i < m; i += 2) s += 4.0 * f[i];
    for (std::size_t i = 2; i < m; i += 2) s += 2.0 * f[i];
    s *= h / 3.0;
  }
  return s + tail;
}

}  // namespace shnls
