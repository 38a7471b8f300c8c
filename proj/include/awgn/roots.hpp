#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace awgn {

// Root of a continuous monotone function on [lo, hi] by bisection.
// Requires f(lo) and f(hi) of opposite (or zero) sign.
template <typename Fn>
double bisect(Fn&& f, double lo, double hi, double xtol = 1e-15, int max_iter = 400) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::runtime_error("bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= xtol * (1.0 + std::fabs(mid))) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Maximum of a unimodal function on [lo, hi] by golden-section search.
// Returns (argmax, max).  Adapted from the classic NR bracketing scheme.
template <typename Fn>
std::pair<double, double> golden_max(Fn&& f, double lo, double hi, double xtol = 1e-12) {
  static constexpr double R = 0.6180339887498949, C = 1.0 - R;
  double x1 = lo + C * (hi - lo);
  double x2 = lo + R * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > xtol * (1.0 + std::fabs(x1) + std::fabs(x2))) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = lo + C * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + R * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

} // namespace awgn
