#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace awgn {

// Adaptive Simpson quadrature with absolute error target.
namespace detail {
template <typename Fn>
double simpson_step(Fn& f, double a, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}
} // namespace detail

template <typename Fn>
double integrate(Fn&& f, double a, double b, double eps = 1e-9, int max_depth = 48) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

// Gauss-Hermite nodes/weights for integrals of the form
//   int exp(-t^2) g(t) dt  ~=  sum_i w_i g(t_i).
// Nodes found by Newton iteration on the Hermite recurrence.
struct gauss_hermite {
  std::vector<double> node, weight;

  explicit gauss_hermite(std::size_t m) : node(m), weight(m) {
    if (m == 0) throw std::invalid_argument("gauss_hermite: need m > 0");
    const double pim4 = 0.7511255444649425; // pi^{-1/4}
    const std::size_t half = (m + 1) / 2;
    double z = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      if (i == 0)
        z = std::sqrt(2.0 * m + 1.0) - 1.85575 * std::pow(2.0 * m + 1.0, -1.0 / 6.0);
      else if (i == 1)
        z -= 1.14 * std::pow((double)m, 0.426) / z;
      else if (i == 2)
        z = 1.86 * z - 0.86 * node[0];
      else if (i == 3)
        z = 1.91 * z - 0.91 * node[1];
      else
        z = 2.0 * z - node[i - 2];
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p1 = pim4, p2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
               std::sqrt((double)j / (j + 1.0)) * p3;
        }
        pp = std::sqrt(2.0 * m) * p2;
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::fabs(z - z1) <= 1e-15 * (1.0 + std::fabs(z))) break;
      }
      node[i] = z;
      node[m - 1 - i] = -z;
      weight[i] = 2.0 / (pp * pp);
      weight[m - 1 - i] = weight[i];
    }
  }

  // E[g(X)] for X ~ N(mu, var)
  template <typename Fn>
  double gaussian_mean(Fn&& g, double mu, double var) const {
    const double c = std::sqrt(2.0 * var);
    double acc = 0.0;
    for (std::size_t i = 0; i < node.size(); ++i)
      acc += weight[i] * g(mu + c * node[i]);
    return acc / std::sqrt(M_PI);
  }
};

} // namespace awgn
