#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "gauss_family.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace awgn {

enum class exponent_kind { error, correct_decoding };

// One point on an exponent curve: rate and exponent in base-b units.
struct exponent_point {
  double rate;
  double rho_star;
  double exponent;
  exponent_kind kind;
};

inline double capacity(const channel_spec& ch) {
  return ch.from_nats(0.5 * std::log1p(ch.snr()));
}

// Shannon's closed-form sphere-packing exponent, in base-b units.
inline double shannon_sphere_packing(const channel_spec& ch, double rate) {
  if (!(rate > 0.0))
    throw std::domain_error("shannon_sphere_packing: rate must be > 0");
  const double ln2 = std::log(2.0);
  const double rate_bits = ch.to_nats(rate) / ln2;
  const double cap_bits = ch.to_nats(capacity(ch)) / ln2;
  const double st = std::exp2(-std::min(rate_bits, cap_bits));
  const double ct = std::sqrt(std::max(0.0, 1.0 - st * st));
  const double A = std::sqrt(ch.snr());
  const double G = 0.5 * (A * ct + std::sqrt(A * A * ct * ct + 4.0));
  const double nats = 0.5 * A * A - 0.5 * A * G * ct - std::log(G * st);
  return ch.from_nats(std::max(0.0, nats));
}

// The bracketed objective D + rho (I - R); equals c0 + c1 s^2 - rho R.
inline double exponent_objective(const channel_spec& ch, double rho, double rate) {
  const rho_point p = make_rho_point(ch, rho);
  return kl_family_to_channel(ch, p) +
         rho * (mutual_info_rho(ch, p) - rate);
}

// The unique rho in (-1, inf) with I(rho) = rate (I is strictly decreasing).
inline double rho_of_rate(const channel_spec& ch, double rate) {
  if (!(rate > 0.0))
    throw std::domain_error("rho_of_rate: rate must be > 0");
  auto f = [&](double rho) {
    return mutual_info_rho(ch, make_rho_point(ch, rho)) - rate;
  };
  double lo = rho_min;
  if (!(f(lo) > 0.0))
    throw std::runtime_error("rho_of_rate: rate above the representable I-range");
  double hi = 1.0;
  while (f(hi) > 0.0) {
    hi *= 4.0;
    if (hi > 1e18)
      throw std::runtime_error("rho_of_rate: failed to bracket (rate too small)");
  }
  // bisect to the rounding floor of rho; I is locally Lipschitz, so the
  // rate residual lands at ~ulp level, far below the 1e-12 contract
  return bisect(f, lo, hi, 4e-16);
}

// E_e(R) = sup_{rho >= 0} { D + rho (I - R) }.
inline exponent_point error_exponent(const channel_spec& ch, double rate) {
  if (!(rate > 0.0))
    throw std::domain_error("error_exponent: rate must be > 0");
  if (rate >= capacity(ch))
    return {rate, 0.0, 0.0, exponent_kind::error};
  const double rho = rho_of_rate(ch, rate); // in (0, inf) since rate < C
  const rho_point p = make_rho_point(ch, rho);
  return {rate, rho, kl_family_to_channel(ch, p), exponent_kind::error};
}

// E_c(R) = sup_{-1 < rho <= 0} { D + rho (I - R) }; zero for R <= C.
inline exponent_point correct_decoding_exponent(const channel_spec& ch, double rate) {
  if (!(rate > 0.0))
    throw std::domain_error("correct_decoding_exponent: rate must be > 0");
  if (rate <= capacity(ch))
    return {rate, 0.0, 0.0, exponent_kind::correct_decoding};
  const double rho = rho_of_rate(ch, rate); // in (-1, 0) since rate > C
  const rho_point p = make_rho_point(ch, rho);
  return {rate, rho, kl_family_to_channel(ch, p), exponent_kind::correct_decoding};
}

// Parametric curve R = I(rho), E = D(rho); rates strictly decreasing in rho.
inline std::vector<exponent_point> parametric_curve(const channel_spec& ch,
                                                    const std::vector<double>& rho_grid) {
  std::vector<exponent_point> out;
  out.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    const rho_point p = make_rho_point(ch, rho);
    out.push_back({mutual_info_rho(ch, p), rho, kl_family_to_channel(ch, p),
                   rho >= 0.0 ? exponent_kind::error : exponent_kind::correct_decoding});
  }
  return out;
}

// A finite discrete input distribution as (value, probability) atoms.
using discrete_atoms = std::vector<std::pair<double, double>>;

namespace detail {
inline double mixture_density(const discrete_atoms& px, const rho_point& p, double y) {
  double acc = 0.0;
  for (const auto& [x, w] : px) acc += w * cond_density(p, x, y);
  return acc;
}

inline std::pair<double, double> mixture_range(const discrete_atoms& px,
                                               const rho_point& p) {
  // mean +/- 10 standard deviations of the widest component
  double lo = 1e300, hi = -1e300;
  const double sd = std::sqrt(p.sigma2_yx);
  for (const auto& [x, w] : px) {
    (void)w;
    lo = std::min(lo, p.k_rho * x - 10.0 * sd);
    hi = std::max(hi, p.k_rho * x + 10.0 * sd);
  }
  return {lo, hi};
}
} // namespace detail

// D(p_Y^(rho) || N(0, sigma2_y)) for the output mixture induced by atoms p_x.
inline double marginal_mixture_kl(const channel_spec& ch, const discrete_atoms& px,
                                  const rho_point& p, double eps = 1e-9) {
  auto [lo, hi] = detail::mixture_range(px, p);
  lo = std::min(lo, -10.0 * std::sqrt(p.sigma2_y));
  hi = std::max(hi, 10.0 * std::sqrt(p.sigma2_y));
  auto integrand = [&](double y) {
    const double f = detail::mixture_density(px, p, y);
    if (f <= 0.0) return 0.0;
    const double g = std::exp(-y * y / (2.0 * p.sigma2_y)) /
                     std::sqrt(2.0 * M_PI * p.sigma2_y);
    return f * std::log(f / g);
  };
  return ch.from_nats(std::max(0.0, integrate(integrand, lo, hi, eps)));
}

// Numerical check of the capacity decomposition
//   I(p_X, w) = C + (E[X^2]-s^2)/(2 (s^2+sigma^2) ln b) - D(p_Y || p_hat_Y).
// Returns (lhs, rhs, |lhs - rhs|), all in base-b units.
struct decomposition_report {
  double mutual_info;
  double decomposed;
  double residual;
};

inline decomposition_report capacity_decomposition_check(const channel_spec& ch,
                                                         const discrete_atoms& px,
                                                         double eps = 1e-10) {
  const rho_point p0 = make_rho_point(ch, 0.0); // the channel itself
  double ex2 = 0.0;
  for (const auto& [x, w] : px) ex2 += w * x * x;
  if (ex2 > ch.s2 * (1.0 + 1e-12))
    throw std::domain_error("capacity_decomposition_check: E[X^2] exceeds s^2");

  auto [lo, hi] = detail::mixture_range(px, p0);
  const double vy = ch.s2 + ch.sigma2;
  lo = std::min(lo, -10.0 * std::sqrt(vy));
  hi = std::max(hi, 10.0 * std::sqrt(vy));

  // I(p_X, w) = sum_x P(x) int w(y|x) ln(w(y|x)/p_Y(y)) dy
  double lhs_nats = 0.0;
  for (const auto& [x, wgt] : px) {
    auto integrand = [&](double y) {
      const double c = ch.w(x, y);
      if (c <= 0.0) return 0.0;
      const double m = detail::mixture_density(px, p0, y);
      return c * std::log(c / m);
    };
    lhs_nats += wgt * integrate(integrand, lo, hi, eps);
  }

  // D(p_Y || p_hat_Y) with p_hat_Y = N(0, s^2 + sigma^2)
  auto tail_kl = [&](double y) {
    const double f = detail::mixture_density(px, p0, y);
    if (f <= 0.0) return 0.0;
    const double g = std::exp(-y * y / (2.0 * vy)) / std::sqrt(2.0 * M_PI * vy);
    return f * std::log(f / g);
  };
  const double dyy_nats = integrate(tail_kl, lo, hi, eps);
  const double rhs_nats = ch.to_nats(capacity(ch)) +
                          (ex2 - ch.s2) / (2.0 * vy) - dyy_nats;
  const double lhs = ch.from_nats(lhs_nats), rhs = ch.from_nats(rhs_nats);
  return {lhs, rhs, std::fabs(lhs - rhs)};
}

} // namespace awgn
