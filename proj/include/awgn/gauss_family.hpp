#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "channel.hpp"

namespace awgn {

inline constexpr double rho_min = -1.0 + 1e-9; // (1+rho) -> 0 degenerates the family

// k_rho closed form.  For SNR - rho - 1 < 0 the textbook form
// [a + sqrt(a^2+4SNR)]/(2SNR) cancels catastrophically at large rho, so the
// conjugate form 2/(sqrt(a^2+4SNR) - a) is used there; the two are identical.
inline double k_of_rho(const channel_spec& ch, double rho) {
  if (!(rho >= rho_min))
    throw std::domain_error("k_of_rho: rho must be > -1");
  const double snr = ch.snr();
  const double a = snr - rho - 1.0;
  const double s = std::sqrt(a * a + 4.0 * snr);
  return a >= 0.0 ? (a + s) / (2.0 * snr) : 2.0 / (s - a);
}

// One member of the rho-parametrized Gaussian family:
// Y | X=x ~ N(k_rho x, sigma2_yx), ideal output marginal N(0, sigma2_y).
struct rho_point {
  double rho;
  double k_rho;
  double sigma2_yx;
  double sigma2_y;
};

inline rho_point make_rho_point(const channel_spec& ch, double rho) {
  const double k = k_of_rho(ch, rho);
  rho_point p{rho, k, (1.0 + rho) * k * ch.sigma2, ch.sigma2 + k * ch.s2};
  // Closed-form identities; residuals beyond rounding indicate inconsistent parameters.
  const double r1 = p.sigma2_y - (p.sigma2_yx + k * k * ch.s2);
  const double r2 = (1.0 + rho) / p.sigma2_yx - (rho / p.sigma2_y + 1.0 / ch.sigma2);
  const double r3 = p.sigma2_yx - (ch.sigma2 + k * (1.0 - k) * ch.s2);
  const double scale = std::fabs(p.sigma2_y) + std::fabs(1.0 / ch.sigma2) + 1.0;
  if (std::fabs(r1) + std::fabs(r2) + std::fabs(r3) > 1e-12 * scale)
    throw std::runtime_error("make_rho_point: identity residual exceeds tolerance");
  return p;
}

// Conditional density p^(rho)(y|x) = N(k_rho x, sigma2_yx) at y.
inline double cond_density(const rho_point& p, double x, double y) {
  const double d = y - p.k_rho * x;
  return std::exp(-d * d / (2.0 * p.sigma2_yx)) /
         std::sqrt(2.0 * M_PI * p.sigma2_yx);
}

// E[(Y-X)^2] for X with second moment sigma_x2 under the family member.
inline double expected_sq_noise(const channel_spec& ch, const rho_point& p,
                                double sigma_x2) {
  if (sigma_x2 < 0.0)
    throw std::domain_error("expected_sq_noise: sigma_x2 must be >= 0");
  const double omk = 1.0 - p.k_rho;
  return ch.sigma2 + omk * ch.s2 + omk * omk * (sigma_x2 - ch.s2);
}

// D(p^(rho)_{Y|X} || w | p_hat_X) in base-b units; conditional Gaussian KL
// averaged over x ~ N(0, s^2).
inline double kl_family_to_channel(const channel_spec& ch, const rho_point& p) {
  const double r = p.sigma2_yx / ch.sigma2;
  const double omk = 1.0 - p.k_rho;
  const double nats =
      0.5 * (r - 1.0 - std::log(r)) + omk * omk * ch.s2 / (2.0 * ch.sigma2);
  return ch.from_nats(nats);
}

// I(p_hat_X, p^(rho)_{Y|X}) = (1/2) log_b(sigma2_y / sigma2_yx).
inline double mutual_info_rho(const channel_spec& ch, const rho_point& p) {
  return ch.from_nats(0.5 * std::log(p.sigma2_y / p.sigma2_yx));
}

// Constants of the linear-in-s^2 identity D + rho I = c0 + c1 s^2.
inline std::pair<double, double> c0_c1(const channel_spec& ch, double rho) {
  const rho_point p = make_rho_point(ch, rho);
  const double c0_nats = 0.5 * (std::log(ch.sigma2) + rho * std::log(p.sigma2_y) -
                                (1.0 + rho) * std::log(p.sigma2_yx));
  const double c1_nats = (1.0 - p.k_rho) / (2.0 * ch.sigma2);
  return {ch.from_nats(c0_nats), ch.from_nats(c1_nats)};
}

} // namespace awgn
