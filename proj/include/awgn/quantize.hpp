#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "types.hpp"

namespace awgn {

// Nearest-lattice index with the half-up tie rule floor(v/delta + 1/2):
// exact halves round toward +infinity, so the rule is asymmetric at
// negative halves (e.g. -0.25 with delta 0.5 maps to 0, +0.25 to 1).
inline std::int64_t quantize_scalar(double v, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("quantize: delta must be > 0");
  return (std::int64_t)std::floor(v / delta + 0.5);
}

inline std::vector<std::int64_t> quantize(const std::vector<double>& v, double delta) {
  std::vector<std::int64_t> q(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) q[k] = quantize_scalar(v[k], delta);
  return q;
}

// A raw (x, y) vector pair together with its lattice quantization.
struct quantized_pair {
  std::vector<double> x_raw, y_raw;
  std::vector<std::int64_t> x_q, y_q;
  lattice_config config;
};

inline quantized_pair make_quantized_pair(std::vector<double> x, std::vector<double> y,
                                          const lattice_config& cfg) {
  if (x.size() != y.size())
    throw std::invalid_argument("make_quantized_pair: length mismatch");
  if ((std::int64_t)x.size() != cfg.n)
    throw std::invalid_argument("make_quantized_pair: vectors must have length n");
  quantized_pair p{std::move(x), std::move(y), {}, {}, cfg};
  p.x_q = quantize(p.x_raw, cfg.delta_alpha());
  p.y_q = quantize(p.y_raw, cfg.delta_beta());
  return p;
}

inline joint_type_pmf empirical_joint_type(const quantized_pair& p) {
  joint_type_pmf j;
  j.n = (std::int64_t)p.x_q.size();
  for (std::size_t k = 0; k < p.x_q.size(); ++k) j.counts[{p.x_q[k], p.y_q[k]}] += 1;
  return j;
}

// Two-sided band for the normalized channel log-density: the raw-pair
// exponent -(1/n) log_b w(y|x) is trapped around its quantized counterpart
// with half-widths d*sqrt(c_xy)/(2 sigma^2 ln b) below and the same plus
// d^2/(4*2 sigma^2 ln b) above, d = delta_alpha + delta_beta.
struct sandwich_report {
  double exact;     // -(1/n) log_b w(y|x)
  double quantized; // -(1/n) log_b w(y_q|x_q)
  double lower;
  double upper;
  bool ok;
};

inline sandwich_report pdf_exponent_sandwich(const quantized_pair& p,
                                             const channel_spec& ch, double c_xy) {
  const double da = p.config.delta_alpha(), db = p.config.delta_beta();
  const std::size_t n = p.x_raw.size();
  double sq = 0.0, le = 0.0, lq = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xq = p.x_q[k] * da, yq = p.y_q[k] * db;
    sq += (yq - xq) * (yq - xq);
    le += std::log(ch.w(p.x_raw[k], p.y_raw[k]));
    lq += std::log(ch.w(xq, yq));
  }
  if (sq / (double)n > c_xy + 1e-12)
    throw std::domain_error("pdf_exponent_sandwich: quantized pair violates c_xy");
  const double lnb = ch.ln_b();
  const double d = da + db;
  const double half = d * std::sqrt(c_xy) / (2.0 * ch.sigma2 * lnb);
  const double extra = d * d / (4.0 * 2.0 * ch.sigma2 * lnb);
  sandwich_report r;
  r.exact = -le / ((double)n * lnb);
  r.quantized = -lq / ((double)n * lnb);
  r.lower = r.quantized - half;
  r.upper = r.quantized + half + extra;
  r.ok = r.exact >= r.lower - 1e-12 && r.exact <= r.upper + 1e-12;
  return r;
}

namespace detail {
// drift(n) = delta(n) sqrt(c) + delta(n)^2 / 4 where delta(n) is the
// total per-component quantization width (one or two lattices).
inline double quantization_drift(double n, double alpha, double beta_or_neg, double c) {
  double d = std::pow(n, -alpha);
  if (beta_or_neg > 0.0) d += std::pow(n, -beta_or_neg);
  return d * std::sqrt(c) + d * d / 4.0;
}
} // namespace detail

// Smallest n with drift <= eps; drift is strictly decreasing in n.
// Pass beta < 0 for the single-lattice (power constraint) version.
inline std::int64_t power_drift_bound(double alpha, double beta, double c, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("power_drift_bound: eps must be > 0");
  if (detail::quantization_drift(1.0, alpha, beta, c) <= eps) return 1;
  std::int64_t lo = 1, hi = 2;
  while (detail::quantization_drift((double)hi, alpha, beta, c) > eps) {
    lo = hi;
    if (hi > (std::int64_t(1) << 62) / 2)
      throw std::runtime_error("power_drift_bound: eps unattainable");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (detail::quantization_drift((double)mid, alpha, beta, c) <= eps ? hi : lo) = mid;
  }
  return hi;
}

// Scalar bound t ln t <= f(t1+t) - f(t1) <= t ln max{1/t, (t1+t)e},
// f(x) = x ln x, valid for 0 < t <= 1/e, t1 > 0.
inline std::pair<bool, bool> xlogx_bounds(double t, double t1) {
  if (!(t > 0.0 && t <= 1.0 / std::exp(1.0)))
    throw std::domain_error("xlogx_bounds: need 0 < t <= 1/e");
  if (!(t1 > 0.0)) throw std::domain_error("xlogx_bounds: need t1 > 0");
  auto f = [](double x) { return x * std::log(x); };
  const double diff = f(t1 + t) - f(t1);
  const double lower = t * std::log(t);
  const double upper = t * std::log(std::max(1.0 / t, (t1 + t) * std::exp(1.0)));
  // the inequality is exact; the tolerance only absorbs the cancellation
  // error of the f-difference, which scales with the terms' magnitude
  const double tol = 1e-12 * (std::fabs(f(t1 + t)) + std::fabs(f(t1)) + 1.0);
  return {lower <= diff + tol, diff <= upper + tol};
}

} // namespace awgn
