#pragma once

#include <cmath>
#include <stdexcept>

namespace awgn {

// Global problem instance: power bound s^2, noise variance sigma^2,
// logarithm base b > 1 for all information quantities.
struct channel_spec {
  double s2;
  double sigma2;
  double log_base;

  channel_spec(double s2_, double sigma2_, double log_base_ = 2.0)
      : s2(s2_), sigma2(sigma2_), log_base(log_base_) {
    if (!(s2 > 0.0) || !std::isfinite(s2))
      throw std::domain_error("channel_spec: s2 must be positive and finite");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
      throw std::domain_error("channel_spec: sigma2 must be positive and finite");
    if (!(log_base > 1.0) || !std::isfinite(log_base))
      throw std::domain_error("channel_spec: log_base must be > 1");
  }

  double snr() const { return s2 / sigma2; }
  double ln_b() const { return std::log(log_base); }

  // nats -> base-b units
  double from_nats(double v) const { return v / ln_b(); }
  double to_nats(double v) const { return v * ln_b(); }

  // channel transition density w(y|x) = N(x, sigma^2) at y
  double w(double x, double y) const {
    const double d = y - x;
    return std::exp(-d * d / (2.0 * sigma2)) / std::sqrt(2.0 * M_PI * sigma2);
  }
};

} // namespace awgn
