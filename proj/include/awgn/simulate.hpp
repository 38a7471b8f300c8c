#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "rng.hpp"

namespace awgn {

enum class codebook_rule { gaussian_iid_projected, uniform_sphere };

inline constexpr std::uint64_t max_messages = 1ull << 20;

// M = floor(b^{n R}), capped: beyond 2^20 messages a literal codebook is not
// desk-feasible and the config is rejected.
inline std::uint64_t num_messages(std::int64_t n, double rate, double log_base) {
  const double log2_m = (double)n * rate * std::log2(log_base);
  if (log2_m > 20.0 + 1e-12)
    throw std::domain_error("num_messages: floor(b^{nR}) exceeds the 2^20 cap");
  const std::uint64_t m = (std::uint64_t)std::floor(std::pow(log_base, (double)n * rate));
  return m < 1 ? 1 : m;
}

struct sim_config {
  std::int64_t n;
  double rate; // in log_base-b units per channel use
  channel_spec channel;
  codebook_rule rule = codebook_rule::gaussian_iid_projected;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;

  sim_config(std::int64_t n_, double rate_, channel_spec ch)
      : n(n_), rate(rate_), channel(ch) {
    if (n < 1) throw std::domain_error("sim_config: n must be >= 1");
    if (!(rate > 0.0)) throw std::domain_error("sim_config: rate must be > 0");
    (void)num_messages(n, rate, channel.log_base); // validate the cap up front
  }

  std::uint64_t messages() const { return num_messages(n, rate, channel.log_base); }
};

namespace detail {
inline constexpr std::uint64_t codebook_stream = 0xC0DEB00Cull;
}

// Every emitted codeword satisfies (1/n) sum x_k^2 <= s^2 exactly.
inline std::vector<std::vector<double>> gen_codebook(const sim_config& cfg,
                                                     counter_rng& rng) {
  const std::uint64_t m = cfg.messages();
  const double s2 = cfg.channel.s2;
  const double n = (double)cfg.n;
  std::vector<std::vector<double>> book(m);
  for (auto& x : book) {
    x.resize(cfg.n);
    double power = 0.0;
    if (cfg.rule == codebook_rule::gaussian_iid_projected) {
      const double sd = std::sqrt(s2 * (1.0 - 1.0 / n));
      for (auto& v : x) {
        v = sd * rng.next_gaussian();
        power += v * v;
      }
      if (power > n * s2) { // rescale violators onto the power sphere
        const double scale = std::sqrt(n * s2 / power);
        for (auto& v : x) v *= scale;
      }
    } else { // uniform on the radius-sqrt(n s^2) sphere
      for (auto& v : x) {
        v = rng.next_gaussian();
        power += v * v;
      }
      const double scale = std::sqrt(n * s2 / power);
      for (auto& v : x) v *= scale;
    }
  }
  return book;
}

inline std::vector<double> transmit(const std::vector<double>& x,
                                    const channel_spec& ch, counter_rng& rng) {
  const double sd = std::sqrt(ch.sigma2);
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + sd * rng.next_gaussian();
  return y;
}

// Nearest codeword in Euclidean distance; ties break toward the smallest
// index (boundary points belong to the earlier message's region).
inline std::size_t ml_decode(const std::vector<std::vector<double>>& book,
                             const std::vector<double>& y) {
  if (book.empty()) throw std::invalid_argument("ml_decode: empty codebook");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < book.size(); ++m) {
    double d = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double e = y[k] - book[m][k];
      d += e * e;
    }
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

// Wilson 95% score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054; // 97.5% normal quantile
  const double p = (double)k / (double)n, z2 = z * z, nn = (double)n;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  // the endpoints are exactly 0 (resp. 1) when k = 0 (resp. k = n); pin them
  // so float rounding cannot leave a spurious epsilon
  const double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = k == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

struct sim_result {
  std::uint64_t trials = 0, errors = 0, corrects = 0;
  double p_err_hat = 0.0, p_correct_hat = 0.0;
  std::pair<double, double> p_err_ci{0.0, 1.0}, p_correct_ci{0.0, 1.0};
  // -(1/n) log_b of the point estimates; finite only when the count > 0
  double emp_error_exponent = std::numeric_limits<double>::infinity();
  double emp_correct_exponent = std::numeric_limits<double>::infinity();
};

inline sim_result run(const sim_config& cfg) {
  counter_rng book_rng(cfg.seed, detail::codebook_stream);
  const auto book = gen_codebook(cfg, book_rng);
  const std::uint64_t m = book.size();

  sim_result res;
  res.trials = cfg.trials;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    counter_rng rng(cfg.seed, t + 1); // per-trial stream: scheduling-independent
    const std::uint64_t j = rng.next_below(m);
    const auto y = transmit(book[j], cfg.channel, rng);
    if (ml_decode(book, y) == j)
      ++res.corrects;
    else
      ++res.errors;
  }
  res.p_err_hat = (double)res.errors / (double)res.trials;
  res.p_correct_hat = (double)res.corrects / (double)res.trials;
  res.p_err_ci = wilson_interval(res.errors, res.trials);
  res.p_correct_ci = wilson_interval(res.corrects, res.trials);
  const double lnb = cfg.channel.ln_b();
  if (res.errors > 0)
    res.emp_error_exponent = -std::log(res.p_err_hat) / ((double)cfg.n * lnb);
  if (res.corrects > 0)
    res.emp_correct_exponent = -std::log(res.p_correct_hat) / ((double)cfg.n * lnb);
  return res;
}

// Chernoff tail bound P[(1/n) sum Z_k^2 >= sigma_tilde2]
//   <= exp{-n/2 [x - 1 - ln x]},  x = sigma_tilde2 / sigma^2 >= 1.
inline double chernoff_noise_tail(const channel_spec& ch, double sigma_tilde2,
                                  std::int64_t n) {
  if (!(sigma_tilde2 >= ch.sigma2))
    throw std::domain_error("chernoff_noise_tail: need sigma_tilde2 >= sigma^2");
  const double x = sigma_tilde2 / ch.sigma2;
  return std::exp(-(double)n * 0.5 * (x - 1.0 - std::log(x)));
}

} // namespace awgn
