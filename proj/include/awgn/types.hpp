#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "channel.hpp"

namespace awgn {

// Lattice steps delta_alpha = n^-alpha (inputs), delta_beta = n^-beta
// (outputs), delta_gamma = n^-gamma (density values); alpha+beta+gamma = 1
// so the three steps multiply to exactly 1/n.
struct lattice_config {
  std::int64_t n;
  double alpha;
  double beta;

  lattice_config(std::int64_t n_, double alpha_, double beta_)
      : n(n_), alpha(alpha_), beta(beta_) {
    if (n < 1) throw std::domain_error("lattice_config: n must be >= 1");
    const double g = gamma();
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0 && g > 0.0 && g < 1.0))
      throw std::domain_error("lattice_config: alpha, beta, gamma must lie in (0,1)");
    const double prod = delta_alpha() * delta_beta() * delta_gamma();
    if (std::fabs(prod * n - 1.0) > 1e-14 * n)
      throw std::runtime_error("lattice_config: step-product identity violated");
  }

  double gamma() const { return 1.0 - alpha - beta; }
  double delta_alpha() const { return std::pow((double)n, -alpha); }
  double delta_beta() const { return std::pow((double)n, -beta); }
  double delta_gamma() const { return std::pow((double)n, -gamma()); }
};

enum class axis_kind { X, Y };

inline double axis_delta(const lattice_config& cfg, axis_kind a) {
  return a == axis_kind::X ? cfg.delta_alpha() : cfg.delta_beta();
}

// A type with denominator n over a signed lattice: index i stands for the
// letter i*delta.  Counts are positive; their sum is n.
struct type_pmf {
  std::int64_t n = 0;
  axis_kind axis = axis_kind::X;
  std::map<std::int64_t, std::int64_t> counts;

  void validate() const {
    std::int64_t total = 0;
    for (const auto& [i, c] : counts) {
      (void)i;
      if (c < 1) throw std::runtime_error("type_pmf: counts must be >= 1");
      total += c;
    }
    if (total != n) throw std::runtime_error("type_pmf: counts must sum to n");
  }

  std::size_t support_size() const { return counts.size(); }

  double second_moment(double delta) const {
    double acc = 0.0;
    for (const auto& [i, c] : counts) acc += (double)c * (i * delta) * (i * delta);
    return acc / (double)n;
  }

  // H(P) in base-b units
  double entropy(double log_base) const {
    double acc = 0.0;
    for (const auto& [i, c] : counts) {
      (void)i;
      const double p = (double)c / (double)n;
      acc -= p * std::log(p);
    }
    return acc / std::log(log_base);
  }
};

// Canonical text form: n=<int>; axis=<X|Y>; pairs=i1:c1,i2:c2,... ascending.
inline std::string serialize(const type_pmf& t) {
  std::ostringstream os;
  os << "n=" << t.n << "; axis=" << (t.axis == axis_kind::X ? 'X' : 'Y') << "; pairs=";
  bool first = true;
  for (const auto& [i, c] : t.counts) {
    if (!first) os << ',';
    os << i << ':' << c;
    first = false;
  }
  return os.str();
}

inline type_pmf parse_type_pmf(const std::string& s) {
  type_pmf t;
  std::istringstream is(s);
  std::string tok;
  auto expect = [&](const std::string& key) {
    std::getline(is, tok, '=');
    // tolerate the leading "; " of subsequent fields
    const auto pos = tok.find_first_not_of("; ");
    if (tok.substr(pos == std::string::npos ? 0 : pos) != key)
      throw std::runtime_error("parse_type_pmf: expected '" + key + "'");
  };
  expect("n");
  std::getline(is, tok, ';');
  t.n = std::stoll(tok);
  expect("axis");
  std::getline(is, tok, ';');
  if (tok != "X" && tok != "Y") throw std::runtime_error("parse_type_pmf: bad axis");
  t.axis = tok == "X" ? axis_kind::X : axis_kind::Y;
  expect("pairs");
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  while (std::getline(is, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::runtime_error("parse_type_pmf: bad pair");
    const std::int64_t i = std::stoll(tok.substr(0, colon));
    const std::int64_t c = std::stoll(tok.substr(colon + 1));
    if (i <= prev) throw std::runtime_error("parse_type_pmf: indices must ascend");
    prev = i;
    t.counts[i] = c;
  }
  t.validate();
  return t;
}

// Joint type over the product lattice; cell (i, j) stands for
// (i*delta_alpha, j*delta_beta).
struct joint_type_pmf {
  std::int64_t n = 0;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> counts;

  void validate() const {
    std::int64_t total = 0;
    for (const auto& [ij, c] : counts) {
      (void)ij;
      if (c < 1) throw std::runtime_error("joint_type_pmf: counts must be >= 1");
      total += c;
    }
    if (total != n) throw std::runtime_error("joint_type_pmf: counts must sum to n");
  }

  std::size_t support_size() const { return counts.size(); }

  type_pmf marginal(axis_kind a) const {
    type_pmf t;
    t.n = n;
    t.axis = a;
    for (const auto& [ij, c] : counts)
      t.counts[a == axis_kind::X ? ij.first : ij.second] += c;
    return t;
  }

  double entropy(double log_base) const {
    double acc = 0.0;
    for (const auto& [ij, c] : counts) {
      (void)ij;
      const double p = (double)c / (double)n;
      acc -= p * std::log(p);
    }
    return acc / std::log(log_base);
  }

  // E[(Y - X)^2] on the lattice
  double mean_sq_diff(const lattice_config& cfg) const {
    const double da = cfg.delta_alpha(), db = cfg.delta_beta();
    double acc = 0.0;
    for (const auto& [ij, c] : counts) {
      const double d = ij.second * db - ij.first * da;
      acc += (double)c * d * d;
    }
    return acc / (double)n;
  }
};

// I(P_X, P_{Y|X}) = H(P_X) + H(P_Y) - H(P_XY), base-b units; 0 iff product.
inline double mutual_info_type(const joint_type_pmf& j, double log_base) {
  return j.marginal(axis_kind::X).entropy(log_base) +
         j.marginal(axis_kind::Y).entropy(log_base) - j.entropy(log_base);
}

// D(P_{Y|X} || W_n | P_X) = sum P(x,y) log_b [P_{Y|X}(y|x) / (w(y|x) delta_beta)].
// W_n is a positive measure, not a distribution, so the value may be negative.
inline double kl_type_vs_channel_measure(const joint_type_pmf& j, const channel_spec& ch,
                                         const lattice_config& cfg) {
  const type_pmf px = j.marginal(axis_kind::X);
  const double da = cfg.delta_alpha(), db = cfg.delta_beta();
  double acc = 0.0;
  for (const auto& [ij, c] : j.counts) {
    const double x = ij.first * da, y = ij.second * db;
    const double p_yx = (double)c / (double)px.counts.at(ij.first);
    acc += (double)c / (double)j.n * std::log(p_yx / (ch.w(x, y) * db));
  }
  return acc / ch.ln_b();
}

namespace detail {
inline double log_multinomial_nats(std::int64_t n, const auto& counts) {
  double acc = std::lgamma((double)n + 1.0);
  for (const auto& [k, c] : counts) {
    (void)k;
    acc -= std::lgamma((double)c + 1.0);
  }
  return acc;
}
} // namespace detail

struct log_size_bounds {
  double exact_log; // log_b |T(P)|
  double lower;     // n H - |S| log_b(n+1)
  double upper;     // n H
};

template <typename TypeLike>
log_size_bounds type_class_log_size(const TypeLike& t, double log_base) {
  const double lnb = std::log(log_base);
  const double exact = detail::log_multinomial_nats(t.n, t.counts) / lnb;
  const double nH = (double)t.n * t.entropy(log_base);
  const double lower = nH - (double)t.support_size() * std::log((double)t.n + 1.0) / lnb;
  return {exact, lower, nH};
}

// log_b |T(P_{Y|X} | x)| (or X|Y), via the exact ratio identity
// |T(P_{cond} | seq)| = |T(P_XY)| / |T(P_marg))|, with the conditional-type
// sandwich around n H(cond).  Both polynomial corrections are reported.
struct cond_log_size_bounds {
  double exact_log;
  double lower;           // n H(cond) - n c1 log_b(n+1) / n^{gamma/2}
  double upper;           // n H(cond) + n c_marg log_b(n+1) / n^{2(1-.)/3}
  bool lower_is_tighter;  // |exact-lower| <= |upper-exact| at this n
};

inline cond_log_size_bounds cond_type_class_log_size(const joint_type_pmf& j,
                                                     const lattice_config& cfg,
                                                     axis_kind given, double log_base,
                                                     double c_x, double c_y) {
  const double lnb = std::log(log_base);
  const auto joint = type_class_log_size(j, log_base);
  const auto marg = type_class_log_size(j.marginal(given), log_base);
  const double exact = joint.exact_log - marg.exact_log;
  const double H_cond = j.entropy(log_base) - j.marginal(given).entropy(log_base);
  const double c1 = std::sqrt(2.0 * M_PI * (c_x + c_y + 1.0 / 6.0));
  // correction constant of the conditioned-on axis: c2 for X given, c3 for Y
  const double cm = given == axis_kind::X ? std::cbrt(12.0 * c_x + 1.0)
                                          : std::cbrt(12.0 * c_y + 1.0);
  const double expo = given == axis_kind::X ? 2.0 * (1.0 - cfg.alpha) / 3.0
                                            : 2.0 * (1.0 - cfg.beta) / 3.0;
  const double logn1 = std::log((double)j.n + 1.0) / lnb;
  const double lower =
      (double)j.n * H_cond - c1 * logn1 * std::pow((double)j.n, 1.0 - cfg.gamma() / 2.0);
  const double upper =
      (double)j.n * H_cond + cm * logn1 * std::pow((double)j.n, 1.0 - expo);
  return {exact, lower, upper, std::fabs(exact - lower) <= std::fabs(upper - exact)};
}

} // namespace awgn
