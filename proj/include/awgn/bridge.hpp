#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gauss_family.hpp"
#include "quadrature.hpp"
#include "quantize.hpp"
#include "types.hpp"

namespace awgn {

// ---------------------------------------------------------------------------
// Type -> step-density family.  Each conditional row becomes a histogram
// density with value P_{Y|X}(j delta_beta | x) / delta_beta on the cell
// [(j-1/2) delta_beta, (j+1/2) delta_beta).
// ---------------------------------------------------------------------------
struct step_family {
  joint_type_pmf joint;
  lattice_config config;

  double density(std::int64_t i, double y) const {
    const double db = config.delta_beta();
    const std::int64_t j = quantize_scalar(y, db);
    const auto it = joint.counts.find({i, j});
    if (it == joint.counts.end()) return 0.0;
    const auto px = joint.marginal(axis_kind::X);
    return (double)it->second / ((double)px.counts.at(i) * db);
  }

  // sup of every row is finite: at most 1/delta_beta
  double sup_density() const { return 1.0 / config.delta_beta(); }

  // I(P_X, step family) computed from the continuous entropies; because the
  // cell width is common, both differential entropies shift by the same
  // log(delta_beta) and the value coincides with the type mutual information.
  double mutual_info(double log_base) const {
    const double db = config.delta_beta();
    const auto px = joint.marginal(axis_kind::X);
    const auto py = joint.marginal(axis_kind::Y);
    double h_y = 0.0, h_yx = 0.0;
    for (const auto& [j, c] : py.counts) {
      (void)j;
      const double p = (double)c / (double)joint.n;
      h_y -= p * std::log(p / db); // -integral f_Y log f_Y over the cell
    }
    for (const auto& [ij, c] : joint.counts) {
      const double p = (double)c / (double)joint.n;
      const double cond = (double)c / (double)px.counts.at(ij.first);
      h_yx -= p * std::log(cond / db);
    }
    return (h_y - h_yx) / std::log(log_base);
  }

  // E[(Y-X)^2] under the step densities: each cell adds its center offset
  // squared plus the uniform-in-cell variance delta_beta^2 / 12.
  double mean_sq_diff() const {
    const double da = config.delta_alpha(), db = config.delta_beta();
    double acc = 0.0;
    for (const auto& [ij, c] : joint.counts) {
      const double d = ij.second * db - ij.first * da;
      acc += (double)c / (double)joint.n * (d * d + db * db / 12.0);
    }
    return acc;
  }
};

inline step_family type_to_pdf(const joint_type_pmf& joint, const lattice_config& cfg) {
  joint.validate();
  return {joint, cfg};
}

// ---------------------------------------------------------------------------
// Conditional density families accepted by pdf_to_type: Lipschitz rows with
// unit mass.  The default cell infimum uses the Lipschitz modulus; subclasses
// with structure (unimodal rows) override it with the exact value.
// ---------------------------------------------------------------------------
struct cond_family {
  double lipschitz_k;

  explicit cond_family(double k) : lipschitz_k(k) {}
  virtual ~cond_family() = default;

  virtual double density(double x, double y) const = 0;
  virtual std::pair<double, double> y_range(double x) const = 0;

  virtual double cell_infimum(double x, double lo, double hi) const {
    const double mid = 0.5 * (lo + hi);
    return std::max(0.0, density(x, mid) - lipschitz_k * (hi - lo) / 2.0);
  }
};

// Rows y | x ~ N(slope * x, var): Lipschitz with K = sup|f'| and unimodal,
// so the infimum over any interval is attained at an endpoint.
struct gaussian_cond_family : cond_family {
  double slope, var;

  gaussian_cond_family(double slope_, double var_)
      : cond_family(1.0 / (var_ * std::sqrt(2.0 * M_PI * std::exp(1.0)))),
        slope(slope_), var(var_) {
    if (!(var > 0.0)) throw std::domain_error("gaussian_cond_family: var must be > 0");
  }

  double density(double x, double y) const override {
    const double d = y - slope * x;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
  }

  std::pair<double, double> y_range(double x) const override {
    const double m = slope * x, s = std::sqrt(var);
    return {m - 12.0 * s, m + 12.0 * s};
  }

  double cell_infimum(double x, double lo, double hi) const override {
    return std::min(density(x, lo), density(x, hi));
  }
};

// ---------------------------------------------------------------------------
// PDF -> type construction with its quantization-slack bookkeeping.
// ---------------------------------------------------------------------------
struct moment_budgets {
  double c_x;
  double c_y;
  double c_xy;
};

struct slack_budget {
  double h;        // (K+1) n^{-delta}
  double h_tilde;  // (K+1)(12 c_x + 1)^{1/3} n^{-delta1}
  double delta_exp;  // min{beta, 1-beta} - alpha
  double delta1_exp; // min{beta, 1-beta} - (1+2 alpha)/3
  double c1_app;     // sqrt(2 pi (c_x + c_y + 1/12))
  double c1_tilde;   // (12 c_y)^{1/3}
  double p1_bound;   // 2 c1 h^{1/2}
  bool h_precondition_ok;       // h <= 1/(c1 e)^2
  bool h_tilde_precondition_ok; // h_tilde <= 1/e
  std::int64_t n0; // smallest n at which both preconditions hold
};

inline bool lattice_hypothesis_ok(const lattice_config& cfg) {
  return cfg.alpha > 0.0 && cfg.alpha < 0.25 &&
         cfg.beta > 1.0 / 3.0 + 2.0 * cfg.alpha / 3.0 &&
         cfg.beta < 2.0 / 3.0 - 2.0 * cfg.alpha / 3.0;
}

inline slack_budget make_slack_budget(const lattice_config& cfg, double K,
                                      const moment_budgets& mb) {
  slack_budget s{};
  const double mb1 = std::min(cfg.beta, 1.0 - cfg.beta);
  s.delta_exp = mb1 - cfg.alpha;
  s.delta1_exp = mb1 - (1.0 + 2.0 * cfg.alpha) / 3.0;
  const double n = (double)cfg.n;
  s.h = (K + 1.0) * std::pow(n, -s.delta_exp);
  s.h_tilde = (K + 1.0) * std::cbrt(12.0 * mb.c_x + 1.0) * std::pow(n, -s.delta1_exp);
  s.c1_app = std::sqrt(2.0 * M_PI * (mb.c_x + mb.c_y + 1.0 / 12.0));
  s.c1_tilde = std::cbrt(12.0 * mb.c_y);
  s.p1_bound = 2.0 * s.c1_app * std::sqrt(s.h);
  const double e = std::exp(1.0);
  const double h_cap = 1.0 / ((s.c1_app * e) * (s.c1_app * e));
  s.h_precondition_ok = s.h <= h_cap;
  s.h_tilde_precondition_ok = s.h_tilde <= 1.0 / e;
  // minimal block length at which both preconditions kick in (the slack
  // formulas are vacuous below it); requires both exponents positive.
  if (s.delta_exp > 0.0 && s.delta1_exp > 0.0) {
    const double n_h = std::pow((K + 1.0) / h_cap, 1.0 / s.delta_exp);
    const double n_ht =
        std::pow((K + 1.0) * std::cbrt(12.0 * mb.c_x + 1.0) * e, 1.0 / s.delta1_exp);
    const double n0 = std::ceil(std::max({n_h, n_ht, 1.0}));
    // tiny delta1 makes n0 astronomical; clamp instead of overflowing
    s.n0 = n0 < 9e18 ? (std::int64_t)n0 : std::numeric_limits<std::int64_t>::max();
  } else {
    s.n0 = -1; // unattainable for this (alpha, beta)
  }
  return s;
}

struct inequality_check {
  double lhs;
  double rhs_base; // continuous/discrete counterpart before slack
  double slack;
  bool ok; // lhs <= rhs_base + slack
};

struct pdf_to_type_result {
  joint_type_pmf joint;
  slack_budget slack;
  double p1;          // diagonal-complement (quantization-deficit) mass
  bool p1_ok;         // p1 <= p1_bound
  inequality_check cond_entropy;  // discrete vs continuous conditional entropy
  inequality_check sq_constraint; // discrete vs continuous E[(Y-X)^2]
  inequality_check marg_entropy;  // continuous vs discrete output entropy
  bool all_ok;
};

inline pdf_to_type_result pdf_to_type(const type_pmf& p_x, const cond_family& fam,
                                      const lattice_config& cfg,
                                      const moment_budgets& mb, double log_base) {
  p_x.validate();
  if (!lattice_hypothesis_ok(cfg))
    throw std::domain_error(
        "pdf_to_type: need alpha in (0, 1/4) and beta in (1/3 + 2a/3, 2/3 - 2a/3)");
  const double da = cfg.delta_alpha(), db = cfg.delta_beta(), dg = cfg.delta_gamma();
  const double n = (double)cfg.n;
  const double lnb = std::log(log_base);

  pdf_to_type_result res{};
  res.joint.n = cfg.n;
  res.slack = make_slack_budget(cfg, fam.lipschitz_k, mb);

  // Eq.-by-cell construction: quantize the cell infimum of the joint density
  // down to the delta_gamma grid; by the step-product identity each quantized
  // cell mass is an exact integer multiple of 1/n.  The per-row deficit goes
  // to the diagonal cell y = Q_beta(x), preserving the x-marginal exactly.
  std::int64_t deficit_total = 0;
  for (const auto& [i, ci] : p_x.counts) {
    const double x = i * da;
    const double row_scale = ((double)ci / n) / da; // joint density multiplier
    const auto [ylo, yhi] = fam.y_range(x);
    const std::int64_t j_lo = quantize_scalar(ylo, db) - 1;
    const std::int64_t j_hi = quantize_scalar(yhi, db) + 1;
    std::int64_t placed = 0;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
      const double lo = (j - 0.5) * db, hi = (j + 0.5) * db;
      const double p_inf = row_scale * fam.cell_infimum(x, lo, hi);
      const std::int64_t m = (std::int64_t)std::floor(p_inf / dg);
      if (m > 0) {
        res.joint.counts[{i, j}] += m;
        placed += m;
      }
    }
    if (placed > ci)
      throw std::runtime_error("pdf_to_type: quantized mass exceeds the row mass");
    const std::int64_t rest = ci - placed;
    deficit_total += rest;
    if (rest > 0) res.joint.counts[{i, quantize_scalar(x, db)}] += rest;
  }
  res.joint.validate();
  res.p1 = (double)deficit_total / n;
  res.p1_ok = res.p1 <= res.slack.p1_bound + 1e-12;

  // --- inequality (eq. of the conditional entropies) ---------------------
  // sum P_XY log_b(P_{Y|X}/delta_beta)
  //   <= sum_x P_X int p log_b p + 2 c1 h^{1/2} log_b(sqrt(e)/h)
  //      + 4 c1 h^{1/2} log_b n
  const auto px_check = res.joint.marginal(axis_kind::X);
  double lhs1 = 0.0;
  for (const auto& [ij, c] : res.joint.counts) {
    const double p = (double)c / n;
    const double cond = (double)c / (double)px_check.counts.at(ij.first);
    lhs1 += p * std::log(cond / db);
  }
  lhs1 /= lnb;
  double rhs1 = 0.0;
  for (const auto& [i, ci] : p_x.counts) {
    const double x = i * da;
    const auto [ylo, yhi] = fam.y_range(x);
    rhs1 += (double)ci / n *
            integrate(
                [&](double y) {
                  const double f = fam.density(x, y);
                  return f > 0.0 ? f * std::log(f) : 0.0;
                },
                ylo, yhi, 1e-10) /
            lnb;
  }
  const double sh = std::sqrt(res.slack.h);
  const double slack1 = 2.0 * res.slack.c1_app * sh *
                            std::log(std::sqrt(std::exp(1.0)) / res.slack.h) / lnb +
                        4.0 * res.slack.c1_app * sh * std::log(n) / lnb;
  res.cond_entropy = {lhs1, rhs1, slack1, lhs1 <= rhs1 + slack1 + 1e-12};

  // --- inequality (squared-difference constraint drift) ------------------
  // sum P_XY (y-x)^2 <= E_cont[(Y-X)^2] + (delta_beta^2 + delta_beta
  //   sqrt(c_xy)) + c1 h^{1/2} delta_beta^2 / 2
  const double lhs2 = res.joint.mean_sq_diff(cfg);
  double rhs2 = 0.0;
  for (const auto& [i, ci] : p_x.counts) {
    const double x = i * da;
    const auto [ylo, yhi] = fam.y_range(x);
    rhs2 += (double)ci / n *
            integrate(
                [&](double y) { return (y - x) * (y - x) * fam.density(x, y); },
                ylo, yhi, 1e-10);
  }
  const double slack2 = db * db + db * std::sqrt(mb.c_xy) +
                        res.slack.c1_app * sh * db * db / 2.0;
  res.sq_constraint = {lhs2, rhs2, slack2, lhs2 <= rhs2 + slack2 + 1e-12};

  // --- inequality (output-marginal entropy direction) --------------------
  // int p_Y log_b p_Y <= sum P_Y log_b(P_Y/delta_beta)
  //   + c1~ h~^{2/3} max{log_b(1/h~), log_b(e sqrt(K))} + 2 c1 h^{1/2} log_b n
  double ylo_all = std::numeric_limits<double>::infinity(), yhi_all = -ylo_all;
  for (const auto& [i, ci] : p_x.counts) {
    (void)ci;
    const auto [lo, hi] = fam.y_range(i * da);
    ylo_all = std::min(ylo_all, lo);
    yhi_all = std::max(yhi_all, hi);
  }
  auto p_y = [&](double y) {
    double acc = 0.0;
    for (const auto& [i, ci] : p_x.counts)
      acc += (double)ci / n * fam.density(i * da, y);
    return acc;
  };
  const double lhs3 = integrate(
                          [&](double y) {
                            const double f = p_y(y);
                            return f > 0.0 ? f * std::log(f) : 0.0;
                          },
                          ylo_all, yhi_all, 1e-10) /
                      lnb;
  const auto py_check = res.joint.marginal(axis_kind::Y);
  double rhs3 = 0.0;
  for (const auto& [j, c] : py_check.counts) {
    (void)j;
    const double p = (double)c / n;
    rhs3 += p * std::log(p / db);
  }
  rhs3 /= lnb;
  const double ht23 = std::pow(res.slack.h_tilde, 2.0 / 3.0);
  const double slack3 =
      res.slack.c1_tilde * ht23 *
          std::max(std::log(1.0 / res.slack.h_tilde),
                   std::log(std::exp(1.0) * std::sqrt(fam.lipschitz_k))) /
          lnb +
      2.0 * res.slack.c1_app * sh * std::log(n) / lnb;
  res.marg_entropy = {lhs3, rhs3, slack3, lhs3 <= rhs3 + slack3 + 1e-12};

  res.all_ok = res.p1_ok && res.cond_entropy.ok && res.sq_constraint.ok &&
               res.marg_entropy.ok;
  return res;
}

} // namespace awgn
