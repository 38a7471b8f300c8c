#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "types.hpp"

namespace awgn {

struct enumeration_ceiling_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t default_enum_ceiling = 10'000'000;

// Letters usable by power-constrained types: |i * delta| <= sqrt(n c).
// Returns (exact count, analytic bound 2 sqrt(c) n^{1/2+alpha} + 1).
struct alphabet_size {
  std::int64_t exact;
  double bound;
  std::int64_t i_max; // letters are i in [-i_max, i_max]
};

inline alphabet_size alphabet_subset(const lattice_config& cfg, double c, axis_kind axis) {
  if (!(c > 0.0)) {
    if (c == 0.0) return {1, 1.0, 0};
    throw std::domain_error("alphabet_subset: c must be >= 0");
  }
  const double delta = axis_delta(cfg, axis);
  const double expo = axis == axis_kind::X ? cfg.alpha : cfg.beta;
  const std::int64_t imax = (std::int64_t)std::floor(std::sqrt((double)cfg.n * c) / delta);
  return {2 * imax + 1, 2.0 * std::sqrt(c) * std::pow((double)cfg.n, 0.5 + expo) + 1.0, imax};
}

namespace detail {

// Power budgets carry a tiny slack so letters exactly on the constraint
// boundary (e.g. |i delta| = sqrt(n c)) are admitted despite rounding.
inline constexpr double budget_slack = 1e-9;

template <typename Visit>
void enumerate_types_impl(const lattice_config& cfg, double c, axis_kind axis,
                          std::uint64_t ceiling, Visit&& visit) {
  const auto ab = alphabet_subset(cfg, c, axis);
  const double delta = axis_delta(cfg, axis);
  std::vector<std::int64_t> letters;
  for (std::int64_t i = -ab.i_max; i <= ab.i_max; ++i) letters.push_back(i);
  std::vector<double> weight(letters.size());
  for (std::size_t k = 0; k < letters.size(); ++k)
    weight[k] = (letters[k] * delta) * (letters[k] * delta);

  type_pmf cur;
  cur.n = cfg.n;
  cur.axis = axis;
  std::uint64_t emitted = 0, visited = 0;

  std::function<void(std::size_t, std::int64_t, double)> dfs =
      [&](std::size_t idx, std::int64_t rem, double budget) {
        if (++visited > 32 * ceiling)
          throw enumeration_ceiling_error("enumerate_types: search-state ceiling exceeded");
        if (rem == 0) {
          if (++emitted > ceiling)
            throw enumeration_ceiling_error("enumerate_types: ceiling exceeded");
          visit((const type_pmf&)cur);
          return;
        }
        if (idx == letters.size()) return;
        std::int64_t cmax = rem;
        if (weight[idx] > 0.0)
          cmax = std::min(cmax, (std::int64_t)(budget / weight[idx]));
        for (std::int64_t cnt = 0; cnt <= cmax; ++cnt) {
          if (cnt > 0) cur.counts[letters[idx]] = cnt;
          dfs(idx + 1, rem - cnt, budget - cnt * weight[idx]);
          if (cnt > 0) cur.counts.erase(letters[idx]);
        }
      };
  dfs(0, cfg.n, (double)cfg.n * c + budget_slack);
}

template <typename Visit>
void enumerate_joint_types_impl(const lattice_config& cfg, double c_x, double c_y,
                                std::uint64_t ceiling, Visit&& visit) {
  const auto ax = alphabet_subset(cfg, c_x, axis_kind::X);
  const auto ay = alphabet_subset(cfg, c_y, axis_kind::Y);
  const double da = cfg.delta_alpha(), db = cfg.delta_beta();
  struct cell {
    std::int64_t i, j;
    double wx, wy;
  };
  std::vector<cell> cells;
  for (std::int64_t i = -ax.i_max; i <= ax.i_max; ++i)
    for (std::int64_t j = -ay.i_max; j <= ay.i_max; ++j)
      cells.push_back({i, j, (i * da) * (i * da), (j * db) * (j * db)});

  joint_type_pmf cur;
  cur.n = cfg.n;
  std::uint64_t emitted = 0, visited = 0;

  std::function<void(std::size_t, std::int64_t, double, double)> dfs =
      [&](std::size_t idx, std::int64_t rem, double bx, double by) {
        if (++visited > 32 * ceiling)
          throw enumeration_ceiling_error(
              "enumerate_joint_types: search-state ceiling exceeded");
        if (rem == 0) {
          if (++emitted > ceiling)
            throw enumeration_ceiling_error("enumerate_joint_types: ceiling exceeded");
          visit((const joint_type_pmf&)cur);
          return;
        }
        if (idx == cells.size()) return;
        const cell& cl = cells[idx];
        std::int64_t cmax = rem;
        if (cl.wx > 0.0) cmax = std::min(cmax, (std::int64_t)(bx / cl.wx));
        if (cl.wy > 0.0) cmax = std::min(cmax, (std::int64_t)(by / cl.wy));
        for (std::int64_t cnt = 0; cnt <= cmax; ++cnt) {
          if (cnt > 0) cur.counts[{cl.i, cl.j}] = cnt;
          dfs(idx + 1, rem - cnt, bx - cnt * cl.wx, by - cnt * cl.wy);
          if (cnt > 0) cur.counts.erase({cl.i, cl.j});
        }
      };
  dfs(0, cfg.n, (double)cfg.n * c_x + budget_slack, (double)cfg.n * c_y + budget_slack);
}

} // namespace detail

// All types with denominator n, power-constrained alphabet and
// E[X^2] <= c; deterministic order (letters ascending, counts ascending).
template <typename Visit>
void for_each_type(const lattice_config& cfg, double c, axis_kind axis, Visit&& visit,
                   std::uint64_t ceiling = default_enum_ceiling) {
  detail::enumerate_types_impl(cfg, c, axis, ceiling, std::forward<Visit>(visit));
}

inline std::vector<type_pmf> enumerate_types(const lattice_config& cfg, double c,
                                             axis_kind axis,
                                             std::uint64_t ceiling = default_enum_ceiling) {
  std::vector<type_pmf> out;
  for_each_type(cfg, c, axis, [&](const type_pmf& t) { out.push_back(t); }, ceiling);
  return out;
}

// All joint types with both marginal power constraints.
template <typename Visit>
void for_each_joint_type(const lattice_config& cfg, double c_x, double c_y, Visit&& visit,
                         std::uint64_t ceiling = default_enum_ceiling) {
  detail::enumerate_joint_types_impl(cfg, c_x, c_y, ceiling, std::forward<Visit>(visit));
}

// Counting bounds, in log_b space.
struct counting_bounds {
  double crude_log;    // (2 sqrt(c_x)+1) n^{1/2+alpha} log_b(n+1)
  double improved_log; // c~ n^{(1+2 alpha)/3} log_b((n+1) c)
};

inline counting_bounds count_types_bounds(const lattice_config& cfg, double c_x,
                                          double log_base) {
  const double lnb = std::log(log_base);
  const double n = (double)cfg.n;
  const double crude =
      (2.0 * std::sqrt(c_x) + 1.0) * std::pow(n, 0.5 + cfg.alpha) * std::log(n + 1.0) / lnb;
  const double c = std::pow(2.0 * std::sqrt(c_x) + 1.0, 1.0 / (1.5 + cfg.alpha));
  const double ct = (1.5 + cfg.alpha) * std::cbrt(12.0 * c_x + 1.0);
  const double improved =
      ct * std::pow(n, (1.0 + 2.0 * cfg.alpha) / 3.0) * std::log((n + 1.0) * c) / lnb;
  return {crude, improved};
}

inline double count_joint_types_bound_log(const lattice_config& cfg, double c_x, double c_y,
                                          double log_base) {
  const double lnb = std::log(log_base);
  const double n = (double)cfg.n;
  const double c = std::pow((2.0 * std::sqrt(c_x) + 1.0) * (2.0 * std::sqrt(c_y) + 1.0),
                            1.0 / (2.0 + cfg.alpha + cfg.beta));
  const double ct =
      (2.0 + cfg.alpha + cfg.beta) * std::sqrt(2.0 * M_PI * (c_x + c_y + 1.0 / 6.0));
  return ct * std::pow(n, (1.0 + cfg.alpha + cfg.beta) / 2.0) * std::log((n + 1.0) * c) / lnb;
}

// Support sizes of a joint type and its marginals with their analytic bounds.
struct support_report {
  std::size_t size_xy, size_x, size_y;
  double bound_xy, bound_x, bound_y;
  bool all_ok;
};

inline support_report support_bounds(const joint_type_pmf& j, const lattice_config& cfg,
                                     double c_x, double c_y) {
  const auto px = j.marginal(axis_kind::X);
  const auto py = j.marginal(axis_kind::Y);
  if (px.second_moment(cfg.delta_alpha()) > c_x + detail::budget_slack ||
      py.second_moment(cfg.delta_beta()) > c_y + detail::budget_slack)
    throw std::domain_error("support_bounds: power constraint violated");
  const double n = (double)j.n;
  support_report r{};
  r.size_xy = j.support_size();
  r.size_x = px.support_size();
  r.size_y = py.support_size();
  r.bound_xy = std::sqrt(2.0 * M_PI * (c_x + c_y + 1.0 / 6.0)) *
               std::pow(n, (1.0 + cfg.alpha + cfg.beta) / 2.0);
  r.bound_x = std::cbrt(12.0 * c_x + 1.0) * std::pow(n, (1.0 + 2.0 * cfg.alpha) / 3.0);
  r.bound_y = std::cbrt(12.0 * c_y + 1.0) * std::pow(n, (1.0 + 2.0 * cfg.beta) / 3.0);
  r.all_ok = (double)r.size_xy <= r.bound_xy && (double)r.size_x <= r.bound_x &&
             (double)r.size_y <= r.bound_y;
  return r;
}

namespace detail {

// Enumerate all joint types extending the fixed x-marginal p_x, subject to
// the shared E[(Y-X)^2] budget; visit each completed joint type.
template <typename Visit>
void for_each_conditional_joint(const type_pmf& p_x, const lattice_config& cfg,
                                double sq_diff_bound, Visit&& visit,
                                std::uint64_t ceiling = default_enum_ceiling) {
  const double da = cfg.delta_alpha(), db = cfg.delta_beta();
  std::vector<std::pair<std::int64_t, std::int64_t>> rows(p_x.counts.begin(),
                                                          p_x.counts.end());
  joint_type_pmf cur;
  cur.n = p_x.n;
  const double total_budget = (double)p_x.n * sq_diff_bound + budget_slack;
  std::uint64_t emitted = 0;

  // per-row y-letter window: any occupied cell needs (y - x)^2 <= budget
  std::function<void(std::size_t, std::int64_t, std::int64_t, double)> fill_row;
  std::function<void(std::size_t, double)> next_row = [&](std::size_t r, double budget) {
    if (r == rows.size()) {
      if (++emitted > ceiling)
        throw enumeration_ceiling_error("for_each_conditional_joint: ceiling exceeded");
      visit((const joint_type_pmf&)cur);
      return;
    }
    const double x = rows[r].first * da;
    const double span = std::sqrt(std::max(0.0, budget));
    const std::int64_t j_lo = (std::int64_t)std::ceil((x - span) / db - 1e-12);
    const std::int64_t j_hi = (std::int64_t)std::floor((x + span) / db + 1e-12);
    fill_row(r, j_lo, rows[r].second, budget);
    (void)j_hi;
  };
  fill_row = [&](std::size_t r, std::int64_t j, std::int64_t rem, double budget) {
    if (rem == 0) {
      next_row(r + 1, budget);
      return;
    }
    const double x = rows[r].first * da;
    const double span = std::sqrt(std::max(0.0, budget));
    const std::int64_t j_hi = (std::int64_t)std::floor((x + span) / db + 1e-12);
    if (j > j_hi) return;
    const double d = j * db - x;
    const double w = d * d;
    std::int64_t cmax = rem;
    if (w > 0.0) cmax = std::min(cmax, (std::int64_t)(budget / w));
    for (std::int64_t cnt = 0; cnt <= cmax; ++cnt) {
      if (cnt > 0) cur.counts[{rows[r].first, j}] = cnt;
      fill_row(r, j + 1, rem - cnt, budget - cnt * w);
      if (cnt > 0) cur.counts.erase({rows[r].first, j});
    }
  };
  next_row(0, total_budget);
}

} // namespace detail

// min over joint types extending p_x with E[(Y-X)^2] <= sigma_tilde2 + eps of
//   D(P_{Y|X} || W_n | P_X) + |R - I|^+ .
// Empty optional when no joint type satisfies the constraint.
inline std::optional<double> finite_n_correct_exponent(
    const type_pmf& p_x, double rate, double sigma_tilde2, double eps,
    const channel_spec& ch, const lattice_config& cfg,
    std::uint64_t ceiling = default_enum_ceiling) {
  std::optional<double> best;
  detail::for_each_conditional_joint(
      p_x, cfg, sigma_tilde2 + eps,
      [&](const joint_type_pmf& j) {
        const double v = kl_type_vs_channel_measure(j, ch, cfg) +
                         std::max(0.0, rate - mutual_info_type(j, ch.log_base));
        if (!best || v < *best) best = v;
      },
      ceiling);
  return best;
}

// min over joint types extending p_x with E[(Y-X)^2] <= c_xy and
// I <= rate - eps of D(P_{Y|X} || W_n | P_X); empty optional if infeasible.
inline std::optional<double> finite_n_error_exponent_bound(
    const type_pmf& p_x, double rate, double eps, double c_xy, const channel_spec& ch,
    const lattice_config& cfg, std::uint64_t ceiling = default_enum_ceiling) {
  if (!(rate > eps))
    throw std::domain_error("finite_n_error_exponent_bound: need rate > eps");
  std::optional<double> best;
  detail::for_each_conditional_joint(
      p_x, cfg, c_xy,
      [&](const joint_type_pmf& j) {
        if (mutual_info_type(j, ch.log_base) > rate - eps + 1e-15) return;
        const double v = kl_type_vs_channel_measure(j, ch, cfg);
        if (!best || v < *best) best = v;
      },
      ceiling);
  return best;
}

} // namespace awgn
