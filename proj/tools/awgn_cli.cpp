#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <awgn/bridge.hpp>
#include <awgn/exponents.hpp>
#include <awgn/quantize.hpp>
#include <awgn/rng.hpp>
#include <awgn/simulate.hpp>
#include <awgn/type_counting.hpp>

namespace {

constexpr const char* tool_version = "0.1.0";

// exit codes: 0 pass, 1 audit failure, 2 usage, 3 infeasible/ceiling
enum exit_code { exit_ok = 0, exit_audit = 1, exit_usage = 2, exit_infeasible = 3 };

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  std::string s = buf;
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Manifest lines are '#'-prefixed comments so the data section below them
// can be compared byte-exactly across reruns (timestamps live only here).
std::string csv_manifest(const std::string& command,
                         const std::vector<std::pair<std::string, std::string>>& params) {
  std::ostringstream os;
  os << "# manifest: command=" << command;
  for (const auto& [k, v] : params) os << ' ' << k << '=' << v;
  os << " version=" << tool_version << '\n';
  os << "# timestamp: " << timestamp_utc() << '\n';
  return os.str();
}

struct common_channel_flags {
  double snr = 1.0;
  double sigma2 = 1.0;
  std::string base = "2";

  double log_base() const {
    if (base == "2") return 2.0;
    if (base == "e") return std::exp(1.0);
    throw CLI::ValidationError("--base", "must be '2' or 'e'");
  }

  awgn::channel_spec channel() const {
    return awgn::channel_spec(snr * sigma2, sigma2, log_base());
  }
};

void add_channel_flags(CLI::App* cmd, common_channel_flags& f) {
  cmd->add_option("--snr", f.snr, "signal-to-noise ratio s^2/sigma^2")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma2", f.sigma2, "noise variance sigma^2")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--base", f.base, "logarithm base: 2 (bits) or e (nats)");
}

// ---------------------------------------------------------------------------

int run_capacity(const common_channel_flags& f) {
  std::cout << fmt6(awgn::capacity(f.channel())) << '\n';
  return exit_ok;
}

int run_exponent_curve(const common_channel_flags& f, double rate_min, double rate_max,
                       int points, const std::string& kind, const std::string& out) {
  if (!(rate_min > 0.0 && rate_max >= rate_min))
    throw CLI::ValidationError("--rate-min/--rate-max", "need 0 < rate-min <= rate-max");
  const awgn::channel_spec ch = f.channel();
  std::ostringstream data;
  data << "rate,rho_star,exponent,shannon_form,kind\n";
  bool audit_ok = true;
  auto emit = [&](double rate, bool error_kind) {
    if (error_kind) {
      const auto pt = awgn::error_exponent(ch, rate);
      const double sf = awgn::shannon_sphere_packing(ch, rate);
      if (std::fabs(pt.exponent - sf) >= 1e-6) audit_ok = false;
      data << fmt17(rate) << ',' << fmt17(pt.rho_star) << ',' << fmt17(pt.exponent)
           << ',' << fmt17(sf) << ",error\n";
    } else {
      const auto pt = awgn::correct_decoding_exponent(ch, rate);
      data << fmt17(rate) << ',' << fmt17(pt.rho_star) << ',' << fmt17(pt.exponent)
           << ",,correct\n";
    }
  };
  for (int i = 0; i < points; ++i) {
    const double rate =
        points == 1 ? rate_min
                    : rate_min + (rate_max - rate_min) * (double)i / (double)(points - 1);
    if (kind == "error" || kind == "both") emit(rate, true);
    if (kind == "correct" || kind == "both") emit(rate, false);
  }
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  os << csv_manifest("exponent-curve", {{"snr", fmt17(f.snr)},
                                        {"sigma2", fmt17(f.sigma2)},
                                        {"base", f.base},
                                        {"rate-min", fmt17(rate_min)},
                                        {"rate-max", fmt17(rate_max)},
                                        {"points", std::to_string(points)},
                                        {"kind", kind}})
     << data.str();
  std::cout << (audit_ok ? "exponent-curve: all dual-formula checks passed\n"
                         : "exponent-curve: AUDIT FAILURE (dual-formula mismatch)\n");
  return audit_ok ? exit_ok : exit_audit;
}

int run_parametric(const common_channel_flags& f, double rho_min_arg, double rho_max,
                   int points, const std::string& out) {
  if (!(rho_min_arg > -1.0 && rho_max >= rho_min_arg))
    throw CLI::ValidationError("--rho-min/--rho-max", "need -1 < rho-min <= rho-max");
  const awgn::channel_spec ch = f.channel();
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = points == 1 ? rho_min_arg
                          : rho_min_arg + (rho_max - rho_min_arg) * (double)i /
                                              (double)(points - 1);
  const auto curve = awgn::parametric_curve(ch, grid);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  os << csv_manifest("parametric", {{"snr", fmt17(f.snr)},
                                    {"sigma2", fmt17(f.sigma2)},
                                    {"base", f.base},
                                    {"rho-min", fmt17(rho_min_arg)},
                                    {"rho-max", fmt17(rho_max)},
                                    {"points", std::to_string(points)}});
  os << "rate,rho_star,exponent,kind\n";
  for (const auto& pt : curve)
    os << fmt17(pt.rate) << ',' << fmt17(pt.rho_star) << ',' << fmt17(pt.exponent)
       << ',' << (pt.kind == awgn::exponent_kind::error ? "error" : "correct") << '\n';
  std::cout << "parametric: " << curve.size() << " points written\n";
  return exit_ok;
}

int run_types_audit(std::int64_t n, double alpha, double beta, double cx, double cy,
                    const std::string& out) {
  const awgn::lattice_config cfg(n, alpha, beta);
  struct row {
    std::string name, exact;
    double bound;
    bool pass;
  };
  std::vector<row> rows;
  const auto ab_x = awgn::alphabet_subset(cfg, cx, awgn::axis_kind::X);
  const auto ab_y = awgn::alphabet_subset(cfg, cy, awgn::axis_kind::Y);
  rows.push_back({"alphabet_x", std::to_string(ab_x.exact), ab_x.bound,
                  (double)ab_x.exact <= ab_x.bound});
  rows.push_back({"alphabet_y", std::to_string(ab_y.exact), ab_y.bound,
                  (double)ab_y.exact <= ab_y.bound});

  const auto tb = awgn::count_types_bounds(cfg, cx, 2.0);
  const double jb = awgn::count_joint_types_bound_log(cfg, cx, cy, 2.0);

  // stream the enumeration (no storage); very wide alphabets cannot stay
  // under the ceiling and would recurse too deeply, so skip them outright
  bool enumerable = ab_x.exact <= 4096;
  std::int64_t type_count = 0;
  bool motsup = true;
  if (enumerable) try {
      awgn::for_each_type(cfg, cx, awgn::axis_kind::X, [&](const awgn::type_pmf& t) {
        ++type_count;
        const auto b = awgn::type_class_log_size(t, 2.0);
        if (!(b.lower <= b.exact_log + 1e-10 && b.exact_log <= b.upper + 1e-10))
          motsup = false;
      });
    } catch (const awgn::enumeration_ceiling_error&) {
      enumerable = false;
    }
  if (enumerable) {
    const double exact_log = std::log2((double)type_count);
    rows.push_back({"num_types_x_log2_crude", fmt17(exact_log), tb.crude_log,
                    exact_log <= tb.crude_log});
    rows.push_back({"num_types_x_log2_improved", fmt17(exact_log), tb.improved_log,
                    exact_log <= tb.improved_log});
    rows.push_back({"motsup_sandwich_types", "NA", 1e-10, motsup});
  } else {
    rows.push_back({"num_types_x_log2_crude", "NA", tb.crude_log, true});
    rows.push_back({"num_types_x_log2_improved", "NA", tb.improved_log, true});
  }

  bool joint_enumerable = (double)ab_x.exact * (double)ab_y.exact <= 4096.0;
  std::int64_t joint_count = 0;
  bool joint_motsup = true, joint_support = true;
  std::size_t max_sxy = 0, max_sx = 0, max_sy = 0;
  double bound_xy = 0.0, bound_x = 0.0, bound_y = 0.0;
  if (joint_enumerable) try {
    awgn::for_each_joint_type(cfg, cx, cy, [&](const awgn::joint_type_pmf& j) {
      ++joint_count;
      const auto b = awgn::type_class_log_size(j, 2.0);
      if (!(b.lower <= b.exact_log + 1e-10 && b.exact_log <= b.upper + 1e-10))
        joint_motsup = false;
      const auto s = awgn::support_bounds(j, cfg, cx, cy);
      if (!s.all_ok) joint_support = false;
      max_sxy = std::max(max_sxy, s.size_xy);
      max_sx = std::max(max_sx, s.size_x);
      max_sy = std::max(max_sy, s.size_y);
      bound_xy = s.bound_xy;
      bound_x = s.bound_x;
      bound_y = s.bound_y;
    });
  } catch (const awgn::enumeration_ceiling_error&) {
    joint_enumerable = false;
  }
  if (joint_enumerable) {
    const double exact_log = std::log2((double)std::max<std::int64_t>(joint_count, 1));
    rows.push_back({"num_joint_types_log2", fmt17(exact_log), jb, exact_log <= jb});
    rows.push_back({"motsup_sandwich_joint", "NA", 1e-10, joint_motsup});
    rows.push_back({"support_xy_max", std::to_string(max_sxy), bound_xy, joint_support});
    rows.push_back({"support_x_max", std::to_string(max_sx), bound_x,
                    (double)max_sx <= bound_x});
    rows.push_back({"support_y_max", std::to_string(max_sy), bound_y,
                    (double)max_sy <= bound_y});
  } else {
    rows.push_back({"num_joint_types_log2", "NA", jb, true});
  }

  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  os << csv_manifest("types-audit", {{"n", std::to_string(n)},
                                     {"alpha", fmt17(alpha)},
                                     {"beta", fmt17(beta)},
                                     {"cx", fmt17(cx)},
                                     {"cy", fmt17(cy)}});
  os << "name,exact,bound,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    os << r.name << ',' << r.exact << ',' << fmt17(r.bound) << ','
       << (r.pass ? "true" : "false") << '\n';
    all = all && r.pass;
  }
  if (!enumerable || !joint_enumerable)
    std::cout << "types-audit: enumeration infeasible; bounds-only report\n";
  std::cout << (all ? "types-audit: all bounds hold\n"
                    : "types-audit: AUDIT FAILURE\n");
  return all ? exit_ok : exit_audit;
}

int run_quant_audit(std::int64_t n, double alpha, double beta, double snr,
                    int instances, std::uint64_t seed, const std::string& out) {
  const awgn::lattice_config cfg(n, alpha, beta);
  const awgn::channel_spec ch(snr, 1.0, 2.0);
  if (!awgn::lattice_hypothesis_ok(cfg)) {
    std::cerr << "quant-audit: (alpha, beta) outside the admissible region: need "
                 "alpha in (0, 1/4) and beta in (1/3 + 2a/3, 2/3 - 2a/3); got alpha="
              << alpha << " beta=" << beta << '\n';
    return exit_infeasible;
  }
  std::ostringstream data;
  data << "instance,check,lhs,rhs,slack,pass\n";
  bool all = true;
  std::optional<std::int64_t> precondition_note;
  auto emit = [&](int inst, const std::string& name, double lhs, double rhs,
                  double slack, bool pass) {
    data << inst << ',' << name << ',' << fmt17(lhs) << ',' << fmt17(rhs) << ','
         << fmt17(slack) << ',' << (pass ? "true" : "false") << '\n';
    all = all && pass;
  };
  for (int inst = 0; inst < instances; ++inst) {
    awgn::counter_rng rng(seed, (std::uint64_t)inst + 1);
    // density-exponent sandwich on a random constrained pair
    {
      std::vector<double> x(n), y(n);
      const double sd = std::sqrt(ch.s2 * 0.9);
      for (auto& v : x) v = sd * rng.next_gaussian();
      for (std::size_t k = 0; k < y.size(); ++k)
        y[k] = x[k] + std::sqrt(ch.sigma2) * rng.next_gaussian();
      const auto pair = awgn::make_quantized_pair(x, y, cfg);
      double c_xy = 0.0;
      for (std::int64_t k = 0; k < n; ++k) {
        const double d =
            pair.y_q[k] * cfg.delta_beta() - pair.x_q[k] * cfg.delta_alpha();
        c_xy += d * d;
      }
      const auto r = awgn::pdf_exponent_sandwich(pair, ch, c_xy / (double)n + 1e-12);
      emit(inst, "exp_sandwich_lower", r.lower, r.exact, 0.0, r.exact >= r.lower - 1e-12);
      emit(inst, "exp_sandwich_upper", r.exact, r.upper, 0.0, r.exact <= r.upper + 1e-12);
    }
    // pdf-to-type bridge inequalities on a random (p_x, rho-row) instance
    {
      awgn::type_pmf px;
      px.n = n;
      std::int64_t left = n;
      for (int k = 0; k < 5; ++k) {
        const std::int64_t c = 1 + (std::int64_t)(rng.next_below((std::uint64_t)left / 2 + 1));
        px.counts[(std::int64_t)rng.next_below(17) - 8] += c;
        left -= c;
      }
      px.counts[(std::int64_t)rng.next_below(17) - 8] += left;
      const double rho = -0.5 + 2.5 * rng.next_double();
      const awgn::rho_point p = awgn::make_rho_point(ch, rho);
      awgn::gaussian_cond_family fam(p.k_rho, p.sigma2_yx);
      const double c_x = px.second_moment(cfg.delta_alpha()) + 1e-9;
      const double c_xy = p.sigma2_yx + (1.0 - p.k_rho) * (1.0 - p.k_rho) * c_x;
      const double c_y = std::pow(std::sqrt(c_x) + std::sqrt(c_xy), 2.0);
      const auto res = awgn::pdf_to_type(px, fam, cfg, {c_x, c_y, c_xy}, 2.0);
      if (!res.slack.h_precondition_ok || !res.slack.h_tilde_precondition_ok)
        precondition_note = res.slack.n0;
      emit(inst, "bridge_prob_loss", res.p1, res.slack.p1_bound, 0.0, res.p1_ok);
      emit(inst, "bridge_cond_entropy", res.cond_entropy.lhs, res.cond_entropy.rhs_base,
           res.cond_entropy.slack, res.cond_entropy.ok);
      emit(inst, "bridge_sq_constraint", res.sq_constraint.lhs,
           res.sq_constraint.rhs_base, res.sq_constraint.slack, res.sq_constraint.ok);
      emit(inst, "bridge_marg_entropy", res.marg_entropy.lhs, res.marg_entropy.rhs_base,
           res.marg_entropy.slack, res.marg_entropy.ok);
    }
  }
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  os << csv_manifest("quant-audit", {{"n", std::to_string(n)},
                                     {"alpha", fmt17(alpha)},
                                     {"beta", fmt17(beta)},
                                     {"snr", fmt17(snr)},
                                     {"instances", std::to_string(instances)},
                                     {"seed", std::to_string(seed)}})
     << data.str();
  if (precondition_note)
    std::cout << "quant-audit: note: n too small for the slack formulas (the "
                 "h and h-tilde preconditions need n >= "
              << *precondition_note
              << "); slacks reported are vacuous upper bounds at this n\n";
  std::cout << (all ? "quant-audit: all checks passed\n"
                    : "quant-audit: AUDIT FAILURE\n");
  return all ? exit_ok : exit_audit;
}

int run_simulate(std::int64_t n, double rate_frac, double snr, std::uint64_t trials,
                 std::uint64_t seed, const std::string& rule, const std::string& out) {
  const awgn::channel_spec ch(snr, 1.0, 2.0);
  const double rate = rate_frac * awgn::capacity(ch);
  awgn::sim_config cfg(n, rate, ch); // throws on M cap violation
  cfg.trials = trials;
  cfg.seed = seed;
  if (rule == "gaussian")
    cfg.rule = awgn::codebook_rule::gaussian_iid_projected;
  else if (rule == "sphere")
    cfg.rule = awgn::codebook_rule::uniform_sphere;
  else
    throw CLI::ValidationError("--rule", "must be 'gaussian' or 'sphere'");
  const auto r = awgn::run(cfg);

  nlohmann::json j;
  j["manifest"] = {{"command", "simulate"},
                   {"n", n},
                   {"rate_frac_of_capacity", rate_frac},
                   {"snr", snr},
                   {"trials", trials},
                   {"seed", seed},
                   {"rule", rule},
                   {"version", tool_version},
                   {"timestamp", timestamp_utc()}};
  j["result"] = {{"trials", r.trials},
                 {"errors", r.errors},
                 {"corrects", r.corrects},
                 {"p_err_hat", r.p_err_hat},
                 {"p_correct_hat", r.p_correct_hat},
                 {"p_err_ci", {r.p_err_ci.first, r.p_err_ci.second}},
                 {"p_correct_ci", {r.p_correct_ci.first, r.p_correct_ci.second}}};
  if (r.errors > 0) j["result"]["emp_error_exponent"] = r.emp_error_exponent;
  if (r.corrects > 0) j["result"]["emp_correct_exponent"] = r.emp_correct_exponent;
  j["analytic"] = {{"rate", rate},
                   {"capacity", awgn::capacity(ch)},
                   {"E_sp", awgn::shannon_sphere_packing(ch, rate)},
                   {"E_c", awgn::correct_decoding_exponent(ch, rate).exponent}};
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  os << j.dump(2) << '\n';
  std::cout << "simulate: p_err_hat=" << fmt6(r.p_err_hat)
            << " p_correct_hat=" << fmt6(r.p_correct_hat) << '\n';
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"AWGN reliability-exponent toolkit"};
  app.require_subcommand(1);

  common_channel_flags cap_f, curve_f, par_f;

  auto* cap = app.add_subcommand("capacity", "print channel capacity");
  add_channel_flags(cap, cap_f);

  auto* curve = app.add_subcommand("exponent-curve", "E_e/E_c over a rate grid (CSV)");
  add_channel_flags(curve, curve_f);
  double rate_min = 0.0, rate_max = 0.0;
  int curve_points = 50;
  std::string curve_kind = "both", curve_out;
  curve->add_option("--rate-min", rate_min)->required();
  curve->add_option("--rate-max", rate_max)->required();
  curve->add_option("--points", curve_points)->check(CLI::PositiveNumber);
  curve->add_option("--kind", curve_kind)
      ->check(CLI::IsMember({"error", "correct", "both"}));
  curve->add_option("--out", curve_out)->required();

  auto* par = app.add_subcommand("parametric", "parametric (R(rho), E(rho)) table (CSV)");
  add_channel_flags(par, par_f);
  double rho_lo = -0.5, rho_hi = 2.0;
  int par_points = 25;
  std::string par_out;
  par->add_option("--rho-min", rho_lo);
  par->add_option("--rho-max", rho_hi);
  par->add_option("--points", par_points)->check(CLI::PositiveNumber);
  par->add_option("--out", par_out)->required();

  auto* ta = app.add_subcommand("types-audit", "method-of-types counting audits (CSV)");
  std::int64_t ta_n = 6;
  double ta_alpha = 0.3, ta_beta = 0.3, ta_cx = 0.5, ta_cy = 0.5;
  std::string ta_out;
  ta->add_option("--n", ta_n)->required()->check(CLI::PositiveNumber);
  ta->add_option("--alpha", ta_alpha);
  ta->add_option("--beta", ta_beta);
  ta->add_option("--cx", ta_cx)->check(CLI::PositiveNumber);
  ta->add_option("--cy", ta_cy)->check(CLI::PositiveNumber);
  ta->add_option("--out", ta_out)->required();

  auto* qa = app.add_subcommand("quant-audit", "quantization and pdf-to-type bridge audits (CSV)");
  std::int64_t qa_n = 10000;
  double qa_alpha = 0.2, qa_beta = 0.5, qa_snr = 1.0;
  int qa_instances = 10;
  std::uint64_t qa_seed = 0;
  std::string qa_out;
  qa->add_option("--n", qa_n)->check(CLI::PositiveNumber);
  qa->add_option("--alpha", qa_alpha);
  qa->add_option("--beta", qa_beta);
  qa->add_option("--snr", qa_snr)->check(CLI::PositiveNumber);
  qa->add_option("--instances", qa_instances)->check(CLI::PositiveNumber);
  qa->add_option("--seed", qa_seed);
  qa->add_option("--out", qa_out)->required();

  auto* sim = app.add_subcommand("simulate", "Monte Carlo ML-decoding run (JSON)");
  std::int64_t sim_n = 24;
  double sim_frac = 0.5, sim_snr = 1.0;
  std::uint64_t sim_trials = 10000, sim_seed = 0;
  std::string sim_rule = "gaussian", sim_out;
  sim->add_option("--n", sim_n)->required()->check(CLI::PositiveNumber);
  sim->add_option("--rate-frac-of-capacity", sim_frac)->required()
      ->check(CLI::PositiveNumber);
  sim->add_option("--snr", sim_snr)->check(CLI::PositiveNumber);
  sim->add_option("--trials", sim_trials);
  sim->add_option("--seed", sim_seed);
  sim->add_option("--rule", sim_rule)->check(CLI::IsMember({"gaussian", "sphere"}));
  sim->add_option("--out", sim_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (cap->parsed()) return run_capacity(cap_f);
    if (curve->parsed())
      return run_exponent_curve(curve_f, rate_min, rate_max, curve_points, curve_kind,
                                curve_out);
    if (par->parsed()) return run_parametric(par_f, rho_lo, rho_hi, par_points, par_out);
    if (ta->parsed()) return run_types_audit(ta_n, ta_alpha, ta_beta, ta_cx, ta_cy, ta_out);
    if (qa->parsed())
      return run_quant_audit(qa_n, qa_alpha, qa_beta, qa_snr, qa_instances, qa_seed,
                             qa_out);
    if (sim->parsed())
      return run_simulate(sim_n, sim_frac, sim_snr, sim_trials, sim_seed, sim_rule,
                          sim_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  } catch (const awgn::enumeration_ceiling_error& e) {
    std::cerr << e.what() << '\n';
    return exit_infeasible;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << '\n';
    return exit_infeasible;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}
