#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proxsamp/common.hpp"
#include "proxsamp/concentration.hpp"
#include "proxsamp/config.hpp"
#include "proxsamp/csv.hpp"
#include "proxsamp/metrics.hpp"
#include "proxsamp/potentials.hpp"
#include "proxsamp/rgo.hpp"
#include "proxsamp/sampler.hpp"
#include "proxsamp/stats.hpp"
#include "proxsamp/stepsize.hpp"

namespace proxsamp {
namespace cli {

struct Args {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  int jobs = 1;
};

inline Args parse_args(const std::vector<std::string>& argv) {
  if (argv.empty())
    throw InputError(
        "usage: proxsamp {plan|sample|verify-rgo|verify-conc|benchmark} --config <path> "
        "[--seed N] [--out DIR] [--jobs N]");
  Args args;
  args.command = argv[0];
  const std::set<std::string> commands{"plan", "sample", "verify-rgo", "verify-conc",
                                       "benchmark"};
  if (!commands.count(args.command))
    throw InputError("unknown command: " + args.command);
  for (std::size_t i = 1; i < argv.size(); ++i) {
    const std::string& flag = argv[i];
    auto need_value = [&](const char* name) -> const std::string& {
      if (i + 1 >= argv.size()) throw InputError(std::string(name) + " requires a value");
      return argv[++i];
    };
    if (flag == "--config") {
      args.config_path = need_value("--config");
    } else if (flag == "--seed") {
      try {
        args.seed_override = std::stoull(need_value("--seed"));
      } catch (const std::exception&) {
        throw InputError("--seed must be an unsigned integer");
      }
    } else if (flag == "--out") {
      args.out_override = need_value("--out");
    } else if (flag == "--jobs") {
      try {
        args.jobs = int(std::stol(need_value("--jobs")));
      } catch (const std::exception&) {
        throw InputError("--jobs must be an integer");
      }
      if (args.jobs < 1) throw InputError("--jobs must be >= 1");
    } else {
      throw InputError("unknown flag: " + flag);
    }
  }
  if (args.config_path.empty()) throw InputError("--config is required");
  return args;
}

// Resolved per-run context: root seed, output directory, config digest.
struct RunContext {
  std::uint64_t seed = 0;
  std::string out_dir;
  int jobs = 1;
  std::uint64_t digest = 0;
};

namespace detail {

inline const std::set<std::string> kTargetKeys{
    "name", "dim", "diag", "b", "l0", "width", "lambda", "separation", "weight1"};
inline const std::set<std::string> kRunKeys{"delta", "metric", "mode", "seed", "out"};
inline const std::set<std::string> kAssumptionKeys{
    "regime", "beta", "kl_init", "w2_init", "c_lsi", "c_pi", "chi2_init"};
inline const std::set<std::string> kSampleKeys{"x0", "x0_fill", "record_stride", "eta",
                                               "t_steps"};
inline const std::set<std::string> kRgoKeys{"y",       "y_fill",       "zeta",
                                            "eta",     "n_draws",      "max_proposals"};
inline const std::set<std::string> kConcKeys{"variant", "epsilon",   "eta",
                                             "s_offset", "n_samples", "quantiles",
                                             "r_grid",  "m",         "m_fill",
                                             "falsify_rate"};
inline const std::set<std::string> kBenchKeys{"eta", "t_steps", "chains", "n_directions",
                                              "x0_fill"};

// one schema for the whole toolkit: a key misspelled anywhere is a hard error,
// but configs may carry sections for several subcommands at once
inline std::map<std::string, std::set<std::string>> full_schema() {
  return {{"target", kTargetKeys},   {"run", kRunKeys}, {"assumption", kAssumptionKeys},
          {"sample", kSampleKeys},   {"rgo", kRgoKeys}, {"conc", kConcKeys},
          {"benchmark", kBenchKeys}};
}

inline Potential build_target(const ConfigFile& cfg) {
  BuiltinParams p;
  const std::string name = cfg.get_string("target", "name");
  p.dim = int(cfg.get_long("target", "dim", 1));
  p.diag = cfg.get_vec("target", "diag", {});
  p.b = cfg.get_vec("target", "b", {});
  p.l0 = cfg.get_double("target", "l0", 1.0);
  p.width = cfg.get_double("target", "width", 1.0);
  p.lambda = cfg.get_double("target", "lambda", 1.0);
  p.separation = cfg.get_double("target", "separation", 2.0);
  p.weight1 = cfg.get_double("target", "weight1", 0.5);
  if (!p.diag.empty() && !cfg.has("target", "dim")) p.dim = int(p.diag.size());
  return make_builtin(name, p);
}

inline Assumption build_assumption(const ConfigFile& cfg) {
  Assumption a;
  const std::string regime = cfg.get_string("assumption", "regime");
  if (regime == "strongly_log_concave")
    a.regime = Assumption::Regime::StronglyLogConcave;
  else if (regime == "log_concave")
    a.regime = Assumption::Regime::LogConcave;
  else if (regime == "lsi")
    a.regime = Assumption::Regime::LSI;
  else if (regime == "pi")
    a.regime = Assumption::Regime::PI;
  else
    throw InputError("unknown regime: " + regime);
  a.beta = cfg.get_double("assumption", "beta", 1.0);
  a.kl_init = cfg.get_double("assumption", "kl_init", 1.0);
  a.w2_init = cfg.get_double("assumption", "w2_init", 1.0);
  a.c_lsi = cfg.get_double("assumption", "c_lsi", 1.0);
  a.c_pi = cfg.get_double("assumption", "c_pi", 1.0);
  a.chi2_init = cfg.get_double("assumption", "chi2_init", 1.0);
  return a;
}

inline Metric parse_metric(const std::string& s) {
  if (s == "tv") return Metric::TV;
  if (s == "w2") return Metric::W2;
  throw InputError("metric must be `tv` or `w2`, got: " + s);
}

inline ProxMode parse_mode(const std::string& s) {
  if (s == "exact") return ProxMode::Exact;
  if (s == "approx") return ProxMode::Approx;
  throw InputError("mode must be `exact` or `approx`, got: " + s);
}

inline RunContext make_context(const ConfigFile& cfg, const Args& args) {
  RunContext ctx;
  ctx.seed = args.seed_override ? *args.seed_override
                                : cfg.get_u64("run", "seed", 0);
  ctx.out_dir = args.out_override ? *args.out_override
                                  : cfg.get_string("run", "out", ".");
  ctx.jobs = args.jobs;
  ctx.digest = config_digest(cfg.raw_text());
  std::filesystem::create_directories(ctx.out_dir);
  return ctx;
}

inline std::string path_in(const RunContext& ctx, const std::string& file) {
  return (std::filesystem::path(ctx.out_dir) / file).string();
}

inline Vec fill_or_vec(const ConfigFile& cfg, const std::string& section,
                       const std::string& key, int dim, double fill_default) {
  if (cfg.has(section, key)) {
    Vec v = cfg.get_vec(section, key);
    check_dim(std::size_t(dim), v.size(), key.c_str());
    return v;
  }
  const double fill = cfg.get_double(section, key + "_fill", fill_default);
  return Vec(std::size_t(dim), fill);
}

// ----- plan ---------------------------------------------------------------

inline int cmd_plan(const ConfigFile& cfg, const Args& args) {
  cfg.validate_keys(full_schema());
  const RunContext ctx = make_context(cfg, args);
  const Potential target = build_target(cfg);
  const Assumption a = build_assumption(cfg);
  const double delta = cfg.get_double("run", "delta");
  const Metric metric = parse_metric(cfg.get_string("run", "metric", "tv"));
  const ProxMode mode = parse_mode(cfg.get_string("run", "mode", "exact"));

  const Plan plan = plan_run(target, a, delta, metric, mode);

  std::cout << "regime = " << to_string(a.regime) << "\n"
            << "eta = " << fmt_g17(plan.eta) << "\n"
            << "T = " << plan.t_steps << "\n"
            << "zeta = " << fmt_g17(plan.zeta) << "\n"
            << "delta = " << fmt_g17(plan.delta) << "\n"
            << "metric = " << to_string(plan.metric) << "\n"
            << "mode = " << to_string(plan.mode) << "\n";

  CsvWriter csv(path_in(ctx, "plan.csv"), ctx.digest, ctx.seed);
  csv.header({"regime", "eta", "T", "zeta", "delta", "metric", "mode"});
  csv.row({to_string(a.regime), csv_cell(plan.eta), csv_cell(plan.t_steps),
           csv_cell(plan.zeta), csv_cell(plan.delta), to_string(plan.metric),
           to_string(plan.mode)});
  return 0;
}

// ----- sample ---------------------------------------------------------------

inline int cmd_sample(const ConfigFile& cfg, const Args& args) {
  cfg.validate_keys(full_schema());
  const RunContext ctx = make_context(cfg, args);
  const Potential target = build_target(cfg);
  const ProxMode mode = parse_mode(cfg.get_string("run", "mode", "exact"));

  Plan plan;
  if (cfg.has("sample", "eta") && cfg.has("sample", "t_steps")) {
    plan.eta = cfg.get_double("sample", "eta");
    plan.t_steps = cfg.get_long("sample", "t_steps");
    plan.delta = cfg.get_double("run", "delta", 0.5);
    plan.zeta = plan.delta / (2.0 * double(std::max(1L, plan.t_steps)));
    plan.metric = parse_metric(cfg.get_string("run", "metric", "tv"));
    plan.mode = mode;
  } else {
    plan = plan_run(target, build_assumption(cfg), cfg.get_double("run", "delta"),
                    parse_metric(cfg.get_string("run", "metric", "tv")), mode);
  }

  const Vec x0 = fill_or_vec(cfg, "sample", "x0", target.dim(), 0.0);
  const long stride = cfg.get_long("sample", "record_stride", 0);

  const auto t_start = std::chrono::steady_clock::now();
  const Trace trace = run_proximal_sampler(target, plan, x0, ctx.seed, stride);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  {
    CsvWriter csv(path_in(ctx, "trace.csv"), ctx.digest, ctx.seed);
    std::vector<std::string> head{"step"};
    for (int i = 0; i < target.dim(); ++i) head.push_back("x" + std::to_string(i));
    head.push_back("proposals");
    head.push_back("prox_iters");
    csv.row(head);
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
      std::vector<std::string> cells{csv_cell(trace.sample_steps[k])};
      for (double v : trace.samples[k]) cells.push_back(csv_cell(v));
      const long step = trace.sample_steps[k];
      if (step == 0) {
        cells.push_back("0");
        cells.push_back("0");
      } else {
        const StepStats& st = trace.per_step[std::size_t(step - 1)];
        cells.push_back(csv_cell(st.proposals));
        cells.push_back(csv_cell(st.prox_iters));
      }
      csv.row(cells);
    }
  }
  {
    CsvWriter csv(path_in(ctx, "summary.csv"), ctx.digest, ctx.seed);
    csv.header({"stat", "value"});
    csv.row({"eta", csv_cell(plan.eta)});
    csv.row({"t_steps", csv_cell(plan.t_steps)});
    csv.row({"zeta", csv_cell(plan.zeta)});
    // moments over recorded samples after step 0
    for (int i = 0; i < target.dim(); ++i) {
      Vec coord;
      for (std::size_t k = 1; k < trace.samples.size(); ++k)
        coord.push_back(trace.samples[k][std::size_t(i)]);
      if (coord.size() >= 2) {
        csv.row({"mean_x" + std::to_string(i), csv_cell(mean(coord))});
        csv.row({"var_x" + std::to_string(i), csv_cell(variance(coord))});
      }
    }
    double props = 0.0, iters = 0.0;
    for (const auto& st : trace.per_step) {
      props += st.proposals;
      iters += st.prox_iters;
    }
    const double steps = double(std::max<std::size_t>(1, trace.per_step.size()));
    csv.row({"mean_proposals", csv_cell(props / steps)});
    csv.row({"mean_prox_iters", csv_cell(iters / steps)});
  }
  // wall time stays out of the CSVs: reruns must be byte-identical
  std::cout << "wall_time_s = " << wall << "\n";
  return 0;
}

// ----- verify-rgo -----------------------------------------------------------

struct CheckRow {
  std::string name;
  double value;
  double expected;
  double tol;
  bool pass;
};

inline int cmd_verify_rgo(const ConfigFile& cfg, const Args& args) {
  cfg.validate_keys(full_schema());
  const RunContext ctx = make_context(cfg, args);
  const Potential target = build_target(cfg);
  const ProxMode mode = parse_mode(cfg.get_string("run", "mode", "exact"));
  const double zeta = cfg.get_double("rgo", "zeta", 0.05);
  const double eta = cfg.has("rgo", "eta")
                         ? cfg.get_double("rgo", "eta")
                         : eta_for(target, zeta, Metric::TV, mode);
  const Vec y = fill_or_vec(cfg, "rgo", "y", target.dim(), 1.0);
  const long n_draws = cfg.get_long("rgo", "n_draws", 200000);
  if (n_draws < 100) throw InputError("verify-rgo: n_draws must be >= 100");
  RgoOptions opt;
  opt.max_proposals = int(cfg.get_long("rgo", "max_proposals", 1000));

  // independent draws, one derived stream each
  const std::size_t nd = std::size_t(n_draws);
  std::vector<Vec> samples(nd);
  std::vector<int> proposals(nd);
  parallel_for(std::size_t(n_draws), ctx.jobs, [&](std::size_t i) {
    RngStream rng(ctx.seed, i);
    RgoOutcome out = rgo_sample(target, y, eta, mode, rng, opt);
    samples[i] = std::move(out.x);
    proposals[i] = out.proposals;
  });

  std::vector<CheckRow> checks;
  double props_total = 0.0;
  for (int c : proposals) props_total += c;
  const double mean_props = props_total / double(n_draws);
  std::vector<int> sorted_props = proposals;
  std::sort(sorted_props.begin(), sorted_props.end());
  const double p99 =
      sorted_props[std::size_t(std::min<double>(double(sorted_props.size()) - 1,
                                                std::ceil(0.99 * double(n_draws)) - 1))];
  checks.push_back({"mean_proposals", mean_props, 4.0, 0.0, mean_props <= 4.0});
  checks.push_back({"p99_proposals", p99, 40.0, 0.0, p99 <= 40.0});

  const auto& quad = target.quadratic_info();
  if (quad) {
    // exact Gaussian conditional: mean (A + I/eta)^{-1}(b + y/eta),
    // covariance (A + I/eta)^{-1}
    for (int i = 0; i < target.dim(); ++i) {
      const double denom = quad->a_diag[std::size_t(i)] + 1.0 / eta;
      const double m_true = (quad->b[std::size_t(i)] + y[std::size_t(i)] / eta) / denom;
      const double v_true = 1.0 / denom;
      Vec coord(nd, 0.0);
      for (long k = 0; k < n_draws; ++k)
        coord[std::size_t(k)] = samples[std::size_t(k)][std::size_t(i)];
      const double m_hat = mean(coord);
      const double v_hat = variance(coord);
      const double se_mean = std::sqrt(v_true / double(n_draws));
      const double se_var = v_true * std::sqrt(2.0 / double(n_draws - 1));
      checks.push_back({"mean_x" + std::to_string(i), m_hat, m_true, 4.0 * se_mean,
                        std::abs(m_hat - m_true) <= 4.0 * se_mean});
      checks.push_back({"var_x" + std::to_string(i), v_hat, v_true, 4.0 * se_var,
                        std::abs(v_hat - v_true) <= 4.0 * se_var});
    }
    const double denom0 = quad->a_diag[0] + 1.0 / eta;
    const double m0 = (quad->b[0] + y[0] / eta) / denom0;
    const double v0 = 1.0 / denom0;
    Vec coord(nd, 0.0);
    for (long k = 0; k < n_draws; ++k) coord[std::size_t(k)] = samples[std::size_t(k)][0];
    const double sd_prop = std::sqrt(eta);
    const auto est = tv_histogram_1d(
        coord, [m0, v0](double x) { return normal_pdf(x, m0, v0); }, 64,
        m0 - 6.0 * sd_prop, m0 + 6.0 * sd_prop);
    checks.push_back(
        {"tv_x0", est.value, zeta + 0.02, 0.0, est.value <= zeta + 0.02});
  } else if (target.dim() == 1) {
    // quadrature oracle against the full conditional density
    ProxResult prox = target.has_exact_prox() ? prox_exact(target, y, eta)
                                              : prox_agd(target, y, eta, 1e-8);
    const double center = prox.x_y[0];
    const double sd_prop = std::sqrt(eta);
    const double lo = center - 6.0 * sd_prop, hi = center + 6.0 * sd_prop;
    auto unnorm = [&](double x) {
      const Vec xv{x};
      return std::exp(-eval_potential(target, xv) -
                      (x - y[0]) * (x - y[0]) / (2.0 * eta));
    };
    // normalize on [lo, hi] with a fine trapezoid pass
    const int n_grid = 4097;
    double z = 0.0;
    const double h = (hi - lo) / double(n_grid - 1);
    for (int k = 0; k < n_grid; ++k) {
      const double w = (k == 0 || k == n_grid - 1) ? 0.5 : 1.0;
      z += w * unnorm(lo + h * double(k));
    }
    z *= h;
    Vec coord(nd, 0.0);
    for (long k = 0; k < n_draws; ++k) coord[std::size_t(k)] = samples[std::size_t(k)][0];
    const auto est = tv_histogram_1d(
        coord, [&](double x) { return unnorm(x) / z; }, 64, lo, hi);
    checks.push_back(
        {"tv_x0", est.value, zeta + 0.02, 0.0, est.value <= zeta + 0.02});
  }

  bool all_pass = true;
  CsvWriter csv(path_in(ctx, "rgo_report.csv"), ctx.digest, ctx.seed);
  csv.header({"check", "value", "expected", "tol", "pass"});
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    csv.row({c.name, csv_cell(c.value), csv_cell(c.expected), csv_cell(c.tol),
             csv_cell(c.pass)});
  }
  if (!all_pass) std::cerr << "verify-rgo: a check failed (see rgo_report.csv)\n";
  return all_pass ? 0 : 2;
}

// ----- verify-conc ----------------------------------------------------------

inline int cmd_verify_conc(const ConfigFile& cfg, const Args& args) {
  cfg.validate_keys(full_schema());
  const RunContext ctx = make_context(cfg, args);
  const Potential target = build_target(cfg);

  BoundQuery q;
  const std::string variant = cfg.get_string("conc", "variant", "standard");
  if (variant == "standard")
    q.variant = BoundVariant::Standard;
  else if (variant == "composite")
    q.variant = BoundVariant::Composite;
  else if (variant == "errored")
    q.variant = BoundVariant::Errored;
  else if (variant == "lowrange")
    q.variant = BoundVariant::LowRange;
  else
    throw InputError("unknown conc variant: " + variant);
  q.specs = target.specs();
  q.d = target.dim();
  q.eta = cfg.get_double("conc", "eta", 1.0);
  q.epsilon = cfg.get_double("conc", "epsilon", 0.5);
  q.s_offset = cfg.get_double("conc", "s_offset", 0.0);
  const long n_samples = cfg.get_long("conc", "n_samples", 1000000);
  const Vec m = fill_or_vec(cfg, "conc", "m", target.dim(), 0.0);
  const double falsify_rate = cfg.get_double("conc", "falsify_rate", 0.0);

  TailReport rep;
  if (cfg.has("conc", "r_grid")) {
    rep = verify_bound(q, target, m, cfg.get_vec("conc", "r_grid"), n_samples, ctx.seed,
                       ctx.jobs);
  } else {
    const Vec quantiles = cfg.get_vec("conc", "quantiles", {0.5, 0.9, 0.99, 0.999});
    rep = verify_bound_at_quantiles(q, target, m, quantiles, n_samples, ctx.seed,
                                    ctx.jobs);
  }

  bool pass = rep.dominated_overall;
  bool falsify_ok = true;
  if (falsify_rate > 1.0) {
    TailReport control;
    if (cfg.has("conc", "r_grid")) {
      control = verify_bound(q, target, m, cfg.get_vec("conc", "r_grid"), n_samples,
                             ctx.seed, ctx.jobs, falsify_rate);
    } else {
      const Vec quantiles = cfg.get_vec("conc", "quantiles", {0.5, 0.9, 0.99, 0.999});
      control = verify_bound_at_quantiles(q, target, m, quantiles, n_samples, ctx.seed,
                                          ctx.jobs, falsify_rate);
    }
    falsify_ok = !control.dominated_overall;  // a tightened bound must fail somewhere
    pass = pass && falsify_ok;
  }

  CsvWriter csv(path_in(ctx, "tail_report.csv"), ctx.digest, ctx.seed);
  csv.header({"r", "empirical", "ci_upper", "bound", "dominated"});
  for (std::size_t i = 0; i < rep.r_grid.size(); ++i)
    csv.row({csv_cell(rep.r_grid[i]), csv_cell(rep.empirical[i]),
             csv_cell(rep.ci_upper[i]), csv_cell(rep.bound[i]),
             csv_cell(bool(rep.dominated[i]))});
  if (!pass)
    std::cerr << "verify-conc: " << (falsify_ok ? "dominance" : "falsification control")
              << " failed\n";
  return pass ? 0 : 2;
}

// ----- benchmark ------------------------------------------------------------

inline int cmd_benchmark(const ConfigFile& cfg, const Args& args) {
  cfg.validate_keys(full_schema());
  const RunContext ctx = make_context(cfg, args);
  const Potential target = build_target(cfg);
  const auto& quad = target.quadratic_info();
  if (!quad)
    throw InputError("benchmark: needs a quadratic target (exact reference law)");

  const double eta = cfg.get_double("benchmark", "eta", 0.1);
  const long t_steps = cfg.get_long("benchmark", "t_steps", 500);
  const int chains = int(cfg.get_long("benchmark", "chains", 256));
  const int n_dirs = int(cfg.get_long("benchmark", "n_directions", 64));
  const double x0_fill = cfg.get_double("benchmark", "x0_fill", 0.0);
  const Vec x0(std::size_t(target.dim()), x0_fill);

  Plan plan;
  plan.eta = eta;
  plan.t_steps = t_steps;
  plan.delta = 0.5;
  plan.zeta = plan.delta / (2.0 * double(t_steps));
  plan.mode = ProxMode::Exact;

  // exact reference sample from N(A^{-1} b, A^{-1})
  std::vector<Vec> truth(std::size_t(chains), Vec{});
  for (int c = 0; c < chains; ++c) {
    RngStream rng(ctx.seed ^ 0x74727574ULL, std::uint64_t(c));
    Vec x(std::size_t(target.dim()));
    for (int i = 0; i < target.dim(); ++i) {
      const double a = quad->a_diag[std::size_t(i)];
      if (!(a > 0.0)) throw InputError("benchmark: target must be positive definite");
      x[std::size_t(i)] = quad->b[std::size_t(i)] / a + rng.normal() / std::sqrt(a);
    }
    truth[std::size_t(c)] = std::move(x);
  }

  const EnsembleResult prox_run =
      run_ensemble(target, plan, x0, ctx.seed, chains, {t_steps}, ctx.jobs);
  // oracle budget: two potential evaluations per proposal, plus the shift
  const double evals_per_step = 2.0 * prox_run.mean_proposals + 1.0;
  const long budget = long(std::ceil(evals_per_step * double(t_steps)));

  std::vector<Vec> ula_final(std::size_t(chains), Vec{}), mala_final(std::size_t(chains), Vec{});
  parallel_for(std::size_t(chains), ctx.jobs, [&](std::size_t c) {
    const Trace ula = run_baseline(BaselineMethod::ULA, target, eta, budget, x0,
                                   ctx.seed ^ 0x756c61ULL, budget, c);
    ula_final[c] = ula.samples.back();
    const Trace mala = run_baseline(BaselineMethod::MALA, target, eta,
                                    std::max(1L, budget / 2), x0,
                                    ctx.seed ^ 0x6d616c61ULL, budget, c);
    mala_final[c] = mala.samples.back();
  });

  const auto w2_prox = sliced_w2(prox_run.states[0], truth, n_dirs, ctx.seed + 1);
  const auto w2_ula = sliced_w2(ula_final, truth, n_dirs, ctx.seed + 1);
  const auto w2_mala = sliced_w2(mala_final, truth, n_dirs, ctx.seed + 1);

  CsvWriter csv(path_in(ctx, "baselines.csv"), ctx.digest, ctx.seed);
  csv.header({"method", "steps", "oracle_evals", "w2_to_truth"});
  csv.row({"proximal", csv_cell(t_steps), csv_cell(budget), csv_cell(w2_prox.value)});
  csv.row({"ula", csv_cell(budget), csv_cell(budget), csv_cell(w2_ula.value)});
  csv.row({"mala", csv_cell(std::max(1L, budget / 2)), csv_cell(budget),
           csv_cell(w2_mala.value)});
  return 0;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. Exit codes: 0 all checks
/// passed, 2 a check or computation failed, 1 usage/config error.
inline int run_command(const std::vector<std::string>& argv) {
  Args args;
  try {
    args = parse_args(argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    const ConfigFile cfg = ConfigFile::parse_file(args.config_path);
    if (args.command == "plan") return detail::cmd_plan(cfg, args);
    if (args.command == "sample") return detail::cmd_sample(cfg, args);
    if (args.command == "verify-rgo") return detail::cmd_verify_rgo(cfg, args);
    if (args.command == "verify-conc") return detail::cmd_verify_conc(cfg, args);
    if (args.command == "benchmark") return detail::cmd_benchmark(cfg, args);
    std::cerr << "error: unknown command " << args.command << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cli
}  // namespace proxsamp
