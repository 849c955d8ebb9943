// Command-line frontend: single solves, benchmark sweeps, TV and analysis
// demos, and a self-test of the library's core numerical properties.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <set>
#include <string>

#include "nesta/bench.hpp"
#include "nesta/config.hpp"
#include "nesta/io.hpp"
#include "nesta/linear_map.hpp"
#include "nesta/reference.hpp"
#include "nesta/rng.hpp"
#include "nesta/smoothing.hpp"
#include "nesta/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nesta;

namespace {

// Exit codes: 0 success, 1 harness error, 2 config error, 3 solver did not
// converge (DNC inside `bench` is data, not failure).
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDnc = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int jobs = 1;
  bool verbose = false;
};

std::string bare(const std::string& key) {
  const auto dot = key.rfind('.');
  return dot == std::string::npos ? key : key.substr(dot + 1);
}

void validate_keys(const Config& cfg, const std::set<std::string>& allowed) {
  for (const auto& key : cfg.keys()) {
    if (!allowed.count(key)) throw ConfigError("unknown key: " + bare(key));
  }
}

MapPtr build_measurement_operator(const std::string& kind, Index n, Index m,
                                  std::uint64_t seed) {
  if (kind == "subsampled_dct") return make_subsampled_dct(n, m, seed);
  if (kind == "permuted_subsampled_hadamard")
    return make_permuted_subsampled_hadamard(n, m, seed);
  throw ConfigError("invalid value for key: operator");
}

json per_step_json(const SolveResult& res) {
  json steps = json::array();
  for (const auto& st : res.per_step) {
    steps.push_back(
        {{"mu", st.mu}, {"iterations", st.iterations}, {"f", st.f_final}});
  }
  return steps;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int cmd_solve(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  validate_keys(cfg, {"problem.operator", "problem.n", "problem.m",
                      "problem.seed", "problem.source", "problem.s",
                      "problem.dynamic_range_db", "problem.sigma",
                      "problem.b_file", "problem.epsilon", "solver.mu",
                      "solver.delta", "solver.max_iter", "solver.continuation",
                      "solver.steps", "solver.mu0", "solver.transform_path"});

  const Index n = cfg.get_int("problem.n");
  const Index m = cfg.get_int("problem.m");
  const std::uint64_t seed =
      args.seed_override.value_or(cfg.get_u64("problem.seed", 1));
  const MapPtr a = build_measurement_operator(
      cfg.get_string("problem.operator", "subsampled_dct"), n, m, seed);

  const std::string source = cfg.get_string("problem.source", "generated");
  Vec b;
  Vec x_true;
  if (source == "generated") {
    const Index s = cfg.get_int("problem.s");
    const double db = cfg.get_double("problem.dynamic_range_db", 20.0);
    const double sigma = cfg.get_double("problem.sigma", 0.1);
    Rng rng = Rng::derive(seed, 0xb0b);
    x_true = gen_sparse_signal(n, s, db, rng.next());
    b = a->apply(x_true);
    for (Index i = 0; i < m; ++i) b[i] += sigma * rng.gaussian();
  } else if (source == "file") {
    b = read_vector_binary(cfg.get_string("problem.b_file"));
  } else {
    throw ConfigError("invalid value for key: source");
  }

  ProblemInstance problem{a, b, cfg.get_double("problem.epsilon")};

  SolverConfig scfg;
  scfg.mu = cfg.get_double("solver.mu", 0.02);
  scfg.delta = cfg.get_double("solver.delta", 1e-7);
  scfg.max_iter = static_cast<int>(cfg.get_int("solver.max_iter", 10000));

  const auto obj = SmoothedObjective::l1(scfg.mu);
  SolveResult res;
  if (cfg.get_bool("solver.continuation", true)) {
    ContinuationConfig ccfg;
    ccfg.steps = static_cast<int>(cfg.get_int("solver.steps", 4));
    ccfg.mu0 = cfg.get_double("solver.mu0", 0.0);
    ccfg.use_transform_path = cfg.get_bool("solver.transform_path", true);
    res = nesta_continuation(problem, obj, scfg, ccfg);
  } else if (cfg.get_bool("solver.transform_path", true)) {
    res = solve_in_transform_domain(problem, obj, scfg);
  } else {
    res = nesta_solve(problem, obj, scfg);
  }

  fs::create_directories(args.out_dir);
  write_vector_binary((fs::path(args.out_dir) / "solution.bin").string(),
                      res.x);
  json out = {{"f_final", res.f_final},
              {"iterations", res.iterations},
              {"calls_A", res.calls_a},
              {"converged", res.converged},
              {"l1_norm", res.x.lpNorm<1>()},
              {"residual", (b - a->apply(res.x)).norm()},
              {"per_step", per_step_json(res)}};
  if (x_true.size() != 0)
    out["rel_l2_vs_truth"] = (res.x - x_true).norm() / x_true.norm();
  write_json(fs::path(args.out_dir) / "result.json", out);

  if (args.verbose) {
    for (const auto& st : res.per_step)
      std::cout << "mu = " << st.mu << ": " << st.iterations
                << " iterations, f = " << st.f_final << "\n";
  }
  std::cout << "converged = " << (res.converged ? "true" : "false")
            << ", calls_A = " << res.calls_a << ", f = " << res.f_final
            << "\n";
  return res.converged ? kExitOk : kExitDnc;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

std::vector<SolverId> parse_roster(const std::string& roster) {
  std::vector<SolverId> out;
  std::istringstream in(roster);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok == "nesta")
      out.push_back(SolverId::Nesta);
    else if (tok == "nesta_ct")
      out.push_back(SolverId::NestaCt);
    else if (tok == "fista")
      out.push_back(SolverId::Fista);
    else if (!tok.empty())
      throw ConfigError("invalid value for key: roster");
  }
  if (out.empty()) throw ConfigError("invalid value for key: roster");
  return out;
}

int cmd_bench(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  validate_keys(cfg,
                {"experiment.operator", "experiment.n", "experiment.m",
                 "experiment.s", "experiment.preset",
                 "experiment.dynamic_range_db", "experiment.sigma",
                 "experiment.seed", "experiment.trials", "experiment.roster",
                 "experiment.stop_rule", "solver.mu", "solver.delta",
                 "solver.max_iter", "solver.steps", "solver.dnc_calls"});

  ExperimentSpec spec;
  spec.n = cfg.get_int("experiment.n");
  spec.m = cfg.get_int("experiment.m");
  const std::string preset = cfg.get_string("experiment.preset", "");
  if (preset == "dense-support")
    spec.s = spec.m / 5;
  else if (preset == "sparse-support")
    spec.s = std::max<Index>(1, spec.m / 100);
  else if (!preset.empty())
    throw ConfigError("invalid value for key: preset");
  if (cfg.has("experiment.s")) spec.s = cfg.get_int("experiment.s");
  spec.sigma = cfg.get_double("experiment.sigma", 0.1);
  spec.seed = args.seed_override.value_or(cfg.get_u64("experiment.seed", 1));
  spec.trials = static_cast<int>(cfg.get_int("experiment.trials", 10));
  spec.roster = parse_roster(cfg.get_string("experiment.roster"));
  const std::string rule = cfg.get_string("experiment.stop_rule", "crit1");
  if (rule == "crit1")
    spec.stop_rule = StopRule::Crit1;
  else if (rule == "crit2")
    spec.stop_rule = StopRule::Crit2;
  else
    throw ConfigError("invalid value for key: stop_rule");
  const std::string op = cfg.get_string("experiment.operator", "subsampled_dct");
  if (op == "subsampled_dct")
    spec.operator_kind = MapKind::SubsampledDct;
  else if (op == "permuted_subsampled_hadamard")
    spec.operator_kind = MapKind::PermutedSubsampledHadamard;
  else
    throw ConfigError("invalid value for key: operator");
  spec.mu = cfg.get_double("solver.mu", 0.02);
  spec.delta = cfg.get_double("solver.delta", 1e-7);
  spec.max_iter = static_cast<int>(cfg.get_int("solver.max_iter", 10000));
  spec.continuation_steps = static_cast<int>(cfg.get_int("solver.steps", 4));
  spec.dnc_calls = cfg.get_int("solver.dnc_calls", 20000);

  const std::vector<double> sweep =
      cfg.get_double_list("experiment.dynamic_range_db");

  fs::create_directories(args.out_dir);
  std::ofstream summary(fs::path(args.out_dir) / "summary.txt");
  std::ofstream plot(fs::path(args.out_dir) / "plotdata.csv");
  plot << "dynamic_range_db,solver,mean_calls,min_calls,max_calls\n";

  for (const double db : sweep) {
    spec.dynamic_range_db = db;
    const ExperimentResult result = run_experiment(spec, args.jobs);

    std::ostringstream name;
    name << "trials_" << db << "dB.csv";
    std::ofstream csv(fs::path(args.out_dir) / name.str());
    write_records_csv(csv, result.records);

    summary << "== " << db << " dB ==\n";
    write_summary(summary, result.summary);
    summary << "\n";
    for (const auto& s : result.summary) {
      plot << db << ',' << s.solver << ',' << s.mean_calls << ','
           << s.min_calls << ',' << s.max_calls << "\n";
    }
    if (args.verbose) {
      std::cout << "== " << db << " dB ==\n";
      write_summary(std::cout, result.summary);
    }
  }
  std::cout << "bench results written to " << args.out_dir << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// tv-demo
// ---------------------------------------------------------------------------

int cmd_tv_demo(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  validate_keys(cfg, {"tv.side", "tv.dynamic_range_db", "tv.sigma", "tv.seed",
                      "tv.m_fraction", "tv.squares", "solver.mu",
                      "solver.delta", "solver.max_iter", "solver.steps"});

  const Index side = cfg.get_int("tv.side", 128);
  const double db = cfg.get_double("tv.dynamic_range_db", 40.0);
  const double sigma = cfg.get_double("tv.sigma", 0.1);
  const std::uint64_t seed =
      args.seed_override.value_or(cfg.get_u64("tv.seed", 1));
  const double m_fraction = cfg.get_double("tv.m_fraction", 0.1);
  const Index n = side * side;
  const Index m = std::max<Index>(
      1, static_cast<Index>(std::llround(m_fraction * static_cast<double>(n))));

  Rng rng = Rng::derive(seed, 0x7f);
  const Vec image = gen_squares_image(
      side, db, rng.next(), static_cast<int>(cfg.get_int("tv.squares", 30)));
  const auto a = make_partial_fourier2d(side, side, m, rng.next());
  Vec b = a->apply(image);
  for (Index i = 0; i < m; ++i) b[i] += sigma * rng.gaussian();

  ProblemInstance problem{a, b, epsilon0_rule(m, sigma)};
  SolverConfig scfg;
  scfg.mu = cfg.get_double("solver.mu", 0.2);
  scfg.delta = cfg.get_double("solver.delta", 1e-5);
  scfg.max_iter = static_cast<int>(cfg.get_int("solver.max_iter", 4000));

  // mu0 = 0.9 max per-pixel gradient magnitude of x0 = A* b.
  const Vec x0 = a->adjoint(b);
  const auto d = make_finite_difference2d(side, side);
  const Vec g = d->apply(x0);
  double max_grad = 0.0;
  for (Index p = 0; p < n; ++p)
    max_grad = std::max(max_grad, std::hypot(g[p], g[n + p]));
  ContinuationConfig ccfg;
  ccfg.steps = static_cast<int>(cfg.get_int("solver.steps", 5));
  ccfg.mu0 = std::max(0.9 * max_grad, scfg.mu);
  std::cout << "mu0 = " << ccfg.mu0 << "\n";

  const SolveResult res = nesta_continuation(
      problem, SmoothedObjective::tv2d(side, side, scfg.mu), scfg, ccfg);
  const double rel = (res.x - image).norm() / image.norm();

  fs::create_directories(args.out_dir);
  write_vector_binary((fs::path(args.out_dir) / "truth.bin").string(), image);
  write_vector_binary((fs::path(args.out_dir) / "recon.bin").string(), res.x);
  write_pgm((fs::path(args.out_dir) / "truth.pgm").string(), image, side,
            side);
  write_pgm((fs::path(args.out_dir) / "recon.pgm").string(), res.x, side,
            side);
  write_json(fs::path(args.out_dir) / "result.json",
             {{"rel_l2_err", rel},
              {"calls_A", res.calls_a},
              {"iterations", res.iterations},
              {"converged", res.converged},
              {"mu0", ccfg.mu0},
              {"per_step", per_step_json(res)}});

  std::cout << "rel_l2_err = " << rel << ", calls_A = " << res.calls_a
            << "\n";
  return res.converged ? kExitOk : kExitDnc;
}

// ---------------------------------------------------------------------------
// analysis-demo
// ---------------------------------------------------------------------------

int cmd_analysis_demo(const CommonArgs& args) {
  const Config cfg = Config::parse_file(args.config_path);
  validate_keys(cfg, {"analysis.n", "analysis.m", "analysis.frame_factor",
                      "analysis.tones", "analysis.sigma", "analysis.seed",
                      "solver.mu", "solver.delta", "solver.max_iter",
                      "solver.steps"});

  const Index n = cfg.get_int("analysis.n", 1024);
  const Index m = cfg.get_int("analysis.m", 256);
  const Index factor = cfg.get_int("analysis.frame_factor", 2);
  const Index tones = cfg.get_int("analysis.tones", 6);
  const double sigma = cfg.get_double("analysis.sigma", 0.01);
  const std::uint64_t seed =
      args.seed_override.value_or(cfg.get_u64("analysis.seed", 1));
  if (n > 16384) throw ConfigError("invalid value for key: n");

  const auto w = make_overcomplete_dct_frame(n, factor);
  const Index p = w->in_dim();

  // Multitone signal: a few active frame atoms with spread magnitudes.
  Rng rng = Rng::derive(seed, 0xa11);
  Vec alpha0 = Vec::Zero(p);
  for (Index t = 0; t < tones; ++t) {
    alpha0[static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(p)))] =
        rng.sign() * std::pow(10.0, rng.uniform01());
  }
  const Vec x_true = w->apply(alpha0);
  const auto a = make_permuted_subsampled_hadamard(n, m, rng.next());
  Vec b = a->apply(x_true);
  for (Index i = 0; i < m; ++i) b[i] += sigma * rng.gaussian();
  const double eps = epsilon0_rule(m, sigma);

  SolverConfig scfg;
  scfg.mu = cfg.get_double("solver.mu", 0.02);
  scfg.delta = cfg.get_double("solver.delta", 1e-8);
  scfg.max_iter = static_cast<int>(cfg.get_int("solver.max_iter", 10000));
  ContinuationConfig ccfg;
  ccfg.steps = static_cast<int>(cfg.get_int("solver.steps", 5));

  // Synthesis: minimize ||alpha||_1 subject to ||b - A W alpha|| <= eps.
  CallCounter syn_w_calls, syn_a_calls;
  const auto aw = make_composed(a, w, &syn_a_calls, &syn_w_calls);
  ProblemInstance syn_problem{aw, b, eps};
  const SolveResult syn = nesta_continuation(
      syn_problem, SmoothedObjective::l1(scfg.mu), scfg, ccfg);
  const Vec x_syn = w->apply(syn.x);

  // Analysis: minimize ||W* x||_1 subject to ||b - A x|| <= eps; dictionary
  // applications are tallied separately from measurement calls.
  CallCounter ana_w_calls;
  ProblemInstance ana_problem{a, b, eps};
  const SolveResult ana =
      nesta_continuation(ana_problem, SmoothedObjective::l1_analysis(w, scfg.mu),
                         scfg, ccfg, &ana_w_calls);

  const auto report = [&](const SolveResult& r, const Vec& x, double w_calls,
                          double iters) {
    return json{{"l1_coefficients", x.size() == n ? w->adjoint(x).lpNorm<1>()
                                                  : r.x.lpNorm<1>()},
                {"residual", (b - a->apply(x)).norm()},
                {"calls_A", r.calls_a},
                {"calls_W", w_calls},
                {"calls_W_per_iteration", iters > 0 ? w_calls / iters : 0.0},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"rel_l2_vs_truth", (x - x_true).norm() / x_true.norm()}};
  };

  int total_syn_iters = 0, total_ana_iters = 0;
  for (const auto& st : syn.per_step) total_syn_iters += st.iterations;
  for (const auto& st : ana.per_step) total_ana_iters += st.iterations;

  json out;
  out["synthesis"] = report(syn, x_syn,
                            static_cast<double>(syn_w_calls.count()),
                            total_syn_iters);
  out["analysis"] = report(ana, ana.x,
                           static_cast<double>(ana_w_calls.count()),
                           total_ana_iters);
  out["equivalence_rel_l2"] = (ana.x - x_syn).norm() / x_syn.norm();
  out["frame_factor"] = factor;

  fs::create_directories(args.out_dir);
  write_json(fs::path(args.out_dir) / "result.json", out);
  std::cout << "synthesis: calls_W = " << syn_w_calls.count()
            << " over " << total_syn_iters << " iterations\n"
            << "analysis:  calls_W = " << ana_w_calls.count() << " over "
            << total_ana_iters << " iterations\n"
            << "equivalence_rel_l2 = " << out["equivalence_rel_l2"] << "\n";
  return syn.converged && ana.converged ? kExitOk : kExitDnc;
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

int cmd_selftest(std::uint64_t seed) {
  int failures = 0;
  const auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };
  Rng rng(seed);

  const auto rand_vec = [&](Index k) {
    Vec v(k);
    for (Index i = 0; i < k; ++i) v[i] = rng.gaussian();
    return v;
  };

  // Adjoint identities and partial-isometry flags.
  {
    std::vector<MapPtr> ops = {
        make_subsampled_dct(256, 64, rng.next()),
        make_permuted_subsampled_hadamard(256, 64, rng.next()),
        make_partial_fourier2d(16, 16, 64, rng.next()),
        make_overcomplete_dct_frame(64, 2),
        make_finite_difference2d(12, 11),
    };
    bool adjoint_ok = true, iso_ok = true;
    for (const auto& op : ops) {
      for (int t = 0; t < 20; ++t) {
        const Vec x = rand_vec(op->in_dim());
        const Vec y = rand_vec(op->out_dim());
        const double lhs = op->apply(x).dot(y);
        const double rhs = x.dot(op->adjoint(y));
        adjoint_ok &= std::abs(lhs - rhs) <=
                      1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
      }
      if (op->is_partial_isometry()) {
        for (int t = 0; t < 10; ++t) {
          const Vec y = rand_vec(op->out_dim());
          iso_ok &= (op->apply(op->adjoint(y)) - y).norm() <= 1e-10 * y.norm();
        }
      }
    }
    report("adjoint identities (1e-10)", adjoint_ok);
    report("partial isometries (1e-10)", iso_ok);
  }

  // Gradient finite-difference checks.
  {
    const auto fd_worst = [&](auto&& value_fn, const Vec& x, const Vec& grad) {
      Vec xp = x;
      double worst = 0.0;
      for (Index i = 0; i < x.size(); ++i) {
        const double orig = xp[i];
        xp[i] = orig + 1e-6;
        const double fp = value_fn(xp);
        xp[i] = orig - 1e-6;
        const double fm = value_fn(xp);
        xp[i] = orig;
        worst = std::max(worst, std::abs((fp - fm) / 2e-6 - grad[i]));
      }
      return worst;
    };
    const Vec x = rand_vec(25);
    const auto l1 = l1_value_grad(x, 0.2);
    report("huber gradient vs finite differences (1e-6)",
           fd_worst([](const Vec& v) { return l1_value_grad(v, 0.2).value; },
                    x, l1.grad) <= 1e-6);
    const auto w = make_overcomplete_dct_frame(25, 2);
    const auto an = analysis_value_grad(x, *w, 0.2);
    report("analysis gradient vs finite differences (1e-6)",
           fd_worst(
               [&](const Vec& v) {
                 return analysis_value_grad(v, *w, 0.2).value;
               },
               x, an.grad) <= 1e-6);
    const auto tv = tv_value_grad(x, 5, 5, 0.2);
    report("tv gradient vs finite differences (1e-6)",
           fd_worst(
               [](const Vec& v) { return tv_value_grad(v, 5, 5, 0.2).value; },
               x, tv.grad) <= 1e-6);
  }

  // Projection feasibility along a logged solve and the convergence bound.
  {
    const Index n = 256, m = 64;
    const auto a = make_subsampled_dct(n, m, rng.next());
    const Vec x_true = gen_sparse_signal(n, 5, 40.0, rng.next());
    Vec b = a->apply(x_true);
    for (Index i = 0; i < m; ++i) b[i] += 0.1 * rng.gaussian();
    ProblemInstance problem{a, b, epsilon0_rule(m, 0.1)};

    const double mu = 0.2;
    const auto obj = SmoothedObjective::l1(mu);
    SolverConfig long_cfg;
    long_cfg.mu = mu;
    long_cfg.delta = 1e-300;
    long_cfg.max_iter = 20000;
    const Vec x_star = solve_in_transform_domain(problem, obj, long_cfg).x;
    const double f_star = l1_value_grad(x_star, mu).value;
    const double pp =
        0.5 * (x_star - problem.a->adjoint(problem.b)).squaredNorm();

    SolverConfig cfg;
    cfg.mu = mu;
    cfg.delta = 1e-300;
    cfg.max_iter = 1200;
    bool feasible = true, bounded = true;
    const double feas = problem.epsilon * (1.0 + 1e-8);
    cfg.trace = [&](const IterationInfo& it) {
      feasible &= (b - a->apply(it.y)).norm() <= feas;
      feasible &= (b - a->apply(it.z)).norm() <= feas;
      const double fy = l1_value_grad(it.y, mu).value;
      bounded &= fy - f_star <=
                 4.0 * obj.lipschitz() * pp / ((it.k + 1.0) * (it.k + 1.0)) *
                         (1.0 + 1e-12) +
                     1e-12;
    };
    nesta_solve(problem, obj, cfg);
    report("projection feasibility on all iterates", feasible);
    report("accelerated convergence bound", bounded);
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED")
            << "\n";
  return failures == 0 ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NESTA-style sparse recovery: solvers, benchmarks, demos"};
  app.require_subcommand(1);

  CommonArgs args;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", args.config_path,
                                "key-value config file");
    if (needs_config) opt->required();
    sub->add_option("--out", args.out_dir, "output directory");
    sub->add_option("--seed", seed_value, "seed override")
        ->each([&](const std::string&) { args.seed_override = seed_value; });
    sub->add_flag("-v,--verbose", args.verbose, "verbose progress");
  };

  auto* solve = app.add_subcommand("solve", "solve one recovery problem");
  add_common(solve, true);
  auto* bench = app.add_subcommand("bench", "run the comparison protocol");
  add_common(bench, true);
  bench->add_option("--jobs", args.jobs, "concurrent trials");
  auto* tv = app.add_subcommand("tv-demo", "total-variation reconstruction");
  add_common(tv, true);
  auto* ana = app.add_subcommand("analysis-demo",
                                 "paired analysis/synthesis solves");
  add_common(ana, true);
  auto* self = app.add_subcommand("selftest", "run the property suite");
  self->add_option("--seed", seed_value, "seed")
      ->each([&](const std::string&) { args.seed_override = seed_value; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(args);
    if (bench->parsed()) return cmd_bench(args);
    if (tv->parsed()) return cmd_tv_demo(args);
    if (ana->parsed()) return cmd_analysis_demo(args);
    if (self->parsed()) return cmd_selftest(args.seed_override.value_or(1));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
