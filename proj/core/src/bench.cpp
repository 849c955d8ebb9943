#include "nesta/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "nesta/reference.hpp"
#include "nesta/rng.hpp"
#include "nesta/smoothing.hpp"

namespace nesta {

Vec gen_sparse_signal(Index n, Index s, double dynamic_range_db,
                      std::uint64_t seed) {
  if (s > n) throw std::invalid_argument("gen_sparse_signal: s > n");
  const double alpha = dynamic_range_db / 20.0;
  Rng rng(seed);
  const auto positions = rng.sample_without_replacement(
      static_cast<std::size_t>(n), static_cast<std::size_t>(s));
  Vec x = Vec::Zero(n);
  for (auto p : positions) {
    const double sign = rng.sign();
    const double mag = std::pow(10.0, alpha * rng.uniform01());
    x[static_cast<Index>(p)] = sign * mag;
  }
  return x;
}

Vec gen_compressible_signal(Index n, double decay_p, std::uint64_t seed) {
  if (!(decay_p > 0.0))
    throw std::invalid_argument("gen_compressible_signal: decay_p must be > 0");
  Rng rng(seed);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  Vec x = Vec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = std::pow(static_cast<double>(i + 1), -decay_p);
    x[perm[static_cast<std::size_t>(i)]] = rng.sign() * mag;
  }
  return x;
}

std::vector<Square> gen_squares(Index side, double dynamic_range_db,
                                std::uint64_t seed, int count) {
  if (side < 16) throw std::invalid_argument("gen_squares: side must be >= 16");
  const double alpha = dynamic_range_db / 20.0;
  const Index min_size = side / 16;
  const Index max_size = side / 4;
  Rng rng(seed);
  std::vector<Square> squares;
  squares.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Square sq;
    sq.size = min_size + static_cast<Index>(rng.uniform_int(
                             static_cast<std::uint64_t>(max_size - min_size + 1)));
    sq.row = static_cast<Index>(
        rng.uniform_int(static_cast<std::uint64_t>(side - sq.size + 1)));
    sq.col = static_cast<Index>(
        rng.uniform_int(static_cast<std::uint64_t>(side - sq.size + 1)));
    sq.amplitude = std::pow(10.0, alpha * rng.uniform01());
    squares.push_back(sq);
  }
  return squares;
}

Vec render_squares(Index side, const std::vector<Square>& squares) {
  Vec img = Vec::Zero(side * side);
  for (const auto& sq : squares) {
    for (Index i = sq.row; i < sq.row + sq.size; ++i)
      for (Index j = sq.col; j < sq.col + sq.size; ++j)
        img[i * side + j] += sq.amplitude;
  }
  return img;
}

Vec gen_squares_image(Index side, double dynamic_range_db, std::uint64_t seed,
                      int count) {
  return render_squares(side, gen_squares(side, dynamic_range_db, seed, count));
}

bool crit1_met(const Vec& x_hat, const Vec& x_ref, const LinearMap& a,
               const Vec& b) {
  if (x_hat.lpNorm<1>() > x_ref.lpNorm<1>()) return false;
  return (b - a.apply(x_hat)).norm() <= 1.05 * (b - a.apply(x_ref)).norm();
}

bool crit2_met(const Vec& x_hat, const Vec& x_ref, const LinearMap& a,
               const Vec& b, double lambda) {
  const double lhs =
      lambda * x_hat.lpNorm<1>() + 0.5 * (b - a.apply(x_hat)).squaredNorm();
  const double rhs =
      lambda * x_ref.lpNorm<1>() + 0.5 * (b - a.apply(x_ref)).squaredNorm();
  return lhs <= rhs;
}

std::string solver_name(SolverId id) {
  switch (id) {
    case SolverId::Nesta:
      return "NESTA";
    case SolverId::NestaCt:
      return "NESTA + Ct";
    case SolverId::Fista:
      return "FISTA";
  }
  return "?";
}

namespace {

MapPtr build_operator(const ExperimentSpec& spec, std::uint64_t op_seed) {
  switch (spec.operator_kind) {
    case MapKind::PermutedSubsampledHadamard:
      return make_permuted_subsampled_hadamard(spec.n, spec.m, op_seed);
    case MapKind::SubsampledDct:
      return make_subsampled_dct(spec.n, spec.m, op_seed);
    default:
      throw std::invalid_argument(
          "run_experiment: operator kind must be a subsampled DCT or "
          "Hadamard transform");
  }
}

struct SolverOutcome {
  Vec x;
  std::int64_t calls = 0;
  bool converged = false;
  double wall_time = 0.0;
};

SolverOutcome run_one_solver(SolverId id, const ExperimentSpec& spec,
                             const MapPtr& a, const Vec& b,
                             const MatchedPair& pair, const Vec* x_n) {
  const auto t0 = std::chrono::steady_clock::now();
  SolverOutcome out;

  ProblemInstance problem{a, b, pair.epsilon1};
  SolverConfig cfg;
  cfg.mu = spec.mu;
  cfg.delta = spec.delta;
  cfg.max_iter = spec.max_iter;

  switch (id) {
    case SolverId::Nesta: {
      const SolveResult r = solve_in_transform_domain(
          problem, SmoothedObjective::l1(cfg.mu), cfg);
      out.x = r.x;
      out.calls = r.calls_a;
      out.converged = r.converged && r.calls_a <= spec.dnc_calls;
      break;
    }
    case SolverId::NestaCt: {
      ContinuationConfig ccfg;
      ccfg.steps = spec.continuation_steps;
      const SolveResult r = nesta_continuation(
          problem, SmoothedObjective::l1(cfg.mu), cfg, ccfg);
      out.x = r.x;
      out.calls = r.calls_a;
      out.converged = r.converged && r.calls_a <= spec.dnc_calls;
      break;
    }
    case SolverId::Fista: {
      // Stopped by the cross-solver criterion against the NESTA reference,
      // or declared DNC once calls_A would exceed the budget.
      const double ref_l1 = x_n->lpNorm<1>();
      const double ref_res = (b - a->apply(*x_n)).norm();
      const double ref_obj = pair.lambda * ref_l1 + 0.5 * ref_res * ref_res;
      ExternalStop stop;
      if (spec.stop_rule == StopRule::Crit1) {
        stop = [&](const Vec& x, const Vec& ax) {
          return x.lpNorm<1>() <= ref_l1 &&
                 (b - ax).norm() <= 1.05 * ref_res;
        };
      } else {
        stop = [&](const Vec& x, const Vec& ax) {
          return pair.lambda * x.lpNorm<1>() + 0.5 * (b - ax).squaredNorm() <=
                 ref_obj;
        };
      }
      const int fista_iters =
          static_cast<int>(std::max<std::int64_t>(1, spec.dnc_calls / 2));
      const FistaResult r = fista_solve(*a, b, pair.lambda, spec.delta,
                                        fista_iters, Vec(), stop);
      out.x = r.x;
      out.calls = r.calls_a;
      out.converged = r.converged;
      break;
    }
  }
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

void run_trial(const ExperimentSpec& spec, int trial,
               std::vector<TrialRecord>& records) {
  Rng rng = Rng::derive(spec.seed, static_cast<std::uint64_t>(trial));
  const std::uint64_t op_seed = rng.next();
  const std::uint64_t signal_seed = rng.next();

  const MapPtr a = build_operator(spec, op_seed);
  const Vec x_true =
      gen_sparse_signal(spec.n, spec.s, spec.dynamic_range_db, signal_seed);
  Vec b = a->apply(x_true);
  for (Index i = 0; i < b.size(); ++i) b[i] += spec.sigma * rng.gaussian();

  const MatchedPair pair = lambda_epsilon_handshake(a, b, spec.sigma);

  // The NESTA reference runs first; criterion-stopped solvers need its
  // solution.
  std::size_t ref_pos = spec.roster.size();
  for (std::size_t i = 0; i < spec.roster.size(); ++i) {
    if (spec.roster[i] == SolverId::NestaCt) {
      ref_pos = i;
      break;
    }
    if (spec.roster[i] == SolverId::Nesta && ref_pos == spec.roster.size())
      ref_pos = i;
  }
  if (ref_pos == spec.roster.size())
    throw std::invalid_argument(
        "run_experiment: roster must contain a NESTA reference solver");

  const double ref_l1 = pair.x_reference.lpNorm<1>();
  std::vector<SolverOutcome> outcomes(spec.roster.size());
  outcomes[ref_pos] =
      run_one_solver(spec.roster[ref_pos], spec, a, b, pair, nullptr);
  for (std::size_t i = 0; i < spec.roster.size(); ++i) {
    if (i == ref_pos) continue;
    try {
      outcomes[i] = run_one_solver(spec.roster[i], spec, a, b, pair,
                                   &outcomes[ref_pos].x);
    } catch (const std::exception& e) {
      std::cerr << "trial " << trial << " " << solver_name(spec.roster[i])
                << ": " << e.what() << "\n";
    }
  }

  for (std::size_t i = 0; i < spec.roster.size(); ++i) {
    TrialRecord rec;
    rec.trial = trial;
    rec.solver = solver_name(spec.roster[i]);
    rec.calls_a = outcomes[i].calls;
    rec.converged = outcomes[i].converged;
    rec.wall_time = outcomes[i].wall_time;
    if (outcomes[i].x.size() == pair.x_reference.size()) {
      rec.rel_l1_err = (outcomes[i].x.lpNorm<1>() - ref_l1) / ref_l1;
      rec.linf_err = (outcomes[i].x - pair.x_reference).lpNorm<Eigen::Infinity>();
    }
    records[static_cast<std::size_t>(trial) * spec.roster.size() + i] =
        std::move(rec);
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs) {
  if (spec.trials < 1)
    throw std::invalid_argument("run_experiment: trials must be >= 1");
  if (spec.roster.empty())
    throw std::invalid_argument("run_experiment: empty solver roster");
  if (spec.s > spec.m || spec.m > spec.n)
    throw std::invalid_argument("run_experiment: need s <= m <= n");

  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(spec.trials) *
                        spec.roster.size());

  jobs = std::max(1, std::min(jobs, spec.trials));
  if (jobs == 1) {
    for (int t = 0; t < spec.trials; ++t) run_trial(spec, t, result.records);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < spec.trials;
             t = next.fetch_add(1)) {
          run_trial(spec, t, result.records);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < spec.roster.size(); ++i) {
    SolverSummary s;
    s.solver = solver_name(spec.roster[i]);
    s.min_calls = std::numeric_limits<std::int64_t>::max();
    double total = 0.0;
    for (int t = 0; t < spec.trials; ++t) {
      const TrialRecord& rec =
          result.records[static_cast<std::size_t>(t) * spec.roster.size() + i];
      total += static_cast<double>(rec.calls_a);
      s.min_calls = std::min(s.min_calls, rec.calls_a);
      s.max_calls = std::max(s.max_calls, rec.calls_a);
      if (!rec.converged) ++s.dnc_count;
    }
    s.mean_calls = total / spec.trials;
    s.trials = spec.trials;
    result.summary.push_back(std::move(s));
  }
  return result;
}

void write_records_csv(std::ostream& os,
                       const std::vector<TrialRecord>& recs) {
  os << "trial,solver,calls_A,rel_l1_err,linf_err,converged,wall_time\n";
  char buf[64];
  for (const auto& r : recs) {
    os << r.trial << ',' << r.solver << ',' << r.calls_a << ',';
    std::snprintf(buf, sizeof buf, "%.9e", r.rel_l1_err);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.9e", r.linf_err);
    os << buf << ',' << (r.converged ? 1 : 0) << ',';
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_time);
    os << buf << '\n';
  }
}

void write_summary(std::ostream& os,
                   const std::vector<SolverSummary>& summary) {
  os << "Method            calls_A\n";
  for (const auto& s : summary) {
    std::ostringstream cell;
    if (s.dnc_count == s.trials) {
      cell << "DNC";
    } else {
      cell << static_cast<std::int64_t>(std::llround(s.mean_calls)) << " ("
           << s.min_calls << "-" << s.max_calls << ")";
      if (s.dnc_count > 0) cell << " [" << s.dnc_count << " DNC]";
    }
    os << s.solver;
    for (std::size_t pad = s.solver.size(); pad < 18; ++pad) os << ' ';
    os << cell.str() << '\n';
  }
}

}  // namespace nesta
