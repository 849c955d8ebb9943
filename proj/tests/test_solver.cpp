#include <doctest.h>

#include <cmath>

#include "nesta/bench.hpp"
#include "nesta/reference.hpp"
#include "nesta/rng.hpp"
#include "nesta/solver.hpp"
#include "oracles.hpp"

using namespace nesta;
using namespace nesta::testing;

TEST_SUITE_BEGIN("solver");

TEST_CASE("step weights") {
  auto [a0, t0] = step_weights(0);
  CHECK(a0 == 0.5);
  CHECK(t0 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  auto [a1, t1] = step_weights(1);
  CHECK(a1 == 1.0);
  CHECK(t1 == 0.5);

  double prev = 1.0 + 1e-9;
  for (int k = 0; k < 200; ++k) {
    const auto [a, t] = step_weights(k);
    CHECK(t > 0.0);
    CHECK(t <= 1.0);
    CHECK(t < prev);
    prev = t;
  }
}

TEST_CASE("stopping delta") {
  ObjectiveHistory hist;
  CHECK(std::isinf(stopping_delta(1.0, hist)));

  for (int i = 0; i < 4; ++i) hist.push(3.0);
  CHECK(stopping_delta(3.0, hist) == 0.0);

  ObjectiveHistory h2;
  h2.push(1.5);
  h2.push(2.5);  // mean 2
  CHECK(stopping_delta(2.2, h2) == doctest::Approx(0.1).epsilon(1e-15));

  // Independent re-computation on a random stream with a sliding window.
  Rng rng(4);
  ObjectiveHistory h3;
  std::vector<double> window;
  for (int i = 0; i < 50; ++i) {
    const double f = 1.0 + rng.uniform01();
    if (!window.empty()) {
      double s = 0.0;
      for (double w : window) s += w;
      const double mean = s / static_cast<double>(window.size());
      CHECK(stopping_delta(f, h3) ==
            doctest::Approx(std::abs(f - mean) / mean).epsilon(1e-14));
    }
    h3.push(f);
    window.push_back(f);
    if (window.size() > 10) window.erase(window.begin());
  }
}

TEST_CASE("projection returns q when feasible") {
  const auto a = make_subsampled_dct(32, 8, 1);
  Rng rng(2);
  const Vec x = random_vec(32, rng);
  const Vec b = a->apply(x);
  const auto pr = project_feasible(x, *a, b, 0.5, 10.0);
  CHECK(pr.lambda == 0.0);
  CHECK((pr.point - x).norm() == 0.0);
}

TEST_CASE("projection closed form on the identity operator") {
  // eps=1, L=1, ||b - q|| = 3: lambda = L(||b-q||/eps - 1) = 2 and the
  // projected point sits on the constraint boundary.
  const auto id = make_dense_matrix(Mat::Identity(2, 2), true);
  Vec q(2), b(2);
  q << 0.0, 0.0;
  b << 3.0, 0.0;
  const auto pr = project_feasible(q, *id, b, 1.0, 1.0);
  CHECK(pr.lambda == doctest::Approx(2.0).epsilon(1e-14));
  CHECK((b - pr.point).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projection matches the dense measurement-space oracle") {
  Rng rng(5);
  const Mat a_dense = random_partial_isometry(8, 16, rng);
  const auto a = make_dense_matrix(a_dense, true);
  REQUIRE(a->is_partial_isometry());

  for (int t = 0; t < 25; ++t) {
    const Vec q = random_vec(16, rng);
    const Vec b = random_vec(8, rng);
    const double eps = 0.2 + rng.uniform01();
    const double l_mu = 0.5 + 10.0 * rng.uniform01();
    const auto pr = project_feasible(q, *a, b, eps, l_mu);

    // Oracle: project A q onto the eps-ball around b in measurement space
    // and lift the correction back with A^T.
    const Vec r = b - a_dense * q;
    Vec expect = q;
    if (r.norm() > eps)
      expect += a_dense.transpose() * (r * (1.0 - eps / r.norm()));
    CHECK((pr.point - expect).norm() <= 1e-8 * (1.0 + expect.norm()));
    CHECK((b - a_dense * pr.point).norm() <= eps * (1.0 + 1e-8));
  }
}

TEST_CASE("projection call accounting") {
  const auto a = make_subsampled_dct(64, 16, 3);
  Rng rng(6);
  const Vec q = random_vec(64, rng);
  const Vec b = random_vec(16, rng) * 10.0;
  const Vec atb = a->adjoint(b);

  CallCounter calls;
  project_feasible(q, *a, b, 0.01, 5.0, &calls, &atb);
  CHECK(calls.count() == 3);

  CallCounter feasible_calls;
  project_feasible(q, *a, b, 1e9, 5.0, &feasible_calls, &atb);
  CHECK(feasible_calls.count() == 1);
}

TEST_CASE("projection rejects epsilon = 0 when infeasible") {
  const auto a = make_subsampled_dct(16, 4, 3);
  CHECK_THROWS_AS(
      project_feasible(Vec::Zero(16), *a, Vec::Ones(4), 0.0, 1.0),
      std::invalid_argument);
}

namespace {

struct Snapshot {
  double f, delta, alpha, tau;
  Vec x, grad, cum, y, z;
};

ProblemInstance small_instance(Index n, Index m, Index s, double db,
                               double sigma, std::uint64_t seed, Vec* x_true,
                               double eps_scale = 1.0) {
  const auto a = make_subsampled_dct(n, m, seed);
  Rng rng(seed + 1);
  Vec x0 = gen_sparse_signal(n, s, db, seed + 2);
  Vec b = a->apply(x0);
  for (Index i = 0; i < m; ++i) b[i] += sigma * rng.gaussian();
  if (x_true) *x_true = x0;
  return ProblemInstance{a, b,
                         eps_scale * epsilon0_rule(m, sigma > 0 ? sigma : 0.1)};
}

}  // namespace

TEST_CASE("interior stationary start converges immediately") {
  // Huge epsilon keeps every iterate interior; zero data makes x0 = A* b = 0
  // stationary, so the relative variation criterion fires right away.
  const auto a = make_subsampled_dct(32, 8, 7);
  ProblemInstance problem{a, Vec::Zero(8), 10.0};
  SolverConfig cfg;
  cfg.mu = 0.1;
  cfg.delta = 1e-7;
  const auto res = nesta_solve(problem, SmoothedObjective::l1(0.1), cfg);
  CHECK(res.converged);
  CHECK(res.iterations <= 5);
  CHECK(res.x.norm() == 0.0);
}

TEST_CASE("iterate invariants on a traced solve") {
  Vec x_true;
  const auto problem = small_instance(256, 64, 6, 40.0, 0.1, 11, &x_true);
  SolverConfig cfg;
  cfg.mu = 0.05;
  cfg.delta = 1e-6;
  cfg.max_iter = 400;

  std::vector<Snapshot> log;
  cfg.trace = [&](const IterationInfo& it) {
    log.push_back({it.f_x, it.delta, it.alpha, it.tau, it.x, it.grad,
                   it.cum_grad, it.y, it.z});
  };
  const auto obj = SmoothedObjective::l1(cfg.mu);
  const auto res = nesta_solve(problem, obj, cfg);
  REQUIRE(log.size() == static_cast<std::size_t>(res.iterations));

  const LinearMap& a = *problem.a;
  Vec cum_rec = Vec::Zero(256);
  const double feas = problem.epsilon * (1.0 + 1e-8);
  for (std::size_t k = 0; k < log.size(); ++k) {
    // Feasibility of both projected sequences.
    CHECK((problem.b - a.apply(log[k].y)).norm() <= feas);
    CHECK((problem.b - a.apply(log[k].z)).norm() <= feas);

    // Cumulative weighted gradient recomputed from the logged stream.
    cum_rec += log[k].alpha * log[k].grad;
    CHECK((cum_rec - log[k].cum).norm() == 0.0);

    // x_{k+1} is exactly the stated convex combination.
    if (k + 1 < log.size()) {
      const Vec expect =
          log[k].tau * log[k].z + (1.0 - log[k].tau) * log[k].y;
      CHECK((log[k + 1].x - expect).norm() == 0.0);
    }
  }
  // Solution is the last y.
  CHECK((res.x - log.back().y).norm() == 0.0);
}

TEST_CASE("operator call accounting per iteration") {
  const auto problem = small_instance(256, 64, 6, 40.0, 0.1, 13, nullptr);
  SolverConfig cfg;
  cfg.mu = 0.05;
  cfg.delta = 1e-6;
  cfg.max_iter = 300;
  const auto res =
      nesta_solve(problem, SmoothedObjective::l1(cfg.mu), cfg);
  // One upfront A* b, at most six calls per full iteration and three on the
  // stopping iteration; projections of already-feasible points cost one.
  CHECK(res.calls_a <= 6 * res.iterations - 2);
  CHECK(res.calls_a >= 2 * res.iterations);
}

TEST_CASE("non-finite objective raises a diagnostic") {
  const auto a = make_subsampled_dct(16, 4, 1);
  ProblemInstance problem{a, Vec::Ones(4), 0.1};
  SolverConfig cfg;
  cfg.mu = 0.02;
  cfg.x0 = Vec::Constant(16, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(nesta_solve(problem, SmoothedObjective::l1(cfg.mu), cfg),
                  std::runtime_error);
}

TEST_CASE("config validation") {
  const auto a = make_subsampled_dct(16, 4, 1);
  ProblemInstance problem{a, Vec::Ones(4), 0.1};
  SolverConfig cfg;
  cfg.mu = 0.02;
  CHECK_THROWS_AS(nesta_solve(problem, SmoothedObjective::l1(0.5), cfg),
                  std::invalid_argument);  // mu mismatch

  const auto fd = make_finite_difference2d(4, 4);
  ProblemInstance bad{fd, Vec::Ones(32), 0.1};
  CHECK_THROWS_AS(nesta_solve(bad, SmoothedObjective::l1(0.02), cfg),
                  std::invalid_argument);  // not a partial isometry
}

TEST_CASE("transform path with a full mask reproduces the generic path") {
  const auto a = make_subsampled_dct(64, 64, 21);
  Rng rng(22);
  Vec b = random_vec(64, rng);
  ProblemInstance problem{a, b, 0.5};
  SolverConfig cfg;
  cfg.mu = 0.05;
  cfg.delta = 1e-300;  // run a fixed number of iterations
  cfg.max_iter = 60;
  const auto obj = SmoothedObjective::l1(cfg.mu);
  const auto generic = nesta_solve(problem, obj, cfg);
  const auto fast = solve_in_transform_domain(problem, obj, cfg);
  CHECK(generic.iterations == fast.iterations);
  CHECK((generic.x - fast.x).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(generic.f_final ==
        doctest::Approx(fast.f_final).epsilon(1e-12));
}

TEST_CASE("transform path agrees with the generic path on a subsampled DCT") {
  Vec x_true;
  const auto problem = small_instance(1024, 256, 10, 40.0, 0.1, 23, &x_true);
  SolverConfig cfg;
  cfg.mu = 0.02;
  cfg.delta = 1e-7;
  const auto obj = SmoothedObjective::l1(cfg.mu);
  const auto generic = nesta_solve(problem, obj, cfg);
  const auto fast = solve_in_transform_domain(problem, obj, cfg);
  CHECK(std::abs(generic.f_final - fast.f_final) <=
        1e-8 * std::abs(generic.f_final));
}

TEST_CASE("transform path costs two unitary calls per iteration") {
  const auto problem = small_instance(512, 128, 8, 30.0, 0.1, 25, nullptr);
  SolverConfig cfg;
  cfg.mu = 0.05;
  cfg.delta = 1e-6;
  const auto res =
      solve_in_transform_domain(problem, SmoothedObjective::l1(cfg.mu), cfg);
  // 2 per iteration plus the final map back to the signal domain.
  CHECK(res.calls_a == 2 * res.iterations + 1);
}

TEST_CASE("transform path requires an R U factorization") {
  Rng rng(31);
  const auto dense =
      make_dense_matrix(random_partial_isometry(4, 16, rng), true);
  ProblemInstance problem{dense, Vec::Ones(4), 0.5};
  SolverConfig cfg;
  cfg.mu = 0.1;
  CHECK_THROWS_AS(
      solve_in_transform_domain(problem, SmoothedObjective::l1(0.1), cfg),
      std::invalid_argument);
}

TEST_CASE("degenerate continuation equals a plain solve") {
  Vec x_true;
  const auto problem = small_instance(256, 64, 6, 40.0, 0.1, 33, &x_true);
  SolverConfig cfg;
  cfg.mu = 0.05;
  cfg.delta = 1e-6;
  const auto obj = SmoothedObjective::l1(cfg.mu);

  ContinuationConfig ccfg;
  ccfg.steps = 1;
  ccfg.mu0 = cfg.mu;  // gamma = 1

  ccfg.use_transform_path = false;
  const auto plain = nesta_solve(problem, obj, cfg);
  const auto cont = nesta_continuation(problem, obj, cfg, ccfg);
  CHECK(cont.iterations == plain.iterations);
  CHECK(cont.calls_a == plain.calls_a);
  CHECK((cont.x - plain.x).norm() == 0.0);

  ccfg.use_transform_path = true;
  const auto fast_plain = solve_in_transform_domain(problem, obj, cfg);
  const auto fast_cont = nesta_continuation(problem, obj, cfg, ccfg);
  CHECK(fast_cont.iterations == fast_plain.iterations);
  CHECK((fast_cont.x - fast_plain.x).norm() == 0.0);
}

TEST_CASE("continuation steps follow the geometric mu schedule") {
  Vec x_true;
  const auto problem = small_instance(256, 64, 6, 60.0, 0.1, 35, &x_true);
  SolverConfig cfg;
  cfg.mu = 0.02;
  cfg.delta = 1e-6;
  const auto obj = SmoothedObjective::l1(cfg.mu);
  ContinuationConfig ccfg;
  ccfg.steps = 4;
  const auto res = nesta_continuation(problem, obj, cfg, ccfg);
  REQUIRE(res.per_step.size() == 4);

  const Vec atb = problem.a->adjoint(problem.b);
  const double mu0 = 0.9 * atb.cwiseAbs().maxCoeff();
  const double gamma = std::pow(cfg.mu / mu0, 1.0 / 4.0);
  CHECK(gamma > 0.0);
  CHECK(gamma < 1.0);
  for (int t = 1; t <= 4; ++t) {
    const double expect = t == 4 ? cfg.mu : mu0 * std::pow(gamma, t);
    CHECK(res.per_step[static_cast<std::size_t>(t - 1)].mu == expect);
  }
  // The schedule lands on mu_f to rounding even without the exact pin.
  CHECK(mu0 * std::pow(gamma, 4) ==
        doctest::Approx(cfg.mu).epsilon(1e-12));
  CHECK(res.converged);
}

TEST_CASE("continuation rejects mu0 below the terminal mu") {
  const auto problem = small_instance(64, 16, 2, 20.0, 0.1, 37, nullptr);
  SolverConfig cfg;
  cfg.mu = 0.05;
  ContinuationConfig ccfg;
  ccfg.mu0 = 0.01;
  CHECK_THROWS_AS(nesta_continuation(problem, SmoothedObjective::l1(cfg.mu),
                                     cfg, ccfg),
                  std::invalid_argument);
}

TEST_CASE("convergence rate bound on a small fixed-mu instance") {
  Vec x_true;
  const auto problem = small_instance(128, 32, 4, 20.0, 0.1, 41, &x_true);
  const double mu = 0.2;
  const auto obj = SmoothedObjective::l1(mu);
  const double l_mu = obj.lipschitz();

  SolverConfig long_cfg;
  long_cfg.mu = mu;
  long_cfg.delta = 1e-300;
  long_cfg.max_iter = 20000;
  const Vec x_star =
      solve_in_transform_domain(problem, obj, long_cfg).x;
  const double f_star = l1_value_grad(x_star, mu).value;

  const Vec x0 = problem.a->adjoint(problem.b);
  const double pp_star = 0.5 * (x_star - x0).squaredNorm();

  SolverConfig cfg;
  cfg.mu = mu;
  cfg.delta = 1e-300;
  cfg.max_iter = 1500;
  int violations = 0;
  cfg.trace = [&](const IterationInfo& it) {
    const double fy = l1_value_grad(it.y, mu).value;
    const double bound =
        4.0 * l_mu * pp_star / ((it.k + 1.0) * (it.k + 1.0));
    if (fy - f_star > bound * (1.0 + 1e-12) + 1e-12) ++violations;
  };
  nesta_solve(problem, obj, cfg);
  CHECK(violations == 0);
}

TEST_CASE("matched-lambda agreement with the long FISTA run") {
  // Dense support and high dynamic range as in the mu-accuracy study; the
  // relative l1 floor at mu = 0.02 scales like n mu / ||x||_1, so the signal
  // norm has to dominate it for a 1.5e-4 agreement.
  Vec x_true;
  const auto problem = small_instance(4096, 512, 102, 100.0, 0.1, 43, &x_true);
  const MatchedPair pair =
      lambda_epsilon_handshake(problem.a, problem.b, 0.1);

  ProblemInstance matched{problem.a, problem.b, pair.epsilon1};
  SolverConfig cfg;
  cfg.mu = 0.02;
  cfg.delta = 1e-7;
  const auto res = nesta_continuation(matched, SmoothedObjective::l1(cfg.mu),
                                      cfg, ContinuationConfig{});
  CHECK(res.converged);
  const double ref = pair.x_reference.lpNorm<1>();
  CHECK(std::abs(res.x.lpNorm<1>() - ref) / ref <= 1.5e-4);
}

TEST_SUITE_END();
