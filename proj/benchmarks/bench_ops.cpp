#include <benchmark/benchmark.h>

#include "nesta/bench.hpp"
#include "nesta/linear_map.hpp"
#include "nesta/reference.hpp"
#include "nesta/rng.hpp"
#include "nesta/smoothing.hpp"
#include "nesta/solver.hpp"

using namespace nesta;

namespace {

Vec random_vec(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

void bm_subsampled_dct_apply(benchmark::State& state) {
  const Index n = state.range(0);
  const auto a = make_subsampled_dct(n, n / 8, 1);
  const Vec x = random_vec(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a->apply(x));
}
BENCHMARK(bm_subsampled_dct_apply)->Range(1 << 10, 1 << 18);

void bm_hadamard_apply(benchmark::State& state) {
  const Index n = state.range(0);
  const auto a = make_permuted_subsampled_hadamard(n, n / 8, 1);
  const Vec x = random_vec(n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(a->apply(x));
}
BENCHMARK(bm_hadamard_apply)->Range(1 << 10, 1 << 18);

void bm_partial_fourier_apply(benchmark::State& state) {
  const Index side = state.range(0);
  const auto a = make_partial_fourier2d(side, side, side * side / 10, 1);
  const Vec x = random_vec(side * side, 4);
  for (auto _ : state) benchmark::DoNotOptimize(a->apply(x));
}
BENCHMARK(bm_partial_fourier_apply)->Arg(64)->Arg(128)->Arg(256);

void bm_huber_grad(benchmark::State& state) {
  const Vec x = random_vec(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(l1_value_grad(x, 0.02));
}
BENCHMARK(bm_huber_grad)->Range(1 << 10, 1 << 18);

void bm_tv_grad(benchmark::State& state) {
  const Index side = state.range(0);
  const Vec x = random_vec(side * side, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(tv_value_grad(x, side, side, 0.2));
}
BENCHMARK(bm_tv_grad)->Arg(64)->Arg(128)->Arg(256);

void bm_projection(benchmark::State& state) {
  const Index n = state.range(0);
  const auto a = make_subsampled_dct(n, n / 8, 1);
  const Vec q = random_vec(n, 7);
  const Vec b = random_vec(n / 8, 8);
  const Vec atb = a->adjoint(b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        project_feasible(q, *a, b, 0.1, 50.0, nullptr, &atb));
  }
}
BENCHMARK(bm_projection)->Range(1 << 12, 1 << 16);

void bm_nesta_continuation(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = n / 8;
  const auto a = make_subsampled_dct(n, m, 1);
  const Vec x_true = gen_sparse_signal(n, m / 40, 60.0, 2);
  Vec b = a->apply(x_true);
  Rng rng(3);
  for (Index i = 0; i < m; ++i) b[i] += 0.1 * rng.gaussian();
  ProblemInstance problem{a, b, epsilon0_rule(m, 0.1)};
  SolverConfig cfg;
  cfg.mu = 0.02;
  cfg.delta = 1e-6;
  const auto obj = SmoothedObjective::l1(cfg.mu);
  for (auto _ : state) {
    auto res = nesta_continuation(problem, obj, cfg, ContinuationConfig{});
    benchmark::DoNotOptimize(res);
    state.counters["calls_A"] = static_cast<double>(res.calls_a);
  }
}
BENCHMARK(bm_nesta_continuation)->Arg(1 << 12)->Arg(1 << 14)
    ->Unit(benchmark::kMillisecond);

void bm_fista(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = n / 8;
  const auto a = make_subsampled_dct(n, m, 1);
  const Vec x_true = gen_sparse_signal(n, m / 40, 20.0, 2);
  Vec b = a->apply(x_true);
  Rng rng(3);
  for (Index i = 0; i < m; ++i) b[i] += 0.1 * rng.gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fista_solve(*a, b, 0.1, 1e-6, 2000));
  }
}
BENCHMARK(bm_fista)->Arg(1 << 12)->Arg(1 << 14)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
