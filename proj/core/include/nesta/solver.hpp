#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "nesta/linear_map.hpp"
#include "nesta/smoothing.hpp"

namespace nesta {

/// One quadratically constrained recovery problem:
/// minimize f(x) subject to ||b - A x||_2 <= epsilon.
struct ProblemInstance {
  MapPtr a;
  Vec b;
  double epsilon = 0.0;
};

/// Snapshot handed to a trace callback once per iteration. References are
/// only valid during the call.
struct IterationInfo {
  int k;
  double f_x;     // f_mu(x_k)
  double delta;   // relative objective variation used by the stopping rule
  double alpha;   // alpha_k
  double tau;     // tau_k
  const Vec& x;
  const Vec& grad;
  const Vec& cum_grad;  // sum_{i<=k} alpha_i grad f_mu(x_i)
  const Vec& y;
  const Vec& z;
};

using TraceFn = std::function<void(const IterationInfo&)>;

struct SolverConfig {
  double mu = 0.02;
  double delta = 1e-7;
  int max_iter = 10000;
  Vec x0;  // initial guess and prox-center; empty means A* b

  /// Diagnostic callback; forces the z-projection even on the stopping
  /// iteration. Only supported on the generic path.
  TraceFn trace;
};

struct ContinuationConfig {
  int steps = 4;     // T
  double mu0 = 0.0;  // <= 0 selects 0.9 ||A* b||_inf
  /// Route through the R U factorization (diagonal projections, two unitary
  /// applications per iteration) whenever the operator provides one.
  bool use_transform_path = true;
};

struct ContinuationStep {
  double mu;
  int iterations;
  double f_final;
};

struct SolveResult {
  Vec x;
  double f_final = 0.0;  // stopping-rule objective value f_mu(x_k)
  int iterations = 0;
  std::int64_t calls_a = 0;
  bool converged = false;
  std::vector<ContinuationStep> per_step;
};

/// Accelerated-scheme weights: alpha_k = (k+1)/2, tau_k = 2/(k+3).
std::pair<double, double> step_weights(int k);

/// Ring buffer of the last 10 objective values, oldest evicted first.
class ObjectiveHistory {
 public:
  void push(double f);
  bool empty() const noexcept { return count_ == 0; }
  double mean() const;

 private:
  std::array<double, 10> vals_{};
  int count_ = 0;
  int head_ = 0;
};

/// Relative variation |f_k - mean(history)| / mean(history). Defined as
/// +infinity on an empty history (never stop at k = 0) and as 0 for
/// f_k = mean = 0 (identically zero objective).
double stopping_delta(double f_k, const ObjectiveHistory& history);

struct Projection {
  Vec point;
  double lambda = 0.0;
};

/// Minimizer of ||x - q||^2 over {x : ||b - A x|| <= epsilon} for a partial
/// isometry A, with the multiplier lambda = L_mu * max(0, ||b - A q||/eps - 1)
/// that makes the KKT system exact. Costs exactly 3 operator applications
/// when A* b is supplied, 4 otherwise. A feasible q returns (q, 0) after the
/// one residual evaluation.
Projection project_feasible(const Vec& q, const LinearMap& a, const Vec& b,
                            double epsilon, double l_mu,
                            CallCounter* calls = nullptr,
                            const Vec* cached_atb = nullptr);

/// One fixed-mu solve of min f_mu over the feasible set, three-sequence
/// accelerated scheme with prox-center cfg.x0. Returns y_k. Requires
/// obj.mu() == cfg.mu and a partial-isometry operator. Six A/A* applications
/// per iteration plus one upfront A* b.
SolveResult nesta_solve(const ProblemInstance& problem,
                        const SmoothedObjective& obj, const SolverConfig& cfg,
                        CallCounter* dict_calls = nullptr);

/// Same iteration carried out in the U-domain for operators factoring as
/// R U: projections use the diagonal R* R, and only the gradient costs two
/// unitary applications per iteration. Supports epsilon = 0 (exact data
/// interpolation on the sampled coordinates). Results match nesta_solve up
/// to solver tolerance.
SolveResult solve_in_transform_domain(const ProblemInstance& problem,
                                      const SmoothedObjective& obj,
                                      const SolverConfig& cfg,
                                      CallCounter* dict_calls = nullptr);

/// Continuation wrapper: T successive solves at mu_t = gamma^t mu0 with
/// gamma = (mu_f/mu0)^(1/T) and per-step tolerances
/// delta_t = 0.1 (delta/0.1)^(t/T), each warm-started (solution and
/// prox-center) at the previous step's output. cfg.mu and cfg.delta are the
/// terminal values; the last step runs at exactly those.
SolveResult nesta_continuation(const ProblemInstance& problem,
                               const SmoothedObjective& obj,
                               const SolverConfig& cfg,
                               const ContinuationConfig& ccfg,
                               CallCounter* dict_calls = nullptr);

}  // namespace nesta
