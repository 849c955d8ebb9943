#include "nesta/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nesta {

std::pair<double, double> step_weights(int k) {
  return {0.5 * (k + 1), 2.0 / (k + 3)};
}

void ObjectiveHistory::push(double f) {
  vals_[static_cast<std::size_t>(head_)] = f;
  head_ = (head_ + 1) % static_cast<int>(vals_.size());
  if (count_ < static_cast<int>(vals_.size())) ++count_;
}

double ObjectiveHistory::mean() const {
  double s = 0.0;
  for (int i = 0; i < count_; ++i) s += vals_[static_cast<std::size_t>(i)];
  return s / count_;
}

double stopping_delta(double f_k, const ObjectiveHistory& history) {
  if (history.empty()) return std::numeric_limits<double>::infinity();
  const double m = history.mean();
  if (m == 0.0)
    return f_k == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(f_k - m) / m;
}

Projection project_feasible(const Vec& q, const LinearMap& a, const Vec& b,
                            double epsilon, double l_mu, CallCounter* calls,
                            const Vec* cached_atb) {
  if (!a.is_partial_isometry())
    throw std::invalid_argument(
        "project_feasible: operator must be a partial isometry");
  if (epsilon < 0.0)
    throw std::invalid_argument("project_feasible: epsilon must be >= 0");
  if (!(l_mu > 0.0))
    throw std::invalid_argument("project_feasible: L_mu must be > 0");

  const Vec aq = a.apply(q, calls);
  const double nr = (b - aq).norm();
  if (nr <= epsilon) return {q, 0.0};
  if (epsilon == 0.0)
    throw std::invalid_argument(
        "project_feasible: epsilon = 0 is only supported on the "
        "transform-domain path");

  const double lambda = l_mu * (nr / epsilon - 1.0);
  Vec atb_local;
  if (!cached_atb) {
    atb_local = a.adjoint(b, calls);
    cached_atb = &atb_local;
  }
  const Vec v = q + (lambda / l_mu) * (*cached_atb);
  const Vec w = a.adjoint(a.apply(v, calls), calls);
  Vec point = v - (lambda / (lambda + l_mu)) * w;
  return {std::move(point), lambda};
}

namespace {

void check_inputs(const ProblemInstance& problem, const SmoothedObjective& obj,
                  const SolverConfig& cfg) {
  if (!problem.a) throw std::invalid_argument("nesta: missing operator");
  const LinearMap& a = *problem.a;
  if (!a.is_partial_isometry())
    throw std::invalid_argument(
        "nesta: A must be a partial isometry (A A* = I)");
  if (problem.b.size() != a.out_dim())
    throw DimensionError("nesta: b", a.out_dim(), problem.b.size());
  if (problem.epsilon < 0.0)
    throw std::invalid_argument("nesta: epsilon must be >= 0");
  if (obj.mu() != cfg.mu)
    throw std::invalid_argument("nesta: objective mu differs from config mu");
  if (!(cfg.delta > 0.0))
    throw std::invalid_argument("nesta: delta must be > 0");
  if (cfg.max_iter < 1)
    throw std::invalid_argument("nesta: max_iter must be >= 1");
  const Index sd = obj.signal_dim();
  if (sd != 0 && sd != a.in_dim())
    throw DimensionError("nesta: objective", a.in_dim(), sd);
  if (cfg.x0.size() != 0 && cfg.x0.size() != a.in_dim())
    throw DimensionError("nesta: x0", a.in_dim(), cfg.x0.size());
}

void check_finite(double f, const Vec& g, int k) {
  if (!std::isfinite(f) || !g.allFinite())
    throw std::runtime_error("nesta: non-finite objective at iteration " +
                             std::to_string(k));
}

// Fixed-mu solve on the generic path. Fills everything except calls_a.
SolveResult generic_solve(const ProblemInstance& problem,
                          const SmoothedObjective& obj,
                          const SolverConfig& cfg, CallCounter& calls,
                          const Vec* cached_atb, CallCounter* dict_calls) {
  const LinearMap& a = *problem.a;
  Vec atb_local;
  if (!cached_atb) {
    atb_local = a.adjoint(problem.b, &calls);
    cached_atb = &atb_local;
  }
  const Vec x0 = cfg.x0.size() != 0 ? cfg.x0 : *cached_atb;
  const double l_mu = obj.lipschitz();

  SolveResult res;
  Vec x = x0;
  Vec cum = Vec::Zero(x.size());
  ObjectiveHistory hist;

  for (int k = 0; k < cfg.max_iter; ++k) {
    ValueGrad vg = obj.value_grad(x, dict_calls);
    check_finite(vg.value, vg.grad, k);
    const double delta = stopping_delta(vg.value, hist);
    hist.push(vg.value);
    const auto [alpha, tau] = step_weights(k);
    cum += alpha * vg.grad;

    Projection py = project_feasible(x - vg.grad / l_mu, a, problem.b,
                                     problem.epsilon, l_mu, &calls,
                                     cached_atb);

    const bool stop = delta < cfg.delta;
    const bool continuing = !stop && k + 1 < cfg.max_iter;

    Projection pz;
    if (continuing || cfg.trace)
      pz = project_feasible(x0 - cum / l_mu, a, problem.b, problem.epsilon,
                            l_mu, &calls, cached_atb);
    if (cfg.trace)
      cfg.trace(IterationInfo{k, vg.value, delta, alpha, tau, x, vg.grad, cum,
                              py.point, pz.point});

    res.f_final = vg.value;
    res.iterations = k + 1;
    if (!continuing) {
      res.converged = stop;
      res.x = std::move(py.point);
      break;
    }
    x = tau * pz.point + (1.0 - tau) * py.point;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Transform-domain path: iterate on x_hat = U x, project with the diagonal
// R* R, and touch U only for the gradient.
// ---------------------------------------------------------------------------

struct UDomain {
  const LinearMap* unitary;
  const SamplingMask* mask;
  const Vec* b;
  double eps;

  // Projection of q onto {x : ||b - R x|| <= eps}; only the sampled
  // coordinates move. eps = 0 pins them to b exactly.
  Vec project(const Vec& q, double l_mu) const {
    const auto& kept = mask->kept;
    const Index m = static_cast<Index>(kept.size());
    double nr2 = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double d = (*b)[i] - q[kept[static_cast<std::size_t>(i)]];
      nr2 += d * d;
    }
    const double nr = std::sqrt(nr2);
    if (nr <= eps) return q;
    Vec p = q;
    if (eps == 0.0) {
      for (Index i = 0; i < m; ++i)
        p[kept[static_cast<std::size_t>(i)]] = (*b)[i];
      return p;
    }
    const double lambda = l_mu * (nr / eps - 1.0);
    const double denom = lambda + l_mu;
    for (Index i = 0; i < m; ++i) {
      const Index j = kept[static_cast<std::size_t>(i)];
      p[j] = (l_mu * q[j] + lambda * (*b)[i]) / denom;
    }
    return p;
  }
};

struct UDomainResult {
  Vec y_hat;
  double f_final = 0.0;
  int iterations = 0;
  bool converged = false;
};

UDomainResult udomain_solve(const UDomain& dom, const SmoothedObjective& obj,
                            double delta_tol, int max_iter, const Vec& x0_hat,
                            CallCounter& calls, CallCounter* dict_calls) {
  const LinearMap& u = *dom.unitary;
  const double l_mu = obj.lipschitz();

  UDomainResult res;
  Vec x = x0_hat;
  Vec cum = Vec::Zero(x.size());
  ObjectiveHistory hist;

  for (int k = 0; k < max_iter; ++k) {
    const Vec x_sig = u.adjoint(x, &calls);
    ValueGrad vg = obj.value_grad(x_sig, dict_calls);
    check_finite(vg.value, vg.grad, k);
    const Vec g_hat = u.apply(vg.grad, &calls);
    const double delta = stopping_delta(vg.value, hist);
    hist.push(vg.value);
    const auto [alpha, tau] = step_weights(k);
    cum += alpha * g_hat;

    Vec y = dom.project(x - g_hat / l_mu, l_mu);

    res.f_final = vg.value;
    res.iterations = k + 1;
    if (delta < delta_tol || k + 1 == max_iter) {
      res.converged = delta < delta_tol;
      res.y_hat = std::move(y);
      break;
    }
    const Vec z = dom.project(x0_hat - cum / l_mu, l_mu);
    x = tau * z + (1.0 - tau) * y;
  }
  return res;
}

UDomain make_udomain(const ProblemInstance& problem) {
  const auto ts = problem.a->transform_structure();
  if (!ts)
    throw std::invalid_argument(
        "transform path: operator does not factor as R U");
  return UDomain{ts->unitary, ts->mask, &problem.b, problem.epsilon};
}

}  // namespace

SolveResult nesta_solve(const ProblemInstance& problem,
                        const SmoothedObjective& obj, const SolverConfig& cfg,
                        CallCounter* dict_calls) {
  check_inputs(problem, obj, cfg);
  CallCounter calls;
  SolveResult res = generic_solve(problem, obj, cfg, calls, nullptr,
                                  dict_calls);
  res.calls_a = calls.count();
  return res;
}

SolveResult solve_in_transform_domain(const ProblemInstance& problem,
                                      const SmoothedObjective& obj,
                                      const SolverConfig& cfg,
                                      CallCounter* dict_calls) {
  check_inputs(problem, obj, cfg);
  if (cfg.trace)
    throw std::invalid_argument(
        "transform path: trace callbacks are only supported by nesta_solve");
  const UDomain dom = make_udomain(problem);
  CallCounter calls;

  // x0 = A* b lives at R* b in the U-domain, no transform needed.
  Vec x0_hat = cfg.x0.size() != 0 ? dom.unitary->apply(cfg.x0, &calls)
                                  : dom.mask->scatter(problem.b);
  UDomainResult ur = udomain_solve(dom, obj, cfg.delta, cfg.max_iter, x0_hat,
                                   calls, dict_calls);

  SolveResult res;
  res.x = dom.unitary->adjoint(ur.y_hat, &calls);
  res.f_final = ur.f_final;
  res.iterations = ur.iterations;
  res.converged = ur.converged;
  res.calls_a = calls.count();
  return res;
}

SolveResult nesta_continuation(const ProblemInstance& problem,
                               const SmoothedObjective& obj,
                               const SolverConfig& cfg,
                               const ContinuationConfig& ccfg,
                               CallCounter* dict_calls) {
  check_inputs(problem, obj, cfg);
  if (ccfg.steps < 1)
    throw std::invalid_argument("continuation: steps must be >= 1");

  const bool transform =
      ccfg.use_transform_path && problem.a->transform_structure().has_value();
  if (transform && cfg.trace)
    throw std::invalid_argument(
        "continuation: trace requires use_transform_path = false");

  CallCounter calls;
  const int T = ccfg.steps;

  // mu0 default is 0.9 ||A* b||_inf; an explicit mu0 below mu_f is an error,
  // a computed one is clamped (gamma = 1).
  double mu0 = ccfg.mu0;
  Vec atb;  // signal domain; only fetched when needed on the transform path
  if (!transform || mu0 <= 0.0)
    atb = problem.a->adjoint(problem.b, &calls);
  if (mu0 <= 0.0) {
    mu0 = 0.9 * atb.cwiseAbs().maxCoeff();
    if (mu0 < cfg.mu) mu0 = cfg.mu;
  } else if (mu0 < cfg.mu) {
    throw std::invalid_argument("continuation: mu0 must be >= mu");
  }
  const double gamma = std::pow(cfg.mu / mu0, 1.0 / T);

  SolveResult res;
  res.per_step.reserve(static_cast<std::size_t>(T));

  if (transform) {
    const UDomain dom = make_udomain(problem);
    Vec x_hat = cfg.x0.size() != 0 ? dom.unitary->apply(cfg.x0, &calls)
                                   : dom.mask->scatter(problem.b);
    UDomainResult ur;
    for (int t = 1; t <= T; ++t) {
      const double mu_t = t == T ? cfg.mu : mu0 * std::pow(gamma, t);
      const double delta_t =
          t == T ? cfg.delta
                 : 0.1 * std::pow(cfg.delta / 0.1, static_cast<double>(t) / T);
      ur = udomain_solve(dom, obj.with_mu(mu_t), delta_t, cfg.max_iter, x_hat,
                         calls, dict_calls);
      x_hat = ur.y_hat;
      res.per_step.push_back({mu_t, ur.iterations, ur.f_final});
    }
    res.x = dom.unitary->adjoint(x_hat, &calls);
    res.f_final = ur.f_final;
    res.iterations = ur.iterations;
    res.converged = ur.converged;
  } else {
    Vec x = cfg.x0.size() != 0 ? cfg.x0 : atb;
    SolveResult sub;
    for (int t = 1; t <= T; ++t) {
      const double mu_t = t == T ? cfg.mu : mu0 * std::pow(gamma, t);
      const double delta_t =
          t == T ? cfg.delta
                 : 0.1 * std::pow(cfg.delta / 0.1, static_cast<double>(t) / T);
      SolverConfig step_cfg;
      step_cfg.mu = mu_t;
      step_cfg.delta = delta_t;
      step_cfg.max_iter = cfg.max_iter;
      step_cfg.x0 = x;
      step_cfg.trace = cfg.trace;
      sub = generic_solve(problem, obj.with_mu(mu_t), step_cfg, calls, &atb,
                          dict_calls);
      x = sub.x;
      res.per_step.push_back({mu_t, sub.iterations, sub.f_final});
    }
    res.x = std::move(sub.x);
    res.f_final = sub.f_final;
    res.iterations = sub.iterations;
    res.converged = sub.converged;
  }
  res.calls_a = calls.count();
  return res;
}

}  // namespace nesta
