#include "nesta/reference.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

#include "nesta/smoothing.hpp"
#include "nesta/solver.hpp"

namespace nesta {

double shrink(double v, double t) {
  const double a = std::abs(v) - t;
  return a > 0.0 ? (v > 0.0 ? a : -a) : 0.0;
}

Vec shrink(const Vec& v, double t) {
  Vec out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = shrink(v[i], t);
  return out;
}

FistaResult fista_solve(const LinearMap& a, const Vec& b, double lambda,
                        double tol, int max_iter, const Vec& x0,
                        const ExternalStop& external_stop) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("fista: lambda must be > 0");
  if (b.size() != a.out_dim())
    throw DimensionError("fista: b", a.out_dim(), b.size());
  if (x0.size() != 0 && x0.size() != a.in_dim())
    throw DimensionError("fista: x0", a.in_dim(), x0.size());
  if (max_iter < 1) throw std::invalid_argument("fista: max_iter must be >= 1");

  double op_norm_sq = 1.0;
  if (!a.is_partial_isometry()) {
    const double bound = a.norm_bound() > 0.0
                             ? a.norm_bound()
                             : power_iteration_norm(a, 50, 0x6e6f726d);
    op_norm_sq = bound * bound;
  }
  const double step = 1.0 / op_norm_sq;
  const double thresh = lambda * step;

  CallCounter calls;
  FistaResult res;
  res.objective_history.reserve(static_cast<std::size_t>(max_iter));

  Vec x = x0.size() != 0 ? x0 : Vec::Zero(a.in_dim());
  Vec ax = x.isZero(0.0) ? Vec::Zero(a.out_dim()) : a.apply(x, &calls);
  Vec x_prev = x;
  Vec ax_prev = ax;
  double t = 1.0;
  double f_best = lambda * x.lpNorm<1>() + 0.5 * (b - ax).squaredNorm();
  ObjectiveHistory hist;
  hist.push(f_best);
  int rising = 0;

  for (int k = 0; k < max_iter; ++k) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double c = (t - 1.0) / t_next;
    // y_k and A y_k via the momentum recursion; no operator call needed.
    const Vec y = x + c * (x - x_prev);
    const Vec ay = ax + c * (ax - ax_prev);

    const Vec grad = a.adjoint(ay - b, &calls);
    Vec x_new = shrink(y - step * grad, thresh);
    Vec ax_new = a.apply(x_new, &calls);
    const double f = lambda * x_new.lpNorm<1>() +
                     0.5 * (b - ax_new).squaredNorm();
    res.objective_history.push_back(f);

    // Momentum makes the objective ripple; divergence means staying far
    // above the best value seen.
    if (f > 2.0 * f_best) {
      if (++rising >= 100)
        throw std::runtime_error("fista: objective diverging");
    } else {
      rising = 0;
    }
    f_best = std::min(f_best, f);

    x_prev = std::move(x);
    ax_prev = std::move(ax);
    x = std::move(x_new);
    ax = std::move(ax_new);
    t = t_next;
    res.iterations = k + 1;

    const double delta = stopping_delta(f, hist);
    hist.push(f);
    if (external_stop) {
      if (external_stop(x, ax)) {
        res.converged = true;
        break;
      }
    } else if (delta < tol) {
      res.converged = true;
      break;
    }
  }

  res.x = std::move(x);
  res.calls_a = calls.count();
  return res;
}

Vec oracle_solution(const LinearMap& a, const Vec& b,
                    const std::vector<Index>& support, const Vec& signs,
                    double lambda) {
  const Index s = static_cast<Index>(support.size());
  if (signs.size() != s)
    throw DimensionError("oracle: signs", s, signs.size());
  if (s > a.out_dim())
    throw std::invalid_argument("oracle: support larger than m");
  if (b.size() != a.out_dim())
    throw DimensionError("oracle: b", a.out_dim(), b.size());

  Mat cols(a.out_dim(), s);
  Vec e = Vec::Zero(a.in_dim());
  for (Index j = 0; j < s; ++j) {
    const Index idx = support[static_cast<std::size_t>(j)];
    if (idx < 0 || idx >= a.in_dim())
      throw std::invalid_argument("oracle: support index out of range");
    e[idx] = 1.0;
    cols.col(j) = a.apply(e);
    e[idx] = 0.0;
  }

  const Mat gram = cols.transpose() * cols;
  const Vec rhs = cols.transpose() * b - lambda * signs;

  Vec w;
  Eigen::LLT<Mat> llt(gram);
  if (llt.info() == Eigen::Success) {
    w = llt.solve(rhs);
  } else {
    Eigen::ColPivHouseholderQR<Mat> qr(gram);
    if (qr.rank() < s)
      throw std::runtime_error("oracle: A[I] is rank deficient");
    w = qr.solve(rhs);
  }

  Vec x = Vec::Zero(a.in_dim());
  for (Index j = 0; j < s; ++j) x[support[static_cast<std::size_t>(j)]] = w[j];
  return x;
}

KktReport kkt_check(const Vec& x, const LinearMap& a, const Vec& b,
                    double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("kkt_check: lambda must be > 0");
  const Vec corr = a.adjoint(b - a.apply(x));

  // Support detection threshold for approximate solutions.
  const double thresh = 1e-8 * x.cwiseAbs().maxCoeff();

  KktReport rep;
  double on = 0.0, off = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > thresh) {
      ++rep.support_size;
      const double sgn = x[i] > 0.0 ? 1.0 : -1.0;
      on = std::max(on, std::abs(corr[i] - lambda * sgn));
    } else {
      off = std::max(off, std::abs(corr[i]));
    }
  }
  rep.support_residual = on / lambda;
  rep.offsupport_ratio = off / lambda;
  return rep;
}

double epsilon0_rule(Index m, double sigma) {
  return std::sqrt(static_cast<double>(m) +
                   2.0 * std::sqrt(2.0 * static_cast<double>(m))) *
         sigma;
}

MatchedPair lambda_epsilon_handshake(MapPtr a, const Vec& b, double sigma,
                                     double tol) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("handshake: sigma must be > 0");
  const double eps0 = epsilon0_rule(a->out_dim(), sigma);

  ProblemInstance problem{a, b, eps0};
  SolverConfig cfg;
  cfg.mu = 0.02;
  cfg.delta = tol;
  SmoothedObjective obj = SmoothedObjective::l1(cfg.mu);
  ContinuationConfig ccfg;
  ccfg.steps = 5;
  const SolveResult sol = nesta_continuation(problem, obj, cfg, ccfg);

  // Multiplier of the terminal y-projection, evaluated at the solution:
  // nu = L max(0, ||b - A q|| / eps - 1) with q the gradient step off the
  // solution. The Lagrangian problem matching the constrained one at eps0
  // has lambda = 1/nu.
  const double l_mu = obj.lipschitz();
  const Vec grad = obj.value_grad(sol.x).grad;
  const Vec q = sol.x - grad / l_mu;
  const double nr = (b - a->apply(q)).norm();
  const double nu = l_mu * std::max(0.0, nr / eps0 - 1.0);
  double lambda;
  if (nu > 0.0) {
    lambda = 1.0 / nu;
  } else {
    // Inactive constraint; fall back to the stationarity reading.
    lambda = a->adjoint(b - a->apply(sol.x)).cwiseAbs().maxCoeff();
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::runtime_error("handshake: could not estimate lambda(eps0)");

  FistaResult fista = fista_solve(*a, b, lambda, 1e-14, 100000);
  MatchedPair out;
  out.lambda = lambda;
  out.epsilon1 = (a->apply(fista.x) - b).norm();
  out.x_reference = std::move(fista.x);
  return out;
}

}  // namespace nesta
