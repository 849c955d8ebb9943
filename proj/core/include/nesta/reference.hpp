#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nesta/linear_map.hpp"

namespace nesta {

/// Soft threshold sign(v) max(|v| - t, 0).
double shrink(double v, double t);
Vec shrink(const Vec& v, double t);

struct FistaResult {
  Vec x;
  std::vector<double> objective_history;  // lambda ||x_k||_1 + 1/2 ||b-Ax_k||^2
  int iterations = 0;
  std::int64_t calls_a = 0;
  bool converged = false;
};

/// Called once per iteration with x_k and A x_k; returning true stops the
/// run (cross-solver stopping criteria).
using ExternalStop = std::function<bool(const Vec& x, const Vec& ax)>;

/// Accelerated proximal gradient on lambda ||x||_1 + 1/2 ||b - A x||^2 with
/// step 1/||A||^2 (1 for partial isometries). A y_k is tracked through the
/// momentum recursion, so each iteration costs one A and one A*. Stops when
/// the relative objective variation against the mean of the last <= 10
/// values drops below tol, or, when external_stop is given, on that
/// predicate alone. Throws on 100 consecutive relative objective increases
/// beyond tol.
FistaResult fista_solve(const LinearMap& a, const Vec& b, double lambda,
                        double tol, int max_iter, const Vec& x0 = Vec(),
                        const ExternalStop& external_stop = nullptr);

struct KktReport {
  double support_residual = 0.0;  // ||A[I]*(b-Ax) - lambda sgn(x[I])||_inf / lambda
  double offsupport_ratio = 0.0;  // ||A[Ic]*(b-Ax)||_inf / lambda
  Index support_size = 0;
};

/// Candidate optimum of the Lagrangian problem when support and signs of the
/// true signal are known: solves the |I| x |I| normal system
/// (A[I]* A[I]) x[I] = A[I]* b - lambda signs, zero off support. Dense
/// Cholesky with a column-pivoted QR fallback; throws when A[I] is rank
/// deficient. Callers should confirm the result with kkt_check.
Vec oracle_solution(const LinearMap& a, const Vec& b,
                    const std::vector<Index>& support, const Vec& signs,
                    double lambda);

/// Stationarity residuals at x with support {i : |x[i]| > 1e-8 ||x||_inf}.
/// A near-optimal x has support_residual << 1 and offsupport_ratio <= 1.
KktReport kkt_check(const Vec& x, const LinearMap& a, const Vec& b,
                    double lambda);

/// Noise-level rule epsilon_0 = sqrt(m + 2 sqrt(2m)) sigma.
double epsilon0_rule(Index m, double sigma);

struct MatchedPair {
  double lambda = 0.0;
  double epsilon1 = 0.0;
  Vec x_reference;  // the long-run FISTA solution at lambda
};

/// Two-step pairing of the constrained and Lagrangian problems: solve the
/// constrained problem at epsilon_0 with high accuracy, read the Lagrange
/// multiplier of the terminal projection (lambda = 1/nu), then run FISTA at
/// that lambda with tol 1e-14 and set epsilon_1 to its residual norm. The
/// pair (lambda, epsilon_1) then describes matched problems and x_reference
/// doubles as the accuracy reference.
MatchedPair lambda_epsilon_handshake(MapPtr a, const Vec& b, double sigma,
                                     double tol = 1e-7);

}  // namespace nesta
