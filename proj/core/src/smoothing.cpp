#include "nesta/smoothing.hpp"

#include <cmath>

namespace nesta {

namespace {

void require_positive_mu(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("smoothing: mu must be > 0");
}

double huber_sum(const Vec& c, double mu) {
  double v = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    v += a < mu ? a * a / (2.0 * mu) : a - mu / 2.0;
  }
  return v;
}

// Dual maximizer of <u, c> - (mu/2) ||u||^2 over the l_inf ball.
Vec huber_dual(const Vec& c, double mu) {
  return (c / mu).cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace

ValueGrad l1_value_grad(const Vec& x, double mu) {
  require_positive_mu(mu);
  return {huber_sum(x, mu), huber_dual(x, mu)};
}

ValueGrad analysis_value_grad(const Vec& x, const LinearMap& w, double mu,
                              CallCounter* dict_calls) {
  require_positive_mu(mu);
  const Vec coeffs = w.adjoint(x, dict_calls);
  const Vec u = huber_dual(coeffs, mu);
  const double value = u.dot(coeffs) - (mu / 2.0) * u.squaredNorm();
  return {value, w.apply(u, dict_calls)};
}

ValueGrad tv_value_grad(const Vec& x, Index rows, Index cols, double mu) {
  require_positive_mu(mu);
  const Index n = rows * cols;
  if (x.size() != n) throw DimensionError("tv_value_grad", n, x.size());

  Vec u1 = Vec::Zero(n);
  Vec u2 = Vec::Zero(n);
  double value = 0.0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const Index p = i * cols + j;
      const double g1 = (i + 1 < rows) ? x[p + cols] - x[p] : 0.0;
      const double g2 = (j + 1 < cols) ? x[p + 1] - x[p] : 0.0;
      const double mag = std::hypot(g1, g2);
      if (mag < mu) {
        u1[p] = g1 / mu;
        u2[p] = g2 / mu;
        value += mag * mag / (2.0 * mu);
      } else {
        u1[p] = g1 / mag;
        u2[p] = g2 / mag;
        value += mag - mu / 2.0;
      }
    }
  }

  // grad = D* u with the same boundary convention as the forward pass.
  Vec grad(n);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const Index p = i * cols + j;
      double v = 0.0;
      if (i > 0) v += u1[p - cols];
      if (i + 1 < rows) v -= u1[p];
      if (j > 0) v += u2[p - 1];
      if (j + 1 < cols) v -= u2[p];
      grad[p] = v;
    }
  }
  return {value, std::move(grad)};
}

SmoothedObjective::SmoothedObjective(RegularizerKind kind, double mu,
                                     double norm_w_sq, MapPtr dictionary,
                                     Index rows, Index cols)
    : kind_(kind),
      mu_(mu),
      norm_w_sq_(norm_w_sq),
      dictionary_(std::move(dictionary)),
      rows_(rows),
      cols_(cols) {
  require_positive_mu(mu);
}

SmoothedObjective SmoothedObjective::l1(double mu) {
  return SmoothedObjective(RegularizerKind::L1, mu, 1.0, nullptr, 0, 0);
}

SmoothedObjective SmoothedObjective::l1_analysis(MapPtr dictionary,
                                                 double mu) {
  const double norm = dictionary->norm_bound();
  if (norm <= 0.0)
    throw std::invalid_argument(
        "l1_analysis: dictionary has no operator-norm bound");
  return SmoothedObjective(RegularizerKind::L1Analysis, mu, norm * norm,
                           std::move(dictionary), 0, 0);
}

SmoothedObjective SmoothedObjective::tv2d(Index rows, Index cols, double mu) {
  // ||D||^2 <= 8 for forward differences; use the analytic bound.
  return SmoothedObjective(RegularizerKind::Tv2D, mu, 8.0, nullptr, rows,
                           cols);
}

Index SmoothedObjective::signal_dim() const noexcept {
  switch (kind_) {
    case RegularizerKind::L1Analysis:
      return dictionary_->out_dim();
    case RegularizerKind::Tv2D:
      return rows_ * cols_;
    case RegularizerKind::L1:
    default:
      return 0;
  }
}

SmoothedObjective SmoothedObjective::with_mu(double mu) const {
  SmoothedObjective copy = *this;
  require_positive_mu(mu);
  copy.mu_ = mu;
  return copy;
}

ValueGrad SmoothedObjective::value_grad(const Vec& x,
                                        CallCounter* dict_calls) const {
  switch (kind_) {
    case RegularizerKind::L1:
      return l1_value_grad(x, mu_);
    case RegularizerKind::L1Analysis:
      return analysis_value_grad(x, *dictionary_, mu_, dict_calls);
    case RegularizerKind::Tv2D:
      return tv_value_grad(x, rows_, cols_, mu_);
  }
  throw std::logic_error("unreachable");
}

}  // namespace nesta
