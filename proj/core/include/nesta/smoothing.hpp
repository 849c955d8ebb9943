#pragma once

#include "nesta/linear_map.hpp"

namespace nesta {

enum class RegularizerKind { L1, L1Analysis, Tv2D };

struct ValueGrad {
  double value;
  Vec grad;
};

/// Huber-smoothed l1 norm: sum of t^2/(2 mu) for |t| < mu, |t| - mu/2
/// otherwise; gradient is t/mu saturated at +-1.
ValueGrad l1_value_grad(const Vec& x, double mu);

/// Smoothed ||W* x||_1 with W the synthesis dictionary: the Huber dual is
/// taken componentwise on the analysis coefficients W* x and mapped back,
/// grad = W u. Costs two dictionary applications, tallied on dict_calls.
ValueGrad analysis_value_grad(const Vec& x, const LinearMap& w, double mu,
                              CallCounter* dict_calls = nullptr);

/// Smoothed isotropic total variation of a rows x cols image (row-major).
/// Forward differences with zero padding on the last row/column; the
/// per-pixel dual lies in the unit disc.
ValueGrad tv_value_grad(const Vec& x, Index rows, Index cols, double mu);

/// A regularizer smoothed with parameter mu. The gradient is Lipschitz with
/// constant norm_w_sq / (mu * sigma_d), sigma_d = 1 for the quadratic dual
/// prox 1/2 ||u||^2.
class SmoothedObjective {
 public:
  static SmoothedObjective l1(double mu);
  static SmoothedObjective l1_analysis(MapPtr dictionary, double mu);
  static SmoothedObjective tv2d(Index rows, Index cols, double mu);

  RegularizerKind kind() const noexcept { return kind_; }
  double mu() const noexcept { return mu_; }
  double sigma_d() const noexcept { return 1.0; }
  double norm_w_sq() const noexcept { return norm_w_sq_; }
  double lipschitz() const noexcept { return norm_w_sq_ / mu_; }

  /// Signal dimension the objective expects, or 0 when any length works (L1).
  Index signal_dim() const noexcept;

  const MapPtr& dictionary() const noexcept { return dictionary_; }
  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }

  /// Same regularizer at a different smoothing level (continuation steps).
  SmoothedObjective with_mu(double mu) const;

  ValueGrad value_grad(const Vec& x, CallCounter* dict_calls = nullptr) const;

 private:
  SmoothedObjective(RegularizerKind kind, double mu, double norm_w_sq,
                    MapPtr dictionary, Index rows, Index cols);

  RegularizerKind kind_;
  double mu_;
  double norm_w_sq_;
  MapPtr dictionary_;
  Index rows_ = 0;
  Index cols_ = 0;
};

}  // namespace nesta
