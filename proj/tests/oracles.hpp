// Brute-force reference computations for the test suite. These are written
// from the defining formulas and deliberately share no code with the library
// paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "nesta/linear_map.hpp"
#include "nesta/rng.hpp"

namespace nesta::testing {

// Orthonormal DCT-II matrix, entry by entry.
inline Mat dense_dct_matrix(Index n) {
  Mat c(n, n);
  for (Index k = 0; k < n; ++k) {
    const double w = k == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                            : std::sqrt(2.0 / static_cast<double>(n));
    for (Index t = 0; t < n; ++t) {
      c(k, t) = w * std::cos(std::numbers::pi * (2.0 * t + 1.0) * k /
                             (2.0 * static_cast<double>(n)));
    }
  }
  return c;
}

// Sylvester-recursion Hadamard matrix, normalized by 1/sqrt(n).
inline Mat dense_hadamard(Index n) {
  Mat h(1, 1);
  h(0, 0) = 1.0;
  for (Index m = 1; m < n; m <<= 1) {
    Mat next(2 * m, 2 * m);
    next.topLeftCorner(m, m) = h;
    next.topRightCorner(m, m) = h;
    next.bottomLeftCorner(m, m) = h;
    next.bottomRightCorner(m, m) = -h;
    h = std::move(next);
  }
  return h / std::sqrt(static_cast<double>(n));
}

// Materialize an operator column by column.
inline Mat dense_from_map(const LinearMap& op) {
  Mat m(op.out_dim(), op.in_dim());
  Vec e = Vec::Zero(op.in_dim());
  for (Index j = 0; j < op.in_dim(); ++j) {
    e[j] = 1.0;
    m.col(j) = op.apply(e);
    e[j] = 0.0;
  }
  return m;
}

// Isotropic TV of an image under forward differences with zero padding.
inline double tv_direct(const Vec& img, Index rows, Index cols) {
  double tv = 0.0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const Index p = i * cols + j;
      const double g1 = i + 1 < rows ? img[p + cols] - img[p] : 0.0;
      const double g2 = j + 1 < cols ? img[p + 1] - img[p] : 0.0;
      tv += std::hypot(g1, g2);
    }
  }
  return tv;
}

// Central finite differences of a scalar function.
inline Vec finite_diff_grad(const std::function<double(const Vec&)>& f,
                            const Vec& x, double h) {
  Vec g(x.size());
  Vec xp = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double orig = xp[i];
    xp[i] = orig + h;
    const double fp = f(xp);
    xp[i] = orig - h;
    const double fm = f(xp);
    xp[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline Vec random_vec(Index n, Rng& rng) {
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.gaussian();
  return v;
}

// Dense matrix with orthonormal rows (a random partial isometry).
inline Mat random_partial_isometry(Index m, Index n, Rng& rng) {
  Mat g(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) g(i, j) = rng.gaussian();
  const Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, m);
  return q.transpose();
}

}  // namespace nesta::testing
