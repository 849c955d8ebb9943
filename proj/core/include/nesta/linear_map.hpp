#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nesta {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when a vector does not match an operator's expected length.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string where, Index expected, Index actual)
      : std::invalid_argument(where + ": dimension mismatch, expected " +
                              std::to_string(expected) + ", got " +
                              std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  Index expected() const noexcept { return expected_; }
  Index actual() const noexcept { return actual_; }

 private:
  Index expected_;
  Index actual_;
};

/// Counts applications of an operator or its adjoint. A solve owns its own
/// counter and threads it through apply/adjoint, so concurrent solves on a
/// shared operator do not interfere.
class CallCounter {
 public:
  void tick() noexcept { ++count_; }
  std::int64_t count() const noexcept { return count_; }
  void reset() noexcept { count_ = 0; }

 private:
  std::int64_t count_ = 0;
};

enum class MapKind {
  SubsampledDct,
  PermutedSubsampledHadamard,
  PartialFourier2D,
  DenseMatrix,
  Dictionary,
  FiniteDifference2D,
  Composed,
};

/// Row-subsampling pattern: keeps m of n coordinates, indices sorted.
struct SamplingMask {
  Index total = 0;
  std::vector<Index> kept;

  Index size() const noexcept { return static_cast<Index>(kept.size()); }

  /// m indices drawn uniformly without replacement (seeded Fisher-Yates),
  /// then sorted.
  static SamplingMask uniform(Index n, Index m, std::uint64_t seed);

  Vec gather(const Vec& full) const;            // R x
  Vec scatter(const Vec& sub) const;            // R* y (zero elsewhere)
  void scatter_into(const Vec& sub, Vec& full) const;
};

/// A real linear operator with a fast apply and exact adjoint.
///
/// Instances are immutable after construction and safe to share across
/// threads; apply/adjoint allocate their own scratch.
class LinearMap {
 public:
  virtual ~LinearMap() = default;

  Index in_dim() const noexcept { return in_dim_; }
  Index out_dim() const noexcept { return out_dim_; }
  MapKind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// True iff A A* is the identity on the output space (rows orthonormal).
  bool is_partial_isometry() const noexcept { return partial_isometry_; }

  /// Upper bound on the operator norm, when one is known or was estimated
  /// at construction. <= 0 means unknown.
  double norm_bound() const noexcept { return norm_bound_; }

  Vec apply(const Vec& x, CallCounter* calls = nullptr) const {
    if (x.size() != in_dim_) throw DimensionError("apply", in_dim_, x.size());
    if (calls) calls->tick();
    return do_apply(x);
  }

  Vec adjoint(const Vec& y, CallCounter* calls = nullptr) const {
    if (y.size() != out_dim_)
      throw DimensionError("adjoint", out_dim_, y.size());
    if (calls) calls->tick();
    return do_adjoint(y);
  }

  /// Present when the operator factors as R U with U a square orthonormal
  /// transform and R a coordinate mask; enables the fast solver path that
  /// projects with the diagonal R* R. Pointers stay valid for the lifetime
  /// of this operator.
  struct TransformStructure {
    const LinearMap* unitary;
    const SamplingMask* mask;
  };
  virtual std::optional<TransformStructure> transform_structure() const {
    return std::nullopt;
  }

 protected:
  LinearMap(MapKind kind, Index in_dim, Index out_dim, bool partial_isometry,
            std::uint64_t seed, double norm_bound)
      : kind_(kind),
        in_dim_(in_dim),
        out_dim_(out_dim),
        partial_isometry_(partial_isometry),
        seed_(seed),
        norm_bound_(norm_bound) {}

  virtual Vec do_apply(const Vec& x) const = 0;
  virtual Vec do_adjoint(const Vec& y) const = 0;

 private:
  MapKind kind_;
  Index in_dim_;
  Index out_dim_;
  bool partial_isometry_;
  std::uint64_t seed_;
  double norm_bound_;
};

using MapPtr = std::shared_ptr<const LinearMap>;

/// m rows of the orthonormal (unitary type-II) DCT, drawn uniformly at
/// random. A A* = I. O(n log n) apply.
MapPtr make_subsampled_dct(Index n, Index m, std::uint64_t seed);

/// m rows of the 1/sqrt(n)-normalized Walsh-Hadamard transform with a seeded
/// random column permutation. n must be a power of two.
MapPtr make_permuted_subsampled_hadamard(Index n, Index m, std::uint64_t seed);

/// m real measurements drawn from the unitary 2D DFT of a rows x cols image
/// (vectorized row-major): real/imaginary parts of conjugate-symmetry
/// representatives, scaled by sqrt(2) except at self-conjugate frequencies.
/// The full set of such atoms is an orthonormal basis of R^n, so any subset
/// is a partial isometry.
MapPtr make_partial_fourier2d(Index rows, Index cols, Index m,
                              std::uint64_t seed);

/// Dense matrix operator. If verify_partial_isometry is set, M M^T is checked
/// against the identity (tolerance 1e-12) and the flag recorded accordingly.
MapPtr make_dense_matrix(Mat matrix, bool verify_partial_isometry = false);

/// Synthesis dictionary backed by a dense n x p matrix W (columns are atoms):
/// apply is synthesis W a, adjoint is analysis W* x. The operator norm is
/// estimated by 50-step power iteration (fixed seed) with a 1.01 safety
/// factor unless norm_bound > 0 is supplied.
MapPtr make_dictionary(Mat synthesis_matrix, double norm_bound = 0.0);

/// Overcomplete DCT synthesis frame: the first n rows of the p-point inverse
/// orthonormal DCT, p = factor * n. Parseval tight (W W* = I), norm exactly
/// 1. factor = 1 gives the orthonormal inverse DCT.
MapPtr make_overcomplete_dct_frame(Index n, Index factor);

/// Forward differences of a rows x cols image with zero padding on the last
/// row/column; output stacks [D1 x; D2 x]. ||D||^2 <= 8.
MapPtr make_finite_difference2d(Index rows, Index cols);

/// Composition outer(inner(x)). Partial isometry iff both parts are. The
/// optional counters tally component calls (e.g. dictionary applications in
/// a synthesis solve) independently of whatever counter the caller passes.
MapPtr make_composed(MapPtr outer, MapPtr inner,
                     CallCounter* outer_calls = nullptr,
                     CallCounter* inner_calls = nullptr);

/// Operator-norm estimate ||W|| by power iteration on W* W.
double power_iteration_norm(const LinearMap& op, int iters,
                            std::uint64_t seed);

}  // namespace nesta
