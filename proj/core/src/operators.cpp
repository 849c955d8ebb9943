#include "nesta/linear_map.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "nesta/rng.hpp"

namespace nesta {

namespace {

// FFTW planning is not thread-safe; executing a plan through the new-array
// interface on distinct buffers is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

class R2rPlan {
 public:
  R2rPlan(int n, fftw_r2r_kind kind) {
    std::vector<double> in(static_cast<std::size_t>(n)),
        out(static_cast<std::size_t>(n));
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan_ = fftw_plan_r2r_1d(n, in.data(), out.data(), kind,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~R2rPlan() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan_);
  }
  R2rPlan(const R2rPlan&) = delete;
  R2rPlan& operator=(const R2rPlan&) = delete;

  void execute(double* in, double* out) const {
    fftw_execute_r2r(plan_, in, out);
  }

 private:
  fftw_plan plan_;
};

class DftPlan {
 public:
  DftPlan(int rows, int cols, int direction) {
    std::vector<std::complex<double>> in(
        static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)),
        out(in.size());
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan_ = fftw_plan_dft_2d(rows, cols,
                             reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()),
                             direction, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~DftPlan() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan_);
  }
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;

  void execute(std::complex<double>* in, std::complex<double>* out) const {
    fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
  }

 private:
  fftw_plan plan_;
};

// Orthonormal DCT-II and its transpose (DCT-III), via FFTW's unnormalized
// REDFT10/REDFT01 kernels.
class DctKernel {
 public:
  explicit DctKernel(Index n)
      : n_(n),
        fwd_(static_cast<int>(n), FFTW_REDFT10),
        inv_(static_cast<int>(n), FFTW_REDFT01),
        scale_dc_(0.5 / std::sqrt(static_cast<double>(n))),
        scale_ac_(1.0 / std::sqrt(2.0 * static_cast<double>(n))) {}

  // freq = C x
  void forward(const double* in, double* out) const {
    std::vector<double> buf(in, in + n_);
    fwd_.execute(buf.data(), out);
    out[0] *= scale_dc_;
    for (Index k = 1; k < n_; ++k) out[k] *= scale_ac_;
  }

  // time = C^T freq
  void inverse(const double* in, double* out) const {
    std::vector<double> buf(in, in + n_);
    buf[0] *= 2.0 * scale_dc_;  // 1/sqrt(n)
    for (Index k = 1; k < n_; ++k) buf[k] *= scale_ac_;
    inv_.execute(buf.data(), out);
  }

  Index size() const noexcept { return n_; }

 private:
  Index n_;
  R2rPlan fwd_;
  R2rPlan inv_;
  double scale_dc_;
  double scale_ac_;
};

void fwht_inplace(double* y, Index n) {
  for (Index h = 1; h < n; h <<= 1) {
    for (Index i = 0; i < n; i += h << 1) {
      for (Index j = i; j < i + h; ++j) {
        const double a = y[j];
        const double b = y[j + h];
        y[j] = a + b;
        y[j + h] = a - b;
      }
    }
  }
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------
// Full orthonormal transforms (the U of A = R U).
// ---------------------------------------------------------------------------

class Dct1d final : public LinearMap {
 public:
  explicit Dct1d(Index n)
      : LinearMap(MapKind::SubsampledDct, n, n, true, 0, 1.0), kernel_(n) {}

  const DctKernel& kernel() const noexcept { return kernel_; }

 protected:
  Vec do_apply(const Vec& x) const override {
    Vec out(in_dim());
    kernel_.forward(x.data(), out.data());
    return out;
  }
  Vec do_adjoint(const Vec& y) const override {
    Vec out(in_dim());
    kernel_.inverse(y.data(), out.data());
    return out;
  }

 private:
  DctKernel kernel_;
};

class PermutedHadamard final : public LinearMap {
 public:
  PermutedHadamard(Index n, std::vector<Index> perm, std::uint64_t seed)
      : LinearMap(MapKind::PermutedSubsampledHadamard, n, n, true, seed, 1.0),
        perm_(std::move(perm)),
        scale_(1.0 / std::sqrt(static_cast<double>(n))) {}

  const std::vector<Index>& perm() const noexcept { return perm_; }

 protected:
  // H P: scatter through the permutation, then the normalized fast
  // Walsh-Hadamard butterflies.
  Vec do_apply(const Vec& x) const override {
    Vec tmp(in_dim());
    for (Index c = 0; c < in_dim(); ++c) tmp[perm_[c]] = x[c];
    fwht_inplace(tmp.data(), in_dim());
    return tmp * scale_;
  }
  // P^T H (H is symmetric).
  Vec do_adjoint(const Vec& y) const override {
    Vec tmp = y;
    fwht_inplace(tmp.data(), in_dim());
    Vec out(in_dim());
    for (Index c = 0; c < in_dim(); ++c) out[c] = tmp[perm_[c]] * scale_;
    return out;
  }

 private:
  std::vector<Index> perm_;
  double scale_;
};

// One real measurement drawn from the unitary 2D DFT grid.
struct FourierAtom {
  Index freq;    // row-major linear index of the representative frequency
  bool imag;     // real or imaginary part
  double scale;  // sqrt(2) for conjugate pairs, 1 at self-conjugate points
};

// All n real atoms of the unitary 2D DFT of a real image: an orthonormal
// basis of R^n. Representative frequencies are those whose linear index does
// not exceed that of their conjugate; atoms are ordered by representative
// index, real part before imaginary part.
class Fourier2dAtoms final : public LinearMap {
 public:
  Fourier2dAtoms(Index rows, Index cols)
      : LinearMap(MapKind::PartialFourier2D, rows * cols, rows * cols, true, 0,
                  1.0),
        rows_(rows),
        cols_(cols),
        fwd_(static_cast<int>(rows), static_cast<int>(cols), FFTW_FORWARD),
        bwd_(static_cast<int>(rows), static_cast<int>(cols), FFTW_BACKWARD),
        root_n_(std::sqrt(static_cast<double>(rows * cols))) {
    const Index n = rows * cols;
    all_.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) all_[static_cast<std::size_t>(i)] = i;
    atoms_.reserve(static_cast<std::size_t>(n));
    for (Index f = 0; f < n; ++f) {
      const Index fr = f / cols;
      const Index fc = f % cols;
      const Index conj = ((rows - fr) % rows) * cols + ((cols - fc) % cols);
      if (f < conj) {
        atoms_.push_back({f, false, std::sqrt(2.0)});
        atoms_.push_back({f, true, std::sqrt(2.0)});
      } else if (f == conj) {
        atoms_.push_back({f, false, 1.0});
      }
    }
  }

  const std::vector<FourierAtom>& atoms() const noexcept { return atoms_; }

  void atoms_from_image(const Vec& x, const std::vector<Index>& which,
                        double* out) const {
    const Index n = in_dim();
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n)),
        freq(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) buf[static_cast<std::size_t>(t)] = x[t];
    fwd_.execute(buf.data(), freq.data());
    for (std::size_t i = 0; i < which.size(); ++i) {
      const FourierAtom& a = atoms_[static_cast<std::size_t>(which[i])];
      const std::complex<double>& c = freq[static_cast<std::size_t>(a.freq)];
      out[i] = a.scale * (a.imag ? c.imag() : c.real()) / root_n_;
    }
  }

  Vec image_from_atoms(const double* vals, const std::vector<Index>& which)
      const {
    const Index n = in_dim();
    std::vector<std::complex<double>> grid(static_cast<std::size_t>(n), 0.0),
        buf(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < which.size(); ++i) {
      const FourierAtom& a = atoms_[static_cast<std::size_t>(which[i])];
      std::complex<double>& g = grid[static_cast<std::size_t>(a.freq)];
      if (a.imag) {
        g += std::complex<double>(0.0, a.scale * vals[i]);
      } else {
        g += a.scale * vals[i];
      }
    }
    bwd_.execute(grid.data(), buf.data());
    Vec out(n);
    for (Index t = 0; t < n; ++t)
      out[t] = buf[static_cast<std::size_t>(t)].real() / root_n_;
    return out;
  }

 protected:
  Vec do_apply(const Vec& x) const override {
    Vec out(out_dim());
    atoms_from_image(x, all_, out.data());
    return out;
  }
  Vec do_adjoint(const Vec& y) const override {
    return image_from_atoms(y.data(), all_);
  }

 private:
  Index rows_, cols_;
  DftPlan fwd_, bwd_;
  double root_n_;
  std::vector<FourierAtom> atoms_;
  std::vector<Index> all_;
};

// ---------------------------------------------------------------------------
// Masked operators A = R U.
// ---------------------------------------------------------------------------

template <typename Unitary>
class MaskedUnitary final : public LinearMap {
 public:
  MaskedUnitary(MapKind kind, std::shared_ptr<const Unitary> unitary,
                SamplingMask mask, std::uint64_t seed)
      : LinearMap(kind, unitary->in_dim(), mask.size(), true, seed, 1.0),
        unitary_(std::move(unitary)),
        mask_(std::move(mask)) {}

  std::optional<TransformStructure> transform_structure() const override {
    return TransformStructure{unitary_.get(), &mask_};
  }

 protected:
  Vec do_apply(const Vec& x) const override {
    return mask_.gather(unitary_->apply(x));
  }
  Vec do_adjoint(const Vec& y) const override {
    return unitary_->adjoint(mask_.scatter(y));
  }

 private:
  std::shared_ptr<const Unitary> unitary_;
  SamplingMask mask_;
};

// Partial Fourier gets a direct implementation so that a subsampled apply
// costs one FFT plus O(m) extraction instead of a full atom sweep.
class PartialFourier2D final : public LinearMap {
 public:
  PartialFourier2D(std::shared_ptr<const Fourier2dAtoms> full,
                   SamplingMask mask, std::uint64_t seed)
      : LinearMap(MapKind::PartialFourier2D, full->in_dim(), mask.size(),
                  true, seed, 1.0),
        full_(std::move(full)),
        mask_(std::move(mask)) {}

  std::optional<TransformStructure> transform_structure() const override {
    return TransformStructure{full_.get(), &mask_};
  }

 protected:
  Vec do_apply(const Vec& x) const override {
    Vec out(out_dim());
    full_->atoms_from_image(x, mask_.kept, out.data());
    return out;
  }
  Vec do_adjoint(const Vec& y) const override {
    return full_->image_from_atoms(y.data(), mask_.kept);
  }

 private:
  std::shared_ptr<const Fourier2dAtoms> full_;
  SamplingMask mask_;
};

// ---------------------------------------------------------------------------
// Dense and structural operators.
// ---------------------------------------------------------------------------

class DenseMatrixMap final : public LinearMap {
 public:
  DenseMatrixMap(Mat m, bool partial_isometry, double norm_bound)
      : LinearMap(MapKind::DenseMatrix, m.cols(), m.rows(), partial_isometry,
                  0, norm_bound),
        m_(std::move(m)) {}

 protected:
  Vec do_apply(const Vec& x) const override { return m_ * x; }
  Vec do_adjoint(const Vec& y) const override { return m_.transpose() * y; }

 private:
  Mat m_;
};

class DenseDictionary final : public LinearMap {
 public:
  DenseDictionary(Mat w, double norm_bound, bool partial_isometry)
      : LinearMap(MapKind::Dictionary, w.cols(), w.rows(), partial_isometry,
                  0, norm_bound),
        w_(std::move(w)) {}

 protected:
  Vec do_apply(const Vec& a) const override { return w_ * a; }      // synthesis
  Vec do_adjoint(const Vec& x) const override {                     // analysis
    return w_.transpose() * x;
  }

 private:
  Mat w_;
};

// First n rows of the p-point inverse orthonormal DCT; Parseval tight.
class OvercompleteDctFrame final : public LinearMap {
 public:
  OvercompleteDctFrame(Index n, Index p)
      : LinearMap(MapKind::Dictionary, p, n, true, 0, 1.0),
        n_(n),
        kernel_(p) {}

 protected:
  Vec do_apply(const Vec& a) const override {
    Vec full(kernel_.size());
    kernel_.inverse(a.data(), full.data());
    return full.head(n_);
  }
  Vec do_adjoint(const Vec& x) const override {
    Vec padded = Vec::Zero(kernel_.size());
    padded.head(n_) = x;
    Vec out(kernel_.size());
    kernel_.forward(padded.data(), out.data());
    return out;
  }

 private:
  Index n_;
  DctKernel kernel_;
};

class FiniteDifference2D final : public LinearMap {
 public:
  FiniteDifference2D(Index rows, Index cols)
      : LinearMap(MapKind::FiniteDifference2D, rows * cols, 2 * rows * cols,
                  false, 0, std::sqrt(8.0)),
        rows_(rows),
        cols_(cols) {}

 protected:
  Vec do_apply(const Vec& x) const override {
    const Index n = in_dim();
    Vec out = Vec::Zero(2 * n);
    for (Index i = 0; i < rows_; ++i) {
      for (Index j = 0; j < cols_; ++j) {
        const Index p = i * cols_ + j;
        if (i + 1 < rows_) out[p] = x[p + cols_] - x[p];
        if (j + 1 < cols_) out[n + p] = x[p + 1] - x[p];
      }
    }
    return out;
  }

  Vec do_adjoint(const Vec& u) const override {
    const Index n = in_dim();
    Vec out = Vec::Zero(n);
    for (Index i = 0; i < rows_; ++i) {
      for (Index j = 0; j < cols_; ++j) {
        const Index p = i * cols_ + j;
        double v = 0.0;
        if (i > 0) v += u[p - cols_];
        if (i + 1 < rows_) v -= u[p];
        if (j > 0) v += u[n + p - 1];
        if (j + 1 < cols_) v -= u[n + p];
        out[p] = v;
      }
    }
    return out;
  }

 private:
  Index rows_, cols_;
};

class ComposedMap final : public LinearMap {
 public:
  ComposedMap(MapPtr outer, MapPtr inner, CallCounter* outer_calls,
              CallCounter* inner_calls)
      : LinearMap(MapKind::Composed, inner->in_dim(), outer->out_dim(),
                  outer->is_partial_isometry() && inner->is_partial_isometry(),
                  0,
                  outer->norm_bound() > 0 && inner->norm_bound() > 0
                      ? outer->norm_bound() * inner->norm_bound()
                      : 0.0),
        outer_(std::move(outer)),
        inner_(std::move(inner)),
        outer_calls_(outer_calls),
        inner_calls_(inner_calls) {}

 protected:
  Vec do_apply(const Vec& x) const override {
    return outer_->apply(inner_->apply(x, inner_calls_), outer_calls_);
  }
  Vec do_adjoint(const Vec& y) const override {
    return inner_->adjoint(outer_->adjoint(y, outer_calls_), inner_calls_);
  }

 private:
  MapPtr outer_;
  MapPtr inner_;
  CallCounter* outer_calls_;
  CallCounter* inner_calls_;
};

double dense_power_norm(const Mat& w, int iters, std::uint64_t seed) {
  Rng rng(seed);
  Vec v(w.cols());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double lam = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vec u = w.transpose() * (w * v);
    lam = u.norm();
    if (lam == 0.0) return 0.0;
    v = u / lam;
  }
  return std::sqrt(lam);
}

constexpr std::uint64_t kNormSeed = 0x6e6f726d;  // fixed power-iteration seed
constexpr int kNormIters = 50;

}  // namespace

// ---------------------------------------------------------------------------
// SamplingMask
// ---------------------------------------------------------------------------

SamplingMask SamplingMask::uniform(Index n, Index m, std::uint64_t seed) {
  if (m < 1 || m > n)
    throw std::invalid_argument("SamplingMask: need 1 <= m <= n");
  Rng rng(seed);
  auto drawn = rng.sample_without_replacement(static_cast<std::size_t>(n),
                                              static_cast<std::size_t>(m));
  SamplingMask mask;
  mask.total = n;
  mask.kept.reserve(drawn.size());
  for (auto i : drawn) mask.kept.push_back(static_cast<Index>(i));
  std::sort(mask.kept.begin(), mask.kept.end());
  return mask;
}

Vec SamplingMask::gather(const Vec& full) const {
  Vec out(size());
  for (Index i = 0; i < size(); ++i) out[i] = full[kept[static_cast<std::size_t>(i)]];
  return out;
}

Vec SamplingMask::scatter(const Vec& sub) const {
  Vec full = Vec::Zero(total);
  scatter_into(sub, full);
  return full;
}

void SamplingMask::scatter_into(const Vec& sub, Vec& full) const {
  for (Index i = 0; i < size(); ++i) full[kept[static_cast<std::size_t>(i)]] = sub[i];
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

MapPtr make_subsampled_dct(Index n, Index m, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("subsampled_dct: n must be positive");
  if (m < 1 || m > n)
    throw std::invalid_argument("subsampled_dct: need 1 <= m <= n");
  auto dct = std::make_shared<const Dct1d>(n);
  return std::make_shared<MaskedUnitary<Dct1d>>(
      MapKind::SubsampledDct, dct, SamplingMask::uniform(n, m, seed), seed);
}

MapPtr make_permuted_subsampled_hadamard(Index n, Index m,
                                         std::uint64_t seed) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("hadamard: n must be a power of two");
  if (m < 1 || m > n)
    throw std::invalid_argument("hadamard: need 1 <= m <= n");
  Rng rng(seed);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  rng.shuffle(perm);
  auto h = std::make_shared<const PermutedHadamard>(n, std::move(perm), seed);
  // The mask draws from the generator state left after the permutation, so
  // one seed pins down the whole construction.
  SamplingMask mask;
  mask.total = n;
  {
    auto drawn = rng.sample_without_replacement(static_cast<std::size_t>(n),
                                                static_cast<std::size_t>(m));
    for (auto i : drawn) mask.kept.push_back(static_cast<Index>(i));
    std::sort(mask.kept.begin(), mask.kept.end());
  }
  return std::make_shared<MaskedUnitary<PermutedHadamard>>(
      MapKind::PermutedSubsampledHadamard, h, std::move(mask), seed);
}

MapPtr make_partial_fourier2d(Index rows, Index cols, Index m,
                              std::uint64_t seed) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("partial_fourier2d: empty image");
  const Index n = rows * cols;
  if (m < 1 || m > n)
    throw std::invalid_argument(
        "partial_fourier2d: m exceeds the number of real degrees of freedom");
  auto full = std::make_shared<const Fourier2dAtoms>(rows, cols);

  // Variable-density selection: a fully sampled low-frequency disc takes up
  // to half the budget (image energy concentrates there; in particular an
  // unsampled DC would leave the background level unconstrained), the rest
  // is drawn uniformly from the remaining atoms.
  const auto& atoms = full->atoms();
  std::vector<double> radius(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Index fr = atoms[i].freq / cols;
    const Index fc = atoms[i].freq % cols;
    const double dr = static_cast<double>(std::min(fr, rows - fr));
    const double dc = static_cast<double>(std::min(fc, cols - fc));
    radius[i] = std::hypot(dr, dc);
  }
  std::vector<Index> order(atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<Index>(i);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return radius[static_cast<std::size_t>(a)] <
           radius[static_cast<std::size_t>(b)];
  });

  std::vector<bool> taken(atoms.size(), false);
  SamplingMask mask;
  mask.total = n;
  const Index dense_budget = m / 2;
  Index cut = 0;
  while (cut < dense_budget) {
    // Whole radius shells only, so the dense disc is rotation-fair.
    Index end = cut;
    const double r = radius[static_cast<std::size_t>(order[static_cast<std::size_t>(cut)])];
    while (end < n &&
           radius[static_cast<std::size_t>(order[static_cast<std::size_t>(end)])] == r)
      ++end;
    if (end > dense_budget && cut > 0) break;
    for (Index i = cut; i < end; ++i) {
      mask.kept.push_back(order[static_cast<std::size_t>(i)]);
      taken[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
    }
    cut = end;
  }

  // Remaining draws follow a 1/r^2 density (weighted sampling without
  // replacement by exponential keys).
  Rng rng(seed);
  std::vector<std::pair<double, Index>> keyed;
  keyed.reserve(static_cast<std::size_t>(n) - mask.kept.size());
  for (Index i = 0; i < n; ++i) {
    if (taken[static_cast<std::size_t>(i)]) continue;
    const double r = radius[static_cast<std::size_t>(i)];
    const double w = 1.0 / (1.0 + r * r);
    keyed.emplace_back(std::pow(rng.uniform_pos(), 1.0 / w), i);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const Index need = m - static_cast<Index>(mask.kept.size());
  for (Index i = 0; i < need; ++i)
    mask.kept.push_back(keyed[static_cast<std::size_t>(i)].second);
  std::sort(mask.kept.begin(), mask.kept.end());

  return std::make_shared<PartialFourier2D>(full, std::move(mask), seed);
}

MapPtr make_dense_matrix(Mat matrix, bool verify_partial_isometry) {
  bool iso = false;
  if (verify_partial_isometry) {
    Mat gram = matrix * matrix.transpose();
    gram.diagonal().array() -= 1.0;
    iso = gram.cwiseAbs().maxCoeff() <= 1e-12;
  }
  const double norm =
      1.01 * dense_power_norm(matrix, kNormIters, kNormSeed);
  return std::make_shared<DenseMatrixMap>(std::move(matrix), iso, norm);
}

MapPtr make_dictionary(Mat synthesis_matrix, double norm_bound) {
  if (norm_bound <= 0.0) {
    norm_bound =
        1.01 * dense_power_norm(synthesis_matrix, kNormIters, kNormSeed);
  }
  Mat gram = synthesis_matrix * synthesis_matrix.transpose();
  gram.diagonal().array() -= 1.0;
  const bool iso = gram.cwiseAbs().maxCoeff() <= 1e-12;
  return std::make_shared<DenseDictionary>(std::move(synthesis_matrix),
                                           norm_bound, iso);
}

MapPtr make_overcomplete_dct_frame(Index n, Index factor) {
  if (n < 1 || factor < 1)
    throw std::invalid_argument("dct_frame: need n >= 1 and factor >= 1");
  return std::make_shared<OvercompleteDctFrame>(n, factor * n);
}

MapPtr make_finite_difference2d(Index rows, Index cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("finite_difference2d: empty image");
  return std::make_shared<FiniteDifference2D>(rows, cols);
}

MapPtr make_composed(MapPtr outer, MapPtr inner, CallCounter* outer_calls,
                     CallCounter* inner_calls) {
  if (outer->in_dim() != inner->out_dim())
    throw DimensionError("compose", outer->in_dim(), inner->out_dim());
  return std::make_shared<ComposedMap>(std::move(outer), std::move(inner),
                                       outer_calls, inner_calls);
}

double power_iteration_norm(const LinearMap& op, int iters,
                            std::uint64_t seed) {
  Rng rng(seed);
  Vec v(op.in_dim());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.gaussian();
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double lam = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vec u = op.adjoint(op.apply(v));
    lam = u.norm();
    if (lam == 0.0) return 0.0;
    v = u / lam;
  }
  return std::sqrt(lam);
}

}  // namespace nesta
