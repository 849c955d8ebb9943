#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace nesta {

/// Deterministic 64-bit generator used for every randomized construction in
/// this library (masks, permutations, signal models, noise).
///
/// The update rule is SplitMix64:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
///
/// Derived quantities are defined on top of the raw stream as follows and
/// must not be changed without breaking reproducibility of seeded artifacts:
///   - uniform01():   (next() >> 11) * 2^-53            in [0, 1)
///   - uniform_pos(): ((next() >> 11) + 1) * 2^-53      in (0, 1]
///   - uniform_int(n): next() % n
///   - gaussian():    Box-Muller on (u1, u2) = (uniform_pos, uniform01),
///                    returning sqrt(-2 ln u1) cos(2 pi u2) first and the
///                    matching sine term on the following call
///   - shuffle/sample: Fisher-Yates from the back, j = uniform_int(i + 1)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_int(std::uint64_t bound) { return next() % bound; }

  /// Random sign, +1 or -1 with equal probability.
  double sign() { return (next() & 1ULL) ? 1.0 : -1.0; }

  /// Standard normal deviate via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Fisher-Yates shuffle of v, iterating from the back.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// First k entries of a full Fisher-Yates shuffle of {0, ..., n-1},
  /// i.e. k distinct indices drawn without replacement. Unsorted.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx);
    idx.resize(k);
    return idx;
  }

  /// Independent stream for a substream id (benchmark trials, noise draws).
  /// Runs the id through the SplitMix64 output mix before xor-ing with the
  /// current seed state so that nearby ids give unrelated streams.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    Rng mixer(stream ^ 0xD1B54A32D192ED03ULL);
    return Rng(seed ^ mixer.next());
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace nesta
