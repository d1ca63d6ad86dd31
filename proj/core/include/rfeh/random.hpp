#pragma once

#include <cstdint>
#include <limits>

namespace rfeh {

/// SplitMix64 (Steele, Lea, Flood 2014). Used only to expand seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna). The reference PRNG for every sampler
/// in the library; the algorithm is fixed so seeded results are reproducible
/// across platforms and implementations.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  /// Expands a 64-bit seed through SplitMix64.
  explicit Xoshiro256StarStar(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in the open interval (0, 1), 53 bits of resolution.
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Independent substream for (seed, index): the index is mixed into the seed
/// before expansion, so stream k never depends on how many streams were drawn
/// before it. Monte Carlo code derives one stream per trial.
Xoshiro256StarStar make_stream(std::uint64_t seed, std::uint64_t index);

/// Standard normal variates by the Marsaglia polar method. Caches the second
/// variate of each accepted pair.
class NormalSampler {
 public:
  double operator()(Xoshiro256StarStar& rng);

 private:
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Gamma(shape, 1) variates by the Marsaglia-Tsang squeeze method. Shapes
/// below one draw Gamma(shape + 1) and scale by U^(1/shape).
class GammaSampler {
 public:
  explicit GammaSampler(double shape);

  double operator()(Xoshiro256StarStar& rng);
  double shape() const { return shape_; }

 private:
  double shape_;
  double d_;
  double c_;
  bool boosted_;
  NormalSampler normal_;
};

}  // namespace rfeh
