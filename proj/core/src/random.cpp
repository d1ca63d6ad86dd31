#include "rfeh/random.hpp"

#include <cmath>

#include "rfeh/error.hpp"

namespace rfeh {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += kGolden;
  return mix64(state_);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  SplitMix64 sm(seed);
  for (auto& word : s_) word = sm.next();
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

Xoshiro256StarStar make_stream(std::uint64_t seed, std::uint64_t index) {
  return Xoshiro256StarStar(mix64(seed) ^ mix64(index * kGolden + 0xd1b54a32d192ed03ULL));
}

double NormalSampler::operator()(Xoshiro256StarStar& rng) {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = 2.0 * rng.uniform() - 1.0;
    v = 2.0 * rng.uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * factor;
  has_cached_ = true;
  return u * factor;
}

GammaSampler::GammaSampler(double shape) : shape_(shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma sampler requires a positive finite shape");
  }
  boosted_ = shape < 1.0;
  d_ = (boosted_ ? shape + 1.0 : shape) - 1.0 / 3.0;
  c_ = 1.0 / std::sqrt(9.0 * d_);
}

double GammaSampler::operator()(Xoshiro256StarStar& rng) {
  double value;
  for (;;) {
    double x, v;
    do {
      x = normal_(rng);
      v = 1.0 + c_ * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      value = d_ * v;
      break;
    }
    if (std::log(u) < 0.5 * x2 + d_ * (1.0 - v + std::log(v))) {
      value = d_ * v;
      break;
    }
  }
  if (boosted_) value *= std::pow(rng.uniform(), 1.0 / shape_);
  return value;
}

}  // namespace rfeh
