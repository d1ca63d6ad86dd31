#include "rfeh/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "rfeh/error.hpp"
#include "rfeh/special_functions.hpp"

namespace rfeh {
namespace {

constexpr std::size_t kSampleChunk = 1 << 16;

void check_nonnegative(double x) {
  if (!(x >= 0.0)) throw DomainError("fading distributions are supported on x >= 0");
}

}  // namespace

void LinkBudget::validate() const {
  if (!(transmit_power_mw > 0.0)) throw ValidationError("transmit power must be positive");
  if (!(reference_distance_m > 0.0)) throw ValidationError("reference distance must be positive");
  if (!(distance_m >= reference_distance_m)) {
    throw ValidationError("distance must be at least the reference distance");
  }
  if (!(path_loss_exponent > 0.0)) throw ValidationError("path-loss exponent must be positive");
  if (!(wavelength_m > 0.0)) throw ValidationError("wavelength must be positive");
}

void FadingChannel::validate() const {
  if (!(nakagami_m >= 0.5)) throw ValidationError("Nakagami m must be at least 1/2");
  if (!(omega > 0.0)) throw ValidationError("omega must be positive");
}

double path_gain(const LinkBudget& link) {
  link.validate();
  const double d0 = link.reference_distance_m;
  const double near = link.wavelength_m / (d0 * 4.0 * std::numbers::pi);
  return near * near * std::pow(d0 / link.distance_m, link.path_loss_exponent);
}

double link_power_mw(const LinkBudget& link) { return link.transmit_power_mw * path_gain(link); }

double mean_received_power_mw(const LinkBudget& link, const FadingChannel& ch) {
  ch.validate();
  return link_power_mw(link) * ch.omega;
}

double gamma_pdf(const FadingChannel& ch, double x) {
  ch.validate();
  check_nonnegative(x);
  const double m = ch.nakagami_m;
  const double rate = m / ch.omega;
  if (x == 0.0) {
    if (m < 1.0) return std::numeric_limits<double>::infinity();
    return m == 1.0 ? rate : 0.0;
  }
  if (std::isinf(x)) return 0.0;
  return std::exp(m * std::log(rate) + (m - 1.0) * std::log(x) - rate * x - std::lgamma(m));
}

double gamma_cdf(const FadingChannel& ch, double x) {
  ch.validate();
  check_nonnegative(x);
  return regularized_gamma_p(ch.nakagami_m, ch.nakagami_m / ch.omega * x);
}

double gamma_ccdf(const FadingChannel& ch, double x) {
  ch.validate();
  check_nonnegative(x);
  return regularized_gamma_q(ch.nakagami_m, ch.nakagami_m / ch.omega * x);
}

double received_power_pdf(const LinkBudget& link, const FadingChannel& ch, double x_mw) {
  const double pd = link_power_mw(link);
  return gamma_pdf(ch, x_mw / pd) / pd;
}

double received_power_cdf(const LinkBudget& link, const FadingChannel& ch, double x_mw) {
  return gamma_cdf(ch, x_mw / link_power_mw(link));
}

double received_power_ccdf(const LinkBudget& link, const FadingChannel& ch, double x_mw) {
  return gamma_ccdf(ch, x_mw / link_power_mw(link));
}

double received_power_quantile(const LinkBudget& link, const FadingChannel& ch, double p) {
  ch.validate();
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("quantile requires 0 <= p < 1");
  if (p == 0.0) return 0.0;
  const double m = ch.nakagami_m;
  const double z = boost::math::gamma_p_inv(m, p);
  return z * ch.omega / m * link_power_mw(link);
}

double rician_to_nakagami(double kappa) {
  if (!(kappa >= 0.0)) throw DomainError("Rician K-factor must be non-negative");
  return (kappa + 1.0) * (kappa + 1.0) / (2.0 * kappa + 1.0);
}

ReceivedPowerSampler::ReceivedPowerSampler(const LinkBudget& link, const FadingChannel& ch)
    : scale_(mean_received_power_mw(link, ch) / ch.nakagami_m), gamma_(ch.nakagami_m) {}

std::vector<double> sample_received_power(const LinkBudget& link, const FadingChannel& ch,
                                          std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample count must be at least 1");
  std::vector<double> out(n);
  for (std::size_t chunk = 0; chunk * kSampleChunk < n; ++chunk) {
    ReceivedPowerSampler sampler(link, ch);
    auto rng = make_stream(seed, chunk);
    const std::size_t end = std::min(n, (chunk + 1) * kSampleChunk);
    for (std::size_t i = chunk * kSampleChunk; i < end; ++i) out[i] = sampler(rng);
  }
  return out;
}

}  // namespace rfeh
