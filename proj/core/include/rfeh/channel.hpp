#pragma once

#include <cstdint>
#include <vector>

#include "rfeh/random.hpp"

namespace rfeh {

/// Transmit power and log-distance path loss. The received mean power is
/// P(d) = P_T * L(d) with L(d) = (lambda / (4 pi d0))^2 (d0 / d)^nu.
struct LinkBudget {
  double transmit_power_mw = 1500.0;
  double distance_m = 5.0;
  double path_loss_exponent = 2.1;
  double wavelength_m = 0.3456;
  double reference_distance_m = 1.0;

  /// Throws ValidationError unless P_T > 0, d >= d0 > 0, nu > 0, lambda > 0.
  void validate() const;
};

/// Nakagami-m block fading. The power gain gamma is Gamma(m, omega / m)
/// distributed, IID across coherence blocks.
struct FadingChannel {
  double nakagami_m = 5.0;
  double omega = 1.0;

  /// Throws ValidationError unless m >= 1/2 and omega > 0.
  void validate() const;
};

/// Large-scale gain L(d), dimensionless.
double path_gain(const LinkBudget& link);

/// P(d) = P_T L(d), in mW.
double link_power_mw(const LinkBudget& link);

/// Mean received power E[P_R] = P(d) * omega, in mW.
double mean_received_power_mw(const LinkBudget& link, const FadingChannel& ch);

/// Density of the fading power gain. At x = 0 with m < 1 the density is
/// singular and +infinity is returned.
double gamma_pdf(const FadingChannel& ch, double x);
double gamma_cdf(const FadingChannel& ch, double x);
/// 1 - gamma_cdf, computed without cancellation.
double gamma_ccdf(const FadingChannel& ch, double x);

/// Density, CDF and complementary CDF of P_R = P(d) * gamma (mW).
double received_power_pdf(const LinkBudget& link, const FadingChannel& ch, double x_mw);
double received_power_cdf(const LinkBudget& link, const FadingChannel& ch, double x_mw);
double received_power_ccdf(const LinkBudget& link, const FadingChannel& ch, double x_mw);

/// Inverse of received_power_cdf for p in [0, 1).
double received_power_quantile(const LinkBudget& link, const FadingChannel& ch, double p);

/// Nakagami shape matching a Rician channel with K-factor kappa.
double rician_to_nakagami(double kappa);

/// Draws P_R values from one PRNG stream.
class ReceivedPowerSampler {
 public:
  ReceivedPowerSampler(const LinkBudget& link, const FadingChannel& ch);

  double operator()(Xoshiro256StarStar& rng) { return scale_ * gamma_(rng); }

 private:
  double scale_;
  GammaSampler gamma_;
};

/// n IID draws of P_R. Samples are produced in fixed-size chunks with one
/// stream per chunk, so the output depends only on (link, ch, n, seed).
std::vector<double> sample_received_power(const LinkBudget& link, const FadingChannel& ch,
                                          std::size_t n, std::uint64_t seed);

}  // namespace rfeh
