#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "rfeh/channel.hpp"
#include "rfeh/error.hpp"

namespace {

using namespace rfeh;

LinkBudget link_at(double d, double nu = 2.1, double pt = 1500.0) {
  LinkBudget l;
  l.distance_m = d;
  l.path_loss_exponent = nu;
  l.transmit_power_mw = pt;
  return l;
}

TEST(PathGain, ReferenceDistance) {
  // (0.3456 / 4 pi)^2 evaluated at 40 digits.
  EXPECT_NEAR(path_gain(link_at(1.0)), 7.563585830427058504e-4, 1e-18);
}

TEST(PathGain, InverseSquareScaling) {
  EXPECT_NEAR(path_gain(link_at(10.0, 2.0)), path_gain(link_at(1.0, 2.0)) * 1e-2, 1e-19);
}

TEST(PathGain, AgreesWithDecibelRecomputation) {
  const double near_db = 20.0 * std::log10(0.3456 / (4.0 * std::numbers::pi));
  const double loss_db = near_db - 10.0 * 2.1 * std::log10(4.0);
  EXPECT_NEAR(path_gain(link_at(4.0)) / std::pow(10.0, loss_db / 10.0), 1.0, 1e-13);
}

TEST(PathGain, DecreasesWithDistanceAndExponent) {
  double prev = path_gain(link_at(1.0));
  for (double d = 1.5; d < 30.0; d += 0.5) {
    const double g = path_gain(link_at(d));
    EXPECT_LT(g, prev);
    prev = g;
    EXPECT_LT(path_gain(link_at(d, 2.5)), path_gain(link_at(d, 2.1)));
  }
}

TEST(LinkBudget, Validation) {
  EXPECT_THROW(path_gain(link_at(0.5)), ValidationError);
  EXPECT_THROW(path_gain(link_at(5.0, 0.0)), ValidationError);
  EXPECT_THROW(path_gain(link_at(5.0, 2.1, -1.0)), ValidationError);
  FadingChannel ch{0.4, 1.0};
  EXPECT_THROW(gamma_cdf(ch, 1.0), ValidationError);
}

TEST(GammaDistribution, ExponentialSpecialCase) {
  const FadingChannel rayleigh{1.0, 1.0};
  EXPECT_NEAR(gamma_pdf(rayleigh, 2.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(gamma_cdf(rayleigh, std::log(2.0)), 0.5, 1e-15);
  EXPECT_EQ(gamma_cdf(rayleigh, 0.0), 0.0);
}

TEST(GammaDistribution, SingularDensityAtZero) {
  EXPECT_TRUE(std::isinf(gamma_pdf(FadingChannel{0.5, 1.0}, 0.0)));
  EXPECT_EQ(gamma_pdf(FadingChannel{5.0, 1.0}, 0.0), 0.0);
}

TEST(GammaDistribution, DensityIntegratesToOne) {
  using boost::math::quadrature::gauss_kronrod;
  for (double m : {0.75, 1.0, 5.0, 12.0}) {
    const FadingChannel ch{m, 1.3};
    // tanh-sinh handles the integrable singularity at zero when m < 1.
    const double lo = boost::math::quadrature::tanh_sinh<double>().integrate(
        [&](double x) { return gamma_pdf(ch, x); }, 0.0, 1.0);
    const double hi = gauss_kronrod<double, 31>::integrate(
        [&](double x) { return gamma_pdf(ch, x); }, 1.0, std::numeric_limits<double>::infinity(),
        20, 1e-12);
    EXPECT_NEAR(lo + hi, 1.0, 1e-8) << m;
  }
}

TEST(GammaDistribution, CdfMatchesIntegratedDensity) {
  using boost::math::quadrature::gauss_kronrod;
  const FadingChannel ch{5.0, 1.0};
  for (double x : {0.2, 0.8, 1.0, 2.5}) {
    const double integral = gauss_kronrod<double, 31>::integrate(
        [&](double t) { return gamma_pdf(ch, t); }, 0.0, x, 20, 1e-13);
    EXPECT_NEAR(gamma_cdf(ch, x), integral, 1e-12);
    EXPECT_NEAR(gamma_cdf(ch, x) + gamma_ccdf(ch, x), 1.0, 1e-15);
  }
}

TEST(ReceivedPower, MonotoneTransformIdentity) {
  const auto link = link_at(5.0, 2.1, 2000.0);
  const FadingChannel ch{5.0, 1.0};
  const double p = link_power_mw(link);
  for (double x : {1e-4, 0.01, 0.05, 0.2}) {
    EXPECT_EQ(received_power_cdf(link, ch, x), gamma_cdf(ch, x / p));
    EXPECT_NEAR(received_power_pdf(link, ch, x), gamma_pdf(ch, x / p) / p, 1e-12);
  }
}

TEST(ReceivedPower, ExponentialCase) {
  const auto link = link_at(3.0);
  const FadingChannel ch{1.0, 1.0};
  const double p = link_power_mw(link);
  for (double x : {0.01, 0.1, 1.0}) {
    EXPECT_NEAR(received_power_cdf(link, ch, x), 1.0 - std::exp(-x / p), 1e-15);
  }
}

TEST(ReceivedPower, QuantileInvertsCdf) {
  const auto link = link_at(5.0);
  const FadingChannel ch{5.0, 1.0};
  const double median = received_power_quantile(link, ch, 0.5);
  EXPECT_NEAR(received_power_cdf(link, ch, median), 0.5, 1e-14);
  for (double p : {1e-9, 0.01, 0.9, 1.0 - 1e-12}) {
    EXPECT_NEAR(received_power_cdf(link, ch, received_power_quantile(link, ch, p)), p,
                1e-12 * std::max(p, 1e-3));
  }
}

TEST(Rician, ShapeMapping) {
  EXPECT_EQ(rician_to_nakagami(0.0), 1.0);
  EXPECT_NEAR(rician_to_nakagami(1.0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(rician_to_nakagami(10.0), 121.0 / 21.0, 1e-14);
  EXPECT_THROW(rician_to_nakagami(-1.0), DomainError);
}

TEST(Sampler, Deterministic) {
  const auto link = link_at(5.0);
  const FadingChannel ch{5.0, 1.0};
  EXPECT_EQ(sample_received_power(link, ch, 100000, 7), sample_received_power(link, ch, 100000, 7));
  EXPECT_NE(sample_received_power(link, ch, 1000, 7), sample_received_power(link, ch, 1000, 8));
}

TEST(Sampler, MomentsMatchGammaLaw) {
  const LinkBudget link = link_at(1.0, 2.1, 1.0 / 7.563585830427058504e-4);  // P(d) = 1
  for (double m : {0.6, 1.0, 5.0}) {
    const FadingChannel ch{m, 1.0};
    const auto xs = sample_received_power(link, ch, 1000000, 42);
    double s = 0.0;
    double s2 = 0.0;
    for (double x : xs) {
      s += x;
      s2 += x * x;
    }
    const double n = static_cast<double>(xs.size());
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    EXPECT_NEAR(mean, 1.0, 3.0 * std::sqrt(1.0 / m / n) + 1e-12) << m;
    EXPECT_NEAR(1.0 / var, m, 0.02 * m) << m;
  }
}

TEST(Sampler, KolmogorovSmirnovAgainstCdf) {
  const auto link = link_at(5.0, 2.1, 2000.0);
  const FadingChannel ch{5.0, 1.0};
  auto xs = sample_received_power(link, ch, 1000000, 2024);
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = received_power_cdf(link, ch, xs[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n),
                   std::abs(static_cast<double>(i + 1) / n - f)});
  }
  EXPECT_LE(ks, 0.002);
}

TEST(Sampler, EmpiricalCdfAtMeanWithinThreeStandardErrors) {
  const auto link = link_at(5.0, 2.1, 2000.0);
  const FadingChannel ch{5.0, 1.0};
  const auto xs = sample_received_power(link, ch, 1000000, 99);
  const double p = link_power_mw(link);
  const double f = received_power_cdf(link, ch, p);
  const double hits =
      static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double x) { return x <= p; }));
  const double se = std::sqrt(f * (1.0 - f) / 1e6);
  EXPECT_NEAR(hits / 1e6, f, 3.0 * se);
}

}  // namespace
