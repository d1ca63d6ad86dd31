#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rfeh/density_evolution.hpp"
#include "rfeh/error.hpp"

namespace {

using namespace rfeh;

GridSpec grid(double upper, std::size_t h, std::size_t j) {
  GridSpec g;
  g.upper = upper;
  g.intervals = h;
  g.fft_size = j;
  return g;
}

// O(H^2) reference: direct sum truncated to the grid.
std::vector<double> direct_convolution(const std::vector<double>& a, const std::vector<double>& b,
                                       double g) {
  std::vector<double> c(a.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (std::size_t i = 0; i <= k; ++i) c[k] += a[i] * b[k - i] * g;
  }
  return c;
}

DiscretizedDensity point_mass(const GridSpec& g, std::size_t node) {
  DiscretizedDensity d{g, std::vector<double>(g.nodes(), 0.0)};
  d.values[node] = 1.0 / g.resolution();
  return d;
}

// Smooth, skewed test density on the first `width` nodes.
DiscretizedDensity bump(const GridSpec& g, std::size_t width) {
  DiscretizedDensity d{g, std::vector<double>(g.nodes(), 0.0)};
  double s = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    const double t = (j + 0.5) / width;
    d.values[j] = t * (1.0 - t) * (1.0 - t) + 0.05;
    s += d.values[j];
  }
  for (double& v : d.values) v /= s * g.resolution();
  return d;
}

TEST(Grid, Validation) {
  EXPECT_THROW(grid(1.0, 1, 8).validate(), ValidationError);
  EXPECT_THROW(grid(1.0, 16, 17).validate(), ValidationError);
  EXPECT_THROW(grid(1.0, 16, 16).validate(), ValidationError);
  EXPECT_NO_THROW(grid(1.0, 16, 32).validate());
  EXPECT_EQ(grid(1.0, 10, 32).floor_index(0.35), 3u);
  EXPECT_EQ(grid(1.0, 10, 32).floor_index(0.3), 3u);
  EXPECT_EQ(grid(1.0, 10, 32).floor_index(5.0), 10u);
}

TEST(Discretize, UniformDensity) {
  const auto g = grid(2.0, 2000, 4096);
  const auto d = discretize([](double x) { return x >= 0.0 && x < 1.0 ? 1.0 : 0.0; }, g);
  EXPECT_NEAR(d.mass(), 1.0, 1e-9);
  for (std::size_t j = 0; j < g.nodes(); ++j) {
    EXPECT_NEAR(d.values[j], g.node(j) < 1.0 - 1e-12 ? 1.0 : 0.0, 1e-9) << j;
  }
}

TEST(Discretize, OverflowIsReported) {
  const auto g = grid(1.0, 100, 256);
  EXPECT_THROW(discretize([](double) { return 1.0; }, grid(0.5, 100, 256)), SupportOverflowError);
  EXPECT_THROW(discretize_cdf([](double x) { return std::clamp(x / 2.0, 0.0, 1.0); }, g),
               SupportOverflowError);
  const auto kept =
      discretize_cdf([](double x) { return std::clamp(x / 2.0, 0.0, 1.0); }, g, true);
  EXPECT_NEAR(kept.mass(), 0.5025, 1e-12);  // cells up to 1 + G/2
}

TEST(Discretize, AtomLandsOnNearestNode) {
  LinkBudget link;
  const FadingChannel ch{5.0, 1.0};
  const double sens = received_power_quantile(link, ch, 0.3);
  const auto h = PiecewiseLinearHarvester::from_nodes({sens, 4.0 * sens}, {0.0, sens});
  const HarvestedPowerDistribution dist(h, link, ch);
  ASSERT_NEAR(dist.atom_at_zero(), 0.3, 1e-12);
  const auto g = grid(1.2 * sens, 4096, 8192);
  const auto d = discretize(dist, g);
  const double continuous_in_first_half_cell = dist.cdf(0.5 * g.resolution()) - 0.3;
  EXPECT_NEAR(d.values[0] * g.resolution(), 0.3 + continuous_in_first_half_cell, 1e-9);
  EXPECT_NEAR(d.mass(), 1.0, 1e-12);
}

TEST(Discretize, GammaMeanMatches) {
  LinkBudget link;
  link.distance_m = 1.0;
  link.transmit_power_mw = 1.0 / path_gain(link);  // P(d) = 1
  const FadingChannel ch{5.0, 1.0};
  const auto g = grid(6.0, 1 << 14, 1 << 15);
  const auto d = discretize([&](double x) { return received_power_pdf(link, ch, x); }, g);
  EXPECT_NEAR(d.mean(), 1.0, 1e-3);
  const auto f = cdf_from_density(d);
  for (std::size_t j = 0; j < g.nodes(); j += 97) {
    // The running sum reaches half a cell past the node.
    EXPECT_NEAR(f[j], gamma_cdf(ch, g.node(j)), g.resolution());
  }
}

TEST(Convolve, IdentityForOneCopy) {
  const auto g = grid(1.0, 512, 1024);
  const auto d = bump(g, 100);
  const auto c = convolve_n(d, 1);
  for (std::size_t j = 0; j < g.nodes(); ++j) EXPECT_NEAR(c.values[j], d.values[j], 1e-12);
}

TEST(Convolve, TwoUniformsGiveTriangle) {
  const std::size_t h = 2000;
  const auto g = grid(2.0, h, 4096);
  const auto d = discretize([](double x) { return x >= 0.0 && x < 1.0 ? 1.0 : 0.0; }, g);
  const auto c = convolve(d, d);
  for (std::size_t j = 0; j < g.nodes(); ++j) {
    const double x = g.node(j);
    const double tri = x <= 1.0 ? x : std::max(2.0 - x, 0.0);
    // Left-closed sampling shifts the discrete triangle by one cell.
    EXPECT_NEAR(c.values[j], tri, 1.5 * g.resolution()) << j;
  }
  EXPECT_NEAR(c.mass(), 1.0, 1e-6);
}

TEST(Convolve, MatchesBruteForce) {
  for (std::size_t h : {256u, 512u}) {
    const auto g = grid(1.0, h, 2 * h);
    const auto d = bump(g, h / 20);
    for (std::size_t n : {2u, 3u, 5u, 20u}) {
      std::vector<double> ref = d.values;
      for (std::size_t k = 1; k < n; ++k) ref = direct_convolution(ref, d.values, g.resolution());
      const auto c = convolve_n(d, n);
      for (std::size_t j = 0; j < g.nodes(); ++j) {
        EXPECT_NEAR(c.values[j], ref[j], 1e-8) << "H=" << h << " n=" << n << " j=" << j;
      }
    }
  }
}

TEST(Convolve, MomentsAdd) {
  const auto g = grid(1.0, 4096, 8192);
  const auto d = bump(g, 150);
  for (std::size_t n : {2u, 7u, 20u}) {
    const auto c = convolve_n(d, n);
    EXPECT_NEAR(c.mean() / (n * d.mean()), 1.0, 1e-3);
    EXPECT_NEAR(c.variance() / (n * d.variance()), 1.0, 1e-3);
    EXPECT_NEAR(c.mass(), 1.0, 1e-6);
  }
}

TEST(Convolve, Guards) {
  const auto g = grid(1.0, 256, 512);
  DiscretizedDensity top{g, std::vector<double>(g.nodes(), 0.0)};
  top.values[0] = 0.5 / g.resolution();
  top.values[256] = 0.5 / g.resolution();
  EXPECT_THROW(convolve(top, top), AliasingError);
  const auto wide = bump(g, 200);
  EXPECT_THROW(convolve_n(wide, 2), SupportOverflowError);
  EXPECT_THROW(convolve(wide, bump(grid(2.0, 256, 512), 10)), ValidationError);
}

TEST(Cdf, PointMassStepAndUniformRamp) {
  const auto g = grid(1.0, 100, 256);
  const auto f = cdf_from_density(point_mass(g, 40));
  for (std::size_t j = 0; j < g.nodes(); ++j) EXPECT_NEAR(f[j], j < 40 ? 0.0 : 1.0, 1e-15);
  const auto u = discretize([](double x) { return x < 1.0 ? 1.0 : 0.0; }, g);
  const auto r = cdf_from_density(u);
  for (std::size_t j = 0; j < 100; ++j) EXPECT_NEAR(r[j], (j + 1) / 100.0, 1e-12);
}

TEST(FirstPassage, DeterministicAccumulation) {
  const auto g = grid(1.0, 1000, 4096);
  const auto d = point_mass(g, 40);
  const double c = g.node(40);
  const auto r = first_passage_pmf(d, 2.5 * c, 6);
  ASSERT_EQ(r.pmf.size(), 6u);
  EXPECT_NEAR(r.pmf[2], 1.0, 1e-12);
  EXPECT_NEAR(r.pmf[0] + r.pmf[1] + r.pmf[3], 0.0, 1e-12);
  EXPECT_NEAR(expected_charging_blocks(r).blocks, 3.0, 1e-12);
  EXPECT_FALSE(r.truncated);
}

TEST(FirstPassage, ThresholdBelowEveryHarvest) {
  const auto g = grid(1.0, 1000, 4096);
  const auto r = first_passage_pmf(point_mass(g, 10), 0.005, 3);
  EXPECT_NEAR(r.pmf[0], 1.0, 1e-12);
}

TEST(FirstPassage, GeometricMean) {
  const auto g = grid(1.0, 1000, 4096);
  const double q = 0.2;
  DiscretizedDensity d{g, std::vector<double>(g.nodes(), 0.0)};
  d.values[0] = (1.0 - q) / g.resolution();
  d.values[900] = q / g.resolution();
  const auto r = first_passage_pmf_until(d, 0.5);
  EXPECT_NEAR(expected_charging_blocks(r).blocks, 1.0 / q, 0.01 / q);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_NEAR(r.pmf[k], q * std::pow(1.0 - q, static_cast<double>(k)), 1e-12);
  }
}

TEST(FirstPassage, ResidualShrinksWithHorizon) {
  const auto g = grid(1.0, 1024, 4096);
  const auto d = bump(g, 60);
  double prev = 1.0;
  for (std::size_t n : {1u, 5u, 10u, 20u, 40u}) {
    const auto r = first_passage_pmf(d, 0.8, n);
    double s = 0.0;
    for (double p : r.pmf) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      s += p;
    }
    EXPECT_LE(s, 1.0 + 1e-12);
    EXPECT_NEAR(s + r.residual, 1.0, 1e-12);
    EXPECT_LE(r.residual, prev);
    prev = r.residual;
  }
  EXPECT_TRUE(first_passage_pmf(d, 0.8, 2).truncated);
}

TEST(FirstPassage, CapIsReported) {
  const auto g = grid(1.0, 1000, 4096);
  DiscretizedDensity d{g, std::vector<double>(g.nodes(), 0.0)};
  d.values[0] = 0.999 / g.resolution();
  d.values[999] = 0.001 / g.resolution();
  EXPECT_THROW(first_passage_pmf_until(d, 0.5, 1e-4, 100), ConvergenceError);
}

TEST(Charging, ThresholdUnits) {
  ChargingSpec c;
  EXPECT_NEAR(c.threshold_mw(), 0.324, 1e-15);
  EXPECT_EQ(c.coherence_s(), c.packet_duration_s);
  c.capacitance_f = 0.0;
  EXPECT_THROW(c.threshold_mw(), ValidationError);
}

TEST(DefaultGrid, FootnoteFormula) {
  EXPECT_NEAR(default_grid(1.0, 0.0, 4).upper, 4.0, 1e-15);
  EXPECT_NEAR(default_grid(1.0, 1.0, 1).upper, 11.0, 1e-15);
  const auto g = default_grid(0.01, 1e-4, 50);
  EXPECT_EQ(g.intervals, 1u << 16);
  EXPECT_EQ(g.fft_size, 1u << 17);
  EXPECT_EQ(default_grid(1.0, 1.0, 1, 1u << 17).fft_size, 1u << 18);
}

TEST(ChargingTime, ScalesWithCoherence) {
  const auto g = grid(1.0, 1000, 4096);
  const auto r = first_passage_pmf(point_mass(g, 40), 0.1, 5);
  EXPECT_NEAR(expected_charging_time(r, 0.05), 3.0 * 0.05, 1e-12);
}

}  // namespace
