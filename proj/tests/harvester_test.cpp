#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rfeh/error.hpp"
#include "rfeh/harvester.hpp"
#include "rfeh/units.hpp"

namespace {

using namespace rfeh;

// e(s) = -0.0004 s^2 + 0.0104 s + 0.1824 on [-12, 10] dBm; e(-12) = 0 and e
// increases across the domain.
GroundTruthHarvester quadratic_efficiency_truth() {
  return GroundTruthHarvester(EfficiencyPolynomial::from_monomial(
      {0.1824, 0.0104, -0.0004}, dbm_to_mw(-12.0), dbm_to_mw(10.0)));
}

// Independent two-point interpolation by linear scan.
double scan_interpolate(const std::vector<double>& b, const std::vector<double>& v, double x) {
  if (x <= b.front()) return 0.0;
  for (std::size_t m = 1; m < b.size(); ++m) {
    if (x <= b[m]) {
      const double w = (x - b[m - 1]) / (b[m] - b[m - 1]);
      return (1.0 - w) * v[m - 1] + w * v[m];
    }
  }
  return v.back();
}

TEST(HarvesterCurve, Validation) {
  EXPECT_NO_THROW(HarvesterCurve({{1.0, 0.0}, {2.0, 0.5}}));
  EXPECT_THROW(HarvesterCurve({{1.0, 0.1}, {2.0, 0.5}}), ValidationError);  // nonzero at sen
  EXPECT_THROW(HarvesterCurve({{1.0, 0.0}, {1.0, 0.5}}), ValidationError);  // repeated input
  EXPECT_THROW(HarvesterCurve({{1.0, 0.0}, {2.0, 0.5}, {3.0, 0.4}}), ValidationError);
  EXPECT_THROW(HarvesterCurve({{1.0, 0.0}, {2.0, 2.5}}), ValidationError);  // efficiency > 1
  EXPECT_THROW(HarvesterCurve({{1.0, 0.0}}), ValidationError);
}

TEST(EfficiencyPolynomial, NormalizedAndMonomialFormsAgree) {
  const EfficiencyPolynomial p({0.3, 0.2, -0.05, 0.01}, -15.0, 25.0, dbm_to_mw(-40.0),
                               dbm_to_mw(10.0));
  const auto w = p.monomial_coefficients();
  const auto q = EfficiencyPolynomial::from_monomial(w, dbm_to_mw(-40.0), dbm_to_mw(10.0));
  for (double s = -40.0; s <= 10.0; s += 0.5) EXPECT_NEAR(p.at_dbm(s), q.at_dbm(s), 1e-13);
}

TEST(GroundTruth, BelowSensitivityAndAboveSaturation) {
  const auto truth = quadratic_efficiency_truth();
  EXPECT_EQ(truth.power(truth.sensitivity_mw() / 2.0), 0.0);
  EXPECT_EQ(truth.power(2.0 * truth.saturation_mw()), truth.power(truth.saturation_mw()));
  EXPECT_EQ(truth.power(0.0), 0.0);
}

TEST(GroundTruth, OneMilliwattIsEfficiencyAtZeroDbm) {
  const auto truth = quadratic_efficiency_truth();
  EXPECT_NEAR(truth.power(1.0), 0.1824, 1e-15);
  // Same value through the curve-based free function.
  const HarvesterCurve curve({{truth.sensitivity_mw(), 0.0},
                              {truth.saturation_mw(), truth.plateau_mw()}});
  EXPECT_NEAR(ground_truth_power(curve, truth.efficiency(), 1.0), 0.1824, 1e-15);
}

TEST(Piecewise, SingleSegment) {
  const auto h = PiecewiseLinearHarvester::from_nodes({1.0, 5.0}, {0.0, 2.0});
  EXPECT_EQ(h.segments(), 1u);
  EXPECT_EQ(h.power(3.0), 1.0);
  EXPECT_EQ(h.power(0.5), 0.0);
  EXPECT_EQ(h.power(9.0), 2.0);
}

TEST(Piecewise, NodesAreReproducedExactly) {
  const auto truth = quadratic_efficiency_truth();
  const auto h = build_piecewise(truth, 137, SupportSpacing::kUniformDb);
  for (std::size_t m = 0; m < h.supports().size(); ++m) {
    EXPECT_EQ(h.power(h.supports()[m]), h.images()[m]);
  }
}

TEST(Piecewise, MidpointOfFirstSegment) {
  const auto h = PiecewiseLinearHarvester::from_nodes({0.1, 0.3, 1.0}, {0.0, 0.05, 0.4});
  EXPECT_NEAR(h.power(0.2), 0.025, 1e-16);
}

TEST(Piecewise, BinarySearchAgreesWithLinearScan) {
  const auto truth = quadratic_efficiency_truth();
  const auto h = build_piecewise(truth, 400, SupportSpacing::kUniformLinear);
  const std::vector<double> b(h.supports().begin(), h.supports().end());
  const std::vector<double> v(h.images().begin(), h.images().end());
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.2 * h.saturation_mw());
  for (int i = 0; i < 100000; ++i) {
    const double x = u(gen);
    EXPECT_NEAR(h.power(x), scan_interpolate(b, v, x), 1e-14);
  }
}

TEST(Piecewise, ContinuousAndNondecreasing) {
  const auto truth = quadratic_efficiency_truth();
  const auto h = build_piecewise(truth, 50, SupportSpacing::kUniformDb);
  for (double b : h.supports()) {
    const double left = h.power(std::nextafter(b, 0.0));
    const double right = h.power(std::nextafter(b, 1e9));
    EXPECT_LE(std::abs(left - right), 1e-12);
  }
  double prev = 0.0;
  for (double x = 0.0; x < 12.0; x += 1e-3) {
    const double p = h.power(x);
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(Piecewise, ZeroBelowAndPlateauAbove) {
  const auto h = build_piecewise(quadratic_efficiency_truth(), 20, SupportSpacing::kUniformDb);
  for (double x = 0.0; x <= h.sensitivity_mw(); x += h.sensitivity_mw() / 50.0) {
    EXPECT_EQ(h.power(x), 0.0);
  }
  EXPECT_EQ(h.power(h.saturation_mw() * 3.0), h.plateau_mw());
}

TEST(Piecewise, TiesAreMergedAndDecreasesRejected) {
  const auto h = PiecewiseLinearHarvester::from_nodes({1.0, 2.0, 3.0, 4.0}, {0.0, 1.0, 1.0, 2.0});
  ASSERT_EQ(h.segments(), 2u);
  EXPECT_EQ(h.supports()[1], 2.0);
  EXPECT_EQ(h.supports()[2], 4.0);
  EXPECT_THROW(PiecewiseLinearHarvester::from_nodes({1.0, 2.0, 3.0}, {0.0, 1.0, 0.5}),
               ValidationError);
  EXPECT_THROW(PiecewiseLinearHarvester::from_nodes({1.0, 2.0}, {0.1, 1.0}), ValidationError);
}

TEST(Piecewise, FromDatapointsKeepsEveryPoint) {
  std::vector<CurvePoint> pts{{0.1, 0.0}};
  for (int i = 1; i < 53; ++i) pts.push_back({0.1 + 0.2 * i, 0.001 * i * i});
  const auto h = build_piecewise(HarvesterCurve(pts));
  EXPECT_EQ(h.supports().size(), 53u);
}

TEST(Piecewise, UniformLinearSpacing) {
  const auto truth = quadratic_efficiency_truth();
  const auto h = build_piecewise(truth, 1170, SupportSpacing::kUniformLinear);
  const double step = (truth.saturation_mw() - truth.sensitivity_mw()) / 1170.0;
  for (std::size_t m = 1; m < h.supports().size(); ++m) {
    EXPECT_NEAR(h.supports()[m] - h.supports()[m - 1], step, 1e-12);
  }
}

TEST(PiecewiseInverse, NodesAndRoundTrip) {
  const auto h = build_piecewise(quadratic_efficiency_truth(), 60, SupportSpacing::kUniformDb);
  for (std::size_t m = 0; m < h.images().size(); ++m) {
    EXPECT_EQ(h.inverse(h.images()[m]), h.supports()[m]);
  }
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, h.plateau_mw());
  for (int i = 0; i < 10000; ++i) {
    const double y = u(gen);
    EXPECT_NEAR(h.power(h.inverse(y)), y, 1e-12);
  }
  EXPECT_THROW(h.inverse(-1e-9), DomainError);
  EXPECT_THROW(h.inverse(h.plateau_mw() * 1.001), DomainError);
}

TEST(PiecewiseInverse, AgreesWithBisection) {
  const auto h = PiecewiseLinearHarvester::from_nodes({1.0, 2.0, 4.0}, {0.0, 0.3, 1.5});
  const double y = h.plateau_mw() / 2.0;
  double lo = h.sensitivity_mw();
  double hi = h.saturation_mw();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h.power(mid) < y ? lo : hi) = mid;
  }
  EXPECT_NEAR(h.inverse(y), 0.5 * (lo + hi), 1e-14);
}

TEST(Baselines, Values) {
  const LinearBaseline l{0.3};
  EXPECT_NEAR(l.power(2.0), 0.6, 1e-16);
  EXPECT_NEAR(l.inverse(0.6), 2.0, 1e-15);

  const ConstantLinearBaseline cl{0.4, 0.5};
  EXPECT_EQ(cl.power(0.5), 0.0);
  EXPECT_NEAR(cl.inverse(0.4), 1.5, 1e-15);

  const ConstantLinearConstantBaseline clc{0.4, 0.5, 3.0};
  EXPECT_NEAR(clc.power(6.0), 0.4 * 2.5, 1e-15);
  const double y = 0.99 * clc.plateau_mw();
  const double x = clc.inverse(y);
  EXPECT_LT(x, clc.saturation_mw);
  EXPECT_NEAR(clc.power(x), y, 1e-15);
  EXPECT_THROW(clc.inverse(clc.plateau_mw()), DomainError);
  EXPECT_THROW(l.inverse(-1.0), DomainError);
}

TEST(Baselines, Validation) {
  EXPECT_THROW(LinearBaseline{1.0}.validate(), ValidationError);
  EXPECT_THROW((ConstantLinearBaseline{0.3, 0.0}.validate()), ValidationError);
  EXPECT_THROW((ConstantLinearConstantBaseline{0.3, 2.0, 1.0}.validate()), ValidationError);
}

TEST(Sigmoid, StartsAtZeroAndSaturates) {
  const SigmoidBaseline s{5.0, 1.2, 2.0};
  EXPECT_NEAR(s.power(0.0), 0.0, 1e-15);
  EXPECT_NEAR(s.power(1e3), 5.0, 1e-12);
  double prev = -1.0;
  for (double x = 0.0; x < 20.0; x += 0.01) {
    const double p = s.power(x);
    EXPECT_GT(p, prev);
    EXPECT_LT(p, 5.0 + 1e-12);
    prev = p;
  }
}

TEST(Quadratic, MayBeNegative) {
  const QuadraticBaseline q{0.01, 0.2, -0.05};
  EXPECT_LT(q.power(0.01), 0.0);
}

TEST(ModelVariant, DispatchAndBreakpoints) {
  const HarvesterModel m = ConstantLinearConstantBaseline{0.4, 0.5, 3.0};
  EXPECT_NEAR(harvested_power(m, 6.0), 1.0, 1e-15);
  EXPECT_EQ(breakpoints(m), (std::vector<double>{0.5, 3.0}));
  EXPECT_EQ(model_name(m), "constant-linear-constant");
  EXPECT_TRUE(breakpoints(HarvesterModel{LinearBaseline{0.2}}).empty());
}

TEST(InputForOutput, InvertsEveryMonotoneModel) {
  const auto truth = quadratic_efficiency_truth();
  const std::vector<HarvesterModel> models{
      truth, build_piecewise(truth, 30, SupportSpacing::kUniformDb), LinearBaseline{0.3},
      ConstantLinearBaseline{0.3, 0.1}, ConstantLinearConstantBaseline{0.3, 0.1, 5.0},
      SigmoidBaseline{2.0, 0.8, 3.0}};
  for (const auto& m : models) {
    for (double y : {1e-4, 0.01, 0.2}) {
      const double x = input_for_output(m, y);
      ASSERT_TRUE(std::isfinite(x)) << model_name(m);
      EXPECT_NEAR(harvested_power(m, x), y, 1e-9 * y) << model_name(m);
    }
  }
  EXPECT_TRUE(std::isinf(input_for_output(models[0], truth.plateau_mw())));
  EXPECT_THROW(input_for_output(HarvesterModel{QuadraticBaseline{1, 1, 0}}, 0.1), DomainError);
}

TEST(ApproximationError, BoundHolds) {
  const auto truth = quadratic_efficiency_truth();
  for (std::size_t m : {10u, 100u, 1000u}) {
    const auto h = build_piecewise(truth, m, SupportSpacing::kUniformLinear);
    const auto e = approximation_error(truth, h);
    EXPECT_GT(e.integrated_error, 0.0);
    EXPECT_LE(e.integrated_error, e.analytic_bound) << m;
  }
}

TEST(ApproximationError, DecaysQuadratically) {
  const auto truth = quadratic_efficiency_truth();
  const auto e1 = approximation_error(truth, build_piecewise(truth, 200, SupportSpacing::kUniformLinear));
  const auto e2 = approximation_error(truth, build_piecewise(truth, 400, SupportSpacing::kUniformLinear));
  EXPECT_NEAR(e1.integrated_error / e2.integrated_error, 4.0, 0.6);
}

}  // namespace
