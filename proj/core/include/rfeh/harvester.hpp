#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace rfeh {

/// One measured (input, output) pair, both in mW.
struct CurvePoint {
  double input_mw;
  double output_mw;
};

/// Measured harvester transfer characteristic. The first point sits at the
/// sensitivity with zero output and the last at saturation.
class HarvesterCurve {
 public:
  /// Validates: inputs strictly increasing, outputs non-decreasing, first
  /// output zero, 0 < sensitivity < saturation, every output <= its input.
  explicit HarvesterCurve(std::vector<CurvePoint> points);

  std::span<const CurvePoint> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double sensitivity_mw() const { return points_.front().input_mw; }
  double saturation_mw() const { return points_.back().input_mw; }

 private:
  std::vector<CurvePoint> points_;
};

/// Harvesting efficiency as a polynomial in the dBm input,
///   e(x) = sum_i w_i t^i,  t = (10 log10(x) - center_dbm) / half_width_dbm.
/// The affine change of variable keeps high-degree fits well conditioned;
/// monomial_coefficients() recovers the plain dBm-power form.
class EfficiencyPolynomial {
 public:
  EfficiencyPolynomial(std::vector<double> coefficients, double center_dbm,
                       double half_width_dbm, double sensitivity_mw, double saturation_mw);

  /// Polynomial in raw dBm powers (center 0, half-width 1).
  static EfficiencyPolynomial from_monomial(std::vector<double> dbm_coefficients,
                                            double sensitivity_mw, double saturation_mw);

  double at_dbm(double dbm) const;
  double operator()(double x_mw) const;

  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  std::span<const double> coefficients() const { return coefficients_; }
  double center_dbm() const { return center_dbm_; }
  double half_width_dbm() const { return half_width_dbm_; }
  double sensitivity_mw() const { return sensitivity_mw_; }
  double saturation_mw() const { return saturation_mw_; }

  /// Coefficients w_i of sum_i w_i (dBm)^i.
  std::vector<double> monomial_coefficients() const;

  /// Largest |measured - fitted| efficiency over the fitted datapoints; zero
  /// when the polynomial was not produced by a fit.
  double max_residual() const { return max_residual_; }
  void set_max_residual(double r) { max_residual_ = r; }

 private:
  std::vector<double> coefficients_;
  double center_dbm_;
  double half_width_dbm_;
  double sensitivity_mw_;
  double saturation_mw_;
  double max_residual_ = 0.0;
};

/// Ground-truth harvested power: zero up to sensitivity, e(x) x on the
/// operating range, constant above saturation.
class GroundTruthHarvester {
 public:
  explicit GroundTruthHarvester(EfficiencyPolynomial efficiency);

  double power(double x_mw) const;
  const EfficiencyPolynomial& efficiency() const { return efficiency_; }
  double sensitivity_mw() const { return efficiency_.sensitivity_mw(); }
  double saturation_mw() const { return efficiency_.saturation_mw(); }
  double plateau_mw() const { return plateau_mw_; }

 private:
  EfficiencyPolynomial efficiency_;
  double plateau_mw_;
};

/// Convenience form of GroundTruthHarvester::power.
double ground_truth_power(const HarvesterCurve& curve, const EfficiencyPolynomial& eff, double x_mw);

/// Piecewise-linear harvester through support points b_0..b_M with images
/// v_0 = 0 < v_1 < ... < v_M. Zero on [0, b_0], linear on each (b_{m-1}, b_m],
/// constant v_M above b_M.
class PiecewiseLinearHarvester {
 public:
  /// Strictly equal consecutive images are merged (the first support is kept);
  /// a decreasing image or a non-increasing support is a ValidationError.
  /// images[0] must be zero.
  static PiecewiseLinearHarvester from_nodes(std::vector<double> supports,
                                             std::vector<double> images);

  double power(double x_mw) const;

  /// Unique x in [b_0, b_M] with power(x) = y, for y in [0, v_M].
  double inverse(double y_mw) const;

  std::span<const double> supports() const { return supports_; }
  std::span<const double> images() const { return images_; }
  /// slopes()[m - 1] is l_m, the slope of segment (b_{m-1}, b_m].
  std::span<const double> slopes() const { return slopes_; }
  std::size_t segments() const { return slopes_.size(); }
  double sensitivity_mw() const { return supports_.front(); }
  double saturation_mw() const { return supports_.back(); }
  double plateau_mw() const { return images_.back(); }

 private:
  PiecewiseLinearHarvester(std::vector<double> supports, std::vector<double> images);

  std::vector<double> supports_;
  std::vector<double> images_;
  std::vector<double> slopes_;
};

enum class SupportSpacing { kUniformLinear, kUniformDb };

/// Interpolates the measured datapoints directly (M + 1 = curve.size() before
/// tie merging).
PiecewiseLinearHarvester build_piecewise(const HarvesterCurve& curve);

/// Samples the ground truth at M + 1 supports between sensitivity and
/// saturation, uniformly in mW or in dBm.
PiecewiseLinearHarvester build_piecewise(const GroundTruthHarvester& truth, std::size_t segments,
                                         SupportSpacing spacing);

/// p_L(x) = eta x.
struct LinearBaseline {
  double eta = 0.0;

  double power(double x_mw) const;
  double inverse(double y_mw) const;
  void validate() const;
};

/// p_CL(x) = eta (x - P_sen) above sensitivity, zero below.
struct ConstantLinearBaseline {
  double eta = 0.0;
  double sensitivity_mw = 0.0;

  double power(double x_mw) const;
  double inverse(double y_mw) const;
  void validate() const;
};

/// CL clamped at eta (P_sat - P_sen) above saturation.
struct ConstantLinearConstantBaseline {
  double eta = 0.0;
  double sensitivity_mw = 0.0;
  double saturation_mw = 0.0;

  double power(double x_mw) const;
  double inverse(double y_mw) const;
  double plateau_mw() const { return eta * (saturation_mw - sensitivity_mw); }
  void validate() const;
};

/// Normalized logistic model: with psi(x) = S / (1 + exp(-a (x - c))) and
/// omega = 1 / (1 + exp(a c)), p(x) = (psi(x) - S omega) / (1 - omega).
/// p(0) = 0 and p -> S as x -> infinity.
struct SigmoidBaseline {
  double saturation_mw = 0.0;
  double steepness_per_mw = 0.0;
  double center_mw = 0.0;

  double power(double x_mw) const;
};

/// Second-order polynomial in mW. Negative values are kept as is.
struct QuadraticBaseline {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double power(double x_mw) const { return (c2 * x_mw + c1) * x_mw + c0; }
};

using HarvesterModel =
    std::variant<GroundTruthHarvester, PiecewiseLinearHarvester, LinearBaseline,
                 ConstantLinearBaseline, ConstantLinearConstantBaseline, SigmoidBaseline,
                 QuadraticBaseline>;

double harvested_power(const HarvesterModel& model, double x_mw);

/// Input powers where the model has a kink; used to split quadrature ranges.
std::vector<double> breakpoints(const HarvesterModel& model);

/// sup{x >= 0 : p(x) <= y}, or +inf when the model never exceeds y. Models
/// without a closed-form inverse are inverted by bisection; the quadratic
/// baseline is rejected with DomainError because it need not be monotone.
double input_for_output(const HarvesterModel& model, double y_mw);

std::string_view model_name(const HarvesterModel& model);

struct ApproximationError {
  /// Integral of |p - p~| over [P_sen, P_sat], in mW^2.
  double integrated_error;
  /// C_p (P_sat - P_sen)^3 / (8 M^2).
  double analytic_bound;
  /// Estimate of max |p''| from second central differences.
  double curvature;
};

ApproximationError approximation_error(const GroundTruthHarvester& truth,
                                       const PiecewiseLinearHarvester& approx);

}  // namespace rfeh
