#include "rfeh/harvester.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>


#include "rfeh/error.hpp"
#include "rfeh/units.hpp"
#include "quadrature.hpp"

namespace rfeh {
namespace {

constexpr std::size_t kCurvatureGrid = 10000;

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void check_input(double x_mw) {
  if (!(x_mw >= 0.0)) throw DomainError("input power must be non-negative");
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw ValidationError("eta must lie in [0, 1)");
}

}  // namespace

HarvesterCurve::HarvesterCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw ValidationError("a harvester curve needs at least two points");
  if (!(points_.front().input_mw > 0.0)) throw ValidationError("sensitivity must be positive");
  if (points_.front().output_mw != 0.0) {
    throw ValidationError("output at sensitivity must be zero");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.input_mw) || !std::isfinite(p.output_mw)) {
      throw ValidationError("curve points must be finite");
    }
    if (p.output_mw < 0.0 || p.output_mw > p.input_mw) {
      throw ValidationError("curve output must lie in [0, input] at point " + std::to_string(i));
    }
    if (i > 0) {
      if (!(p.input_mw > points_[i - 1].input_mw)) {
        throw ValidationError("curve inputs must be strictly increasing at point " +
                              std::to_string(i));
      }
      if (p.output_mw < points_[i - 1].output_mw) {
        throw ValidationError("curve outputs must be non-decreasing at point " +
                              std::to_string(i));
      }
    }
  }
}

EfficiencyPolynomial::EfficiencyPolynomial(std::vector<double> coefficients, double center_dbm,
                                           double half_width_dbm, double sensitivity_mw,
                                           double saturation_mw)
    : coefficients_(std::move(coefficients)),
      center_dbm_(center_dbm),
      half_width_dbm_(half_width_dbm),
      sensitivity_mw_(sensitivity_mw),
      saturation_mw_(saturation_mw) {
  if (coefficients_.empty()) throw ValidationError("efficiency polynomial has no coefficients");
  if (!(half_width_dbm_ > 0.0)) throw ValidationError("half width must be positive");
  if (!(sensitivity_mw_ > 0.0 && sensitivity_mw_ < saturation_mw_)) {
    throw ValidationError("efficiency domain needs 0 < sensitivity < saturation");
  }
}

EfficiencyPolynomial EfficiencyPolynomial::from_monomial(std::vector<double> dbm_coefficients,
                                                         double sensitivity_mw,
                                                         double saturation_mw) {
  return EfficiencyPolynomial(std::move(dbm_coefficients), 0.0, 1.0, sensitivity_mw,
                              saturation_mw);
}

double EfficiencyPolynomial::at_dbm(double dbm) const {
  const double t = (dbm - center_dbm_) / half_width_dbm_;
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double EfficiencyPolynomial::operator()(double x_mw) const { return at_dbm(mw_to_dbm(x_mw)); }

std::vector<double> EfficiencyPolynomial::monomial_coefficients() const {
  // sum_i w_i ((s - c) / h)^i expanded in powers of s.
  const std::size_t n = coefficients_.size();
  std::vector<double> out(n, 0.0);
  std::vector<double> power{1.0};  // coefficients of ((s - c) / h)^i
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < power.size(); ++k) out[k] += coefficients_[i] * power[k];
    std::vector<double> next(power.size() + 1, 0.0);
    for (std::size_t k = 0; k < power.size(); ++k) {
      next[k + 1] += power[k] / half_width_dbm_;
      next[k] -= power[k] * center_dbm_ / half_width_dbm_;
    }
    power = std::move(next);
  }
  return out;
}

GroundTruthHarvester::GroundTruthHarvester(EfficiencyPolynomial efficiency)
    : efficiency_(std::move(efficiency)),
      plateau_mw_(efficiency_(efficiency_.saturation_mw()) * efficiency_.saturation_mw()) {}

double GroundTruthHarvester::power(double x_mw) const {
  check_input(x_mw);
  if (x_mw <= sensitivity_mw()) return 0.0;
  if (x_mw >= saturation_mw()) return plateau_mw_;
  return efficiency_(x_mw) * x_mw;
}

double ground_truth_power(const HarvesterCurve& curve, const EfficiencyPolynomial& eff,
                          double x_mw) {
  check_input(x_mw);
  if (x_mw <= curve.sensitivity_mw()) return 0.0;
  const double x = std::min(x_mw, curve.saturation_mw());
  return eff(x) * x;
}

PiecewiseLinearHarvester::PiecewiseLinearHarvester(std::vector<double> supports,
                                                   std::vector<double> images)
    : supports_(std::move(supports)), images_(std::move(images)) {
  slopes_.reserve(supports_.size() - 1);
  for (std::size_t m = 1; m < supports_.size(); ++m) {
    slopes_.push_back((images_[m] - images_[m - 1]) / (supports_[m] - supports_[m - 1]));
  }
}

PiecewiseLinearHarvester PiecewiseLinearHarvester::from_nodes(std::vector<double> supports,
                                                              std::vector<double> images) {
  if (supports.size() != images.size()) {
    throw ValidationError("supports and images differ in length");
  }
  if (supports.size() < 2) throw ValidationError("a piecewise model needs at least one segment");
  if (!(supports.front() > 0.0)) throw ValidationError("first support must be positive");
  if (images.front() != 0.0) throw ValidationError("image of the first support must be zero");

  std::vector<double> b{supports.front()};
  std::vector<double> v{images.front()};
  for (std::size_t i = 1; i < supports.size(); ++i) {
    if (!std::isfinite(supports[i]) || !std::isfinite(images[i])) {
      throw ValidationError("piecewise nodes must be finite");
    }
    if (!(supports[i] > supports[i - 1])) {
      throw ValidationError("supports must be strictly increasing at node " + std::to_string(i));
    }
    if (images[i] < images[i - 1]) {
      throw ValidationError("images must be non-decreasing at node " + std::to_string(i));
    }
    if (images[i] == v.back()) continue;  // tie: keep the earlier support
    b.push_back(supports[i]);
    v.push_back(images[i]);
  }
  if (b.size() < 2) throw ValidationError("piecewise model is identically zero");
  return PiecewiseLinearHarvester(std::move(b), std::move(v));
}

double PiecewiseLinearHarvester::power(double x_mw) const {
  check_input(x_mw);
  if (x_mw <= supports_.front()) return 0.0;
  if (x_mw >= supports_.back()) return images_.back();
  const auto it = std::lower_bound(supports_.begin(), supports_.end(), x_mw);
  const auto m = static_cast<std::size_t>(it - supports_.begin());
  if (*it == x_mw) return images_[m];
  return slopes_[m - 1] * (x_mw - supports_[m - 1]) + images_[m - 1];
}

double PiecewiseLinearHarvester::inverse(double y_mw) const {
  if (!(y_mw >= 0.0 && y_mw <= images_.back())) {
    throw DomainError("piecewise inverse is defined on [0, v_M]");
  }
  if (y_mw == 0.0) return supports_.front();
  const auto it = std::lower_bound(images_.begin(), images_.end(), y_mw);
  const auto m = static_cast<std::size_t>(it - images_.begin());
  if (*it == y_mw) return supports_[m];
  return supports_[m - 1] + (y_mw - images_[m - 1]) / slopes_[m - 1];
}

PiecewiseLinearHarvester build_piecewise(const HarvesterCurve& curve) {
  std::vector<double> b;
  std::vector<double> v;
  b.reserve(curve.size());
  v.reserve(curve.size());
  for (const auto& p : curve.points()) {
    b.push_back(p.input_mw);
    v.push_back(p.output_mw);
  }
  return PiecewiseLinearHarvester::from_nodes(std::move(b), std::move(v));
}

PiecewiseLinearHarvester build_piecewise(const GroundTruthHarvester& truth, std::size_t segments,
                                         SupportSpacing spacing) {
  if (segments < 1) throw ValidationError("need at least one segment");
  const double lo = truth.sensitivity_mw();
  const double hi = truth.saturation_mw();
  std::vector<double> b(segments + 1);
  const double n = static_cast<double>(segments);
  for (std::size_t m = 0; m <= segments; ++m) {
    const double f = static_cast<double>(m) / n;
    if (spacing == SupportSpacing::kUniformLinear) {
      b[m] = lo + f * (hi - lo);
    } else {
      b[m] = dbm_to_mw(mw_to_dbm(lo) + f * (mw_to_dbm(hi) - mw_to_dbm(lo)));
    }
  }
  b.front() = lo;
  b.back() = hi;
  std::vector<double> v(segments + 1);
  for (std::size_t m = 0; m <= segments; ++m) v[m] = truth.power(b[m]);
  return PiecewiseLinearHarvester::from_nodes(std::move(b), std::move(v));
}

void LinearBaseline::validate() const { check_eta(eta); }

double LinearBaseline::power(double x_mw) const {
  check_input(x_mw);
  return eta * x_mw;
}

double LinearBaseline::inverse(double y_mw) const {
  if (!(eta > 0.0) || !(y_mw >= 0.0)) throw DomainError("L inverse needs eta > 0 and y >= 0");
  return y_mw / eta;
}

void ConstantLinearBaseline::validate() const {
  check_eta(eta);
  if (!(sensitivity_mw > 0.0)) throw ValidationError("CL model needs a positive sensitivity");
}

double ConstantLinearBaseline::power(double x_mw) const {
  check_input(x_mw);
  return x_mw <= sensitivity_mw ? 0.0 : eta * (x_mw - sensitivity_mw);
}

double ConstantLinearBaseline::inverse(double y_mw) const {
  if (!(eta > 0.0) || !(y_mw >= 0.0)) throw DomainError("CL inverse needs eta > 0 and y >= 0");
  return sensitivity_mw + y_mw / eta;
}

void ConstantLinearConstantBaseline::validate() const {
  check_eta(eta);
  if (!(sensitivity_mw > 0.0 && sensitivity_mw < saturation_mw)) {
    throw ValidationError("CLC model needs 0 < sensitivity < saturation");
  }
}

double ConstantLinearConstantBaseline::power(double x_mw) const {
  check_input(x_mw);
  if (x_mw <= sensitivity_mw) return 0.0;
  return eta * (std::min(x_mw, saturation_mw) - sensitivity_mw);
}

double ConstantLinearConstantBaseline::inverse(double y_mw) const {
  if (!(eta > 0.0) || !(y_mw >= 0.0 && y_mw < plateau_mw())) {
    throw DomainError("CLC inverse is defined on [0, plateau)");
  }
  return sensitivity_mw + y_mw / eta;
}

double SigmoidBaseline::power(double x_mw) const {
  check_input(x_mw);
  const double a = steepness_per_mw;
  const double omega = 1.0 / (1.0 + std::exp(a * center_mw));
  const double psi = saturation_mw / (1.0 + std::exp(-a * (x_mw - center_mw)));
  return (psi - saturation_mw * omega) / (1.0 - omega);
}

double harvested_power(const HarvesterModel& model, double x_mw) {
  return std::visit([x_mw](const auto& h) { return h.power(x_mw); }, model);
}

std::vector<double> breakpoints(const HarvesterModel& model) {
  return std::visit(
      Overloaded{
          [](const GroundTruthHarvester& h) {
            return std::vector<double>{h.sensitivity_mw(), h.saturation_mw()};
          },
          [](const PiecewiseLinearHarvester& h) {
            return std::vector<double>(h.supports().begin(), h.supports().end());
          },
          [](const ConstantLinearBaseline& h) { return std::vector<double>{h.sensitivity_mw}; },
          [](const ConstantLinearConstantBaseline& h) {
            return std::vector<double>{h.sensitivity_mw, h.saturation_mw};
          },
          [](const auto&) { return std::vector<double>{}; },
      },
      model);
}

double input_for_output(const HarvesterModel& model, double y_mw) {
  if (!(y_mw >= 0.0)) throw DomainError("output power must be non-negative");
  constexpr double kUnbounded = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [&](const PiecewiseLinearHarvester& h) {
            return y_mw >= h.plateau_mw() ? kUnbounded : h.inverse(y_mw);
          },
          [&](const LinearBaseline& h) { return h.eta > 0.0 ? h.inverse(y_mw) : kUnbounded; },
          [&](const ConstantLinearBaseline& h) {
            return h.eta > 0.0 ? h.inverse(y_mw) : kUnbounded;
          },
          [&](const ConstantLinearConstantBaseline& h) {
            return y_mw >= h.plateau_mw() ? kUnbounded : h.inverse(y_mw);
          },
          [&](const GroundTruthHarvester& h) {
            if (y_mw >= h.plateau_mw()) return kUnbounded;
            double lo = h.sensitivity_mw();
            double hi = h.saturation_mw();
            while (hi - lo > 1e-15 * hi) {
              const double mid = 0.5 * (lo + hi);
              if (mid <= lo || mid >= hi) break;
              (h.power(mid) <= y_mw ? lo : hi) = mid;
            }
            return lo;
          },
          [&](const SigmoidBaseline& h) {
            if (y_mw >= h.saturation_mw) return kUnbounded;
            const double a = h.steepness_per_mw;
            const double omega = 1.0 / (1.0 + std::exp(a * h.center_mw));
            const double psi = y_mw * (1.0 - omega) + h.saturation_mw * omega;
            return h.center_mw - std::log(h.saturation_mw / psi - 1.0) / a;
          },
          [&](const QuadraticBaseline&) -> double {
            throw DomainError("the quadratic baseline has no monotone inverse");
          },
      },
      model);
}

std::string_view model_name(const HarvesterModel& model) {
  return std::visit(
      Overloaded{
          [](const GroundTruthHarvester&) { return std::string_view("ground-truth"); },
          [](const PiecewiseLinearHarvester&) { return std::string_view("piecewise"); },
          [](const LinearBaseline&) { return std::string_view("linear"); },
          [](const ConstantLinearBaseline&) { return std::string_view("constant-linear"); },
          [](const ConstantLinearConstantBaseline&) {
            return std::string_view("constant-linear-constant");
          },
          [](const SigmoidBaseline&) { return std::string_view("sigmoid"); },
          [](const QuadraticBaseline&) { return std::string_view("quadratic"); },
      },
      model);
}

ApproximationError approximation_error(const GroundTruthHarvester& truth,
                                       const PiecewiseLinearHarvester& approx) {
  const auto b = approx.supports();
  const auto diff = [&](double x) { return std::abs(truth.power(x) - approx.power(x)); };

  double integral = 0.0;
  for (std::size_t m = 1; m < b.size(); ++m) {
    // |p - p~| is a small difference of nearly equal values; asking for more
    // relative accuracy than this only chases rounding noise.
    integral += detail::integrate_piece<15>(diff, b[m - 1], b[m], 10, 1e-7);
  }

  const double lo = truth.sensitivity_mw();
  const double hi = truth.saturation_mw();
  const double h = (hi - lo) / static_cast<double>(kCurvatureGrid - 1);
  double curvature = 0.0;
  for (std::size_t i = 1; i + 1 < kCurvatureGrid; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double d2 = (truth.power(x + h) - 2.0 * truth.power(x) + truth.power(x - h)) / (h * h);
    curvature = std::max(curvature, std::abs(d2));
  }
  const double span = hi - lo;
  const double m = static_cast<double>(approx.segments());
  return {integral, curvature * span * span * span / (8.0 * m * m), curvature};
}

}  // namespace rfeh
