#include "rfeh/analytic_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>


#include "rfeh/error.hpp"
#include "rfeh/special_functions.hpp"
#include "quadrature.hpp"

namespace rfeh {
namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct GammaTerms {
  double m;
  double mean;  // P(d) * omega

  double z(double b) const { return m * b / mean; }
  // Integral of x^k f_{P_R}(x) over [lo, hi], k = 0, 1, 2.
  double partial_moment(int k, double lo, double hi) const {
    const double dq = regularized_gamma_q_difference(m + k, z(lo), z(hi));
    switch (k) {
      case 0:
        return dq;
      case 1:
        return mean * dq;
      default:
        return mean * mean * (m + 1.0) / m * dq;
    }
  }
  double tail(double b) const { return regularized_gamma_q(m, z(b)); }
};

GammaTerms gamma_terms(const LinkBudget& link, const FadingChannel& ch) {
  return {ch.nakagami_m, mean_received_power_mw(link, ch)};
}

template <class F>
double integrate_against_density(const LinkBudget& link, const FadingChannel& ch,
                                 const HarvesterModel& model, const QuadratureOptions& options,
                                 F&& g) {
  const double upper = received_power_quantile(link, ch, 1.0 - options.tail_mass);
  std::vector<double> cuts{0.0};
  for (double b : breakpoints(model)) {
    if (b > 0.0 && b < upper) cuts.push_back(b);
  }
  cuts.push_back(upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto integrand = [&](double x) {
    return g(harvested_power(model, x)) * received_power_pdf(link, ch, x);
  };
  CompensatedSum total;
  double error = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    double err = 0.0;
    double piece_l1 = 0.0;
    total.add(detail::integrate_piece<15>(integrand, cuts[i - 1], cuts[i], options.max_depth,
                                          0.01 * options.relative_tolerance, &err, &piece_l1));
    error += err;
    l1 += piece_l1;
  }
  if (!(error <= options.relative_tolerance * l1) && error > 1e-300) {
    throw ConvergenceError("quadrature error estimate " + std::to_string(error) +
                           " exceeds tolerance");
  }
  return total.value();
}

}  // namespace

HarvestedPowerDistribution::HarvestedPowerDistribution(PiecewiseLinearHarvester harvester,
                                                       const LinkBudget& link,
                                                       const FadingChannel& channel)
    : harvester_(std::move(harvester)), link_(link), channel_(channel) {
  link_.validate();
  channel_.validate();
  for (double b : harvester_.supports()) xi_.push_back(received_power_cdf(link_, channel_, b));
  plateau_atom_ = received_power_ccdf(link_, channel_, harvester_.saturation_mw());
}

HarvestedPowerDistribution::PdfValue HarvestedPowerDistribution::pdf(double x_mw) const {
  const auto v = harvester_.images();
  PdfValue out{0.0, 0.0};
  if (x_mw == 0.0) out.atom = xi_.front();
  if (x_mw == v.back()) out.atom = plateau_atom_;
  if (x_mw < 0.0 || x_mw >= v.back()) return out;
  const auto m = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x_mw) - v.begin());
  const double l = harvester_.slopes()[m - 1];
  const double x = harvester_.supports()[m - 1] + (x_mw - v[m - 1]) / l;
  out.density = received_power_pdf(link_, channel_, x) / l;
  return out;
}

double HarvestedPowerDistribution::cdf(double x_mw) const {
  const auto v = harvester_.images();
  if (x_mw < 0.0) return 0.0;
  if (x_mw >= v.back()) return 1.0;
  const auto m = static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x_mw) - v.begin());
  if (x_mw == v[m - 1]) return xi_[m - 1];
  const double l = harvester_.slopes()[m - 1];
  return received_power_cdf(link_, channel_, harvester_.supports()[m - 1] + (x_mw - v[m - 1]) / l);
}

double harvested_power_cdf(const HarvesterModel& model, const LinkBudget& link,
                           const FadingChannel& ch, double y_mw) {
  if (y_mw < 0.0) return 0.0;
  const double x = input_for_output(model, y_mw);
  if (std::isinf(x)) return 1.0;
  return received_power_cdf(link, ch, std::max(x, 0.0));
}

double sensitivity_outage(const LinkBudget& link, const FadingChannel& ch, double sensitivity_mw) {
  if (!(sensitivity_mw > 0.0)) throw DomainError("sensitivity must be positive");
  return received_power_cdf(link, ch, sensitivity_mw);
}

double expected_power_linear(const LinkBudget& link, const FadingChannel& ch,
                             const LinearBaseline& model) {
  model.validate();
  return model.eta * mean_received_power_mw(link, ch);
}

double expected_power_cl(const LinkBudget& link, const FadingChannel& ch,
                         const ConstantLinearBaseline& model) {
  model.validate();
  const GammaTerms g = gamma_terms(link, ch);
  const double zs = g.z(model.sensitivity_mw);
  return model.eta * (g.mean * regularized_gamma_q(g.m + 1.0, zs) -
                      model.sensitivity_mw * regularized_gamma_q(g.m, zs));
}

double expected_power_clc(const LinkBudget& link, const FadingChannel& ch,
                          const ConstantLinearConstantBaseline& model) {
  model.validate();
  const GammaTerms g = gamma_terms(link, ch);
  const double s = model.sensitivity_mw;
  const double t = model.saturation_mw;
  // Integral of (x - s) f over (s, t] plus (t - s) times the tail above t.
  const double body = g.partial_moment(1, s, t) - s * g.partial_moment(0, s, t);
  return model.eta * (body + (t - s) * g.tail(t));
}

double expected_power_piecewise(const LinkBudget& link, const FadingChannel& ch,
                                const PiecewiseLinearHarvester& model) {
  const GammaTerms g = gamma_terms(link, ch);
  const auto b = model.supports();
  const auto v = model.images();
  const auto l = model.slopes();
  CompensatedSum sum;
  for (std::size_t j = 1; j < b.size(); ++j) {
    const double s0 = g.partial_moment(0, b[j - 1], b[j]);
    const double s1 = g.partial_moment(1, b[j - 1], b[j]);
    sum.add(l[j - 1] * (s1 - b[j - 1] * s0));
    sum.add(v[j - 1] * s0);
  }
  sum.add(v.back() * g.tail(b.back()));
  return sum.value();
}

double expected_power(const LinkBudget& link, const FadingChannel& ch,
                      const HarvesterModel& model) {
  if (const auto* p = std::get_if<PiecewiseLinearHarvester>(&model)) {
    return expected_power_piecewise(link, ch, *p);
  }
  if (const auto* p = std::get_if<LinearBaseline>(&model)) return expected_power_linear(link, ch, *p);
  if (const auto* p = std::get_if<ConstantLinearBaseline>(&model)) {
    return expected_power_cl(link, ch, *p);
  }
  if (const auto* p = std::get_if<ConstantLinearConstantBaseline>(&model)) {
    return expected_power_clc(link, ch, *p);
  }
  return expected_power_numeric(link, ch, model);
}

double expected_energy_mj(double expected_power_mw, double blocks, double period_s) {
  return expected_power_mw * blocks * period_s;
}

double expected_power_numeric(const LinkBudget& link, const FadingChannel& ch,
                              const HarvesterModel& model, const QuadratureOptions& options) {
  return integrate_against_density(link, ch, model, options, [](double p) { return p; });
}

Moments harvested_power_moments(const LinkBudget& link, const FadingChannel& ch,
                                const PiecewiseLinearHarvester& model) {
  const GammaTerms g = gamma_terms(link, ch);
  const auto b = model.supports();
  const auto v = model.images();
  const auto l = model.slopes();
  CompensatedSum first;
  CompensatedSum second;
  for (std::size_t j = 1; j < b.size(); ++j) {
    const double s0 = g.partial_moment(0, b[j - 1], b[j]);
    const double s1 = g.partial_moment(1, b[j - 1], b[j]);
    const double s2 = g.partial_moment(2, b[j - 1], b[j]);
    // p = l x + c on the segment.
    const double lj = l[j - 1];
    const double c = v[j - 1] - lj * b[j - 1];
    first.add(lj * (s1 - b[j - 1] * s0));
    first.add(v[j - 1] * s0);
    second.add(lj * lj * s2 + 2.0 * lj * c * s1 + c * c * s0);
  }
  const double tail = g.tail(b.back());
  first.add(v.back() * tail);
  second.add(v.back() * v.back() * tail);
  const double mean = first.value();
  return {mean, std::max(second.value() - mean * mean, 0.0)};
}

Moments harvested_power_moments_numeric(const LinkBudget& link, const FadingChannel& ch,
                                        const HarvesterModel& model,
                                        const QuadratureOptions& options) {
  const double mean = integrate_against_density(link, ch, model, options, [](double p) { return p; });
  const double second =
      integrate_against_density(link, ch, model, options, [](double p) { return p * p; });
  return {mean, std::max(second - mean * mean, 0.0)};
}

}  // namespace rfeh
