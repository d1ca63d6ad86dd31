#pragma once

#include <vector>

#include "rfeh/channel.hpp"
#include "rfeh/harvester.hpp"

namespace rfeh {

/// Law of the harvested power p~(P_R) for a piecewise-linear harvester: an
/// atom xi_0 at zero, an atom 1 - xi_M at the plateau v_M, and a continuous
/// part on each image interval (v_{m-1}, v_m), where xi_m = F_{P_R}(b_m).
class HarvestedPowerDistribution {
 public:
  HarvestedPowerDistribution(PiecewiseLinearHarvester harvester, const LinkBudget& link,
                             const FadingChannel& channel);

  struct PdfValue {
    double density;  ///< continuous part, 1/mW
    double atom;     ///< point mass located exactly at x
  };

  PdfValue pdf(double x_mw) const;
  /// Right-continuous CDF.
  double cdf(double x_mw) const;

  /// xi_0 ... xi_M.
  const std::vector<double>& xi() const { return xi_; }
  double atom_at_zero() const { return xi_.front(); }
  /// 1 - xi_M, from the complementary CDF.
  double atom_at_plateau() const { return plateau_atom_; }
  /// Probability of the open image interval (v_{m-1}, v_m), m = 1..M.
  double segment_mass(std::size_t m) const { return xi_[m] - xi_[m - 1]; }

  const PiecewiseLinearHarvester& harvester() const { return harvester_; }
  const LinkBudget& link() const { return link_; }
  const FadingChannel& channel() const { return channel_; }

 private:
  PiecewiseLinearHarvester harvester_;
  LinkBudget link_;
  FadingChannel channel_;
  std::vector<double> xi_;
  double plateau_atom_;
};

inline HarvestedPowerDistribution::PdfValue harvested_pdf(const HarvestedPowerDistribution& d,
                                                          double x_mw) {
  return d.pdf(x_mw);
}
inline double harvested_cdf(const HarvestedPowerDistribution& d, double x_mw) {
  return d.cdf(x_mw);
}

/// P(p(P_R) <= y) for any nondecreasing model; see input_for_output.
double harvested_power_cdf(const HarvesterModel& model, const LinkBudget& link,
                           const FadingChannel& ch, double y_mw);

/// P(P_R <= sensitivity): fraction of blocks that harvest nothing.
double sensitivity_outage(const LinkBudget& link, const FadingChannel& ch, double sensitivity_mw);

double expected_power_linear(const LinkBudget& link, const FadingChannel& ch,
                             const LinearBaseline& model);
double expected_power_cl(const LinkBudget& link, const FadingChannel& ch,
                         const ConstantLinearBaseline& model);
double expected_power_clc(const LinkBudget& link, const FadingChannel& ch,
                          const ConstantLinearConstantBaseline& model);
/// Closed form as a sum of regularized incomplete-gamma differences over the
/// segments plus the plateau tail term.
double expected_power_piecewise(const LinkBudget& link, const FadingChannel& ch,
                                const PiecewiseLinearHarvester& model);

/// Closed form when the model has one, quadrature otherwise.
double expected_power(const LinkBudget& link, const FadingChannel& ch,
                      const HarvesterModel& model);

/// Energy in mJ harvested over `blocks` coherence periods of `period_s`.
double expected_energy_mj(double expected_power_mw, double blocks, double period_s);

struct QuadratureOptions {
  double relative_tolerance = 1e-8;
  /// The integral is truncated where F_{P_R} reaches 1 - tail_mass.
  double tail_mass = 1e-12;
  unsigned max_depth = 20;
};

/// Adaptive Gauss-Kronrod evaluation of the integral of g(p(x)) f_{P_R}(x),
/// split at the model's breakpoints. Throws ConvergenceError if the error
/// estimate misses the tolerance.
double expected_power_numeric(const LinkBudget& link, const FadingChannel& ch,
                              const HarvesterModel& model, const QuadratureOptions& options = {});

struct Moments {
  double mean;
  double variance;
};

/// Mean and variance of p~(P_R) in closed form.
Moments harvested_power_moments(const LinkBudget& link, const FadingChannel& ch,
                                const PiecewiseLinearHarvester& model);

/// Mean and variance of p(P_R) by quadrature, for any model.
Moments harvested_power_moments_numeric(const LinkBudget& link, const FadingChannel& ch,
                                        const HarvesterModel& model,
                                        const QuadratureOptions& options = {});

}  // namespace rfeh
