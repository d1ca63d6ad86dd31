#pragma once

#include <cstdint>

#include "rfeh/channel.hpp"
#include "rfeh/harvester.hpp"

namespace rfeh {

/// Power-splitting passive tag. A fraction tau_d of the incident power is
/// absorbed, of which chi goes to the harvester (zeta = chi tau_d); a
/// fraction rho_u <= 1 - tau_d is backscattered to the interrogator.
struct RfidScenario {
  double absorb_fraction = 0.5;
  double harvest_split = 0.5;
  double backscatter_share = 0.01;
  double noise_var_mw = 1e-11;
  double ber_threshold = 1e-5;
  double tag_consumption_mw = 1e-3;

  double harvest_share() const { return harvest_split * absorb_fraction; }
  double noise_sd() const;
  void validate() const;
};

/// Power at the interrogator after the round trip: rho_u P_R^2 / P_T.
double interrogator_power(const RfidScenario& scn, const LinkBudget& link, double p_r_mw);

/// BER at the interrogator, R(sqrt(p_int) / sigma_u); 1/2 at zero power.
double ber(const RfidScenario& scn, double p_int_mw);

/// Smallest P_R for which the BER stays below the threshold:
/// sqrt(P_T) R^-1(beta) sigma_u / sqrt(rho_u).
double ber_power_threshold(const RfidScenario& scn, const LinkBudget& link);

/// max(theta_A, p^-1(P_c) / zeta); +inf when P_c is never reached.
double success_input_threshold(const RfidScenario& scn, const LinkBudget& link,
                               const HarvesterModel& model);

/// P(P_R > theta_max), zero when the tag consumption is at or above the
/// model's plateau.
double success_probability(const RfidScenario& scn, const LinkBudget& link,
                           const FadingChannel& ch, const HarvesterModel& model);

/// Frequency of {BER < beta} and {p(zeta P_R) > P_c} over n sampled blocks.
double success_probability_mc(const RfidScenario& scn, const LinkBudget& link,
                              const FadingChannel& ch, const HarvesterModel& model,
                              std::uint64_t n, std::uint64_t seed);

}  // namespace rfeh
