#include "rfeh/rfid.hpp"

#include <cmath>
#include <limits>

#include "rfeh/error.hpp"
#include "rfeh/montecarlo.hpp"
#include "rfeh/special_functions.hpp"

namespace rfeh {

double RfidScenario::noise_sd() const { return std::sqrt(noise_var_mw); }

void RfidScenario::validate() const {
  if (!(absorb_fraction > 0.0 && absorb_fraction < 1.0)) {
    throw ValidationError("absorb fraction must lie in (0, 1)");
  }
  if (!(harvest_split > 0.0 && harvest_split < 1.0)) {
    throw ValidationError("harvest split must lie in (0, 1)");
  }
  if (!(backscatter_share > 0.0 && backscatter_share <= 1.0 - absorb_fraction)) {
    throw ValidationError("backscatter share must lie in (0, 1 - absorb fraction]");
  }
  if (!(noise_var_mw > 0.0)) throw ValidationError("noise variance must be positive");
  if (!(ber_threshold > 0.0 && ber_threshold < 0.5)) {
    throw ValidationError("BER threshold must lie in (0, 1/2)");
  }
  if (!(tag_consumption_mw > 0.0)) throw ValidationError("tag consumption must be positive");
}

double interrogator_power(const RfidScenario& scn, const LinkBudget& link, double p_r_mw) {
  if (!(p_r_mw >= 0.0)) throw DomainError("received power must be non-negative");
  link.validate();
  return scn.backscatter_share * p_r_mw * p_r_mw / link.transmit_power_mw;
}

double ber(const RfidScenario& scn, double p_int_mw) {
  if (!(p_int_mw >= 0.0)) throw DomainError("interrogator power must be non-negative");
  if (p_int_mw == 0.0) return 0.5;
  return r_function(std::sqrt(p_int_mw) / scn.noise_sd());
}

double ber_power_threshold(const RfidScenario& scn, const LinkBudget& link) {
  scn.validate();
  link.validate();
  return std::sqrt(link.transmit_power_mw) * r_inverse(scn.ber_threshold) * scn.noise_sd() /
         std::sqrt(scn.backscatter_share);
}

double success_input_threshold(const RfidScenario& scn, const LinkBudget& link,
                               const HarvesterModel& model) {
  const double theta_a = ber_power_threshold(scn, link);
  const double x_c = input_for_output(model, scn.tag_consumption_mw);
  if (std::isinf(x_c)) return std::numeric_limits<double>::infinity();
  return std::max(theta_a, x_c / scn.harvest_share());
}

double success_probability(const RfidScenario& scn, const LinkBudget& link,
                           const FadingChannel& ch, const HarvesterModel& model) {
  const double theta = success_input_threshold(scn, link, model);
  if (std::isinf(theta)) return 0.0;
  return received_power_ccdf(link, ch, theta);
}

double success_probability_mc(const RfidScenario& scn, const LinkBudget& link,
                              const FadingChannel& ch, const HarvesterModel& model,
                              std::uint64_t n, std::uint64_t seed) {
  SimulationPlan plan{n, 1, seed, model, link, ch};
  return simulate_rfid(plan, scn).frequency();
}

}  // namespace rfeh
