#pragma once

#include <cstdint>
#include <vector>

#include "rfeh/channel.hpp"
#include "rfeh/harvester.hpp"
#include "rfeh/rfid.hpp"

namespace rfeh {

/// Block-fading simulation. Trial t draws its blocks in order from
/// make_stream(seed, t), so results do not depend on the thread count.
struct SimulationPlan {
  std::uint64_t trials = 1;
  std::uint64_t blocks_per_trial = 1;
  std::uint64_t seed = 0;
  HarvesterModel model = LinearBaseline{0.0};
  LinkBudget link;
  FadingChannel channel;
  double packet_duration_s = 50e-3;
  /// Worker threads; zero picks the hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct Estimate {
  double mean;
  double standard_error;
};

/// Energy per trial, T_p times the sum of per-block harvests, in mJ.
Estimate simulate_energy(const SimulationPlan& plan);

/// counts[i] holds samples in [edges[i], edges[i + 1]); samples outside
/// [edges.front(), edges.back()) go to underflow / overflow, so
/// sum(counts) + underflow + overflow = total.
struct HistogramResult {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;
  std::uint64_t total = 0;
};

/// Histogram of U_N, the sum of per-block harvested power over
/// blocks_per_trial blocks.
HistogramResult simulate_u_n(const SimulationPlan& plan, std::vector<double> edges);

struct FirstPassageSamples {
  /// N* per trial. A censored trial stores blocks_per_trial, a lower bound.
  std::vector<std::uint32_t> blocks;
  std::uint64_t censored = 0;

  double mean() const;
};

/// First block index at which the accumulated harvest exceeds theta.
FirstPassageSamples simulate_first_passage(const SimulationPlan& plan, double theta_mw);

/// Event counts for one block per trial: A = {BER < beta},
/// B = {p(zeta P_R) > P_c}.
struct RfidCounts {
  std::uint64_t trials = 0;
  std::uint64_t ber_ok = 0;
  std::uint64_t energy_ok = 0;
  std::uint64_t both = 0;

  double frequency() const;
  double standard_error() const;
};

RfidCounts simulate_rfid(const SimulationPlan& plan, const RfidScenario& scn);

}  // namespace rfeh
