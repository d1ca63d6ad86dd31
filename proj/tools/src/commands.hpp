#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "rfeh/fitting.hpp"
#include "table.hpp"

namespace rfeh::app {

/// Every harvester model the commands compare, built from one dataset.
struct ModelSet {
  HarvesterCurve curve;
  EfficiencyPolynomial efficiency;
  GroundTruthHarvester truth;
  PiecewiseLinearHarvester piecewise;
  LinearBaseline linear;
  ConstantLinearBaseline constant_linear;
  ConstantLinearConstantBaseline clc;
  SigmoidBaseline sigmoid;
  QuadraticBaseline quadratic;
};

HarvesterCurve load_dataset(const std::string& name_or_path);
ModelSet build_models(const HarvesterConfig& cfg);

struct ChargingAnalysis {
  double threshold_mw;
  double expected_blocks;
  double truncation_bound;
  double residual;
};

/// E[N*] by density evolution on [0, theta].
ChargingAnalysis analytic_charging(const PiecewiseLinearHarvester& h, const LinkBudget& link,
                                   const FadingChannel& ch, const ChargingSpec& spec,
                                   std::size_t intervals, std::size_t fft_size = 0);

/// Seed for row `row` of a sweep, so rows draw independent streams.
std::uint64_t row_seed(std::uint64_t seed, std::size_t row);

Table cmd_fit(const ScenarioConfig& cfg);
Table cmd_outage(const ScenarioConfig& cfg);
Table cmd_energy(const ScenarioConfig& cfg);
Table cmd_charging(const ScenarioConfig& cfg);
/// Discretized densities of U_N for each N, one column per N.
Table cmd_charging_density(const ScenarioConfig& cfg, const std::vector<std::size_t>& blocks);
Table cmd_rfid(const ScenarioConfig& cfg);
std::string cmd_export_dataset(const std::string& name);

}  // namespace rfeh::app
