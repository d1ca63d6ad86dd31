#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfeh/channel.hpp"
#include "rfeh/density_evolution.hpp"
#include "rfeh/harvester.hpp"
#include "rfeh/rfid.hpp"

namespace rfeh::app {

inline constexpr int kSchemaVersion = 1;

struct HarvesterConfig {
  /// Bundled dataset name or a path to a curve CSV.
  std::string dataset = "rectenna-A";
  int degree = 10;
  std::size_t segments = 585;
  /// "db", "linear" or "data" (breakpoints at the measured points).
  std::string spacing = "db";
  std::optional<double> eta_linear;
  std::optional<double> eta_constant_linear;
  std::optional<double> eta_clc;
  /// Outage threshold; defaults to the dataset's sensitivity.
  std::optional<double> sensitivity_dbm;
};

struct NumericsConfig {
  std::size_t intervals = 1u << 14;
  std::size_t fft_size = 0;  ///< zero: next power of two above 2H + 1
  double quadrature_tolerance = 1e-8;
  std::uint64_t mc_trials = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

enum class SweepScale { kLinear, kLog };

struct Sweep {
  std::string variable;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;
  SweepScale scale = SweepScale::kLinear;

  std::vector<double> values() const;
};

struct ScenarioConfig {
  LinkBudget link;
  FadingChannel channel;
  HarvesterConfig harvester;
  ChargingSpec charging;
  RfidScenario rfid;
  NumericsConfig numerics;
  std::vector<Sweep> sweeps;

  void validate() const;
};

/// Variables a sweep may drive.
const std::vector<std::string>& sweep_variables();

/// Applies a named sweep variable to a copy of the config.
void apply_variable(ScenarioConfig& cfg, const std::string& variable, double value);

/// Cartesian product of all sweeps, first sweep outermost. One empty point
/// when there are no sweeps.
std::vector<std::map<std::string, double>> sweep_points(const ScenarioConfig& cfg);

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace rfeh::app
