#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "rfeh/error.hpp"
#include "table.hpp"

namespace {

using namespace rfeh;
using namespace rfeh::app;

TEST(Config, DefaultsMatchStatedParameters) {
  const ScenarioConfig c = config_from_json({{"schema_version", 1}});
  EXPECT_EQ(c.link.path_loss_exponent, 2.1);
  EXPECT_EQ(c.link.wavelength_m, 0.3456);
  EXPECT_EQ(c.channel.nakagami_m, 5.0);
  EXPECT_EQ(c.charging.voltage_v, 1.8);
  EXPECT_EQ(c.charging.capacitance_f, 10e-6);
  EXPECT_EQ(c.charging.packet_duration_s, 50e-3);
  EXPECT_EQ(c.rfid.ber_threshold, 1e-5);
}

TEST(Config, RoundTripIsStable) {
  const auto j = nlohmann::json::parse(R"({
    "schema_version": 1,
    "link": {"distance_m": 7.5},
    "harvester": {"dataset": "module-B", "degree": 12, "eta_clc": 0.4},
    "sweeps": [{"variable": "transmit_power_dbm", "start": 20, "stop": 35, "count": 4}]
  })");
  const auto once = config_to_json(config_from_json(j));
  const auto twice = config_to_json(config_from_json(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once.at("harvester").at("eta_clc"), 0.4);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(config_from_json({{"schema_version", 1}, {"extra", 1}}), ValidationError);
  EXPECT_THROW(config_from_json({{"schema_version", 2}}), ValidationError);
  EXPECT_THROW(config_from_json({{"schema_version", 1}, {"link", {{"distance_m", "far"}}}}),
               ValidationError);
  EXPECT_THROW(config_from_json({{"schema_version", 1}, {"numerics", {{"fft_size", 1000}}}}),
               ValidationError);
}

TEST(Sweep, LinearAndLogEndpointsExact) {
  const Sweep lin{"distance_m", 2.0, 10.0, 5, SweepScale::kLinear};
  EXPECT_EQ(lin.values(), (std::vector<double>{2.0, 4.0, 6.0, 8.0, 10.0}));
  const Sweep lg{"tag_consumption_mw", 1e-4, 1e-2, 3, SweepScale::kLog};
  const auto v = lg.values();
  EXPECT_EQ(v.front(), 1e-4);
  EXPECT_NEAR(v[1], 1e-3, 1e-15);
  EXPECT_EQ(v.back(), 1e-2);
}

TEST(Sweep, CartesianProductOrder) {
  ScenarioConfig c;
  c.sweeps = {Sweep{"distance_m", 2.0, 3.0, 2, SweepScale::kLinear},
              Sweep{"transmit_power_dbm", 20.0, 30.0, 3, SweepScale::kLinear}};
  const auto pts = sweep_points(c);
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[0].at("distance_m"), 2.0);
  EXPECT_EQ(pts[2].at("transmit_power_dbm"), 30.0);
  EXPECT_EQ(pts[3].at("distance_m"), 3.0);
}

TEST(Table, CsvUsesTwelveDigits) {
  Table t{{"a", "b"}, {}};
  t.add_row({1.0 / 3.0, std::string("x,y")});
  t.add_row({-0.0, 1e-300});
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "a,b\n0.333333333333,\"x,y\"\n0,1e-300\n");
  EXPECT_THROW(t.add_row({1.0}), Error);
}

TEST(Commands, DegenerateOutageSweepGivesOneRow) {
  ScenarioConfig c;
  c.harvester.dataset = "module-B";
  c.sweeps = {Sweep{"distance_m", 4.0, 4.0, 1, SweepScale::kLinear}};
  const auto t = cmd_outage(c);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"sensitivity_dBm", "d_m", "P_T_dBm",
                                                 "outage_probability"}));
}

TEST(Commands, EnergyPiecewiseColumnIsClosedFormTimesDuration) {
  ScenarioConfig c;
  c.numerics.mc_trials = 1000;
  const auto t = cmd_energy(c);
  ASSERT_EQ(t.rows.size(), 1u);
  const double piecewise = std::get<double>(t.rows[0][5]);
  const double quadrature = std::get<double>(t.rows[0][6]);
  EXPECT_NEAR(piecewise / quadrature, 1.0, 1e-7);
}

TEST(Commands, QuadraticEnergyTurnsNegativeFarAway) {
  ScenarioConfig c;
  c.harvester.dataset = "module-B";
  c.harvester.degree = 12;
  c.numerics.mc_trials = 1000;
  c.sweeps = {Sweep{"distance_m", 15.0, 15.0, 1, SweepScale::kLinear}};
  const auto t = cmd_energy(c);
  EXPECT_LT(std::get<double>(t.rows[0][11]), 0.0);
}

TEST(Commands, ChargingGrowsWithCapacitance) {
  ScenarioConfig c;
  c.numerics.mc_trials = 2000;
  c.numerics.intervals = 4096;
  c.sweeps = {Sweep{"capacitance_uf", 1.0, 20.0, 2, SweepScale::kLinear}};
  const auto t = cmd_charging(c);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_GE(std::get<double>(t.rows[1][4]), std::get<double>(t.rows[0][4]));
}

TEST(Commands, TinyCapacitorChargesInOneBlock) {
  ScenarioConfig c;
  c.numerics.mc_trials = 2000;
  c.numerics.intervals = 1024;
  c.charging.capacitance_f = 1e-12;
  c.link.distance_m = 3.0;
  const auto t = cmd_charging(c);
  EXPECT_NEAR(std::get<double>(t.rows[0][4]), 1.0, 1e-6);
  EXPECT_EQ(std::get<double>(t.rows[0][5]), 1.0);
}

TEST(Commands, RfidZeroAbovePlateauAndNonincreasing) {
  ScenarioConfig c;
  c.numerics.mc_trials = 2000;
  const auto models = build_models(c.harvester);
  c.sweeps = {Sweep{"tag_consumption_mw", 1e-5, 2.0 * models.piecewise.plateau_mw(), 6,
                    SweepScale::kLog}};
  const auto t = cmd_rfid(c);
  const std::size_t piecewise_closed = 3 + 3;
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    EXPECT_LE(std::get<double>(t.rows[r][piecewise_closed]),
              std::get<double>(t.rows[r - 1][piecewise_closed]));
  }
  EXPECT_EQ(std::get<double>(t.rows.back()[piecewise_closed]), 0.0);
}

}  // namespace
