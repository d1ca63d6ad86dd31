#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rfeh/analytic_stats.hpp"
#include "rfeh/datasets.hpp"
#include "rfeh/error.hpp"
#include "rfeh/montecarlo.hpp"
#include "rfeh/rfid.hpp"
#include "rfeh/units.hpp"

namespace rfeh::app {
namespace {

constexpr double kZ95 = 1.959963984540054;

SupportSpacing spacing_of(const std::string& s) {
  return s == "linear" ? SupportSpacing::kUniformLinear : SupportSpacing::kUniformDb;
}

template <class T>
T baseline(const HarvesterCurve& curve, BaselineKind kind) {
  return std::get<T>(fit_baseline(curve, kind));
}

// Config with the sweep point applied, revalidated.
ScenarioConfig at_point(const ScenarioConfig& cfg, const std::map<std::string, double>& point) {
  ScenarioConfig c = cfg;
  for (const auto& [k, v] : point) apply_variable(c, k, v);
  c.sweeps.clear();
  c.validate();
  return c;
}

double energy_mj(const ScenarioConfig& c, double power_mw) {
  return expected_energy_mj(power_mw, 1.0, c.charging.packet_duration_s);
}

SimulationPlan plan_for(const ScenarioConfig& c, HarvesterModel model, std::uint64_t seed) {
  SimulationPlan p;
  p.trials = c.numerics.mc_trials;
  p.blocks_per_trial = 1;
  p.seed = seed;
  p.model = std::move(model);
  p.link = c.link;
  p.channel = c.channel;
  p.packet_duration_s = c.charging.packet_duration_s;
  p.threads = c.numerics.threads;
  return p;
}

}  // namespace

HarvesterCurve load_dataset(const std::string& name_or_path) {
  for (const auto& d : bundled_datasets()) {
    if (d.name == name_or_path) return d.curve();
  }
  if (std::filesystem::exists(name_or_path)) return load_curve_csv(name_or_path);
  throw ValidationError("dataset " + name_or_path + " is neither bundled nor a readable file");
}

ModelSet build_models(const HarvesterConfig& cfg) {
  auto curve = load_dataset(cfg.dataset);
  auto eff = fit_efficiency(curve, cfg.degree);
  GroundTruthHarvester truth(eff);
  auto piecewise = cfg.spacing == "data" ? build_piecewise(curve)
                                         : build_piecewise(truth, cfg.segments, spacing_of(cfg.spacing));
  auto linear = baseline<LinearBaseline>(curve, BaselineKind::kLinear);
  auto cl = baseline<ConstantLinearBaseline>(curve, BaselineKind::kConstantLinear);
  auto clc = baseline<ConstantLinearConstantBaseline>(curve, BaselineKind::kConstantLinearConstant);
  if (cfg.eta_linear) linear.eta = *cfg.eta_linear;
  if (cfg.eta_constant_linear) cl.eta = *cfg.eta_constant_linear;
  if (cfg.eta_clc) clc.eta = *cfg.eta_clc;
  auto sigmoid = fit_sigmoid(curve);
  auto quadratic = fit_quadratic(curve);
  return {std::move(curve), eff, std::move(truth), std::move(piecewise), linear, cl, clc, sigmoid,
          quadratic};
}

ChargingAnalysis analytic_charging(const PiecewiseLinearHarvester& h, const LinkBudget& link,
                                   const FadingChannel& ch, const ChargingSpec& spec,
                                   std::size_t intervals, std::size_t fft_size) {
  const double theta = spec.threshold_mw();
  GridSpec grid = charging_grid(theta, intervals);
  if (fft_size != 0) grid.fft_size = fft_size;
  const HarvestedPowerDistribution dist(h, link, ch);
  // Mass above theta only matters through its total, so it is kept off-grid.
  const auto single = discretize_cdf([&](double x) { return dist.cdf(x); }, grid, true);
  const auto fp = first_passage_pmf_until(single, theta);
  const auto est = expected_charging_blocks(fp);
  return {theta, est.blocks, est.truncation_bound, fp.residual};
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t row) {
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(row);
}

Table cmd_fit(const ScenarioConfig& cfg) {
  const auto m = build_models(cfg.harvester);
  Table t{{"quantity", "value"}, {}};
  t.add_row({std::string("degree"), static_cast<double>(m.efficiency.degree())});
  t.add_row({std::string("max_residual"), m.efficiency.max_residual()});
  t.add_row({std::string("sensitivity_dbm"), mw_to_dbm(m.curve.sensitivity_mw())});
  t.add_row({std::string("saturation_dbm"), mw_to_dbm(m.curve.saturation_mw())});
  const auto c = m.efficiency.monomial_coefficients();
  for (std::size_t k = 0; k < c.size(); ++k) {
    t.add_row({"coefficient_dbm_pow_" + std::to_string(k), c[k]});
  }
  t.add_row({std::string("eta_linear"), m.linear.eta});
  t.add_row({std::string("eta_constant_linear"), m.constant_linear.eta});
  t.add_row({std::string("eta_clc"), m.clc.eta});
  t.add_row({std::string("sigmoid_saturation_mw"), m.sigmoid.saturation_mw});
  t.add_row({std::string("sigmoid_steepness_per_mw"), m.sigmoid.steepness_per_mw});
  t.add_row({std::string("sigmoid_center_mw"), m.sigmoid.center_mw});
  t.add_row({std::string("quadratic_c2"), m.quadratic.c2});
  t.add_row({std::string("quadratic_c1"), m.quadratic.c1});
  t.add_row({std::string("quadratic_c0"), m.quadratic.c0});
  return t;
}

Table cmd_outage(const ScenarioConfig& cfg) {
  const auto curve = load_dataset(cfg.harvester.dataset);
  Table t{{"sensitivity_dBm", "d_m", "P_T_dBm", "outage_probability"}, {}};
  for (const auto& point : sweep_points(cfg)) {
    const auto c = at_point(cfg, point);
    const double sen_dbm = c.harvester.sensitivity_dbm.value_or(mw_to_dbm(curve.sensitivity_mw()));
    t.add_row({sen_dbm, c.link.distance_m, mw_to_dbm(c.link.transmit_power_mw),
               sensitivity_outage(c.link, c.channel, dbm_to_mw(sen_dbm))});
  }
  return t;
}

Table cmd_energy(const ScenarioConfig& cfg) {
  const auto m = build_models(cfg.harvester);
  Table t{{"d_m", "P_T_dBm", "ground_truth_mc", "ground_truth_mc_se", "ground_truth_quadrature",
           "piecewise", "piecewise_quadrature", "linear", "constant_linear", "clc", "sigmoid",
           "quadratic"},
          {}};
  QuadratureOptions q;
  q.relative_tolerance = cfg.numerics.quadrature_tolerance;
  const auto points = sweep_points(cfg);
  for (std::size_t row = 0; row < points.size(); ++row) {
    const auto c = at_point(cfg, points[row]);
    const auto mc = simulate_energy(plan_for(c, m.truth, row_seed(c.numerics.seed, row)));
    const auto e = [&](const HarvesterModel& model) {
      return energy_mj(c, expected_power(c.link, c.channel, model));
    };
    t.add_row({c.link.distance_m, mw_to_dbm(c.link.transmit_power_mw), mc.mean, mc.standard_error,
               energy_mj(c, expected_power_numeric(c.link, c.channel, m.truth, q)),
               energy_mj(c, expected_power_piecewise(c.link, c.channel, m.piecewise)),
               energy_mj(c, expected_power_numeric(c.link, c.channel, m.piecewise, q)),
               e(m.linear), e(m.constant_linear), e(m.clc), e(m.sigmoid), e(m.quadratic)});
  }
  return t;
}

Table cmd_charging(const ScenarioConfig& cfg) {
  const auto m = build_models(cfg.harvester);
  Table t{{"d_m", "P_T_dBm", "C_uF", "theta_mW", "expected_blocks_analytic", "expected_blocks_mc",
           "mc_standard_error", "mc_censored", "truncation_residual", "expected_time_s"},
          {}};
  const auto points = sweep_points(cfg);
  for (std::size_t row = 0; row < points.size(); ++row) {
    const auto c = at_point(cfg, points[row]);
    const auto a = analytic_charging(m.piecewise, c.link, c.channel, c.charging,
                                     c.numerics.intervals, c.numerics.fft_size);
    auto plan = plan_for(c, m.piecewise, row_seed(c.numerics.seed, row));
    plan.blocks_per_trial = static_cast<std::uint64_t>(std::ceil(20.0 * a.expected_blocks)) + 100;
    const auto s = simulate_first_passage(plan, a.threshold_mw);
    double s2 = 0.0;
    const double mean = s.mean();
    for (auto n : s.blocks) s2 += (n - mean) * (n - mean);
    const double n = static_cast<double>(s.blocks.size());
    const double se = n > 1 ? std::sqrt(s2 / (n - 1) / n) : 0.0;
    t.add_row({c.link.distance_m, mw_to_dbm(c.link.transmit_power_mw), 1e6 * c.charging.capacitance_f,
               a.threshold_mw, a.expected_blocks, mean, se, static_cast<double>(s.censored), a.residual,
               a.expected_blocks * c.charging.coherence_s()});
  }
  return t;
}

Table cmd_charging_density(const ScenarioConfig& cfg, const std::vector<std::size_t>& blocks) {
  if (blocks.empty()) throw ValidationError("density dump needs at least one block count");
  ScenarioConfig c = cfg;
  c.sweeps.clear();
  const auto m = build_models(c.harvester);
  const HarvestedPowerDistribution dist(m.piecewise, c.link, c.channel);
  const auto mom = harvested_power_moments(c.link, c.channel, m.piecewise);
  auto grid = default_grid(mom.mean, mom.variance, *std::max_element(blocks.begin(), blocks.end()),
                           c.numerics.intervals);
  if (c.numerics.fft_size != 0) grid.fft_size = c.numerics.fft_size;
  const auto single = discretize(dist, grid);
  Table t{{"u_mW"}, {}};
  std::vector<DiscretizedDensity> dens;
  for (auto n : blocks) {
    t.columns.push_back("density_N" + std::to_string(n));
    dens.push_back(convolve_n(single, n));
  }
  for (std::size_t j = 0; j < grid.nodes(); ++j) {
    std::vector<Cell> row{grid.node(j)};
    for (const auto& d : dens) row.emplace_back(d.values[j]);
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_rfid(const ScenarioConfig& cfg) {
  const auto m = build_models(cfg.harvester);
  const std::vector<std::pair<std::string, HarvesterModel>> models{
      {"ground_truth", m.truth},  {"piecewise", m.piecewise}, {"linear", m.linear},
      {"constant_linear", m.constant_linear}, {"clc", m.clc},   {"sigmoid", m.sigmoid}};
  Table t{{"d_m", "P_T_dBm", "P_c_mW"}, {}};
  for (const auto& [name, _] : models) {
    t.columns.push_back(name + "_closed");
    t.columns.push_back(name + "_mc");
    t.columns.push_back(name + "_mc_ci95");
  }
  const auto points = sweep_points(cfg);
  for (std::size_t row = 0; row < points.size(); ++row) {
    const auto c = at_point(cfg, points[row]);
    std::vector<Cell> r{c.link.distance_m, mw_to_dbm(c.link.transmit_power_mw),
                        c.rfid.tag_consumption_mw};
    for (const auto& [name, model] : models) {
      // Common random numbers across models within a row.
      const auto counts = simulate_rfid(plan_for(c, model, row_seed(c.numerics.seed, row)), c.rfid);
      r.emplace_back(success_probability(c.rfid, c.link, c.channel, model));
      r.emplace_back(counts.frequency());
      r.emplace_back(kZ95 * counts.standard_error());
    }
    t.add_row(std::move(r));
  }
  return t;
}

std::string cmd_export_dataset(const std::string& name) {
  std::ostringstream out;
  write_curve_csv(out, bundled_dataset(name).curve(), CsvUnits::kDbm);
  return out.str();
}

}  // namespace rfeh::app
