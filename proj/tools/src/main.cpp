#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "rfeh/error.hpp"
#include "rfeh/special_functions.hpp"

namespace {

using namespace rfeh;
using namespace rfeh::app;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidate = 4;

struct CommonOptions {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Scenario JSON; defaults apply when omitted");
  cmd->add_option("--output", o.output, "Output file; stdout when omitted");
  cmd->add_option("--seed", o.seed, "Overrides numerics.seed");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

ScenarioConfig resolve(const CommonOptions& o) {
  ScenarioConfig cfg = o.config.empty() ? ScenarioConfig{} : load_config(o.config);
  if (o.seed) cfg.numerics.seed = *o.seed;
  cfg.validate();
  return cfg;
}

OutputFormat format_of(const CommonOptions& o) {
  return o.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
}

void emit(const CommonOptions& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + o.output);
  out << text;
}

void emit_table(const CommonOptions& o, const Table& t) {
  std::ostringstream s;
  write_table(s, t, format_of(o));
  emit(o, s.str());
}

std::vector<int> parse_ids(const std::string& list) {
  std::vector<int> ids;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      ids.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValidationError("--only expects comma-separated criterion numbers");
    }
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RF energy harvesting analysis: piecewise-linear harvester under Nakagami fading"};
  app.require_subcommand(1);

  CommonOptions fit_o, outage_o, energy_o, charging_o, rfid_o, validate_o, export_o;
  auto* fit = app.add_subcommand("fit", "Fit the efficiency polynomial and baselines to a dataset");
  add_common(fit, fit_o);
  auto* outage = app.add_subcommand("outage", "Sensitivity outage probability over a sweep");
  add_common(outage, outage_o);
  auto* energy = app.add_subcommand("energy", "Expected harvested energy per block for every model");
  add_common(energy, energy_o);
  auto* charging = app.add_subcommand("charging", "Expected number of blocks to charge the capacitor");
  add_common(charging, charging_o);
  std::vector<std::size_t> density_blocks;
  std::string density_output;
  charging->add_option("--density-blocks", density_blocks, "Block counts N for a U_N density dump")
      ->delimiter(',');
  charging->add_option("--density-output", density_output, "File for the density dump");
  auto* rfid = app.add_subcommand("rfid", "Successful-reception probability of a passive tag");
  add_common(rfid, rfid_o);
  auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
  add_common(validate, validate_o);
  std::string only;
  std::string fault = "none";
  double fault_size = 1e-6;
  validate->add_option("--only", only, "Comma-separated criterion numbers");
  validate->add_option("--fault", fault, "Perturb a special function: none, incomplete-gamma, q")
      ->check(CLI::IsMember({"none", "incomplete-gamma", "q"}));
  validate->add_option("--fault-size", fault_size, "Relative perturbation for --fault");
  auto* export_ds = app.add_subcommand("export-dataset", "Write a bundled dataset as dBm CSV");
  std::string dataset_name;
  export_ds->add_option("name", dataset_name, "Bundled dataset name")->required();
  export_ds->add_option("--output", export_o.output, "Output file; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fit) {
      emit_table(fit_o, cmd_fit(resolve(fit_o)));
    } else if (*outage) {
      emit_table(outage_o, cmd_outage(resolve(outage_o)));
    } else if (*energy) {
      emit_table(energy_o, cmd_energy(resolve(energy_o)));
    } else if (*charging) {
      const auto cfg = resolve(charging_o);
      emit_table(charging_o, cmd_charging(cfg));
      if (!density_blocks.empty()) {
        CommonOptions dump = charging_o;
        dump.output = density_output;
        emit_table(dump, cmd_charging_density(cfg, density_blocks));
      }
    } else if (*rfid) {
      emit_table(rfid_o, cmd_rfid(resolve(rfid_o)));
    } else if (*export_ds) {
      emit(export_o, cmd_export_dataset(dataset_name));
    } else if (*validate) {
      const auto ids = parse_ids(only);
      if (fault == "incomplete-gamma") {
        fault_injection::set(fault_injection::Target::kIncompleteGamma, fault_size);
      } else if (fault == "q") {
        fault_injection::set(fault_injection::Target::kQFunction, fault_size);
      }
      const auto results = run_acceptance(ids, &std::cerr);
      fault_injection::clear();
      const auto report = acceptance_report(results);
      if (validate_o.format == "json") {
        emit(validate_o, report.dump(2) + "\n");
      } else {
        Table t{{"criterion", "name", "passed", "detail"}, {}};
        for (const auto& r : results) {
          t.add_row({static_cast<double>(r.id), r.name, std::string(r.passed ? "true" : "false"),
                     r.detail});
        }
        emit_table(validate_o, t);
      }
      return report.at("passed").get<bool>() ? kExitOk : kExitValidate;
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const FitInfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
