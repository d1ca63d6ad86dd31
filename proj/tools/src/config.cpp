#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>

#include "rfeh/error.hpp"
#include "rfeh/units.hpp"

namespace rfeh::app {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ValidationError("unknown key " + where + "." + key);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

template <class T>
void read_optional(const json& obj, const char* key, std::optional<T>& out) {
  if (obj.contains(key) && !obj.at(key).is_null()) out = obj.at(key).get<T>();
}

template <class T>
void write_optional(json& obj, const char* key, const std::optional<T>& v) {
  if (v) obj[key] = *v;
}

using Setter = std::function<void(ScenarioConfig&, double)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"transmit_power_mw", [](ScenarioConfig& c, double v) { c.link.transmit_power_mw = v; }},
      {"transmit_power_dbm",
       [](ScenarioConfig& c, double v) { c.link.transmit_power_mw = dbm_to_mw(v); }},
      {"distance_m", [](ScenarioConfig& c, double v) { c.link.distance_m = v; }},
      {"path_loss_exponent", [](ScenarioConfig& c, double v) { c.link.path_loss_exponent = v; }},
      {"nakagami_m", [](ScenarioConfig& c, double v) { c.channel.nakagami_m = v; }},
      {"sensitivity_dbm", [](ScenarioConfig& c, double v) { c.harvester.sensitivity_dbm = v; }},
      {"capacitance_f", [](ScenarioConfig& c, double v) { c.charging.capacitance_f = v; }},
      {"capacitance_uf", [](ScenarioConfig& c, double v) { c.charging.capacitance_f = 1e-6 * v; }},
      {"voltage_v", [](ScenarioConfig& c, double v) { c.charging.voltage_v = v; }},
      {"tag_consumption_mw", [](ScenarioConfig& c, double v) { c.rfid.tag_consumption_mw = v; }},
      {"tag_consumption_dbm",
       [](ScenarioConfig& c, double v) { c.rfid.tag_consumption_mw = dbm_to_mw(v); }},
      {"ber_threshold", [](ScenarioConfig& c, double v) { c.rfid.ber_threshold = v; }},
  };
  return table;
}

ScenarioConfig parse(const json& j) {
  reject_unknown(j, {"schema_version", "link", "channel", "harvester", "charging", "rfid",
                     "numerics", "sweeps"},
                 "config");
  if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ValidationError("schema_version must be " + std::to_string(kSchemaVersion));
  }
  ScenarioConfig c;
  if (j.contains("link")) {
    const auto& o = j.at("link");
    reject_unknown(o, {"transmit_power_mw", "distance_m", "path_loss_exponent", "wavelength_m",
                       "reference_distance_m"},
                   "link");
    read(o, "transmit_power_mw", c.link.transmit_power_mw);
    read(o, "distance_m", c.link.distance_m);
    read(o, "path_loss_exponent", c.link.path_loss_exponent);
    read(o, "wavelength_m", c.link.wavelength_m);
    read(o, "reference_distance_m", c.link.reference_distance_m);
  }
  if (j.contains("channel")) {
    const auto& o = j.at("channel");
    reject_unknown(o, {"nakagami_m", "omega"}, "channel");
    read(o, "nakagami_m", c.channel.nakagami_m);
    read(o, "omega", c.channel.omega);
  }
  if (j.contains("harvester")) {
    const auto& o = j.at("harvester");
    reject_unknown(o, {"dataset", "degree", "segments", "spacing", "eta_linear",
                       "eta_constant_linear", "eta_clc", "sensitivity_dbm"},
                   "harvester");
    read(o, "dataset", c.harvester.dataset);
    read(o, "degree", c.harvester.degree);
    read(o, "segments", c.harvester.segments);
    read(o, "spacing", c.harvester.spacing);
    read_optional(o, "eta_linear", c.harvester.eta_linear);
    read_optional(o, "eta_constant_linear", c.harvester.eta_constant_linear);
    read_optional(o, "eta_clc", c.harvester.eta_clc);
    read_optional(o, "sensitivity_dbm", c.harvester.sensitivity_dbm);
  }
  if (j.contains("charging")) {
    const auto& o = j.at("charging");
    reject_unknown(o, {"capacitance_f", "voltage_v", "packet_duration_s", "coherence_time_s"},
                   "charging");
    read(o, "capacitance_f", c.charging.capacitance_f);
    read(o, "voltage_v", c.charging.voltage_v);
    read(o, "packet_duration_s", c.charging.packet_duration_s);
    read(o, "coherence_time_s", c.charging.coherence_time_s);
  }
  if (j.contains("rfid")) {
    const auto& o = j.at("rfid");
    reject_unknown(o, {"absorb_fraction", "harvest_split", "backscatter_share", "noise_var_mw",
                       "ber_threshold", "tag_consumption_mw"},
                   "rfid");
    read(o, "absorb_fraction", c.rfid.absorb_fraction);
    read(o, "harvest_split", c.rfid.harvest_split);
    read(o, "backscatter_share", c.rfid.backscatter_share);
    read(o, "noise_var_mw", c.rfid.noise_var_mw);
    read(o, "ber_threshold", c.rfid.ber_threshold);
    read(o, "tag_consumption_mw", c.rfid.tag_consumption_mw);
  }
  if (j.contains("numerics")) {
    const auto& o = j.at("numerics");
    reject_unknown(o, {"intervals", "fft_size", "quadrature_tolerance", "mc_trials", "seed",
                       "threads"},
                   "numerics");
    read(o, "intervals", c.numerics.intervals);
    read(o, "fft_size", c.numerics.fft_size);
    read(o, "quadrature_tolerance", c.numerics.quadrature_tolerance);
    read(o, "mc_trials", c.numerics.mc_trials);
    read(o, "seed", c.numerics.seed);
    read(o, "threads", c.numerics.threads);
  }
  if (j.contains("sweeps")) {
    if (!j.at("sweeps").is_array()) throw ValidationError("sweeps must be an array");
    for (const auto& o : j.at("sweeps")) {
      reject_unknown(o, {"variable", "start", "stop", "count", "scale"}, "sweeps[]");
      Sweep s;
      s.variable = o.at("variable").get<std::string>();
      s.start = o.at("start").get<double>();
      s.stop = o.contains("stop") ? o.at("stop").get<double>() : s.start;
      read(o, "count", s.count);
      const std::string scale = o.contains("scale") ? o.at("scale").get<std::string>() : "linear";
      if (scale == "linear") {
        s.scale = SweepScale::kLinear;
      } else if (scale == "log") {
        s.scale = SweepScale::kLog;
      } else {
        throw ValidationError("sweep scale must be linear or log");
      }
      c.sweeps.push_back(s);
    }
  }
  return c;
}

}  // namespace

std::vector<double> Sweep::values() const {
  if (count == 0) throw ValidationError("sweep count must be positive");
  if (scale == SweepScale::kLog && !(start > 0.0 && stop > 0.0)) {
    throw ValidationError("log sweep needs positive bounds");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = scale == SweepScale::kLinear
                 ? start + t * (stop - start)
                 : std::exp(std::log(start) + t * (std::log(stop) - std::log(start)));
  }
  out.front() = start;
  if (count > 1) out.back() = stop;
  return out;
}

void ScenarioConfig::validate() const {
  link.validate();
  channel.validate();
  charging.validate();
  rfid.validate();
  if (harvester.spacing != "db" && harvester.spacing != "linear" && harvester.spacing != "data") {
    throw ValidationError("harvester.spacing must be db, linear or data");
  }
  if (harvester.degree < 1) throw ValidationError("harvester.degree must be at least 1");
  if (harvester.segments < 1) throw ValidationError("harvester.segments must be positive");
  for (const auto* eta : {&harvester.eta_linear, &harvester.eta_constant_linear, &harvester.eta_clc}) {
    if (*eta && !(**eta >= 0.0 && **eta < 1.0)) throw ValidationError("eta must lie in [0, 1)");
  }
  if (numerics.intervals < 2) throw ValidationError("numerics.intervals must be at least 2");
  if (numerics.fft_size != 0 &&
      (numerics.fft_size < numerics.intervals + 2 ||
       (numerics.fft_size & (numerics.fft_size - 1)) != 0)) {
    throw ValidationError("numerics.fft_size must be a power of two above intervals + 1");
  }
  if (!(numerics.quadrature_tolerance > 0.0 && numerics.quadrature_tolerance < 1.0)) {
    throw ValidationError("numerics.quadrature_tolerance must lie in (0, 1)");
  }
  if (numerics.mc_trials == 0) throw ValidationError("numerics.mc_trials must be positive");
  for (const auto& s : sweeps) {
    if (!setters().count(s.variable)) throw ValidationError("unknown sweep variable " + s.variable);
    for (double v : s.values()) {
      ScenarioConfig probe = *this;
      probe.sweeps.clear();
      apply_variable(probe, s.variable, v);
      probe.validate();
    }
  }
}

const std::vector<std::string>& sweep_variables() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, _] : setters()) n.push_back(k);
    return n;
  }();
  return names;
}

void apply_variable(ScenarioConfig& cfg, const std::string& variable, double value) {
  const auto it = setters().find(variable);
  if (it == setters().end()) throw ValidationError("unknown sweep variable " + variable);
  it->second(cfg, value);
}

std::vector<std::map<std::string, double>> sweep_points(const ScenarioConfig& cfg) {
  std::vector<std::map<std::string, double>> points{{}};
  for (const auto& s : cfg.sweeps) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& p : points) {
      for (double v : s.values()) {
        auto q = p;
        q[s.variable] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

ScenarioConfig config_from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  try {
    c = parse(j);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["link"] = {{"transmit_power_mw", c.link.transmit_power_mw},
               {"distance_m", c.link.distance_m},
               {"path_loss_exponent", c.link.path_loss_exponent},
               {"wavelength_m", c.link.wavelength_m},
               {"reference_distance_m", c.link.reference_distance_m}};
  j["channel"] = {{"nakagami_m", c.channel.nakagami_m}, {"omega", c.channel.omega}};
  json h = {{"dataset", c.harvester.dataset},
            {"degree", c.harvester.degree},
            {"segments", c.harvester.segments},
            {"spacing", c.harvester.spacing}};
  write_optional(h, "eta_linear", c.harvester.eta_linear);
  write_optional(h, "eta_constant_linear", c.harvester.eta_constant_linear);
  write_optional(h, "eta_clc", c.harvester.eta_clc);
  write_optional(h, "sensitivity_dbm", c.harvester.sensitivity_dbm);
  j["harvester"] = h;
  j["charging"] = {{"capacitance_f", c.charging.capacitance_f},
                   {"voltage_v", c.charging.voltage_v},
                   {"packet_duration_s", c.charging.packet_duration_s},
                   {"coherence_time_s", c.charging.coherence_time_s}};
  j["rfid"] = {{"absorb_fraction", c.rfid.absorb_fraction},
               {"harvest_split", c.rfid.harvest_split},
               {"backscatter_share", c.rfid.backscatter_share},
               {"noise_var_mw", c.rfid.noise_var_mw},
               {"ber_threshold", c.rfid.ber_threshold},
               {"tag_consumption_mw", c.rfid.tag_consumption_mw}};
  j["numerics"] = {{"intervals", c.numerics.intervals},
                   {"fft_size", c.numerics.fft_size},
                   {"quadrature_tolerance", c.numerics.quadrature_tolerance},
                   {"mc_trials", c.numerics.mc_trials},
                   {"seed", c.numerics.seed},
                   {"threads", c.numerics.threads}};
  j["sweeps"] = json::array();
  for (const auto& s : c.sweeps) {
    j["sweeps"].push_back({{"variable", s.variable},
                           {"start", s.start},
                           {"stop", s.stop},
                           {"count", s.count},
                           {"scale", s.scale == SweepScale::kLinear ? "linear" : "log"}});
  }
  return j;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace rfeh::app
