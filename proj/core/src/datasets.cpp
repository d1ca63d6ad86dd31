#include "rfeh/datasets.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "rfeh/error.hpp"
#include "rfeh/units.hpp"

namespace rfeh {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, std::size_t line) {
  if (field == "-inf" || field == "-Inf" || field == "-INF") {
    return -std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("line " + std::to_string(line) + ": cannot parse '" + field + "'");
  }
  return v;
}

}  // namespace

double BundledDataset::efficiency_at_dbm(double dbm) const {
  return peak_efficiency * (1.0 - std::exp(-(dbm - sensitivity_dbm) / width_db));
}

HarvesterCurve BundledDataset::curve() const {
  std::vector<CurvePoint> pts;
  pts.reserve(points);
  const double step = (saturation_dbm - sensitivity_dbm) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double s = i + 1 == points ? saturation_dbm
                                     : sensitivity_dbm + step * static_cast<double>(i);
    const double x = dbm_to_mw(s);
    pts.push_back({x, i == 0 ? 0.0 : efficiency_at_dbm(s) * x});
  }
  return HarvesterCurve(std::move(pts));
}

const std::vector<BundledDataset>& bundled_datasets() {
  static const std::vector<BundledDataset> kSets{
      {"rectenna-A", 118, -42.5, 16.0, 0.70, 24.0},
      {"module-B", 53, -12.0, 10.0, 0.62, 7.0},
  };
  return kSets;
}

const BundledDataset& bundled_dataset(std::string_view name) {
  for (const auto& d : bundled_datasets()) {
    if (d.name == name) return d;
  }
  throw ValidationError("unknown bundled dataset '" + std::string(name) + "'");
}

HarvesterCurve parse_curve_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  CsvUnits units = CsvUnits::kDbm;
  std::vector<CurvePoint> pts;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ValidationError("line " + std::to_string(lineno) + ": expected two fields");
    }
    const std::string a = trim(std::string_view(t).substr(0, comma));
    const std::string b = trim(std::string_view(t).substr(comma + 1));
    if (!have_header) {
      if (a == "input_dbm" && b == "output_dbm") {
        units = CsvUnits::kDbm;
      } else if (a == "input_mw" && b == "output_mw") {
        units = CsvUnits::kMilliwatt;
      } else {
        throw ValidationError("expected header 'input_dbm,output_dbm' or 'input_mw,output_mw'");
      }
      have_header = true;
      continue;
    }
    double x = parse_number(a, lineno);
    double y = parse_number(b, lineno);
    if (units == CsvUnits::kDbm) {
      x = dbm_to_mw(x);
      y = std::isinf(y) && y < 0.0 ? 0.0 : dbm_to_mw(y);
    }
    pts.push_back({x, y});
  }
  if (!have_header) throw ValidationError("curve CSV has no header");
  return HarvesterCurve(std::move(pts));
}

HarvesterCurve load_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return parse_curve_csv(in);
}

void write_curve_csv(std::ostream& out, const HarvesterCurve& curve, CsvUnits units) {
  out << (units == CsvUnits::kDbm ? "input_dbm,output_dbm\n" : "input_mw,output_mw\n");
  char buf[64];
  for (const auto& p : curve.points()) {
    if (units == CsvUnits::kDbm) {
      const double y = mw_to_dbm(p.output_mw);
      if (std::isinf(y)) {
        std::snprintf(buf, sizeof buf, "%.17g,-inf\n", mw_to_dbm(p.input_mw));
      } else {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", mw_to_dbm(p.input_mw), y);
      }
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.input_mw, p.output_mw);
    }
    out << buf;
  }
}

}  // namespace rfeh
