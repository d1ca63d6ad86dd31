#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rfeh/harvester.hpp"

namespace rfeh {

/// Synthetic measured curves shipped with the library. Each is a noise-free
/// sample, uniform in dBm, of
///   e(s) = peak * (1 - exp(-(s - s_sen) / width)),  s in [s_sen, s_sat] dBm.
struct BundledDataset {
  std::string_view name;
  std::size_t points;
  double sensitivity_dbm;
  double saturation_dbm;
  double peak_efficiency;
  double width_db;

  double efficiency_at_dbm(double dbm) const;
  HarvesterCurve curve() const;
};

/// "rectenna-A": 118 points over [-42.5, 16] dBm.
/// "module-B": 53 points over [-12, 10] dBm.
const std::vector<BundledDataset>& bundled_datasets();

/// Throws ValidationError for an unknown name.
const BundledDataset& bundled_dataset(std::string_view name);

enum class CsvUnits { kDbm, kMilliwatt };

/// Reads `input_dbm,output_dbm` or `input_mw,output_mw` data. Blank lines and
/// lines starting with '#' are skipped; an output of -inf dBm is zero power.
HarvesterCurve parse_curve_csv(std::istream& in);
HarvesterCurve load_curve_csv(const std::filesystem::path& path);

void write_curve_csv(std::ostream& out, const HarvesterCurve& curve, CsvUnits units);

}  // namespace rfeh
