#pragma once

#include <cmath>
#include <limits>

namespace rfeh {

// Powers are carried in milliwatts everywhere inside the library; dBm only
// appears at I/O boundaries.

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

}  // namespace rfeh
