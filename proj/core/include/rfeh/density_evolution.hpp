#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rfeh/analytic_stats.hpp"

namespace rfeh {

/// Uniform grid x_j = lower + j G, j = 0..H, with G = (upper - lower) / H.
/// fft_size is the transform length used when convolving densities on it.
struct GridSpec {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t intervals = 1u << 16;  ///< H
  std::size_t fft_size = 1u << 17;   ///< J, a power of two > H + 1

  double resolution() const { return (upper - lower) / static_cast<double>(intervals); }
  std::size_t nodes() const { return intervals + 1; }
  double node(std::size_t j) const { return lower + resolution() * static_cast<double>(j); }
  /// Largest j with node(j) <= x, clamped to [0, H].
  std::size_t floor_index(double x) const;
  void validate() const;
};

/// Density samples v[j] ~ f(x_j) on a grid, normalized so sum v[j] G = 1.
struct DiscretizedDensity {
  GridSpec grid;
  std::vector<double> values;

  double mass() const;
  double mean() const;
  double variance() const;
};

/// Samples a density at the grid nodes and renormalizes. Throws
/// SupportOverflowError if the raw discrete mass is off by more than 1e-4.
DiscretizedDensity discretize(const std::function<double(double)>& pdf, const GridSpec& grid);

/// Cell-average discretization from a CDF: node j receives
/// (F(x_j + G/2) - F(x_j - G/2)) / G, so an atom lands on its nearest node.
/// Throws SupportOverflowError if more than 1e-4 of the mass lies beyond the
/// last cell, unless `keep_overflow` is set: then the mass beyond the grid is
/// dropped without renormalizing, leaving a sub-probability density. That is
/// all first_passage_pmf needs when the grid ends at the threshold.
DiscretizedDensity discretize_cdf(const std::function<double(double)>& cdf, const GridSpec& grid,
                                  bool keep_overflow = false);

DiscretizedDensity discretize(const HarvestedPowerDistribution& dist, const GridSpec& grid);

/// Density of X + Y on the same grid, truncated at the last node. Throws
/// AliasingError when the occupied supports of a and b do not fit in one FFT
/// buffer (K_a + K_b + 1 > J), and SupportOverflowError when more than 1e-6
/// of the mass is cut off.
DiscretizedDensity convolve(const DiscretizedDensity& a, const DiscretizedDensity& b);

/// Density of the sum of n IID copies, by repeated squaring.
DiscretizedDensity convolve_n(const DiscretizedDensity& d, std::size_t n);

/// v_F[j] = sum_{i <= j} v[i] G.
std::vector<double> cdf_from_density(const DiscretizedDensity& d);

struct FirstPassageResult {
  /// pmf[k] = P(N* = k + 1).
  std::vector<double> pmf;
  /// P(N* > pmf.size()) = F_{U_n}(theta) for the last n evaluated.
  double residual;
  /// residual exceeds 1e-4.
  bool truncated;
};

/// Distribution of the first block index at which the running sum of
/// per-block harvests exceeds theta, from P(N* = N) = F_{U_{N-1}}(theta) -
/// F_{U_N}(theta) with U_0 = 0.
FirstPassageResult first_passage_pmf(const DiscretizedDensity& single, double theta,
                                     std::size_t n_max);

/// Grows n until the residual drops below `residual_target`. Throws
/// ConvergenceError if that needs more than n_cap blocks.
FirstPassageResult first_passage_pmf_until(const DiscretizedDensity& single, double theta,
                                           double residual_target = 1e-4,
                                           std::size_t n_cap = 1000000);

struct ChargingEstimate {
  double blocks;
  /// n_max times the residual mass; an upper bound on the mean's truncation error.
  double truncation_bound;
};

ChargingEstimate expected_charging_blocks(const FirstPassageResult& result);

/// blocks * coherence_time_s.
double expected_charging_time(const FirstPassageResult& result, double coherence_time_s);

/// Storage capacitor charged once per packet.
struct ChargingSpec {
  double capacitance_f = 10e-6;
  double voltage_v = 1.8;
  double packet_duration_s = 50e-3;
  /// Coherence period; zero means "same as the packet duration".
  double coherence_time_s = 0.0;

  /// C V^2 / (2 T_p), in mW.
  double threshold_mw() const;
  double coherence_s() const { return coherence_time_s > 0.0 ? coherence_time_s : packet_duration_s; }
  void validate() const;
};

/// Grid for the n-fold sum: lower 0, upper n mean + 10 sqrt(n var), and
/// J = max(next_pow2(2H), 2^17).
GridSpec default_grid(double single_block_mean, double single_block_var, std::size_t n,
                      std::size_t intervals = 1u << 16);

/// Grid [0, theta] for the first-passage computation, J = next_pow2(2H + 1).
/// Mass above theta never influences F_{U_N}(theta), so the grid need not
/// cover the single-block law.
GridSpec charging_grid(double theta, std::size_t intervals = 1u << 14);

}  // namespace rfeh
