#include "rfeh/density_evolution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <fftw3.h>

#include "rfeh/error.hpp"

namespace rfeh {
namespace {

constexpr double kOverflowTolerance = 1e-4;
constexpr double kConvolutionMassTolerance = 1e-6;
// FFT round-off floor, relative to the largest node value.
constexpr double kRoundoffFloor = 1e-14;

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)), size(n) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
  std::size_t size;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)), size(n) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

// FFTW planning is not thread-safe; execution with the new-array interface
// is. Plans are made once per length with FFTW_ESTIMATE so results do not
// depend on timing measurements.
struct Plans {
  fftw_plan forward;
  fftw_plan backward;
};

const Plans& plans_for(std::size_t j) {
  static std::mutex mutex;
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(j);
  if (it == cache.end()) {
    RealBuffer r(j);
    ComplexBuffer c(j / 2 + 1);
    const int n = static_cast<int>(j);
    Plans p{fftw_plan_dft_r2c_1d(n, r.data, c.data, FFTW_ESTIMATE),
            fftw_plan_dft_c2r_1d(n, c.data, r.data, FFTW_ESTIMATE)};
    it = cache.emplace(j, p).first;
  }
  return it->second;
}

// Spectrum of the zero-padded vector v * scale.
class Spectrum {
 public:
  Spectrum(const std::vector<double>& v, double scale, std::size_t j)
      : j_(j), bins_(j / 2 + 1) {
    RealBuffer r(j);
    std::fill(r.data, r.data + j, 0.0);
    const std::size_t k = std::min(v.size(), j);
    for (std::size_t i = 0; i < k; ++i) r.data[i] = v[i] * scale;
    fftw_execute_dft_r2c(plans_for(j).forward, r.data, bins_.data);
  }

  std::size_t length() const { return j_; }
  fftw_complex* data() { return bins_.data; }
  const fftw_complex* data() const { return bins_.data; }

 private:
  std::size_t j_;
  ComplexBuffer bins_;
};

// Inverse of the product of two spectra, first `keep` entries, each divided
// by `scale`. Also reports the sum of the entries beyond `keep`.
std::vector<double> inverse_product(const Spectrum& a, const Spectrum& b, std::size_t keep,
                                    double scale, double* beyond = nullptr) {
  const std::size_t j = a.length();
  ComplexBuffer c(j / 2 + 1);
  for (std::size_t i = 0; i < j / 2 + 1; ++i) {
    const std::complex<double> x(a.data()[i][0], a.data()[i][1]);
    const std::complex<double> y(b.data()[i][0], b.data()[i][1]);
    const auto z = x * y;
    c.data[i][0] = z.real();
    c.data[i][1] = z.imag();
  }
  RealBuffer r(j);
  fftw_execute_dft_c2r(plans_for(j).backward, c.data, r.data);
  const double norm = 1.0 / static_cast<double>(j);
  double peak = 0.0;
  for (std::size_t i = 0; i < j; ++i) {
    r.data[i] *= norm;
    peak = std::max(peak, r.data[i]);
  }
  const double floor = kRoundoffFloor * peak;
  for (std::size_t i = 0; i < j; ++i) {
    if (r.data[i] < floor) r.data[i] = 0.0;
  }
  std::vector<double> out(keep);
  for (std::size_t i = 0; i < keep; ++i) out[i] = r.data[i] / scale;
  if (beyond != nullptr) {
    double s = 0.0;
    for (std::size_t i = keep; i < j; ++i) s += r.data[i];
    *beyond = s;
  }
  return out;
}

// Index of the last strictly positive entry, or -1.
std::ptrdiff_t last_occupied(const std::vector<double>& v) {
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] > 0.0) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.lower != b.lower || a.upper != b.upper || a.intervals != b.intervals ||
      a.fft_size != b.fft_size) {
    throw ValidationError("densities live on different grids");
  }
  if (a.lower != 0.0) throw ValidationError("convolution needs a grid starting at zero");
}

std::size_t next_pow2(std::size_t n) { return std::bit_ceil(n); }

}  // namespace

std::size_t GridSpec::floor_index(double x) const {
  if (!(x > lower)) return 0;
  const double j = std::floor((x - lower) / resolution() * (1.0 + 1e-15));
  return static_cast<std::size_t>(std::min(j, static_cast<double>(intervals)));
}

void GridSpec::validate() const {
  if (!(lower < upper)) throw ValidationError("grid needs lower < upper");
  if (intervals < 2) throw ValidationError("grid needs at least two intervals");
  if (!std::has_single_bit(fft_size)) throw ValidationError("FFT size must be a power of two");
  if (fft_size <= intervals + 1) throw ValidationError("FFT size must exceed H + 1");
}

double DiscretizedDensity::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.resolution();
}

double DiscretizedDensity::mean() const {
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += values[j] * grid.node(j);
  return s * grid.resolution() / mass();
}

double DiscretizedDensity::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double dx = grid.node(j) - mu;
    s += values[j] * dx * dx;
  }
  return s * grid.resolution() / mass();
}

DiscretizedDensity discretize(const std::function<double(double)>& pdf, const GridSpec& grid) {
  grid.validate();
  DiscretizedDensity d{grid, std::vector<double>(grid.nodes())};
  for (std::size_t j = 0; j < grid.nodes(); ++j) {
    const double v = pdf(grid.node(j));
    if (!(v >= 0.0) || std::isinf(v)) {
      throw DomainError("density must be finite and non-negative at grid node " +
                        std::to_string(j));
    }
    d.values[j] = v;
  }
  const double m = d.mass();
  if (!(std::abs(m - 1.0) <= kOverflowTolerance)) {
    throw SupportOverflowError("discretized mass " + std::to_string(m) + " differs from one");
  }
  for (double& v : d.values) v /= m;
  return d;
}

DiscretizedDensity discretize_cdf(const std::function<double(double)>& cdf, const GridSpec& grid,
                                  bool keep_overflow) {
  grid.validate();
  const double g = grid.resolution();
  DiscretizedDensity d{grid, std::vector<double>(grid.nodes())};
  double prev = cdf(grid.lower - 0.5 * g);
  if (!keep_overflow && prev > kOverflowTolerance) {
    throw SupportOverflowError("mass below the grid exceeds tolerance");
  }
  for (std::size_t j = 0; j < grid.nodes(); ++j) {
    const double next = cdf(grid.node(j) + 0.5 * g);
    d.values[j] = std::max(next - prev, 0.0) / g;
    prev = std::max(prev, next);
  }
  if (keep_overflow) return d;
  const double m = d.mass();
  if (!(std::abs(m - 1.0) <= kOverflowTolerance)) {
    throw SupportOverflowError("mass beyond the grid is " + std::to_string(1.0 - m));
  }
  for (double& v : d.values) v /= m;
  return d;
}

DiscretizedDensity discretize(const HarvestedPowerDistribution& dist, const GridSpec& grid) {
  return discretize_cdf([&dist](double x) { return dist.cdf(x); }, grid);
}

DiscretizedDensity convolve(const DiscretizedDensity& a, const DiscretizedDensity& b) {
  require_same_grid(a.grid, b.grid);
  const GridSpec& grid = a.grid;
  const std::ptrdiff_t ka = last_occupied(a.values);
  const std::ptrdiff_t kb = last_occupied(b.values);
  if (ka < 0 || kb < 0) return DiscretizedDensity{grid, std::vector<double>(grid.nodes(), 0.0)};
  if (static_cast<std::size_t>(ka + kb + 1) > grid.fft_size) {
    throw AliasingError("occupied supports " + std::to_string(ka) + " + " + std::to_string(kb) +
                        " overflow an FFT of length " + std::to_string(grid.fft_size));
  }
  const double g = grid.resolution();
  const Spectrum sa(a.values, g, grid.fft_size);
  const Spectrum sb(b.values, g, grid.fft_size);
  double beyond = 0.0;
  DiscretizedDensity out{grid, inverse_product(sa, sb, grid.nodes(), g, &beyond)};
  if (beyond > kConvolutionMassTolerance) {
    throw SupportOverflowError("convolution pushes " + std::to_string(beyond) +
                               " of the mass beyond the grid");
  }
  return out;
}

DiscretizedDensity convolve_n(const DiscretizedDensity& d, std::size_t n) {
  if (n == 0) throw DomainError("convolve_n needs n >= 1");
  std::optional<DiscretizedDensity> acc;
  DiscretizedDensity base = d;
  while (true) {
    if (n & 1u) acc = acc ? convolve(*acc, base) : base;
    n >>= 1u;
    if (n == 0) break;
    base = convolve(base, base);
  }
  return *acc;
}

std::vector<double> cdf_from_density(const DiscretizedDensity& d) {
  std::vector<double> f(d.values.size());
  const double g = d.grid.resolution();
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    s += d.values[j] * g;
    f[j] = s;
  }
  return f;
}

namespace {

// Runs the first-passage recursion until `stop(n, residual)` returns true.
template <class Stop>
FirstPassageResult first_passage(const DiscretizedDensity& single, double theta, Stop&& stop) {
  const GridSpec& grid = single.grid;
  grid.validate();
  if (grid.lower != 0.0) throw ValidationError("first passage needs a grid starting at zero");
  if (!(theta >= 0.0 && theta <= grid.upper)) {
    throw DomainError("threshold must lie on the grid");
  }
  const std::size_t jt = grid.floor_index(theta);
  const std::size_t keep = jt + 1;  // nodes above j_theta never feed back below it
  if (2 * keep - 1 > grid.fft_size) throw AliasingError("FFT too short for the threshold index");
  const double g = grid.resolution();

  std::vector<double> head(single.values.begin(),
                           single.values.begin() + static_cast<std::ptrdiff_t>(keep));
  const Spectrum s(head, g, grid.fft_size);

  const auto cdf_at_threshold = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return std::min(acc * g, 1.0);
  };

  FirstPassageResult result{{}, 1.0, false};
  std::vector<double> u = head;  // U_1
  double f_prev = 1.0;           // F_{U_0}(theta)
  for (std::size_t n = 1;; ++n) {
    if (n > 1) u = inverse_product(Spectrum(u, g, grid.fft_size), s, keep, g);
    const double f = cdf_at_threshold(u);
    result.pmf.push_back(std::max(f_prev - f, 0.0));
    f_prev = std::min(f_prev, f);
    result.residual = f_prev;
    if (stop(n, f_prev)) break;
  }
  result.truncated = result.residual > kOverflowTolerance;
  return result;
}

}  // namespace

FirstPassageResult first_passage_pmf(const DiscretizedDensity& single, double theta,
                                     std::size_t n_max) {
  if (n_max == 0) throw DomainError("n_max must be at least one");
  return first_passage(single, theta, [n_max](std::size_t n, double) { return n >= n_max; });
}

FirstPassageResult first_passage_pmf_until(const DiscretizedDensity& single, double theta,
                                           double residual_target, std::size_t n_cap) {
  auto r = first_passage(single, theta, [&](std::size_t n, double residual) {
    return residual < residual_target || n >= n_cap;
  });
  if (!(r.residual < residual_target)) {
    throw ConvergenceError("first-passage residual " + std::to_string(r.residual) +
                           " after " + std::to_string(n_cap) + " blocks");
  }
  return r;
}

ChargingEstimate expected_charging_blocks(const FirstPassageResult& result) {
  double mean = 0.0;
  for (std::size_t k = 0; k < result.pmf.size(); ++k) {
    mean += static_cast<double>(k + 1) * result.pmf[k];
  }
  return {mean, static_cast<double>(result.pmf.size()) * result.residual};
}

double expected_charging_time(const FirstPassageResult& result, double coherence_time_s) {
  return expected_charging_blocks(result).blocks * coherence_time_s;
}

double ChargingSpec::threshold_mw() const {
  validate();
  return 1e3 * capacitance_f * voltage_v * voltage_v / (2.0 * packet_duration_s);
}

void ChargingSpec::validate() const {
  if (!(capacitance_f > 0.0 && voltage_v > 0.0 && packet_duration_s > 0.0)) {
    throw ValidationError("capacitance, voltage and packet duration must be positive");
  }
  if (coherence_time_s < 0.0) throw ValidationError("coherence time must be non-negative");
}

GridSpec default_grid(double single_block_mean, double single_block_var, std::size_t n,
                      std::size_t intervals) {
  if (!(single_block_mean > 0.0) || !(single_block_var >= 0.0) || !std::isfinite(single_block_var)) {
    throw DomainError("grid moments must be finite with a positive mean");
  }
  if (n == 0) throw DomainError("n must be at least one");
  const double nn = static_cast<double>(n);
  GridSpec g;
  g.lower = 0.0;
  g.upper = nn * single_block_mean + 10.0 * std::sqrt(nn * single_block_var);
  g.intervals = intervals;
  g.fft_size = std::max(next_pow2(2 * intervals), std::size_t{1} << 17);
  return g;
}

GridSpec charging_grid(double theta, std::size_t intervals) {
  if (!(theta > 0.0)) throw DomainError("threshold must be positive");
  GridSpec g;
  g.lower = 0.0;
  g.upper = theta;
  g.intervals = intervals;
  g.fft_size = next_pow2(2 * intervals + 1);
  return g;
}

}  // namespace rfeh
