#include "rfeh/special_functions.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "rfeh/error.hpp"

namespace rfeh {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10000;

std::atomic<int> g_fault_target{0};
std::atomic<double> g_fault_scale{1.0};

double perturbed(fault_injection::Target target, double value) {
  if (g_fault_target.load(std::memory_order_relaxed) == static_cast<int>(target)) {
    return value * g_fault_scale.load(std::memory_order_relaxed);
  }
  return value;
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// log of z^a e^-z / Gamma(a), the common prefactor of the series and the
// continued fraction.
double log_prefactor(double a, double z) {
  return a * std::log(z) - z - std::lgamma(a);
}

// Series for P(a, z); converges quickly for z < a + 1.
double gamma_p_series(double a, double z) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= z / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(log_prefactor(a, z));
    }
  }
  throw ConvergenceError("incomplete gamma series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, z), z >= a + 1.
double gamma_q_continued_fraction(double a, double z) {
  constexpr double kTiny = 1e-300;
  double b = z + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) {
      return std::exp(log_prefactor(a, z)) * h;
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

void check_incomplete_args(double a, double z) {
  require(a > 0.0 && std::isfinite(a), "incomplete gamma requires a > 0");
  require(z >= 0.0, "incomplete gamma requires z >= 0");
}

}  // namespace

double gamma(double x) {
  require(x > 0.0, "gamma requires x > 0");
  return std::tgamma(x);
}

double log_gamma(double x) {
  require(x > 0.0, "log_gamma requires x > 0");
  return std::lgamma(x);
}

double regularized_gamma_p(double a, double z) {
  check_incomplete_args(a, z);
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return 1.0;
  const double p = z < a + 1.0 ? gamma_p_series(a, z)
                               : 1.0 - gamma_q_continued_fraction(a, z);
  return p;
}

double regularized_gamma_q(double a, double z) {
  check_incomplete_args(a, z);
  if (z == 0.0) return 1.0;
  if (std::isinf(z)) return 0.0;
  const double q = z < a + 1.0 ? 1.0 - gamma_p_series(a, z)
                               : gamma_q_continued_fraction(a, z);
  return perturbed(fault_injection::Target::kIncompleteGamma, q);
}

double upper_incomplete_gamma(double a, double z) {
  check_incomplete_args(a, z);
  return regularized_gamma_q(a, z) * std::tgamma(a);
}

double regularized_gamma_q_difference(double a, double z1, double z2) {
  check_incomplete_args(a, z1);
  check_incomplete_args(a, z2);
  require(z1 <= z2, "regularized_gamma_q_difference requires z1 <= z2");
  if (z1 == z2) return 0.0;
  // Both tails small on the upper side: subtract Q values. Otherwise the lower
  // tails are the small quantities and P(z2) - P(z1) keeps the digits.
  const double q1 = regularized_gamma_q(a, z1);
  if (q1 <= 0.5) return q1 - regularized_gamma_q(a, z2);
  return regularized_gamma_p(a, z2) - regularized_gamma_p(a, z1);
}

double q_function(double x) {
  const double q = 0.5 * std::erfc(x / std::numbers::sqrt2);
  return perturbed(fault_injection::Target::kQFunction, q);
}

double q_inverse(double p) {
  require(p > 0.0 && p < 1.0, "q_inverse requires 0 < p < 1");
  if (p > 0.5) return -q_inverse(1.0 - p);
  double x = std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
  // Newton polish against q_function; the derivative of Q is -phi(x).
  for (int i = 0; i < 3; ++i) {
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    if (phi == 0.0) break;
    const double step = (q_function(x) - p) / phi;
    x += step;
    if (std::fabs(step) <= 4.0 * kEps * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

double r_function(double x) {
  require(x > 0.0, "r_function requires x > 0");
  const double q = q_function(x);
  return 2.0 * q * (1.0 - q);
}

double r_inverse(double y) {
  require(y > 0.0 && y < 0.5, "r_inverse requires 0 < y < 1/2");
  // (1 - sqrt(1 - 2y)) / 2 rewritten to avoid cancellation for small y.
  const double q = y / (1.0 + std::sqrt(1.0 - 2.0 * y));
  return q_inverse(q);
}

namespace fault_injection {

void set(Target target, double relative_error) {
  g_fault_scale.store(1.0 + relative_error, std::memory_order_relaxed);
  g_fault_target.store(static_cast<int>(target), std::memory_order_relaxed);
}

void clear() { set(Target::kNone, 0.0); }

}  // namespace fault_injection

}  // namespace rfeh
