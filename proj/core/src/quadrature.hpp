#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rfeh::detail {

// Adaptive Gauss-Kronrod over [a, b] after mapping onto [0, 1]. Boost 1.74
// compares an error estimate that ignores the interval width against a scaled
// tolerance, which never converges on very short intervals; integrating on a
// fixed-width interval sidesteps that.
template <unsigned Points, class F>
double integrate_piece(F&& f, double a, double b, unsigned max_depth, double tol,
                       double* error = nullptr, double* l1 = nullptr) {
  const double width = b - a;
  const auto mapped = [&](double t) { return f(a + width * t) * width; };
  return boost::math::quadrature::gauss_kronrod<double, Points>::integrate(mapped, 0.0, 1.0,
                                                                          max_depth, tol, error, l1);
}

}  // namespace rfeh::detail
