#pragma once

// Scalar special functions used by the closed-form statistics. All functions
// are pure and reentrant; domain violations raise rfeh::DomainError.

namespace rfeh {

/// Gamma function, x > 0.
double gamma(double x);

/// log Gamma(x), x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, z) = gamma_lower(a, z) / Gamma(a).
double regularized_gamma_p(double a, double z);

/// Regularized upper incomplete gamma Q(a, z) = Gamma(a, z) / Gamma(a).
double regularized_gamma_q(double a, double z);

/// Unregularized upper incomplete gamma: integral of t^(a-1) e^-t over [z, inf).
double upper_incomplete_gamma(double a, double z);

/// Q(a, z1) - Q(a, z2) for z1 <= z2, evaluated from whichever of the P or Q
/// tails avoids cancellation.
double regularized_gamma_q_difference(double a, double z1, double z2);

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// Inverse of q_function on (0, 1).
double q_inverse(double p);

/// R(x) = 2 Q(x) (1 - Q(x)), x > 0. Strictly decreasing from 1/2 to 0.
double r_function(double x);

/// Inverse of r_function on (0, 1/2).
double r_inverse(double y);

/// Test hook: perturbs selected special functions by a relative factor so the
/// acceptance suite can demonstrate that failures are localized. Never set in
/// production code paths.
namespace fault_injection {

enum class Target { kNone, kIncompleteGamma, kQFunction };

void set(Target target, double relative_error);
void clear();

}  // namespace fault_injection

}  // namespace rfeh
