#pragma once

#include <cstddef>

#include "rfeh/harvester.hpp"

namespace rfeh {

struct EfficiencyFitOptions {
  /// Number of dBm-uniform points on which 0 <= e <= 1 is imposed.
  std::size_t constraint_points = 5001;
  /// Largest tolerated |measured - fitted| efficiency at the datapoints.
  double residual_tolerance = 0.05;
};

/// Least-squares polynomial fit of efficiency (output / input) against dBm
/// input, constrained to e(P_sen) = 0 and 0 <= e <= 1 on the constraint grid.
/// Solved exactly as a convex QP by a primal active-set method started from
/// the feasible point e = 0. Throws FitInfeasibleError when the residual
/// exceeds the tolerance.
EfficiencyPolynomial fit_efficiency(const HarvesterCurve& curve, int degree,
                                    const EfficiencyFitOptions& options = {});

/// Nonlinear least squares of the normalized sigmoid to the curve's points.
/// Throws ConvergenceError when Levenberg-Marquardt fails.
SigmoidBaseline fit_sigmoid(const HarvesterCurve& curve);

/// Ordinary least squares of a mW-scale quadratic to the curve's points.
QuadraticBaseline fit_quadratic(const HarvesterCurve& curve);

enum class BaselineKind { kLinear, kConstantLinear, kConstantLinearConstant };

/// Efficiency of a linear baseline minimizing the squared output error over
/// the curve's points. Sensitivity and saturation come from the curve.
HarvesterModel fit_baseline(const HarvesterCurve& curve, BaselineKind kind);

}  // namespace rfeh
