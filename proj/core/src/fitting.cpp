#include "rfeh/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "rfeh/error.hpp"
#include "rfeh/units.hpp"

namespace rfeh {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kMaxActiveSetIterations = 2000;

MatrixXd vandermonde(const std::vector<double>& t, int degree) {
  MatrixXd v(static_cast<Eigen::Index>(t.size()), degree + 1);
  for (std::size_t r = 0; r < t.size(); ++r) {
    double p = 1.0;
    for (int c = 0; c <= degree; ++c) {
      v(static_cast<Eigen::Index>(r), c) = p;
      p *= t[r];
    }
  }
  return v;
}

// Orthonormal basis of the null space of `rows` (k x n).
MatrixXd null_space(const MatrixXd& rows, Eigen::Index n) {
  if (rows.rows() == 0) return MatrixXd::Identity(n, n);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(rows.transpose());
  const Eigen::Index rank = qr.rank();
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, n);
  return q.rightCols(n - rank);
}

// min ||A w - y||^2  s.t.  E w = 0 (equality rows),  lo <= G w <= hi.
// Inequalities are split into upper (G w <= hi) and lower (-G w <= -lo) rows.
VectorXd active_set_qp(const MatrixXd& a, const VectorXd& y, const MatrixXd& eq,
                       const MatrixXd& g, double lo, double hi) {
  const Eigen::Index n = a.cols();
  const Eigen::Index k = g.rows();
  VectorXd w = VectorXd::Zero(n);  // feasible when lo <= 0 <= hi
  std::vector<Eigen::Index> active;  // index < k: upper row, >= k: lower row

  auto row = [&](Eigen::Index i) -> VectorXd {
    return i < k ? VectorXd(g.row(i).transpose()) : VectorXd(-g.row(i - k).transpose());
  };
  auto bound = [&](Eigen::Index i) { return i < k ? hi : -lo; };

  for (int iter = 0; iter < kMaxActiveSetIterations; ++iter) {
    MatrixXd work(eq.rows() + static_cast<Eigen::Index>(active.size()), n);
    work.topRows(eq.rows()) = eq;
    for (std::size_t j = 0; j < active.size(); ++j) {
      work.row(eq.rows() + static_cast<Eigen::Index>(j)) = row(active[j]).transpose();
    }
    const MatrixXd z = null_space(work, n);
    const VectorXd resid = y - a * w;
    VectorXd p = VectorXd::Zero(n);
    if (z.cols() > 0) {
      const MatrixXd az = a * z;
      p = z * az.colPivHouseholderQr().solve(resid);
    }

    if (p.norm() <= 1e-13 * std::max(1.0, w.norm())) {
      if (active.empty()) return w;
      // Multipliers from grad + work^T lambda = 0 with grad = A^T (A w - y).
      const VectorXd grad = a.transpose() * (a * w - y);
      const VectorXd lambda = work.transpose().completeOrthogonalDecomposition().solve(-grad);
      Eigen::Index worst = -1;
      double most_negative = -1e-12 * std::max(1.0, grad.norm());
      for (std::size_t j = 0; j < active.size(); ++j) {
        const double mu = lambda(eq.rows() + static_cast<Eigen::Index>(j));
        if (mu < most_negative) {
          most_negative = mu;
          worst = static_cast<Eigen::Index>(j);
        }
      }
      if (worst < 0) return w;
      active.erase(active.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    const VectorXd gw = g * w;
    const VectorXd gp = g * p;
    const double eps = 1e-15 * p.norm();
    for (Eigen::Index i = 0; i < 2 * k; ++i) {
      const double rp = i < k ? gp(i) : -gp(i - k);
      if (rp <= eps) continue;
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double rw = i < k ? gw(i) : -gw(i - k);
      const double step = (bound(i) - rw) / rp;
      if (step < alpha) {
        alpha = std::max(step, 0.0);
        blocking = i;
      }
    }
    w += alpha * p;
    if (blocking >= 0) active.push_back(blocking);
  }
  throw ConvergenceError("active-set efficiency fit did not terminate");
}

struct SigmoidResidual {
  using Scalar = double;
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  SigmoidResidual(const std::vector<double>& x, const std::vector<double>& y) : x_(x), y_(y) {}

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(x_.size()); }

  int operator()(const VectorXd& p, VectorXd& f) const {
    const SigmoidBaseline s{p(0), p(1), p(2)};
    for (std::size_t i = 0; i < x_.size(); ++i) {
      f(static_cast<Eigen::Index>(i)) = s.power(x_[i]) - y_[i];
    }
    return 0;
  }

  const std::vector<double>& x_;
  const std::vector<double>& y_;
};

}  // namespace

EfficiencyPolynomial fit_efficiency(const HarvesterCurve& curve, int degree,
                                    const EfficiencyFitOptions& options) {
  if (degree < 0) throw ValidationError("polynomial degree must be non-negative");
  if (curve.size() < static_cast<std::size_t>(degree) + 2) {
    throw ValidationError("fit needs at least degree + 2 datapoints");
  }
  if (options.constraint_points < 2) throw ValidationError("constraint grid too small");

  const double s_lo = mw_to_dbm(curve.sensitivity_mw());
  const double s_hi = mw_to_dbm(curve.saturation_mw());
  const double center = 0.5 * (s_lo + s_hi);
  const double half = 0.5 * (s_hi - s_lo);

  std::vector<double> t;
  VectorXd y(static_cast<Eigen::Index>(curve.size()));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& p = curve.points()[i];
    t.push_back((mw_to_dbm(p.input_mw) - center) / half);
    y(static_cast<Eigen::Index>(i)) = p.output_mw / p.input_mw;
  }
  // Column scaling is unnecessary: |t| <= 1 keeps the Vandermonde bounded.
  const MatrixXd a = vandermonde(t, degree);
  const MatrixXd eq = vandermonde({-1.0}, degree);

  std::vector<double> grid(options.constraint_points);
  const double n_grid = static_cast<double>(options.constraint_points - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -1.0 + 2.0 * static_cast<double>(i) / n_grid;
  const MatrixXd g = vandermonde(grid, degree);

  const VectorXd w = active_set_qp(a, y, eq, g, 0.0, 1.0);
  const VectorXd fitted = a * w;
  const double residual = (fitted - y).cwiseAbs().maxCoeff();
  if (residual > options.residual_tolerance) {
    throw FitInfeasibleError("efficiency fit residual " + std::to_string(residual) +
                             " exceeds tolerance " + std::to_string(options.residual_tolerance));
  }
  EfficiencyPolynomial poly(std::vector<double>(w.data(), w.data() + w.size()), center, half,
                            curve.sensitivity_mw(), curve.saturation_mw());
  poly.set_max_residual(residual);
  return poly;
}

SigmoidBaseline fit_sigmoid(const HarvesterCurve& curve) {
  // Work in units where the largest input and output are one.
  const double x_scale = curve.saturation_mw();
  double y_scale = 0.0;
  for (const auto& p : curve.points()) y_scale = std::max(y_scale, p.output_mw);
  if (!(y_scale > 0.0)) throw ValidationError("sigmoid fit needs a positive output");

  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : curve.points()) {
    x.push_back(p.input_mw / x_scale);
    y.push_back(p.output_mw / y_scale);
  }
  double half_x = x.back();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] >= 0.5) {
      half_x = x[i];
      break;
    }
  }

  SigmoidResidual functor(x, y);
  Eigen::NumericalDiff<SigmoidResidual> numdiff(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<SigmoidResidual>> lm(numdiff);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 20000;
  VectorXd p(3);
  p << 1.05, 4.0 / std::max(half_x, 1e-6), half_x;
  const auto status = lm.minimize(p);
  using Status = Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      !p.allFinite() || !(p(0) > 0.0)) {
    throw ConvergenceError("sigmoid fit did not converge (status " +
                           std::to_string(static_cast<int>(status)) + ")");
  }
  return {p(0) * y_scale, p(1) / x_scale, p(2) * x_scale};
}

QuadraticBaseline fit_quadratic(const HarvesterCurve& curve) {
  const auto n = static_cast<Eigen::Index>(curve.size());
  if (n < 3) throw ValidationError("quadratic fit needs at least three points");
  const double s = curve.saturation_mw();
  MatrixXd a(n, 3);
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = curve.points()[static_cast<std::size_t>(i)];
    const double u = p.input_mw / s;
    a(i, 0) = u * u;
    a(i, 1) = u;
    a(i, 2) = 1.0;
    y(i) = p.output_mw;
  }
  const VectorXd c = a.colPivHouseholderQr().solve(y);
  return {c(0) / (s * s), c(1) / s, c(2)};
}

HarvesterModel fit_baseline(const HarvesterCurve& curve, BaselineKind kind) {
  const double sen = curve.sensitivity_mw();
  const double sat = curve.saturation_mw();
  const auto regressor = [&](double x) {
    switch (kind) {
      case BaselineKind::kLinear:
        return x;
      case BaselineKind::kConstantLinear:
        return std::max(x - sen, 0.0);
      case BaselineKind::kConstantLinearConstant:
        return std::clamp(x, sen, sat) - sen;
    }
    return 0.0;
  };
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : curve.points()) {
    const double gx = regressor(p.input_mw);
    num += gx * p.output_mw;
    den += gx * gx;
  }
  const double eta = den > 0.0 ? num / den : 0.0;
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw FitInfeasibleError("least-squares efficiency " + std::to_string(eta) +
                             " is outside [0, 1)");
  }
  switch (kind) {
    case BaselineKind::kLinear:
      return LinearBaseline{eta};
    case BaselineKind::kConstantLinear:
      return ConstantLinearBaseline{eta, sen};
    case BaselineKind::kConstantLinearConstant:
      return ConstantLinearConstantBaseline{eta, sen, sat};
  }
  return LinearBaseline{eta};
}

}  // namespace rfeh
