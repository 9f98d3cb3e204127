#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/AutoDiff>

namespace warpcheck {

using Eigen::Index;

/// First-order forward jet: value plus gradient with respect to the chart
/// coordinates.  Used to differentiate derived quantities (Christoffel
/// symbols, Lie derivatives, covariant derivatives) once more.
using Dual = Eigen::AutoDiffScalar<Eigen::VectorXd>;

/// Value, gradient and Hessian of a scalar at a point.
///
/// Arithmetic propagates truncated second-order Taylor expansions.  The
/// Hessian is mirrored from its upper triangle after every operation, so it
/// is exactly symmetric rather than symmetric up to rounding.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  Jet2() = default;
  Jet2(double v, Eigen::VectorXd g, Eigen::MatrixXd h);

  static Jet2 constant(double v, Index n);
  static Jet2 variable(double v, Index n, Index i);

  Index size() const { return grad.size(); }

  /// First partial along coordinate `i`, carried as a first-order jet.
  Dual partial(Index i) const;
  Dual as_dual() const;
};

Jet2 operator-(const Jet2& a);
Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

/// Compose a univariate function with `a`, given its value and first two
/// derivatives at `a.value`.
Jet2 compose(const Jet2& a, double f0, double f1, double f2);

/// Compose a bivariate function F(a, b) given F and its partials up to order 2.
struct Partials2 {
  double f = 0, fa = 0, fb = 0, faa = 0, fab = 0, fbb = 0;
};
Jet2 compose(const Jet2& a, const Jet2& b, const Partials2& p);

}  // namespace warpcheck
