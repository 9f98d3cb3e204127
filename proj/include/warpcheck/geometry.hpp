#pragma once

#include "warpcheck/manifold.hpp"
#include "warpcheck/tensor.hpp"

namespace warpcheck {

struct MetricAt {
  Eigen::MatrixXd g;
  Eigen::MatrixXd ginv;
};

/// Symmetric (0,2) tensor at a point, with the largest intermediate term
/// that went into it.
struct SymTensorAt {
  Eigen::MatrixXd value;
  double scale = 0.0;
};

/// A scalar with the largest intermediate term that went into it.
struct Measured {
  double value = 0.0;
  double scale = 0.0;
};

/// Metric, inverse and connection at one point, with one extra derivative
/// carried on each so second covariant derivatives and curvature come out
/// of the same cache.
class LocalGeometry {
 public:
  /// Throws DomainError outside the domain, SingularMetricError when
  /// |det g| < 1e-12·(max|g_ij|)^n.
  LocalGeometry(const Manifold& m, Point p);

  const Manifold& manifold() const { return *manifold_; }
  const Point& point() const { return point_; }
  Index dim() const { return point_.size(); }

  const TensorSample<Dual>& metric_jets() const { return metric_; }
  const Eigen::MatrixXd& g() const { return g_; }
  const Eigen::MatrixXd& ginv() const { return ginv_; }
  const Christoffel<Dual>& gamma_jets() const { return gamma_jets_; }
  const Christoffel<double>& gamma() const { return gamma_; }

  VectorSample<Dual> jets(const VectorFieldSpec& v) const;
  VectorSample<double> sample(const VectorFieldSpec& v) const;

  Eigen::VectorXd covariant(const Eigen::VectorXd& x, const VectorSample<double>& y) const;
  /// D_X Y as a field sample: value and Jacobian at the point.
  VectorSample<double> covariant_field(const VectorSample<Dual>& x, const VectorSample<Dual>& y) const;
  /// Covariant Jacobian, column i is D_{∂_i} ζ.
  Eigen::MatrixXd nabla(const VectorSample<double>& zeta) const;
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

  Riemann riemann() const { return warpcheck::riemann(g_, gamma_jets_); }

 private:
  const Manifold* manifold_;
  Point point_;
  TensorSample<Dual> metric_;
  Eigen::MatrixXd g_;
  Eigen::MatrixXd ginv_;
  Christoffel<Dual> gamma_jets_;
  Christoffel<double> gamma_;
};

/// Throws SingularMetricError when g fails the scale-aware determinant test.
void require_nonsingular(const Eigen::MatrixXd& g, const std::string& where);

MetricAt metric_at(const Manifold& m, const Point& p);
Christoffel<double> christoffel_at(const Manifold& m, const Point& p);
Eigen::VectorXd covariant_derivative_at(const Manifold& m, const VectorFieldSpec& x,
                                        const VectorFieldSpec& y, const Point& p);
Eigen::VectorXd lie_bracket_at(const VectorFieldSpec& x, const VectorFieldSpec& y, const Point& p);

/// L_ζ g by the coordinate formula; needs no inverse metric.
SymTensorAt lie_metric_at(const Manifold& m, const VectorFieldSpec& zeta, const Point& p);
/// g(D_X ζ, Y) + g(X, D_Y ζ), the connection form of the same quantity.
Measured lie_metric_via_connection_at(const LocalGeometry& geo, const VectorFieldSpec& zeta,
                                      const VectorFieldSpec& x, const VectorFieldSpec& y);

/// L_ζ L_ζ g.
SymTensorAt lie2_metric_at(const Manifold& m, const VectorFieldSpec& zeta, const Point& p);
/// Connection form of (L_ζL_ζg)(X,Y) = second - bracket + cross with
///   second  = g(D_ζ D_X ζ, Y) + g(X, D_ζ D_Y ζ)
///   bracket = g(D_[ζ,X] ζ, Y) + g(X, D_[ζ,Y] ζ)
///   cross   = 2 g(D_X ζ, D_Y ζ)
struct Lie2Pieces {
  double second = 0.0;
  double bracket = 0.0;
  double cross = 0.0;
  double scale = 0.0;

  /// Exchanging X and Y gives the identical double.
  double value() const { return (second - bracket) + cross; }
};
Lie2Pieces lie2_pieces(const LocalGeometry& geo, const VectorFieldSpec& zeta, const VectorFieldSpec& x,
                       const VectorFieldSpec& y);

Measured lie2_via_connection_at(const LocalGeometry& geo, const VectorFieldSpec& zeta,
                                const VectorFieldSpec& x, const VectorFieldSpec& y);
Measured lie2_via_connection_at(const Manifold& m, const VectorFieldSpec& zeta, const VectorFieldSpec& x,
                                const VectorFieldSpec& y, const Point& p);

Riemann riemann_at(const Manifold& m, const Point& p);
Eigen::MatrixXd ricci_at(const Manifold& m, const Point& p);

/// R(u,v,v,u) / (g(u,u) g(v,v) - g(u,v)²).  DegeneratePlaneError when the
/// denominator is below 1e-12 of its larger term.
double sectional(const LocalGeometry& geo, const Riemann& r, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v);
double sectional_at(const Manifold& m, const Point& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// (∇h)^k = g^kl ∂_l h.
Eigen::VectorXd gradient_at(const Manifold& m, const Expr& h, const Point& p);

}  // namespace warpcheck
