#include "warpcheck/geometry.hpp"

#include <cmath>

#include "warpcheck/errors.hpp"

namespace warpcheck {

void require_nonsingular(const Eigen::MatrixXd& g, const std::string& where) {
  const double big = max_abs(g);
  const double det = g.determinant();
  if (big == 0.0 || !(std::fabs(det) >= 1e-12 * std::pow(big, static_cast<double>(g.rows()))))
    throw SingularMetricError("singular metric at " + where + " (det " + std::to_string(det) + ")");
}

namespace {

std::string describe(const Manifold& m, const Point& p) {
  std::string s = "'" + m.name() + "' (";
  for (Index i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += m.coords()[static_cast<std::size_t>(i)] + "=" + std::to_string(p(i));
  }
  return s + ")";
}

void require_chart(const Manifold& m, const VectorFieldSpec& v) {
  if (!same_chart(m.coords(), v.coords()))
    throw DimensionError("vector field is not on the chart of '" + m.name() + "'");
}

}  // namespace

LocalGeometry::LocalGeometry(const Manifold& m, Point p) : manifold_(&m), point_(std::move(p)) {
  m.check_domain(point_);
  metric_ = warpcheck::metric_jets(m, point_);
  g_ = value_of(metric_.value);
  require_nonsingular(g_, describe(m, point_));
  const MatrixX<Dual> ginv_jets = inverse(metric_.value);
  ginv_ = value_of(ginv_jets);
  gamma_jets_ = christoffel(metric_, ginv_jets);
  gamma_ = value_of(gamma_jets_);
}

VectorSample<Dual> LocalGeometry::jets(const VectorFieldSpec& v) const {
  require_chart(*manifold_, v);
  return field_jets(v, point_);
}

VectorSample<double> LocalGeometry::sample(const VectorFieldSpec& v) const {
  require_chart(*manifold_, v);
  return field_at(v, point_);
}

Eigen::VectorXd LocalGeometry::covariant(const Eigen::VectorXd& x, const VectorSample<double>& y) const {
  return covariant_derivative(gamma_, x, y);
}

VectorSample<double> LocalGeometry::covariant_field(const VectorSample<Dual>& x,
                                                    const VectorSample<Dual>& y) const {
  return split(covariant_derivative(gamma_jets_, x.value, y));
}

Eigen::MatrixXd LocalGeometry::nabla(const VectorSample<double>& zeta) const {
  Eigen::MatrixXd out = zeta.jacobian;
  for (Index k = 0; k < dim(); ++k) out.row(k) += (gamma_[k] * zeta.value).transpose();
  return out;
}

double LocalGeometry::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  return warpcheck::inner<double>(g_, u, v);
}

MetricAt metric_at(const Manifold& m, const Point& p) {
  m.check_domain(p);
  MetricAt out;
  out.g = metric_values(m, p);
  require_nonsingular(out.g, describe(m, p));
  out.ginv = inverse(out.g);
  return out;
}

Christoffel<double> christoffel_at(const Manifold& m, const Point& p) { return LocalGeometry(m, p).gamma(); }

Eigen::VectorXd covariant_derivative_at(const Manifold& m, const VectorFieldSpec& x, const VectorFieldSpec& y,
                                        const Point& p) {
  const LocalGeometry geo(m, p);
  return geo.covariant(geo.sample(x).value, geo.sample(y));
}

Eigen::VectorXd lie_bracket_at(const VectorFieldSpec& x, const VectorFieldSpec& y, const Point& p) {
  if (!same_chart(x.coords(), y.coords())) throw DimensionError("lie bracket of fields on different charts");
  return lie_bracket(field_at(x, p), field_at(y, p));
}

SymTensorAt lie_metric_at(const Manifold& m, const VectorFieldSpec& zeta, const Point& p) {
  require_chart(m, zeta);
  m.check_domain(p);
  const TensorSample<double> g = value_of(metric_jets(m, p));
  const LieTerms<double> t = lie_terms(g, field_at(zeta, p));
  return {t.sum(), std::max(max_abs(t.transport), max_abs(t.stretch))};
}

Measured lie_metric_via_connection_at(const LocalGeometry& geo, const VectorFieldSpec& zeta,
                                      const VectorFieldSpec& x, const VectorFieldSpec& y) {
  const VectorSample<double> z = geo.sample(zeta);
  const Eigen::VectorXd xv = geo.sample(x).value;
  const Eigen::VectorXd yv = geo.sample(y).value;
  const double a = geo.inner(geo.covariant(xv, z), yv);
  const double b = geo.inner(xv, geo.covariant(yv, z));
  return {a + b, std::max(std::fabs(a), std::fabs(b))};
}

SymTensorAt lie2_metric_at(const Manifold& m, const VectorFieldSpec& zeta, const Point& p) {
  require_chart(m, zeta);
  m.check_domain(p);
  const VectorSample<Dual> zj = field_jets(zeta, p);
  const LieTerms<Dual> first = lie_terms(metric_jets(m, p), zj);
  const TensorSample<double> h = split(first.sum());
  const VectorSample<double> z = value_of(zj);
  const LieTerms<double> second = lie_terms(h, z);

  double scale = std::max(max_abs(second.transport), max_abs(second.stretch));
  scale = std::max(scale, std::max(max_abs(value_of(first.transport)), max_abs(value_of(first.stretch))) *
                              max_abs(z.jacobian));
  for (Index l = 0; l < m.dim(); ++l)
    scale = std::max(scale, std::fabs(z.value(l)) * std::max(max_abs(partial_of(first.transport, l)),
                                                             max_abs(partial_of(first.stretch, l))));
  return {second.sum(), scale};
}

Lie2Pieces lie2_pieces(const LocalGeometry& geo, const VectorFieldSpec& zeta, const VectorFieldSpec& x,
                       const VectorFieldSpec& y) {
  const VectorSample<Dual> zj = geo.jets(zeta);
  const VectorSample<Dual> xj = geo.jets(x);
  const VectorSample<Dual> yj = geo.jets(y);
  const VectorSample<double> z = value_of(zj);
  const VectorSample<double> xs = value_of(xj);
  const VectorSample<double> ys = value_of(yj);

  const VectorSample<double> dxz = geo.covariant_field(xj, zj);
  const VectorSample<double> dyz = geo.covariant_field(yj, zj);
  const Eigen::VectorXd sx = geo.covariant(z.value, dxz);
  const Eigen::VectorXd sy = geo.covariant(z.value, dyz);
  const Eigen::VectorXd bx = geo.covariant(lie_bracket(z, xs), z);
  const Eigen::VectorXd by = geo.covariant(lie_bracket(z, ys), z);

  const double s1 = geo.inner(sx, ys.value);
  const double s2 = geo.inner(xs.value, sy);
  const double b1 = geo.inner(bx, ys.value);
  const double b2 = geo.inner(xs.value, by);
  Lie2Pieces out;
  out.second = s1 + s2;
  out.bracket = b1 + b2;
  out.cross = 2.0 * geo.inner(dxz.value, dyz.value);
  const double gmax = max_abs(geo.g());
  out.scale = std::max({std::fabs(s1), std::fabs(s2), std::fabs(b1), std::fabs(b2), std::fabs(out.cross),
                        gmax * max_abs(sx) * max_abs(ys.value), gmax * max_abs(sy) * max_abs(xs.value),
                        gmax * max_abs(bx) * max_abs(ys.value), gmax * max_abs(by) * max_abs(xs.value)});
  return out;
}

Measured lie2_via_connection_at(const LocalGeometry& geo, const VectorFieldSpec& zeta, const VectorFieldSpec& x,
                                const VectorFieldSpec& y) {
  const Lie2Pieces pieces = lie2_pieces(geo, zeta, x, y);
  return {pieces.value(), pieces.scale};
}

Measured lie2_via_connection_at(const Manifold& m, const VectorFieldSpec& zeta, const VectorFieldSpec& x,
                                const VectorFieldSpec& y, const Point& p) {
  return lie2_via_connection_at(LocalGeometry(m, p), zeta, x, y);
}

Riemann riemann_at(const Manifold& m, const Point& p) { return LocalGeometry(m, p).riemann(); }

Eigen::MatrixXd ricci_at(const Manifold& m, const Point& p) {
  const LocalGeometry geo(m, p);
  return ricci(geo.riemann(), geo.ginv());
}

double sectional(const LocalGeometry& geo, const Riemann& r, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double uu = geo.inner(u, u);
  const double vv = geo.inner(v, v);
  const double uv = geo.inner(u, v);
  const double den = uu * vv - uv * uv;
  const double size = std::max(std::fabs(uu * vv), uv * uv);
  if (!(std::fabs(den) > 1e-12 * size)) throw DegeneratePlaneError("degenerate plane for sectional curvature");
  return curvature(r, u, v, v, u) / den;
}

double sectional_at(const Manifold& m, const Point& p, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const LocalGeometry geo(m, p);
  if (u.size() != geo.dim() || v.size() != geo.dim()) throw DimensionError("sectional_at: vector dimension");
  return sectional(geo, geo.riemann(), u, v);
}

Eigen::VectorXd gradient_at(const Manifold& m, const Expr& h, const Point& p) {
  if (!same_chart(m.coords(), h.coords())) throw DimensionError("gradient of a function on another chart");
  const MetricAt mp = metric_at(m, p);
  return mp.ginv * eval_jet2(h, p).grad;
}

}  // namespace warpcheck
