#include "warpcheck/warped.hpp"

#include <algorithm>
#include <cmath>

#include "warpcheck/errors.hpp"

namespace warpcheck {

namespace {

std::shared_ptr<const CoordNames> joined_chart(const Manifold& base, const Manifold& fiber) {
  CoordNames names = base.coords();
  for (const auto& c : fiber.coords()) {
    if (std::find(names.begin(), names.end(), c) != names.end())
      throw DimensionError("coordinate '" + c + "' appears in both '" + base.name() + "' and '" + fiber.name() + "'");
    names.push_back(c);
  }
  return std::make_shared<const CoordNames>(std::move(names));
}

std::vector<Index> offset_map(Index size, Index offset) {
  std::vector<Index> map(static_cast<std::size_t>(size));
  for (Index i = 0; i < size; ++i) map[static_cast<std::size_t>(i)] = offset + i;
  return map;
}

double sum_abs_max(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::fabs(x));
  return m;
}

/// Closed-form ingredients at one product point: both factor geometries,
/// the unsigned fiber metric g₂, and the 2-jet of f.
struct Factors {
  Factors(const WarpedProduct& w, const Point& p)
      : w(w), base(w.base(), w.base_point(p)), fiber(w.fiber(), w.fiber_point(p)), eps(w.fiber_sign()) {
    if (p.size() != w.product().dim()) throw DimensionError("point dimension does not match the product chart");
    const Jet2 jet = eval_jet2(w.warping(), base.point());
    if (!(jet.value > 0.0))
      throw NonpositiveWarpingError("warping function is " + std::to_string(jet.value) + " at a sampled point");
    f = jet.value;
    df = jet.grad;
    ddf = jet.hess;
    grad = base.ginv() * df;
  }

  double ghat(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const { return eps * fiber.inner(u, v); }
  double product_inner(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2, const Eigen::VectorXd& v1,
                       const Eigen::VectorXd& v2) const {
    return base.inner(u1, v1) + f * f * ghat(u2, v2);
  }

  const WarpedProduct& w;
  LocalGeometry base;
  LocalGeometry fiber;
  double eps;
  double f = 0.0;
  Eigen::VectorXd df;
  Eigen::MatrixXd ddf;
  Eigen::VectorXd grad;
};

struct SplitAt {
  VectorSample<double> base;
  VectorSample<double> fiber;
};

SplitAt sample(const Factors& at, const SplitField& v) { return {at.base.sample(v.base), at.fiber.sample(v.fiber)}; }

struct SplitVector {
  Eigen::VectorXd base;
  Eigen::VectorXd fiber;
  double scale = 0.0;
};

/// D_A B by the three warped-product cases and bilinearity.
SplitVector connect(const Factors& at, const Eigen::VectorXd& a1, const Eigen::VectorXd& a2, const SplitAt& b) {
  const Eigen::VectorXd d1 = at.base.covariant(a1, b.base);
  const Eigen::VectorXd normal = -at.f * at.ghat(a2, b.fiber.value) * at.grad;
  const Eigen::VectorXd c1 = (at.df.dot(a1) / at.f) * b.fiber.value;
  const Eigen::VectorXd c2 = (at.df.dot(b.base.value) / at.f) * a2;
  const Eigen::VectorXd d2 = at.fiber.covariant(a2, b.fiber);
  SplitVector out{d1 + normal, c1 + c2 + d2, 0.0};
  out.scale = std::max({max_abs(d1), max_abs(normal), max_abs(c1), max_abs(c2), max_abs(d2)});
  return out;
}

Eigen::VectorXd stack(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

WarpedProduct::WarpedProduct(Manifold base, Manifold fiber, Expr warping, int fiber_sign)
    : base_(std::move(base)), fiber_(std::move(fiber)), warping_(std::move(warping)), sign_(fiber_sign) {
  if (sign_ != 1 && sign_ != -1) throw DimensionError("fiber sign must be +1 or -1");
  if (!warping_.valid() || !same_chart(warping_.coords(), base_.coords()))
    throw DimensionError("warping function must be defined on the base chart of '" + base_.name() + "'");
  auto chart = joined_chart(base_, fiber_);
  const Index m = base_.dim();
  const Index n = fiber_.dim();
  base_map_ = offset_map(m, 0);
  fiber_map_ = offset_map(n, m);
  warping_lifted_ = remap(warping_, base_map_, chart);

  const Expr scaled = Expr::constant(static_cast<double>(sign_), chart) * pow(warping_lifted_, 2.0);
  std::vector<Expr> upper;
  for (Index i = 0; i < m + n; ++i)
    for (Index j = i; j < m + n; ++j) {
      if (j < m)
        upper.push_back(remap(base_.metric(i, j), base_map_, chart));
      else if (i < m)
        upper.push_back(Expr::constant(0.0, chart));
      else {
        const Expr& e = fiber_.metric(i - m, j - m);
        upper.push_back(e.is_zero() ? Expr::constant(0.0, chart) : scaled * remap(e, fiber_map_, chart));
      }
    }
  product_ = Manifold(base_.name() + "_x_" + fiber_.name(), chart, std::move(upper));
  for (const auto& c : base_.constraints()) product_ = product_.with_constraint(lift_base(c.expr), c.label);
  for (const auto& c : fiber_.constraints()) product_ = product_.with_constraint(lift_fiber(c.expr), c.label);
  product_ = product_.with_constraint(warping_lifted_, "warping function > 0");
}

Point WarpedProduct::join(const Point& base, const Point& fiber) const { return stack(base, fiber); }

Expr WarpedProduct::lift_base(const Expr& e) const { return remap(e, base_map_, product_.coords_ptr()); }
Expr WarpedProduct::lift_fiber(const Expr& e) const { return remap(e, fiber_map_, product_.coords_ptr()); }

SplitField split_field(const WarpedProduct& w, VectorFieldSpec base, VectorFieldSpec fiber) {
  if (!same_chart(base.coords(), w.base().coords()))
    throw DimensionError("base part of a split field must live on the base chart");
  if (!same_chart(fiber.coords(), w.fiber().coords()))
    throw DimensionError("fiber part of a split field must live on the fiber chart");
  return {std::move(base), std::move(fiber)};
}

SplitField base_only(const WarpedProduct& w, VectorFieldSpec base) {
  return split_field(w, std::move(base), VectorFieldSpec::zero(w.fiber().coords_ptr()));
}

SplitField fiber_only(const WarpedProduct& w, VectorFieldSpec fiber) {
  return split_field(w, VectorFieldSpec::zero(w.base().coords_ptr()), std::move(fiber));
}

SplitField coordinate_split(const WarpedProduct& w, Index i) {
  if (i < w.base_dim()) return base_only(w, VectorFieldSpec::coordinate(w.base().coords_ptr(), i));
  return fiber_only(w, VectorFieldSpec::coordinate(w.fiber().coords_ptr(), i - w.base_dim()));
}

VectorFieldSpec lift(const WarpedProduct& w, const SplitField& v) {
  std::vector<Expr> parts;
  for (const Expr& e : v.base.components()) parts.push_back(w.lift_base(e));
  for (const Expr& e : v.fiber.components()) parts.push_back(w.lift_fiber(e));
  return VectorFieldSpec(w.product().coords_ptr(), std::move(parts));
}

Residual make_residual(double lhs, double rhs, double scale) {
  return {lhs, rhs, std::fabs(lhs - rhs), std::max({scale, std::fabs(lhs), std::fabs(rhs)})};
}

VectorAt connection_closed_form(const WarpedProduct& w, const SplitField& x, const SplitField& y, const Point& p) {
  const Factors at(w, p);
  const SplitAt xs = sample(at, x);
  const SplitVector d = connect(at, xs.base.value, xs.fiber.value, sample(at, y));
  return {stack(d.base, d.fiber), d.scale};
}

Residual dxz_inner_closed_form(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const Point& p) {
  const Factors at(w, p);
  const SplitAt z = sample(at, zeta);
  const SplitAt xs = sample(at, x);
  const double t1 = at.base.inner(at.base.covariant(xs.base.value, z.base), xs.base.value);
  const double t2 = at.f * at.f * at.ghat(at.fiber.covariant(xs.fiber.value, z.fiber), xs.fiber.value);
  const double t3 = at.f * at.df.dot(z.base.value) * at.ghat(xs.fiber.value, xs.fiber.value);

  const LocalGeometry geo(w.product(), p);
  const Eigen::VectorXd xv = stack(xs.base.value, xs.fiber.value);
  const Eigen::VectorXd dxz = geo.covariant(xv, geo.sample(lift(w, zeta)));
  const double lhs = geo.inner(dxz, xv);
  return make_residual(lhs, t1 + t2 + t3, sum_abs_max({t1, t2, t3, max_abs(dxz) * max_abs(xv) * max_abs(geo.g())}));
}

Residual lie_closed_form(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const SplitField& y,
                         const Point& p) {
  const Factors at(w, p);
  const SplitAt xs = sample(at, x);
  const SplitAt ys = sample(at, y);
  const Eigen::VectorXd z1 = at.base.sample(zeta.base).value;
  const SymTensorAt l1 = lie_metric_at(w.base(), zeta.base, at.base.point());
  const SymTensorAt l2 = lie_metric_at(w.fiber(), zeta.fiber, at.fiber.point());
  const double t1 = inner<double>(l1.value, xs.base.value, ys.base.value);
  const double t2 = at.f * at.f * at.eps * inner<double>(l2.value, xs.fiber.value, ys.fiber.value);
  const double t3 = 2.0 * at.f * at.df.dot(z1) * at.ghat(xs.fiber.value, ys.fiber.value);

  const Eigen::VectorXd xv = stack(xs.base.value, xs.fiber.value);
  const Eigen::VectorXd yv = stack(ys.base.value, ys.fiber.value);
  const SymTensorAt l = lie_metric_at(w.product(), lift(w, zeta), p);
  const double lhs = inner<double>(l.value, xv, yv);
  const double scale = std::max(sum_abs_max({t1, t2, t3}), std::max({l.scale, l1.scale, l2.scale * at.f * at.f}) *
                                                               max_abs(xv) * max_abs(yv));
  return make_residual(lhs, t1 + t2 + t3, scale);
}

Residual lie2_closed_form(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const SplitField& y,
                          const Point& p, Lie2Form form) {
  const Factors at(w, p);
  const SplitAt xs = sample(at, x);
  const SplitAt ys = sample(at, y);
  const VectorSample<double> z1 = at.base.sample(zeta.base);
  const SymTensorAt ll1 = lie2_metric_at(w.base(), zeta.base, at.base.point());
  const SymTensorAt ll2 = lie2_metric_at(w.fiber(), zeta.fiber, at.fiber.point());
  const SymTensorAt l2 = lie_metric_at(w.fiber(), zeta.fiber, at.fiber.point());

  const double zf = at.df.dot(z1.value);
  const double zzf = z1.value.dot(at.ddf * z1.value) + at.df.dot(z1.jacobian * z1.value);
  const double g2xy = at.ghat(xs.fiber.value, ys.fiber.value);
  const double f = at.f;

  const double t1 = inner<double>(ll1.value, xs.base.value, ys.base.value);
  const double t2 = f * f * at.eps * inner<double>(ll2.value, xs.fiber.value, ys.fiber.value);
  const double t3 = 4.0 * f * zf * at.eps * inner<double>(l2.value, xs.fiber.value, ys.fiber.value);
  const double t4 = form == Lie2Form::second_derivative ? 2.0 * f * zzf * g2xy : 2.0 * zf * zf * g2xy;
  const double t5 = 2.0 * zf * zf * g2xy;

  const Eigen::VectorXd xv = stack(xs.base.value, xs.fiber.value);
  const Eigen::VectorXd yv = stack(ys.base.value, ys.fiber.value);
  const SymTensorAt ll = lie2_metric_at(w.product(), lift(w, zeta), p);
  const double lhs = inner<double>(ll.value, xv, yv);
  const double scale =
      std::max(sum_abs_max({t1, t2, t3, t4, t5}),
               std::max({ll.scale, ll1.scale, ll2.scale * f * f, 4.0 * std::fabs(f * zf) * l2.scale}) * max_abs(xv) *
                   max_abs(yv));
  return make_residual(lhs, (((t1 + t2) + t3) + t4) + t5, scale);
}

Lie2Groups lie2_groups(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const SplitField& y,
                       const Point& p) {
  const Factors at(w, p);
  const SplitAt zs = sample(at, zeta);
  const SplitAt xs = sample(at, x);
  const SplitAt ys = sample(at, y);

  const LocalGeometry geo(w.product(), p);
  const Lie2Pieces pieces = lie2_pieces(geo, lift(w, zeta), lift(w, x), lift(w, y));

  const SplitVector dxz = connect(at, xs.base.value, xs.fiber.value, zs);
  const SplitVector dyz = connect(at, ys.base.value, ys.fiber.value, zs);
  const Eigen::VectorXd bx1 = lie_bracket(zs.base, xs.base);
  const Eigen::VectorXd bx2 = lie_bracket(zs.fiber, xs.fiber);
  const Eigen::VectorXd by1 = lie_bracket(zs.base, ys.base);
  const Eigen::VectorXd by2 = lie_bracket(zs.fiber, ys.fiber);
  const SplitVector dbx = connect(at, bx1, bx2, zs);
  const SplitVector dby = connect(at, by1, by2, zs);

  Lie2Groups out;
  out.second = pieces.second;
  out.bracket = pieces.bracket;
  out.cross = pieces.cross;
  out.bracket_closed = at.product_inner(dbx.base, dbx.fiber, ys.base.value, ys.fiber.value) +
                       at.product_inner(xs.base.value, xs.fiber.value, dby.base, dby.fiber);
  out.cross_closed = 2.0 * at.product_inner(dxz.base, dxz.fiber, dyz.base, dyz.fiber);
  out.scale = std::max({pieces.scale, std::fabs(out.bracket_closed), std::fabs(out.cross_closed)});
  return out;
}

double connection_trace(const LocalGeometry& geo, const VectorFieldSpec& zeta) {
  const Eigen::MatrixXd n = geo.nabla(geo.sample(zeta));
  return (geo.ginv() * n.transpose() * geo.g() * n).trace();
}

Residual trace_closed_form(const WarpedProduct& w, const SplitField& zeta, const Point& p, TraceForm form) {
  if (w.fiber_sign() != 1)
    throw SignatureUnsupportedError("trace identity is only checked for Riemannian fibers (sign +1)");
  const Factors at(w, p);
  const SplitAt z = sample(at, zeta);
  const Eigen::MatrixXd n1 = at.base.nabla(z.base);
  const Eigen::MatrixXd n2 = at.fiber.nabla(z.fiber);
  const double f = at.f;
  const double zf = at.df.dot(z.base.value);

  const double t1 = (at.base.ginv() * n1.transpose() * at.base.g() * n1).trace();
  const double t2 = (at.fiber.ginv() * n2.transpose() * at.fiber.g() * n2).trace();
  const double t3 = 2.0 * at.fiber.inner(z.fiber.value, z.fiber.value) * at.base.inner(at.grad, at.grad);
  const double t4 = static_cast<double>(w.fiber_dim()) / (f * f) * zf * zf;
  const double t5 = form == TraceForm::with_divergence ? 2.0 * (zf / f) * n2.trace() : 0.0;

  const LocalGeometry geo(w.product(), p);
  const double lhs = connection_trace(geo, lift(w, zeta));
  return make_residual(lhs, (((t1 + t2) + t3) + t4) + t5, sum_abs_max({t1, t2, t3, t4, t5}));
}

}  // namespace warpcheck
