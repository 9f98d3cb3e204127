#include "warpcheck/killing.hpp"

#include <algorithm>
#include <cmath>

#include "warpcheck/errors.hpp"

namespace warpcheck {

namespace {

void require_chart(const Manifold& m, const VectorFieldSpec& v) {
  if (!same_chart(m.coords(), v.coords()))
    throw DimensionError("vector field is not on the chart of '" + m.name() + "'");
}

void require_chart(const Manifold& m, const Expr& h) {
  if (!same_chart(m.coords(), h.coords())) throw DimensionError("function is not on the chart of '" + m.name() + "'");
}

std::vector<VectorFieldSpec> with_coordinates(const Manifold& m, const std::vector<VectorFieldSpec>& fields) {
  std::vector<VectorFieldSpec> all;
  for (Index i = 0; i < m.dim(); ++i) all.push_back(VectorFieldSpec::coordinate(m.coords_ptr(), i));
  for (const auto& v : fields) {
    require_chart(m, v);
    all.push_back(v);
  }
  return all;
}

}  // namespace

CheckResult torsion_defect(const Manifold& m, const std::vector<VectorFieldSpec>& fields, const SampleSpec& spec,
                           const Tolerance& tol) {
  const auto all = with_coordinates(m, fields);
  return sweep("torsion", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const LocalGeometry geo(m, p);
    std::vector<VectorSample<double>> s;
    for (const auto& v : all) s.push_back(geo.sample(v));
    Sample out;
    for (const auto& x : s)
      for (const auto& y : s) {
        const Eigen::VectorXd dxy = geo.covariant(x.value, y);
        const Eigen::VectorXd dyx = geo.covariant(y.value, x);
        const Eigen::VectorXd bracket = y.jacobian * x.value - x.jacobian * y.value;
        out.residual = std::max(out.residual, max_abs(dxy - dyx - bracket));
        out.scale = std::max({out.scale, max_abs(dxy), max_abs(dyx), max_abs(bracket)});
      }
    return out;
  });
}

CheckResult compatibility_defect(const Manifold& m, const std::vector<VectorFieldSpec>& fields,
                                 const SampleSpec& spec, const Tolerance& tol) {
  const auto all = with_coordinates(m, fields);
  return sweep("compatibility", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const LocalGeometry geo(m, p);
    const Index n = geo.dim();
    std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const Eigen::VectorXd grad = gradient(geo.metric_jets().value(i, j), n);
        for (Index l = 0; l < n; ++l) dg[static_cast<std::size_t>(l)](i, j) = grad(l);
      }
    std::vector<VectorSample<double>> s;
    for (const auto& v : all) s.push_back(geo.sample(v));
    const Eigen::MatrixXd& g = geo.g();
    Sample out;
    for (const auto& x : s)
      for (const auto& y : s)
        for (const auto& z : s) {
          const Eigen::VectorXd dy = y.jacobian * x.value;
          const Eigen::VectorXd dz = z.jacobian * x.value;
          double metric_part = 0.0;
          for (Index l = 0; l < n; ++l)
            metric_part += x.value(l) * y.value.dot(dg[static_cast<std::size_t>(l)] * z.value);
          const double lhs = metric_part + dy.dot(g * z.value) + y.value.dot(g * dz);
          const double a = geo.inner(geo.covariant(x.value, y), z.value);
          const double b = geo.inner(y.value, geo.covariant(x.value, z));
          out.residual = std::max(out.residual, std::fabs(lhs - a - b));
          out.scale = std::max({out.scale, std::fabs(metric_part), std::fabs(lhs), std::fabs(a), std::fabs(b)});
        }
    return out;
  });
}

double CurvatureIdentity::scale() const {
  return std::max({std::fabs(curvature), std::fabs(stretch), std::fabs(drift)});
}

CheckResult killing_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                           const Tolerance& tol) {
  require_chart(m, zeta);
  return sweep("killing", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const SymTensorAt l = lie_metric_at(m, zeta, p);
    return Sample{max_abs(l.value), l.scale};
  });
}

CheckResult two_killing_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                               const Tolerance& tol) {
  require_chart(m, zeta);
  return sweep("two-killing", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const SymTensorAt l = lie2_metric_at(m, zeta, p);
    return Sample{max_abs(l.value), l.scale};
  });
}

CheckResult parallel_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                            const Tolerance& tol) {
  require_chart(m, zeta);
  return sweep("parallel", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const LocalGeometry geo(m, p);
    const VectorSample<double> z = geo.sample(zeta);
    const Eigen::MatrixXd n = geo.nabla(z);
    return Sample{max_abs(n), std::max(max_abs(z.jacobian), max_abs(n - z.jacobian))};
  });
}

CheckResult geodesic_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                            const Tolerance& tol) {
  require_chart(m, zeta);
  return sweep("geodesic", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const LocalGeometry geo(m, p);
    const VectorSample<double> z = geo.sample(zeta);
    const Eigen::VectorXd flow = z.jacobian * z.value;
    const Eigen::VectorXd d = geo.covariant(z.value, z);
    return Sample{max_abs(d), std::max(max_abs(flow), max_abs(d - flow))};
  });
}

CurvatureIdentity curvature_identity_at(const LocalGeometry& geo, const Riemann& r, const VectorFieldSpec& zeta,
                                        const VectorFieldSpec& x) {
  const VectorSample<Dual> zj = geo.jets(zeta);
  const VectorSample<double> z = value_of(zj);
  const Eigen::VectorXd xv = geo.sample(x).value;
  const VectorSample<double> flow = geo.covariant_field(zj, zj);
  const Eigen::VectorXd dxz = geo.covariant(xv, z);
  CurvatureIdentity out;
  out.curvature = curvature(r, z.value, xv, xv, z.value);
  out.stretch = geo.inner(dxz, dxz);
  out.drift = geo.inner(geo.covariant(xv, flow), xv);
  return out;
}

CheckResult curvature_identity_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                                      const Tolerance& tol) {
  require_chart(m, zeta);
  CheckResult premise = two_killing_defect(m, zeta, spec, tol);
  CheckResult out = sweep("curvature-identity", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const LocalGeometry geo(m, p);
    const Riemann r = geo.riemann();
    Sample s;
    for (Index i = 0; i < m.dim(); ++i) {
      const CurvatureIdentity c = curvature_identity_at(geo, r, zeta, VectorFieldSpec::coordinate(m.coords_ptr(), i));
      s.residual = std::max(s.residual, std::fabs(c.residual()));
      s.scale = std::max(s.scale, c.scale());
    }
    return s;
  });
  if (premise.status != Status::pass) {
    out.status = Status::informational;
    out.note = "field is not 2-Killing at the samples";
  }
  out.parts.push_back(std::move(premise));
  return out;
}

CheckResult ricci_nonpositive(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                              const Tolerance& tol) {
  require_chart(m, zeta);
  return sweep("ricci-nonpositive", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const LocalGeometry geo(m, p);
    const Eigen::VectorXd z = geo.sample(zeta).value;
    const Eigen::MatrixXd ric = ricci(geo.riemann(), geo.ginv());
    const double v = inner<double>(ric, z, z);
    return Sample{std::max(0.0, v), max_abs(ric) * max_abs(z) * max_abs(z)};
  });
}

CheckResult constant_defect(const Manifold& m, const Expr& h, const SampleSpec& spec, const Tolerance& tol) {
  require_chart(m, h);
  return sweep("constant", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const Jet2 j = eval_jet2(h, p);
    return Sample{max_abs(j.grad), std::fabs(j.value)};
  });
}

CheckResult derivative_defect(const Manifold& m, const VectorFieldSpec& zeta, const Expr& h, const SampleSpec& spec,
                              const Tolerance& tol) {
  require_chart(m, zeta);
  require_chart(m, h);
  return sweep("annihilates", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    const Eigen::VectorXd grad = eval_jet2(h, p).grad;
    const Eigen::VectorXd z = field_values(zeta, p);
    return Sample{grad.dot(z), max_abs(grad.cwiseProduct(z))};
  });
}

CheckResult zero_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec, const Tolerance& tol) {
  require_chart(m, zeta);
  return sweep("vanishes", sample_points(spec, m), m.coords(), tol, [&](const Point& p) {
    return Sample{max_abs(field_values(zeta, p)), 0.0};
  });
}

namespace {

CheckResult labelled(CheckResult r, const std::string& label) {
  r.name += "(" + label + ")";
  return r;
}

}  // namespace

CheckResult check_parallel_theorem(const WarpedProduct& w, const SplitField& zeta, const SampleSpec& spec,
                                   int variant, const Tolerance& tol) {
  const Manifold& base = w.base();
  const Manifold& fiber = w.fiber();
  validate(spec, w.product().dim());
  const SampleSpec bs = sub_spec(spec, 0, w.base_dim());
  const SampleSpec fs = sub_spec(spec, w.base_dim(), w.fiber_dim());

  std::vector<CheckResult> premises;
  switch (variant) {
    case 1:
      premises.push_back(labelled(two_killing_defect(base, zeta.base, bs, tol), "base"));
      premises.push_back(labelled(two_killing_defect(fiber, zeta.fiber, fs, tol), "fiber"));
      premises.push_back(labelled(ricci_nonpositive(base, zeta.base, bs, tol), "base"));
      premises.push_back(labelled(ricci_nonpositive(fiber, zeta.fiber, fs, tol), "fiber"));
      premises.push_back(labelled(constant_defect(base, w.warping(), bs, tol), "warping"));
      break;
    case 2:
      premises.push_back(labelled(zero_defect(fiber, zeta.fiber, fs, tol), "fiber"));
      premises.push_back(labelled(two_killing_defect(base, zeta.base, bs, tol), "base"));
      premises.push_back(labelled(ricci_nonpositive(base, zeta.base, bs, tol), "base"));
      premises.push_back(labelled(derivative_defect(base, zeta.base, w.warping(), bs, tol), "warping"));
      break;
    case 3:
      premises.push_back(labelled(zero_defect(base, zeta.base, bs, tol), "base"));
      premises.push_back(labelled(two_killing_defect(fiber, zeta.fiber, fs, tol), "fiber"));
      premises.push_back(labelled(ricci_nonpositive(fiber, zeta.fiber, fs, tol), "fiber"));
      premises.push_back(labelled(constant_defect(base, w.warping(), bs, tol), "warping"));
      break;
    default: throw ConfigError("parallel theorem variant must be 1, 2 or 3");
  }
  return implication("parallel-theorem-" + std::to_string(variant), std::move(premises),
                     [&] { return parallel_defect(w.product(), lift(w, zeta), spec, tol); });
}

CheckResult sectional_sign_check(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                                 const Tolerance& tol) {
  require_chart(m, zeta);
  std::vector<CheckResult> premises;
  premises.push_back(two_killing_defect(m, zeta, spec, tol));
  return implication("sectional-sign", std::move(premises), [&] {
    const std::vector<Point> points = sample_points(spec, m);
    CheckResult identity = sweep("curvature-balance", points, m.coords(), tol, [&](const Point& p) {
      const LocalGeometry geo(m, p);
      const Riemann r = geo.riemann();
      Sample s;
      for (Index i = 0; i < m.dim(); ++i) {
        const CurvatureIdentity c = curvature_identity_at(geo, r, zeta, VectorFieldSpec::coordinate(m.coords_ptr(), i));
        s.residual = std::max(s.residual, std::fabs(c.residual()));
        s.scale = std::max(s.scale, c.scale());
      }
      return s;
    });

    std::vector<CheckResult> gate;
    gate.push_back(geodesic_defect(m, zeta, spec, tol));
    std::size_t planes = 0;
    CheckResult sign = implication("sign", std::move(gate), [&] {
      CheckResult r = sweep("sign", points, m.coords(), tol, [&](const Point& p) {
        const LocalGeometry geo(m, p);
        const Riemann rm = geo.riemann();
        const Eigen::VectorXd z = geo.sample(zeta).value;
        Sample s;
        for (Index i = 0; i < m.dim(); ++i) {
          const Eigen::VectorXd x = Eigen::VectorXd::Unit(m.dim(), i);
          try {
            const double k = sectional(geo, rm, z, x);
            s.residual = std::max(s.residual, -k);
            s.scale = std::max(s.scale, std::fabs(k));
          } catch (const DegeneratePlaneError&) {
          }
        }
        return s;
      });
      for (const Point& p : points) {
        const LocalGeometry geo(m, p);
        const Eigen::VectorXd z = geo.sample(zeta).value;
        for (Index i = 0; i < m.dim(); ++i) {
          const Eigen::VectorXd x = Eigen::VectorXd::Unit(m.dim(), i);
          const double uu = geo.inner(z, z), vv = geo.inner(x, x), uv = geo.inner(z, x);
          if (std::fabs(uu * vv - uv * uv) > 1e-12 * std::max(std::fabs(uu * vv), uv * uv)) ++planes;
        }
      }
      if (planes == 0) r.note = "no nondegenerate plane through the field at the samples";
      return r;
    });

    CheckResult out;
    if (identity.status == Status::fail || sign.status == Status::fail)
      out = sign.status == Status::fail ? sign : identity;
    else
      out = sign.status == Status::pass ? sign : identity;
    out.status = identity.status == Status::fail || sign.status == Status::fail ? Status::fail
                 : sign.status == Status::pass                                  ? Status::pass
                                                                                : Status::hypotheses_not_met;
    if (out.status == Status::hypotheses_not_met) out.note = "sign branch: " + sign.note;
    out.parts = {std::move(identity), std::move(sign)};
    return out;
  });
}

CheckResult ode_2killing_residual(const Expr& u, const SampleSpec& spec, const Tolerance& tol) {
  if (u.arity() != 1) throw DimensionError("ode residual needs a function of one variable");
  validate(spec, 1);
  return sweep("ode-two-killing", sample_points(spec), u.coords(), tol, [&](const Point& p) {
    const Jet2 j = eval_jet2(u, p);
    const double a = 2.0 * j.value * j.hess(0, 0);
    const double b = 4.0 * j.grad(0) * j.grad(0);
    return Sample{a + b, std::max(std::fabs(a), b)};
  });
}

}  // namespace warpcheck
