#include "warpcheck/spacetime.hpp"

#include <algorithm>
#include <cmath>

#include "warpcheck/errors.hpp"

namespace warpcheck {

namespace {

Manifold time_line(const TimeInterval& interval) {
  if (!(interval.low < interval.high))
    throw ConfigError("time interval [" + std::to_string(interval.low) + ", " + std::to_string(interval.high) +
                      "] is empty");
  return Manifold::diagonal("I", {interval.coord}, {"1"});
}

SampleSpec time_spec(const StaticSpacetime& s, const SampleSpec& spatial) {
  SampleSpec out = spatial;
  out.boxes = {{s.interval().low, s.interval().high}};
  return out;
}

/// Reports list the time coordinate first.
void time_first(CheckResult& r, const Manifold& product) {
  if (r.coords == product.coords() && r.witness.size() == product.dim()) {
    const Index n = r.witness.size();
    Point w(n);
    w << r.witness(n - 1), r.witness.head(n - 1);
    r.witness = w;
    std::rotate(r.coords.begin(), r.coords.end() - 1, r.coords.end());
  }
  for (auto& p : r.parts) time_first(p, product);
}

CheckResult named(CheckResult r, std::string name) {
  r.name = std::move(name);
  return r;
}

struct SpatialJets {
  double f = 0.0;
  Eigen::VectorXd df;
  Eigen::MatrixXd ddf;
  VectorSample<double> zeta;
  double zf = 0.0;   // ζ(f)
  double zzf = 0.0;  // ζ(ζ(f))
  Eigen::VectorXd dflux;  // ∂(f ζ(f))
  double flux_scale = 0.0;

  SpatialJets(const StaticSpacetime& s, const VectorFieldSpec& field, const Point& p) {
    const Jet2 jf = eval_jet2(s.warping(), p);
    f = jf.value;
    df = jf.grad;
    ddf = jf.hess;
    zeta = field_at(field, p);
    zf = df.dot(zeta.value);
    zzf = zeta.value.dot(ddf * zeta.value) + df.dot(zeta.jacobian * zeta.value);
    const Eigen::VectorXd a = zf * df;
    const Eigen::VectorXd b = f * (ddf * zeta.value);
    const Eigen::VectorXd c = f * (zeta.jacobian.transpose() * df);
    dflux = a + b + c;
    flux_scale = std::max({max_abs(a), max_abs(b), max_abs(c)});
  }

  double zflux() const { return zeta.value.dot(dflux); }  // ζ(f ζ(f))
};

}  // namespace

StaticSpacetime::StaticSpacetime(Manifold space, Expr warping, TimeInterval interval)
    : interval_(std::move(interval)), warped_(std::move(space), time_line(interval_), std::move(warping), -1) {}

SampleSpec StaticSpacetime::spec(const SampleSpec& spatial) const {
  validate(spatial, space().dim());
  SampleSpec out = spatial;
  out.boxes.push_back({interval_.low, interval_.high});
  return out;
}

StaticSpacetime build_static(const Manifold& space, const Expr& warping, const TimeInterval& interval) {
  return StaticSpacetime(space, warping, interval);
}

StaticSpacetime build_static(const Manifold& space, const Expr& warping, const TimeInterval& interval,
                             const SampleSpec& spatial) {
  StaticSpacetime s(space, warping, interval);
  validate(spatial, space.dim());
  for (const Point& p : sample_points(spatial)) {
    const double f = eval(s.warping(), p);
    if (!(f > 0.0))
      throw NonpositiveWarpingError("warping function is " + std::to_string(f) + " at a sample of '" + space.name() +
                                    "'");
  }
  return s;
}

SplitField split_static(const StaticSpacetime& s, const StaticField& field) {
  if (!same_chart(field.u.coords(), s.time().coords()))
    throw DimensionError("time component must be a function of '" + s.interval().coord + "' only");
  return split_field(s.warped(), field.spatial, VectorFieldSpec(s.time().coords_ptr(), {field.u}));
}

VectorFieldSpec lift(const StaticSpacetime& s, const StaticField& field) {
  return lift(s.warped(), split_static(s, field));
}

CheckResult check_static_2killing(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                                  int condition, const Tolerance& tol) {
  const SampleSpec full = s.spec(spatial);
  const SampleSpec ts = time_spec(s, spatial);
  const VectorFieldSpec bar = lift(s, field);

  std::vector<CheckResult> premises;
  premises.push_back(named(killing_defect(s.space(), field.spatial, spatial, tol), "killing(space)"));
  if (condition == 1) {
    premises.push_back(named(constant_defect(s.time(), field.u, ts, tol), "constant(u)"));
    premises.push_back(sweep("constant(f*zeta(f))", sample_points(spatial, s.space()), s.space().coords(), tol,
                             [&](const Point& p) {
                               const SpatialJets j(s, field.spatial, p);
                               return Sample{max_abs(j.dflux), j.flux_scale};
                             }));
  } else if (condition == 2) {
    premises.push_back(named(ode_2killing_residual(field.u, ts, tol), "ode(u)"));
    premises.push_back(named(derivative_defect(s.space(), field.spatial, s.warping(), spatial, tol), "zeta(f)=0"));
  } else {
    throw ConfigError("static 2-Killing condition must be 1 or 2");
  }
  CheckResult out = implication("static-two-killing-" + std::to_string(condition), std::move(premises),
                                [&] { return two_killing_defect(s.product(), bar, full, tol); });
  time_first(out, s.product());
  return out;
}

Residual time_block_closed_form(const StaticSpacetime& s, const StaticField& field, const Point& p,
                                TimeBlockForm form) {
  const Index m = s.space().dim();
  const SpatialJets j(s, field.spatial, p.head(m));
  const Jet2 ju = eval_jet2(field.u, p.tail(1));
  const double u = ju.value, du = ju.grad(0), ddu = ju.hess(0, 0);
  const double gi = -1.0;
  const double f = j.f;

  const double ode = f * f * (2.0 * u * ddu + 4.0 * du * du) * gi;
  const double mixed = 8.0 * du * f * j.zf * gi;
  double rhs = 0.0;
  double scale = 0.0;
  switch (form) {
    case TimeBlockForm::general: {
      const double drift = 2.0 * j.zflux() * gi;
      rhs = (ode + mixed) + drift;
      scale = std::max({std::fabs(ode), std::fabs(mixed), std::fabs(drift)});
      break;
    }
    case TimeBlockForm::expanded: {
      const double a = 2.0 * f * j.zzf * gi;
      const double b = 2.0 * j.zf * j.zf * gi;
      rhs = ((ode + mixed) + a) + b;
      scale = std::max({std::fabs(ode), std::fabs(mixed), std::fabs(a), std::fabs(b)});
      break;
    }
    case TimeBlockForm::reduced: {
      const double a = 4.0 * f * j.zf * du;
      const double b = j.zflux();
      rhs = 2.0 * (a + b) * gi;
      scale = 2.0 * std::max(std::fabs(a), std::fabs(b));
      break;
    }
  }
  const SymTensorAt ll = lie2_metric_at(s.product(), lift(s, field), p);
  return make_residual(ll.value(m, m), rhs, std::max(scale, ll.scale));
}

CheckResult time_block_residual(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                                const Tolerance& tol) {
  const SampleSpec full = s.spec(spatial);
  std::vector<CheckResult> premises;
  premises.push_back(named(killing_defect(s.space(), field.spatial, spatial, tol), "killing(space)"));
  premises.push_back(named(ode_2killing_residual(field.u, time_spec(s, spatial), tol), "ode(u)"));
  CheckResult out = implication("time-block", std::move(premises), [&] {
    return sweep("time-block", sample_points(full, s.product()), s.product().coords(), tol, [&](const Point& p) {
      const Residual r = time_block_closed_form(s, field, p, TimeBlockForm::reduced);
      return Sample{r.abs, r.scale};
    });
  });
  time_first(out, s.product());
  return out;
}

CheckResult time_block_general(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                               const Tolerance& tol, TimeBlockForm form) {
  const SampleSpec full = s.spec(spatial);
  std::vector<CheckResult> premises;
  premises.push_back(named(killing_defect(s.space(), field.spatial, spatial, tol), "killing(space)"));
  CheckResult out = implication("time-block-general", std::move(premises), [&] {
    return sweep("time-block-general", sample_points(full, s.product()), s.product().coords(), tol,
                 [&](const Point& p) {
                   const Residual r = time_block_closed_form(s, field, p, form);
                   return Sample{r.abs, r.scale};
                 });
  });
  time_first(out, s.product());
  return out;
}

CheckResult converse_decompose(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                               const Tolerance& tol) {
  const SampleSpec full = s.spec(spatial);
  const SampleSpec ts = time_spec(s, spatial);
  std::vector<CheckResult> premises;
  premises.push_back(named(two_killing_defect(s.product(), lift(s, field), full, tol), "two-killing(spacetime)"));
  CheckResult out = implication("converse", std::move(premises), [&] {
    CheckResult space = named(two_killing_defect(s.space(), field.spatial, spatial, tol), "two-killing(space)");
    CheckResult zf = named(derivative_defect(s.space(), field.spatial, s.warping(), spatial, tol), "zeta(f)=0");
    CheckResult r = space;
    std::vector<CheckResult> parts{space, zf};
    if (zf.status == Status::pass) {
      CheckResult time = named(two_killing_defect(s.time(), VectorFieldSpec(s.time().coords_ptr(), {field.u}), ts, tol),
                               "two-killing(time)");
      if (time.status == Status::fail || (space.status == Status::pass && time.max_residual > space.max_residual))
        r = time;
      if (time.status == Status::fail) r.status = Status::fail;
      parts.push_back(time);
    } else {
      r.note = "zeta(f) is not 0 at the samples; time part not asserted";
    }
    if (space.status == Status::fail) r.status = Status::fail;
    r.parts = std::move(parts);
    return r;
  });
  out.name = "converse";
  time_first(out, s.product());
  return out;
}

namespace {

struct StaticLine {
  WarpedProduct w;
  Expr f, u, v;

  StaticLine(const Expr& f, const Expr& u, const Expr& v)
      : w(Manifold::diagonal("line", f.coords(), {"1"}), Manifold::diagonal("I", u.coords(), {"1"}), f, +1),
        f(f),
        u(u),
        v(v) {
    if (f.arity() != 1 || u.arity() != 1 || v.arity() != 1)
      throw DimensionError("static line functions take one variable each");
    if (!same_chart(f.coords(), v.coords())) throw DimensionError("f and v must share the spatial coordinate");
    if (same_chart(f.coords(), u.coords())) throw DimensionError("u must be a function of time");
  }

  StaticLineComponents at(const Point& p) const {
    const Point px = p.tail(1);
    const Point pt = p.head(1);
    const Jet2 jf = eval_jet2(f, px);
    const Jet2 jv = eval_jet2(v, px);
    const Jet2 ju = eval_jet2(u, pt);
    const double F = jf.value, F1 = jf.grad(0), F2 = jf.hess(0, 0);
    const double V = jv.value, V1 = jv.grad(0), V2 = jv.hess(0, 0);
    const double U = ju.value, U1 = ju.grad(0), U2 = ju.hess(0, 0);

    const double xx1 = V * V2, xx2 = 2.0 * V1 * V1;
    const double tt[] = {2.0 * F * F * (U * U2 + 2.0 * U1 * U1), 2.0 * (V * V * F * F2 + V * V1 * F * F1),
                         8.0 * U1 * V * F * F1, 2.0 * V * V * F1 * F1};
    double tt_scale = 0.0;
    for (double t : tt) tt_scale = std::max(tt_scale, std::fabs(t));

    StaticLineComponents out;
    out.closed << ((tt[0] + tt[1]) + tt[2]) + tt[3], 0.0, 0.0, 2.0 * (xx1 + xx2);

    const SplitField zeta = split_field(w, VectorFieldSpec(w.base().coords_ptr(), {v}),
                                        VectorFieldSpec(w.fiber().coords_ptr(), {u}));
    Point q(2);
    q << p(1), p(0);
    const SymTensorAt ll = lie2_metric_at(w.product(), lift(w, zeta), q);
    out.intrinsic << ll.value(1, 1), ll.value(1, 0), ll.value(0, 1), ll.value(0, 0);
    out.scale << std::max(tt_scale, ll.scale), ll.scale, ll.scale,
        std::max({2.0 * std::fabs(xx1), 2.0 * xx2, ll.scale});
    return out;
  }
};

}  // namespace

Residual StaticLineComponents::worst() const {
  Residual r;
  bool first = true;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      const Residual c = make_residual(intrinsic(i, j), closed(i, j), scale(i, j));
      if (first || c.abs > r.abs) r = c;
      first = false;
    }
  for (Index i = 0; i < 4; ++i) r.scale = std::max(r.scale, scale.data()[i]);
  return r;
}

StaticLineComponents static_line_components(const Expr& f, const Expr& u, const Expr& v, const Point& p) {
  if (p.size() != 2) throw DimensionError("static line point is (t, x)");
  return StaticLine(f, u, v).at(p);
}

CheckResult static_line_check(const Expr& f, const Expr& u, const Expr& v, const SampleSpec& spec,
                              const Tolerance& tol) {
  const StaticLine line(f, u, v);
  validate(spec, 2);
  const CoordNames coords{u.coords()[0], f.coords()[0]};
  return sweep("static-line", sample_points(spec), coords, tol, [&](const Point& p) {
    if (!(eval(f, p.tail(1)) > 0.0)) throw NonpositiveWarpingError("warping function is not positive at a sample");
    const Residual r = line.at(p).worst();
    return Sample{r.abs, r.scale};
  });
}

}  // namespace warpcheck
