#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "support/catalog.hpp"
#include "warpcheck/errors.hpp"
#include "warpcheck/geometry.hpp"
#include "warpcheck/killing.hpp"

using namespace warpcheck;
using support::at;
using support::field;

namespace {

/// Christoffel symbols from central differences of the metric entries.
Christoffel<double> christoffel_fd(const Manifold& m, const Point& p) {
  const Index n = m.dim();
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
  for (Index l = 0; l < n; ++l)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        dg[static_cast<std::size_t>(l)](i, j) = fd_oracle(m.metric(i, j), p, Eigen::VectorXd::Unit(n, l), 1, 1e-5);
  const Eigen::MatrixXd ginv = metric_at(m, p).ginv;
  Christoffel<double> gamma(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l)
          gamma[static_cast<std::size_t>(k)](i, j) +=
              0.5 * ginv(k, l) *
              (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
               dg[static_cast<std::size_t>(l)](i, j));
  return gamma;
}

double entry(const Riemann& r, Index a, Index b, Index c, Index d) { return r(a, b, c, d); }

}  // namespace

TEST(MetricAt, SpecValues) {
  const MetricAt e = metric_at(support::euclidean({"x", "y"}), at({3, -1}));
  EXPECT_EQ(e.g, Eigen::Matrix2d::Identity());
  EXPECT_EQ(e.ginv, Eigen::Matrix2d::Identity());

  const MetricAt p = metric_at(support::polar(), at({2, 0.7}));
  EXPECT_EQ(p.g, Eigen::Vector2d(1, 4).asDiagonal().toDenseMatrix());
  EXPECT_NEAR((p.ginv - Eigen::Vector2d(1, 0.25).asDiagonal().toDenseMatrix()).norm(), 0.0, 1e-15);

  const Manifold st = Manifold::diagonal("st", {"t", "x"}, {"-exp(x)^2", "1"});
  EXPECT_EQ(metric_at(st, at({5, 0})).g, Eigen::Vector2d(-1, 1).asDiagonal().toDenseMatrix());
}

TEST(MetricAt, SingularityIsScaleAware) {
  const Manifold degenerate = Manifold::diagonal("d", {"x", "y"}, {"1", "x - x"});
  EXPECT_THROW(metric_at(degenerate, at({1, 1})), SingularMetricError);
  const Manifold tiny = Manifold::diagonal("t", {"x", "y"}, {"1e-8", "1e-8"});
  EXPECT_NO_THROW(metric_at(tiny, at({1, 1})));
  const Manifold rank_one = Manifold::parse("r", {"x", "y"}, {{"1", "1"}, {"", "1"}});
  EXPECT_THROW(metric_at(rank_one, at({0, 0})), SingularMetricError);
}

TEST(MetricAt, DomainIsEnforced) {
  EXPECT_THROW(metric_at(support::polar(), at({-1, 0})), DomainError);
}

TEST(Christoffel, EuclideanVanishes) {
  for (const auto& g : christoffel_at(support::euclidean({"x", "y", "z"}), at({1, 2, 3})))
    EXPECT_EQ(g, Eigen::Matrix3d::Zero());
}

TEST(Christoffel, Polar) {
  const Christoffel<double> g = christoffel_at(support::polar(), at({2, 0.5}));
  EXPECT_DOUBLE_EQ(g[0](1, 1), -2.0);
  EXPECT_DOUBLE_EQ(g[1](0, 1), 0.5);
  EXPECT_DOUBLE_EQ(g[1](1, 0), 0.5);
  EXPECT_EQ(g[0](0, 0), 0.0);
  EXPECT_EQ(g[0](0, 1), 0.0);
  EXPECT_EQ(g[1](0, 0), 0.0);
  EXPECT_EQ(g[1](1, 1), 0.0);
}

TEST(Christoffel, MatchesFiniteDifferenceKoszulOnCatalog) {
  for (const auto& s : support::catalog_manifolds()) {
    for (const Point& p : sample_points(support::spec(s.boxes, 10, 3), s.manifold)) {
      const auto exact = christoffel_at(s.manifold, p);
      const auto approx = christoffel_fd(s.manifold, p);
      for (std::size_t k = 0; k < exact.size(); ++k)
        EXPECT_LE(max_abs(exact[k] - approx[k]), 1e-7 * (1 + max_abs(exact[k]))) << s.manifold.name();
    }
  }
}

TEST(Covariant, CoordinateFieldsOnEuclideanPlane) {
  const Manifold m = support::euclidean({"x", "y"});
  EXPECT_EQ(covariant_derivative_at(m, field(m, {"1", "0"}), field(m, {"0", "1"}), at({1, 2})),
            Eigen::Vector2d::Zero());
}

TEST(Covariant, StaticLineRiemannianForm) {
  // ds² = f(x)² dt² + dx² with f = 2 + sin(x), chart (t, x).
  const Manifold m = Manifold::diagonal("line", {"t", "x"}, {"(2 + sin(x))^2", "1"});
  const Point p = at({0.3, 0.9});
  const double f = 2 + std::sin(0.9);
  const double fp = std::cos(0.9);
  const auto dt = field(m, {"1", "0"});
  const auto dx = field(m, {"0", "1"});
  const Eigen::VectorXd a = covariant_derivative_at(m, dt, dx, p);
  EXPECT_NEAR(a(0), fp / f, 1e-15);
  EXPECT_EQ(a(1), 0.0);
  const Eigen::VectorXd b = covariant_derivative_at(m, dt, dt, p);
  EXPECT_EQ(b(0), 0.0);
  EXPECT_NEAR(b(1), -f * fp, 1e-15);
}

TEST(LieBracket, SpecValues) {
  const Manifold m = support::euclidean({"x", "y"});
  EXPECT_EQ(lie_bracket_at(field(m, {"1", "0"}), field(m, {"0", "1"}), at({1, 2})), Eigen::Vector2d::Zero());
  EXPECT_EQ(lie_bracket_at(field(m, {"0", "x"}), field(m, {"y", "0"}), at({1, 2})), Eigen::Vector2d(1, -2));
}

TEST(LieMetric, SpecValues) {
  const Manifold plane = support::euclidean({"x", "y"});
  EXPECT_EQ(lie_metric_at(plane, field(plane, {"-y", "x"}), at({0.4, -1.3})).value, Eigen::Matrix2d::Zero());
  const Manifold line = support::euclidean({"x"});
  EXPECT_EQ(lie_metric_at(line, field(line, {"x"}), at({3})).value(0, 0), 2.0);
}

TEST(Lie2Metric, SpecValues) {
  const Manifold line = support::euclidean({"x"});
  EXPECT_EQ(lie2_metric_at(line, field(line, {"x"}), at({3})).value(0, 0), 4.0);

  const Manifold interval = support::euclidean({"t"});
  EXPECT_NEAR(lie2_metric_at(interval, field(interval, {"(2*t + 3)^(1/3)"}), at({0.5})).value(0, 0), 0.0, 1e-15);

  const Expr u = parse("sin(t) + t^2", interval.coords());
  for (double t : {-1.0, 0.2, 1.7}) {
    const Jet2 j = eval_jet2(u, at({t}));
    const double expected = 2 * j.value * j.hess(0, 0) + 4 * j.grad(0) * j.grad(0);
    EXPECT_NEAR(lie2_metric_at(interval, field(interval, {"sin(t) + t^2"}), at({t})).value(0, 0), expected, 1e-13);
  }
}

TEST(Lie2ViaConnection, SpecValues) {
  const Manifold plane = support::euclidean({"x", "y"});
  const auto dx = field(plane, {"1", "0"});
  const auto dy = field(plane, {"0", "1"});
  EXPECT_EQ(lie2_via_connection_at(plane, field(plane, {"-y", "x"}), dx, dy, at({0.3, 0.8})).value, 0.0);
  EXPECT_NEAR(lie2_via_connection_at(plane, field(plane, {"(x + 1)^(1/3)", "0"}), dx, dx, at({0.6, 2})).value, 0.0,
              1e-15);
  const Manifold line = support::euclidean({"x"});
  EXPECT_EQ(lie2_via_connection_at(line, field(line, {"x"}), field(line, {"1"}), field(line, {"1"}), at({2})).value,
            4.0);
}

TEST(LieMetric, ConnectionFormAgreesOnCatalog) {
  for (const auto& s : support::catalog_manifolds()) {
    std::vector<VectorFieldSpec> all = s.fields;
    all.insert(all.end(), s.killing.begin(), s.killing.end());
    for (const Point& p : sample_points(support::spec(s.boxes, 20, 1), s.manifold)) {
      const LocalGeometry geo(s.manifold, p);
      for (const auto& z : all) {
        const SymTensorAt l = lie_metric_at(s.manifold, z, p);
        for (const auto& x : all)
          for (const auto& y : all) {
            const Eigen::VectorXd xv = geo.sample(x).value;
            const Eigen::VectorXd yv = geo.sample(y).value;
            const double coordinate = xv.dot(l.value * yv);
            const Measured connection = lie_metric_via_connection_at(geo, z, x, y);
            const double scale = std::max({connection.scale, l.scale * xv.norm() * yv.norm(), std::fabs(coordinate)});
            EXPECT_LE(std::fabs(coordinate - connection.value), 1e-9 * scale + 1e-12) << s.manifold.name();
          }
      }
    }
  }
}

TEST(Lie2Metric, ConnectionFormAgreesOnCoordinateFields) {
  for (const auto& s : support::catalog_manifolds()) {
    std::vector<VectorFieldSpec> all = s.fields;
    all.insert(all.end(), s.killing.begin(), s.killing.end());
    const Index n = s.manifold.dim();
    for (const Point& p : sample_points(support::spec(s.boxes, 20, 2), s.manifold)) {
      const LocalGeometry geo(s.manifold, p);
      for (const auto& z : all) {
        const SymTensorAt l2 = lie2_metric_at(s.manifold, z, p);
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) {
            const auto x = VectorFieldSpec::coordinate(s.manifold.coords_ptr(), i);
            const auto y = VectorFieldSpec::coordinate(s.manifold.coords_ptr(), j);
            const Measured c = lie2_via_connection_at(geo, z, x, y);
            EXPECT_LE(std::fabs(c.value - l2.value(i, j)), 1e-8 * std::max(c.scale, l2.scale) + 1e-12)
                << s.manifold.name();
          }
      }
    }
  }
}

TEST(Lie2ViaConnection, SymmetricBitwise) {
  for (const auto& s : support::catalog_manifolds()) {
    const auto& fs = s.fields;
    for (const Point& p : sample_points(support::spec(s.boxes, 10, 4), s.manifold)) {
      const LocalGeometry geo(s.manifold, p);
      for (const auto& z : fs)
        for (const auto& x : fs)
          for (const auto& y : s.killing.empty() ? fs : s.killing)
            EXPECT_EQ(lie2_via_connection_at(geo, z, x, y).value, lie2_via_connection_at(geo, z, y, x).value);
    }
  }
}

TEST(Connection, TorsionFreeAndCompatibleOnCatalog) {
  for (const auto& s : support::catalog_manifolds()) {
    const SampleSpec sp = support::spec(s.boxes);
    const Tolerance tol{1e-10, 1e-9};
    EXPECT_EQ(torsion_defect(s.manifold, s.fields, sp, tol).status, Status::pass) << s.manifold.name();
    EXPECT_EQ(compatibility_defect(s.manifold, s.fields, sp, tol).status, Status::pass) << s.manifold.name();
  }
}

TEST(Riemann, FlatChartsVanish) {
  const Riemann flat = riemann_at(support::euclidean({"x", "y", "z"}), at({1, 2, 3}));
  Eigen::Tensor<double, 0> m = flat.abs().maximum();
  EXPECT_EQ(m(), 0.0);
  for (const Point& p : sample_points(support::spec({{0.5, 3}, {-3, 3}}, 20), support::polar())) {
    Eigen::Tensor<double, 0> q = riemann_at(support::polar(), p).abs().maximum();
    EXPECT_LE(q(), 1e-13);
  }
}

TEST(Riemann, SphereComponent) {
  const Riemann r = riemann_at(support::sphere(), at({1, 0.4}));
  EXPECT_NEAR(entry(r, 0, 1, 0, 1), std::pow(std::sin(1.0), 2), 1e-14);
  EXPECT_NEAR(std::pow(std::sin(1.0), 2), 0.708073418273571, 1e-12);
}

TEST(Riemann, Symmetries) {
  for (const auto& s : support::catalog_manifolds()) {
    const Index n = s.manifold.dim();
    for (const Point& p : sample_points(support::spec(s.boxes, 10, 5), s.manifold)) {
      const Riemann r = riemann_at(s.manifold, p);
      Eigen::Tensor<double, 0> big = r.abs().maximum();
      const double tol = 1e-9 * std::max(1.0, big());
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
          for (Index c = 0; c < n; ++c)
            for (Index d = 0; d < n; ++d) {
              EXPECT_NEAR(r(a, b, c, d), -r(b, a, c, d), tol);
              EXPECT_NEAR(r(a, b, c, d), -r(a, b, d, c), tol);
              EXPECT_NEAR(r(a, b, c, d), r(c, d, a, b), tol);
              EXPECT_NEAR(r(a, b, c, d) + r(a, c, d, b) + r(a, d, b, c), 0.0, tol);
            }
    }
  }
}

TEST(Riemann, FunctionalFormMatchesArrayConvention) {
  // curvature(r, X, Y, Z, W) = g(R(X,Y)Z, W) and r(a,b,c,d) = g(R(∂c,∂d)∂b, ∂a).
  const Riemann r = riemann_at(support::sphere(), at({1.1, 0.2}));
  const Eigen::Vector2d e0(1, 0), e1(0, 1);
  EXPECT_DOUBLE_EQ(curvature(r, e0, e1, e1, e0), r(0, 1, 0, 1));
  const Eigen::Vector2d u(0.3, -1.2), v(2.0, 0.5);
  double sum = 0.0;
  for (Index a = 0; a < 2; ++a)
    for (Index b = 0; b < 2; ++b)
      for (Index c = 0; c < 2; ++c)
        for (Index d = 0; d < 2; ++d) sum += r(a, b, c, d) * v(a) * u(b) * u(c) * v(d);
  EXPECT_NEAR(curvature(r, u, v, u, v), sum, 1e-14);
}

TEST(Ricci, SpecValues) {
  EXPECT_LE(max_abs(ricci_at(support::euclidean({"x", "y", "z"}), at({0, 1, 2}))), 0.0);
  EXPECT_LE(max_abs(ricci_at(support::cylinder(), at({0.4, 1}))), 0.0);
  for (const Point& p : sample_points(support::spec({{0.3, 2.8}, {0, 6}}, 20), support::sphere()))
    EXPECT_LE(max_abs(ricci_at(support::sphere(), p) - metric_at(support::sphere(), p).g), 1e-13);
}

TEST(Sectional, SpecValues) {
  const Eigen::Vector2d e0(1, 0), e1(0, 1);
  EXPECT_EQ(sectional_at(support::euclidean({"x", "y"}), at({1, 1}), e0, e1), 0.0);
  EXPECT_NEAR(sectional_at(support::sphere(), at({1, 0}), e0, e1), 1.0, 1e-14);
  EXPECT_THROW(sectional_at(support::sphere(), at({1, 0}), e0, 3 * e0), DegeneratePlaneError);
}

TEST(Sectional, InvariantUnderChangeOfBasis) {
  const Manifold m = support::schwarzschild();
  const Point p = at({0.1, 4.5, 1.2, 0.3});
  const LocalGeometry geo(m, p);
  const Riemann r = geo.riemann();
  const Eigen::Vector4d u(0.2, 1, 0, 0.5), v(0, 0.3, 1, -0.2);
  const double k = sectional(geo, r, u, v);
  for (const auto& [a, b, c, d] : std::vector<std::array<double, 4>>{{2, 1, 0, 1}, {1, -3, 2, 0.5}, {0, 1, -1, 4}}) {
    const double k2 = sectional(geo, r, a * u + b * v, c * u + d * v);
    EXPECT_NEAR(k2, k, 1e-9 * std::fabs(k));
  }
}

TEST(Gradient, SpecValues) {
  const Manifold plane = support::euclidean({"x", "y"});
  EXPECT_EQ(gradient_at(plane, parse("x^2 + y^2", plane.coords()), at({1, 2})), Eigen::Vector2d(2, 4));
  const Manifold p = support::polar();
  EXPECT_EQ(gradient_at(p, parse("r", p.coords()), at({2, 0.3})), Eigen::Vector2d(1, 0));
  const Manifold mink = Manifold::diagonal("mink", {"t", "x"}, {"-1", "1"});
  EXPECT_EQ(gradient_at(mink, parse("t", mink.coords()), at({0.5, 3})), Eigen::Vector2d(-1, 0));
}

TEST(Killing, KillingFieldsAreTwoKillingOnCatalog) {
  for (const auto& s : support::catalog_manifolds())
    for (const auto& z : s.killing) {
      const SampleSpec sp = support::spec(s.boxes);
      const CheckResult k = killing_defect(s.manifold, z, sp, {1e-12, 0});
      ASSERT_EQ(k.status, Status::pass) << s.manifold.name() << " residual " << k.max_residual;
      EXPECT_EQ(two_killing_defect(s.manifold, z, sp, {1e-10, 0}).status, Status::pass) << s.manifold.name();
    }
}

TEST(CurvatureConvention, IdentityHoldsOnlyWithTheLockedOrdering) {
  // On the sphere, with a Killing ζ and coordinate X, g(R(ζ,X)X, ζ) equals
  // ‖D_X ζ‖² + g(D_X D_ζ ζ, X); the opposite ordering g(R(ζ,X)ζ, X) has the
  // opposite sign and fails whenever the curvature term is nonzero.
  const Manifold m = support::sphere();
  const auto zeta = field(m, {"sin(phi)", "cos(theta)*cos(phi)/sin(theta)"});
  const auto x = VectorFieldSpec::coordinate(m.coords_ptr(), 0);
  const LocalGeometry geo(m, at({1.0, 0.7}));
  const Riemann r = geo.riemann();
  const CurvatureIdentity id = curvature_identity_at(geo, r, zeta, x);
  EXPECT_LE(std::fabs(id.residual()), 1e-12 * id.scale());
  const Eigen::VectorXd z = geo.sample(zeta).value;
  const Eigen::VectorXd xv = geo.sample(x).value;
  const double opposite = curvature(r, z, xv, z, xv);
  EXPECT_GT(std::fabs(opposite - id.stretch - id.drift), 0.1);
}
