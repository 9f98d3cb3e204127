#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "support/catalog.hpp"
#include "warpcheck/errors.hpp"
#include "warpcheck/geometry.hpp"
#include "warpcheck/killing.hpp"
#include "warpcheck/spacetime.hpp"

using namespace warpcheck;
using support::at;
using support::field;
using support::spec;

namespace {

const CoordNames kX{"x"};
const CoordNames kXY{"x", "y"};
const CoordNames kT{"t"};

Manifold half_line() {
  return Manifold::diagonal("half_line", kX, {"1"}).with_constraint(parse("x", kX), "x > 0");
}

struct Instance {
  StaticSpacetime s;
  StaticField zbar;
  SampleSpec spatial;
};

/// M = {x > 0}, f = sqrt(2x+1), ζ = ∂x, u = 5.
Instance cond1() {
  const Manifold m = half_line();
  return {build_static(m, parse("sqrt(2*x + 1)", kX), {"t", -1, 1}), {parse("5", kT), field(m, {"1"})},
          spec({{0.2, 3}})};
}

/// Translation on the plane with f = sqrt(2x + 5) and u = 2.
Instance cond1_plane() {
  const Manifold m = support::euclidean(kXY);
  return {build_static(m, parse("sqrt(2*x + 5)", kXY), {"t", -1, 1}), {parse("2", kT), field(m, {"1", "0"})},
          spec({{-1, 1}, {-1, 1}})};
}

/// Rotation on the plane with radial f and u = (2t+3)^(1/3).
Instance cond2() {
  const Manifold m = support::euclidean(kXY);
  return {build_static(m, parse("1 + x^2 + y^2", kXY), {"t", 0, 3}),
          {parse("(2*t + 3)^(1/3)", kT), field(m, {"-y", "x"})}, spec({{-1.5, 1.5}, {-1.5, 1.5}})};
}

/// Rotation about (1, 0) with f radial about that point and u = (4t+1)^(1/3).
Instance cond2_shifted() {
  const Manifold m = support::euclidean(kXY);
  return {build_static(m, parse("exp((x - 1)^2 + y^2)", kXY), {"t", 0, 2}),
          {parse("(4*t + 1)^(1/3)", kT), field(m, {"-y", "x - 1"})}, spec({{-1, 1}, {-1, 1}})};
}

CheckResult two_killing(const Instance& c) {
  return two_killing_defect(c.s.product(), lift(c.s, c.zbar), c.s.spec(c.spatial));
}

bool within(const Residual& r, const Tolerance& tol = {}) { return r.abs <= tol.bound(r.scale); }

}  // namespace

TEST(BuildStatic, Minkowski) {
  const StaticSpacetime s = build_static(support::euclidean(kX), parse("1", kX), {"t", -1, 1});
  EXPECT_EQ(s.product().coords(), (CoordNames{"x", "t"}));
  const MetricAt g = metric_at(s.product(), at({0.3, 0.2}));
  EXPECT_EQ(g.g, (Eigen::Matrix2d() << 1, 0, 0, -1).finished());
}

TEST(BuildStatic, ExponentialWarping) {
  const StaticSpacetime s = build_static(support::euclidean(kX), parse("exp(x)", kX), {"t", -1, 1});
  for (double x : {-0.7, 0.0, 1.3}) {
    const MetricAt g = metric_at(s.product(), at({x, 0.5}));
    EXPECT_EQ(g.g(0, 0), 1.0);
    EXPECT_EQ(g.g(0, 1), 0.0);
    EXPECT_NEAR(g.g(1, 1), -std::exp(2 * x), 1e-14 * std::exp(2 * x));
  }
}

TEST(BuildStatic, RejectsNonpositiveWarping) {
  const Manifold line = support::euclidean(kX);
  EXPECT_THROW(build_static(line, parse("x", kX), {"t", 0, 1}, spec({{-1, 1}})), NonpositiveWarpingError);
  EXPECT_THROW(build_static(line, parse("x^2 - 0.01", kX), {"t", 0, 1}, spec({{-1, 1}}, 1000)), NonpositiveWarpingError);
  EXPECT_NO_THROW(build_static(line, parse("1 + x^2", kX), {"t", 0, 1}, spec({{-1, 1}})));
}

TEST(BuildStatic, LorentzianSignatureAtEverySample) {
  for (const Instance& c : {cond1(), cond1_plane(), cond2(), cond2_shifted()}) {
    for (const Point& p : sample_points(c.s.spec(c.spatial), c.s.product())) {
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric_at(c.s.product(), p).g);
      EXPECT_EQ((es.eigenvalues().array() < 0).count(), 1);
      EXPECT_EQ((es.eigenvalues().array() > 0).count(), c.s.product().dim() - 1);
    }
  }
}

TEST(StaticTwoKilling, ConditionOne) {
  for (const Instance& c : {cond1(), cond1_plane()}) {
    const CheckResult r = check_static_2killing(c.s, c.zbar, c.spatial, 1);
    EXPECT_EQ(r.status, Status::pass) << r.note;
    EXPECT_TRUE(r.within_tolerance());
    EXPECT_EQ(two_killing(c).status, Status::pass);
  }
}

TEST(StaticTwoKilling, ConditionTwo) {
  for (const Instance& c : {cond2(), cond2_shifted()}) {
    const CheckResult r = check_static_2killing(c.s, c.zbar, c.spatial, 2);
    EXPECT_EQ(r.status, Status::pass) << r.note;
    EXPECT_EQ(two_killing(c).status, Status::pass);
  }
}

TEST(StaticTwoKilling, ConditionsOnTheWrongInstance) {
  EXPECT_EQ(check_static_2killing(cond1().s, cond1().zbar, cond1().spatial, 2).status, Status::hypotheses_not_met);
  EXPECT_EQ(check_static_2killing(cond2().s, cond2().zbar, cond2().spatial, 1).status, Status::hypotheses_not_met);
  EXPECT_THROW(check_static_2killing(cond2().s, cond2().zbar, cond2().spatial, 3), ConfigError);
}

TEST(StaticTwoKilling, LinearTimeBreaksConditionOne) {
  Instance c = cond1();
  c.zbar.u = parse("t", kT);
  EXPECT_EQ(check_static_2killing(c.s, c.zbar, c.spatial, 1).status, Status::hypotheses_not_met);
  const CheckResult r = two_killing(c);
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_GT(r.max_residual, 1e-3);
}

TEST(StaticTwoKilling, LinearTimeBreaksConditionTwo) {
  Instance c = cond2();
  c.zbar.u = parse("t", kT);
  EXPECT_EQ(check_static_2killing(c.s, c.zbar, c.spatial, 2).status, Status::hypotheses_not_met);
  const CheckResult r = two_killing(c);
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_GT(r.max_residual, 1e-3);
}

TEST(StaticTwoKilling, NonzeroDerivativeOfWarpingBreaksConditionTwo) {
  Instance c = cond2();
  c.zbar.spatial = field(c.s.space(), {"1", "0"});
  EXPECT_EQ(check_static_2killing(c.s, c.zbar, c.spatial, 2).status, Status::hypotheses_not_met);
  const CheckResult r = two_killing(c);
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_GT(r.max_residual, 1e-3);
}

TEST(StaticTwoKilling, NonKillingSpatialFieldBreaksBothConditions) {
  // Rotation whose speed grows with the radius still kills radial f.
  Instance c2 = cond2();
  c2.zbar.spatial = field(c2.s.space(), {"-y*(x^2 + y^2)", "x*(x^2 + y^2)"});
  EXPECT_EQ(check_static_2killing(c2.s, c2.zbar, c2.spatial, 2).status, Status::hypotheses_not_met);
  const CheckResult r2 = two_killing(c2);
  EXPECT_EQ(r2.status, Status::fail);
  EXPECT_GT(r2.max_residual, 1e-3);

  Instance c1 = cond1_plane();
  c1.zbar.spatial = field(c1.s.space(), {"1", "x"});
  EXPECT_EQ(check_static_2killing(c1.s, c1.zbar, c1.spatial, 1).status, Status::hypotheses_not_met);
  const CheckResult r1 = two_killing(c1);
  EXPECT_EQ(r1.status, Status::fail);
  EXPECT_GT(r1.max_residual, 1e-3);
}

TEST(StaticTwoKilling, LinearTimeOnUnitWarping) {
  const StaticSpacetime s = build_static(support::euclidean(kX), parse("1", kX), {"t", -1, 1});
  const StaticField zbar{parse("t", kT), VectorFieldSpec::zero(s.space().coords_ptr())};
  for (const Point& p : {at({0.0, 0.0}), at({0.4, -0.7}), at({-0.9, 0.3})}) {
    const SymTensorAt l2 = lie2_metric_at(s.product(), lift(s, zbar), p);
    EXPECT_NEAR(l2.value(1, 1), -4.0, 1e-12);
    EXPECT_NEAR(l2.value(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(l2.value(0, 1), 0.0, 1e-12);
    EXPECT_TRUE(within(time_block_closed_form(s, zbar, p, TimeBlockForm::general)));
  }
  const CheckResult r = two_killing_defect(s.product(), lift(s, zbar), s.spec(spec({{-1, 1}})));
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_NEAR(r.max_residual, 4.0, 1e-12);
}

TEST(StaticTwoKilling, WitnessIsReportedTimeFirst) {
  Instance c = cond2();
  c.zbar.u = parse("t", kT);
  const CheckResult r = check_static_2killing(c.s, c.zbar, c.spatial, 2);
  ASSERT_FALSE(r.coords.empty());
  EXPECT_EQ(r.coords.front(), "t");
}

TEST(TimeBlock, GeneralFormHoldsForKillingSpatialFields) {
  // Killing ζ with ζ(f) ≠ 0 and u off both ODE families.
  const Manifold m = support::euclidean(kXY);
  const StaticSpacetime s = build_static(m, parse("1 + x^2 + y^2", kXY), {"t", -1, 1});
  for (const char* u : {"t^2 + 1", "sin(t)", "exp(t)", "(2*t + 3)^(1/3)", "3"}) {
    for (const auto& z : {field(m, {"1", "0"}), field(m, {"-y", "x"}), field(m, {"0.5 - y", "x + 2"})}) {
      const StaticField zbar{parse(u, kT), z};
      EXPECT_EQ(time_block_general(s, zbar, spec({{-1, 1}, {-1, 1}})).status, Status::pass) << u;
      EXPECT_EQ(time_block_general(s, zbar, spec({{-1, 1}, {-1, 1}}), {}, TimeBlockForm::expanded).status,
                Status::pass)
          << u;
    }
  }
}

TEST(TimeBlock, GeneralAndExpandedFormsAgreeByProductRule) {
  const Manifold m = support::euclidean(kXY);
  const StaticSpacetime s = build_static(m, parse("2 + sin(x)*y^2", kXY), {"t", -1, 1});
  const StaticField zbar{parse("t^3 - t", kT), field(m, {"x*y", "cos(x)"})};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Point p = at({d(rng), d(rng), d(rng)});
    const Residual g = time_block_closed_form(s, zbar, p, TimeBlockForm::general);
    const Residual e = time_block_closed_form(s, zbar, p, TimeBlockForm::expanded);
    EXPECT_NEAR(g.rhs, e.rhs, 1e-12 * (1 + g.scale));
    EXPECT_EQ(g.lhs, e.lhs);
  }
}

TEST(TimeBlock, GeneralFormIsGatedOnKillingSpatialField) {
  const Manifold m = support::euclidean(kXY);
  const StaticSpacetime s = build_static(m, parse("1 + x^2", kXY), {"t", -1, 1});
  const StaticField zbar{parse("t", kT), field(m, {"x", "y"})};
  EXPECT_EQ(time_block_general(s, zbar, spec({{-1, 1}, {-1, 1}})).status, Status::hypotheses_not_met);
}

TEST(TimeBlock, ReducedFormOnConditionTwo) {
  const Instance c = cond2();
  const CheckResult r = time_block_residual(c.s, c.zbar, c.spatial);
  EXPECT_EQ(r.status, Status::pass);
  for (const Point& p : sample_points(spec({{-1.5, 1.5}, {-1.5, 1.5}, {0, 3}}, 20))) {
    const Residual t = time_block_closed_form(c.s, c.zbar, p, TimeBlockForm::reduced);
    EXPECT_NEAR(t.lhs, 0.0, 1e-10);
    EXPECT_NEAR(t.rhs, 0.0, 1e-10);
  }
}

TEST(TimeBlock, ReducedFormWithNonzeroSides) {
  const Manifold m = half_line();
  const StaticSpacetime s = build_static(m, parse("sqrt(2*x + 1)", kX), {"t", 0, 2});
  const StaticField zbar{parse("(t + 1)^(1/3)", kT), field(m, {"1"})};
  EXPECT_EQ(time_block_residual(s, zbar, spec({{0.2, 3}})).status, Status::pass);
  const Point p = at({1.0, 0.5});
  const Residual r = time_block_closed_form(s, zbar, p, TimeBlockForm::reduced);
  // f ζ(f) = 1, so the reduced form is 2·4·u̇·g_I(∂t,∂t) = -8 u̇.
  const double udot = std::pow(1.5, -2.0 / 3.0) / 3.0;
  EXPECT_NEAR(r.rhs, -8 * udot, 1e-12);
  EXPECT_NEAR(r.lhs, -8 * udot, 1e-10);
}

TEST(TimeBlock, ZeroSpatialField) {
  const Manifold m = support::euclidean(kXY);
  const StaticSpacetime s = build_static(m, parse("1 + x^2 + y^2", kXY), {"t", 0, 3});
  const StaticField zbar{parse("(2*t + 3)^(1/3)", kT), VectorFieldSpec::zero(m.coords_ptr())};
  EXPECT_EQ(time_block_residual(s, zbar, spec({{-1, 1}, {-1, 1}})).status, Status::pass);
  const Residual r = time_block_closed_form(s, zbar, at({0.3, -0.2, 1.0}), TimeBlockForm::reduced);
  EXPECT_NEAR(r.lhs, 0.0, 1e-12);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(TimeBlock, ReducedFormIsGatedOnTheTimeEquation) {
  const Instance c = cond1();
  StaticField zbar = c.zbar;
  zbar.u = parse("t", kT);
  EXPECT_EQ(time_block_residual(c.s, zbar, c.spatial).status, Status::hypotheses_not_met);
}

TEST(Converse, ConditionTwoInstance) {
  const Instance c = cond2();
  const CheckResult r = converse_decompose(c.s, c.zbar, c.spatial);
  EXPECT_EQ(r.status, Status::pass) << r.note;
  bool time_seen = false;
  for (const auto& p : r.parts) {
    EXPECT_EQ(p.status, Status::pass) << p.name;
    time_seen = time_seen || p.name == "two-killing(time)";
  }
  EXPECT_TRUE(time_seen);
}

TEST(Converse, ConditionOneInstance) {
  const Instance c = cond1_plane();
  const CheckResult r = converse_decompose(c.s, c.zbar, c.spatial);
  EXPECT_EQ(r.status, Status::pass) << r.note;
}

TEST(Converse, NeedsTwoKillingField) {
  Instance c = cond2();
  c.zbar.u = parse("t", kT);
  EXPECT_EQ(converse_decompose(c.s, c.zbar, c.spatial).status, Status::hypotheses_not_met);
}

TEST(StaticLine, HandValue) {
  const StaticLineComponents c =
      static_line_components(parse("exp(x)", kX), parse("t", kT), parse("1", kX), at({0.25, 0.0}));
  EXPECT_NEAR(c.closed(0, 0), 16.0, 16e-8);
  EXPECT_NEAR(c.intrinsic(0, 0), 16.0, 16e-8);
  EXPECT_EQ(c.closed(1, 1), 0.0);
  EXPECT_EQ(c.closed(0, 1), 0.0);
  EXPECT_EQ(c.closed(1, 0), 0.0);
  EXPECT_NEAR(c.intrinsic(1, 1), 0.0, 1e-10);
  EXPECT_NEAR(c.intrinsic(0, 1), 0.0, 1e-10);
  EXPECT_TRUE(within(c.worst()));
}

TEST(StaticLine, CubeRootFamiliesVanish) {
  const Expr f = parse("1", kX);
  const Expr u = parse("(2*t + 3)^(1/3)", kT);
  const Expr v = parse("(2*x + 5)^(1/3)", kX);
  for (const Point& p : {at({0.0, 0.0}), at({0.7, -1.2}), at({-1.1, 2.0})}) {
    const StaticLineComponents c = static_line_components(f, u, v, p);
    EXPECT_LE(c.closed.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(c.intrinsic.cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_EQ(static_line_check(f, u, v, spec({{-1, 1}, {-2, 2}})).status, Status::pass);
}

TEST(StaticLine, ZeroField) {
  const StaticLineComponents c =
      static_line_components(parse("2 + sin(x)", kX), parse("0", kT), parse("0", kX), at({0.3, 0.4}));
  EXPECT_EQ(c.closed, Eigen::Matrix2d::Zero());
  EXPECT_EQ(c.intrinsic, Eigen::Matrix2d::Zero());
}

TEST(StaticLine, RandomDrawsMatchIntrinsic) {
  const std::vector<std::string> fs{"exp(x)", "1 + x^2", "sqrt(2*x + 5)", "2 + sin(x)", "1"};
  const std::vector<std::string> us{"t", "t^2", "(2*t + 3)^(1/3)", "sin(t)", "1", "exp(t/2)"};
  const std::vector<std::string> vs{"1", "x", "(2*x + 5)^(1/3)", "cos(x)", "x^2", "0"};
  std::mt19937_64 rng(20260611);
  std::uniform_real_distribution<double> coord(-1, 1);
  for (int i = 0; i < 100; ++i) {
    const std::string f = fs[rng() % fs.size()];
    const std::string u = us[rng() % us.size()];
    const std::string v = vs[rng() % vs.size()];
    const Point p = at({coord(rng), coord(rng)});
    const StaticLineComponents c = static_line_components(parse(f, kX), parse(u, kT), parse(v, kX), p);
    const Residual w = c.worst();
    EXPECT_TRUE(within(w)) << f << " " << u << " " << v << " residual " << w.abs << " scale " << w.scale;
  }
}

TEST(StaticLine, CheckReportsWitness) {
  const CheckResult r =
      static_line_check(parse("exp(x)", kX), parse("t", kT), parse("1", kX), spec({{-1, 1}, {-1, 1}}));
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(r.coords, (std::vector<std::string>{"t", "x"}));
}
