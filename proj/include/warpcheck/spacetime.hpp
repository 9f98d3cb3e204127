#pragma once

#include "warpcheck/killing.hpp"
#include "warpcheck/warped.hpp"

namespace warpcheck {

/// Open time interval I with its coordinate name.
struct TimeInterval {
  std::string coord = "t";
  double low = 0.0;
  double high = 1.0;
};

/// -f² dt² ⊕ g on I × M, realized as the warped product with base M, fiber
/// (I, dt²) and fiber sign -1.  Product chart order is (spatial..., t).
class StaticSpacetime {
 public:
  StaticSpacetime(Manifold space, Expr warping, TimeInterval interval);

  const WarpedProduct& warped() const { return warped_; }
  const Manifold& product() const { return warped_.product(); }
  const Manifold& space() const { return warped_.base(); }
  const Manifold& time() const { return warped_.fiber(); }
  const Expr& warping() const { return warped_.warping(); }
  const TimeInterval& interval() const { return interval_; }

  /// Product sample spec from a spec over M and the interval.
  SampleSpec spec(const SampleSpec& spatial) const;

 private:
  TimeInterval interval_;
  WarpedProduct warped_;
};

/// NonpositiveWarpingError when f ≤ 0 at a sample of M.
StaticSpacetime build_static(const Manifold& space, const Expr& warping, const TimeInterval& interval,
                             const SampleSpec& spatial);
StaticSpacetime build_static(const Manifold& space, const Expr& warping, const TimeInterval& interval);

/// ζ̄ = u ∂t + ζ with u on I and ζ on M.
struct StaticField {
  Expr u;
  VectorFieldSpec spatial;
};

SplitField split_static(const StaticSpacetime& s, const StaticField& field);
VectorFieldSpec lift(const StaticSpacetime& s, const StaticField& field);

/// Sufficient conditions for ζ̄ to be 2-Killing, then the conclusion.
///   1: ζ Killing on M, u constant, f ζ(f) constant
///   2: ζ Killing on M, 2uü + 4u̇² = 0, ζ(f) = 0
/// `spatial` samples M; time is sampled from the interval.
CheckResult check_static_2killing(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                                  int condition, const Tolerance& tol = {});

enum class TimeBlockForm {
  /// f²(2uü+4u̇²) g_I + 8u̇ f ζ(f) g_I + 2 ζ(f ζ(f)) g_I
  general,
  /// 2 [4 f ζ(f) u̇ + ζ(f ζ(f))] g_I, valid once 2uü + 4u̇² = 0
  reduced,
  /// general form with 2 f ζ(ζ(f)) + 2 (ζ(f))² in place of 2 ζ(f ζ(f))
  expanded,
};

/// (L̄_ζ̄ L̄_ζ̄ ḡ)(∂t, ∂t) intrinsic vs closed form, with g_I(∂t,∂t) = -1.
Residual time_block_closed_form(const StaticSpacetime& s, const StaticField& field, const Point& p,
                                TimeBlockForm form);

/// Gated on ζ Killing on M and 2uü + 4u̇² = 0, checks the reduced form.
CheckResult time_block_residual(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                                const Tolerance& tol = {});
/// Gated on ζ Killing on M, checks the general form.
CheckResult time_block_general(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                               const Tolerance& tol = {}, TimeBlockForm form = TimeBlockForm::general);

/// Given ζ̄ 2-Killing, ζ is 2-Killing on M, and u ∂t is 2-Killing on
/// (I, dt²) wherever ζ(f) = 0 at the samples.
CheckResult converse_decompose(const StaticSpacetime& s, const StaticField& field, const SampleSpec& spatial,
                               const Tolerance& tol = {});

/// ζ̄ = u(t) ∂t + v(x) ∂x on ds² = f(x)² dt² + dx².  Matrices are in (t, x)
/// order.
struct StaticLineComponents {
  Eigen::Matrix2d closed;
  Eigen::Matrix2d intrinsic;
  Eigen::Matrix2d scale;

  Residual worst() const;
};
/// f and v are functions of x, u of t; p = (t, x).
StaticLineComponents static_line_components(const Expr& f, const Expr& u, const Expr& v, const Point& p);

/// All four components over samples of (t, x).
CheckResult static_line_check(const Expr& f, const Expr& u, const Expr& v, const SampleSpec& spec,
                              const Tolerance& tol = {});

}  // namespace warpcheck
