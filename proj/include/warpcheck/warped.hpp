#pragma once

#include "warpcheck/geometry.hpp"

namespace warpcheck {

/// M₁ ×_f M₂ with metric g₁ ⊕ ε f² g₂.  The product chart lists the base
/// coordinates first, then the fiber coordinates.
class WarpedProduct {
 public:
  WarpedProduct(Manifold base, Manifold fiber, Expr warping, int fiber_sign = +1);

  const Manifold& base() const { return base_; }
  const Manifold& fiber() const { return fiber_; }
  const Expr& warping() const { return warping_; }
  int fiber_sign() const { return sign_; }
  /// The built product; carries the constraint f > 0 plus the factors' own.
  const Manifold& product() const { return product_; }

  Index base_dim() const { return base_.dim(); }
  Index fiber_dim() const { return fiber_.dim(); }
  Point base_point(const Point& p) const { return p.head(base_dim()); }
  Point fiber_point(const Point& p) const { return p.tail(fiber_dim()); }
  Point join(const Point& base, const Point& fiber) const;

  /// f on the product chart.
  const Expr& warping_lifted() const { return warping_lifted_; }
  Expr lift_base(const Expr& e) const;
  Expr lift_fiber(const Expr& e) const;

 private:
  Manifold base_;
  Manifold fiber_;
  Expr warping_;
  int sign_;
  std::vector<Index> base_map_;
  std::vector<Index> fiber_map_;
  Expr warping_lifted_;
  Manifold product_;
};

inline Manifold build_product(const WarpedProduct& w) { return w.product(); }

/// ζ = (ζ₁, ζ₂).  ζ₁ lives on the base chart and ζ₂ on the fiber chart, so
/// neither can depend on the other factor's coordinates.
struct SplitField {
  VectorFieldSpec base;
  VectorFieldSpec fiber;
};

SplitField split_field(const WarpedProduct& w, VectorFieldSpec base, VectorFieldSpec fiber);
SplitField base_only(const WarpedProduct& w, VectorFieldSpec base);
SplitField fiber_only(const WarpedProduct& w, VectorFieldSpec fiber);
/// The coordinate field ∂_i of the product chart, as a split field.
SplitField coordinate_split(const WarpedProduct& w, Index i);
VectorFieldSpec lift(const WarpedProduct& w, const SplitField& v);

struct Residual {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs = 0.0;
  double scale = 0.0;
};

Residual make_residual(double lhs, double rhs, double scale);

/// D_X Y from the warped-product connection formulas, in product components.
struct VectorAt {
  Eigen::VectorXd value;
  double scale = 0.0;
};
VectorAt connection_closed_form(const WarpedProduct& w, const SplitField& x, const SplitField& y, const Point& p);

/// g(D_X ζ, X) = g₁(D¹_X₁ ζ₁, X₁) + f² ĝ₂(D²_X₂ ζ₂, X₂) + f ζ₁(f) ĝ₂(X₂, X₂),
/// with ĝ₂ = ε g₂; lhs is the intrinsic value on the product.
Residual dxz_inner_closed_form(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const Point& p);

/// (L_ζ g)(X, Y) = (L_ζ₁ g₁)(X₁, Y₁) + f² (L_ζ₂ ĝ₂)(X₂, Y₂) + 2 f ζ₁(f) ĝ₂(X₂, Y₂).
Residual lie_closed_form(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const SplitField& y,
                         const Point& p);

enum class Lie2Form {
  /// ... + 2 f ζ₁(ζ₁(f)) ĝ₂(X₂,Y₂) + 2 (ζ₁(f))² ĝ₂(X₂,Y₂)
  second_derivative,
  /// ... + 2 (ζ₁(f))² ĝ₂(X₂,Y₂) + 2 (ζ₁(f))² ĝ₂(X₂,Y₂), the misprinted variant
  duplicated_square,
};

/// (L_ζ L_ζ g)(X, Y) = (L¹L¹g₁)(X₁,Y₁) + f² (L²L²ĝ₂)(X₂,Y₂) + 4 f ζ₁(f) (L²ĝ₂)(X₂,Y₂) + ...
Residual lie2_closed_form(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const SplitField& y,
                          const Point& p, Lie2Form form = Lie2Form::second_derivative);

/// The three groups of (L_ζL_ζg)(X,Y) = second - bracket + cross:
///   second  = g(D_ζ D_X ζ, Y) + g(D_ζ D_Y ζ, X)
///   bracket = g(D_[ζ,X] ζ, Y) + g(D_[ζ,Y] ζ, X)
///   cross   = 2 g(D_X ζ, D_Y ζ)
/// from the intrinsic connection, with bracket and cross also assembled
/// from the closed-form connection.
struct Lie2Groups {
  double second = 0.0;
  double bracket = 0.0;
  double cross = 0.0;
  double bracket_closed = 0.0;
  double cross_closed = 0.0;
  double scale = 0.0;
};
Lie2Groups lie2_groups(const WarpedProduct& w, const SplitField& zeta, const SplitField& x, const SplitField& y,
                       const Point& p);

enum class TraceForm {
  /// includes the cross term 2 (ζ₁(f)/f) div₂ ζ₂
  with_divergence,
  /// the form without that term; agrees only when ζ₁(f) div₂ζ₂ = 0
  without_divergence,
};

/// Tr g(Dζ, Dζ) = Tr g₁(D¹ζ₁, D¹ζ₁) + Tr g₂(D²ζ₂, D²ζ₂) + 2 ‖ζ₂‖² ‖∇f‖²
///               + (n/f²) (ζ₁(f))² + 2 (ζ₁(f)/f) div₂ ζ₂.
/// Riemannian fibers only: SignatureUnsupportedError when ε = -1.
Residual trace_closed_form(const WarpedProduct& w, const SplitField& zeta, const Point& p,
                           TraceForm form = TraceForm::with_divergence);

/// Tr g(Dζ, Dζ) by inverse-metric contraction.
double connection_trace(const LocalGeometry& geo, const VectorFieldSpec& zeta);

}  // namespace warpcheck
