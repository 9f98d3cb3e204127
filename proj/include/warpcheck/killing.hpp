#pragma once

#include "warpcheck/check.hpp"
#include "warpcheck/geometry.hpp"
#include "warpcheck/warped.hpp"

namespace warpcheck {

/// max |D_X Y - D_Y X - [X,Y]| over samples and ordered pairs of `fields`
/// plus the coordinate fields.
CheckResult torsion_defect(const Manifold& m, const std::vector<VectorFieldSpec>& fields, const SampleSpec& spec,
                           const Tolerance& tol = {});

/// max |X g(Y,Z) - g(D_X Y, Z) - g(Y, D_X Z)| over samples and triples drawn
/// from `fields` plus the coordinate fields.
CheckResult compatibility_defect(const Manifold& m, const std::vector<VectorFieldSpec>& fields,
                                 const SampleSpec& spec, const Tolerance& tol = {});

/// max |(L_ζ g)_ij| over samples.
CheckResult killing_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                           const Tolerance& tol = {});

/// max |(L_ζ L_ζ g)_ij| over samples.
CheckResult two_killing_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                               const Tolerance& tol = {});

/// max |(D_∂i ζ)^k| over samples and directions.
CheckResult parallel_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                            const Tolerance& tol = {});

/// max |D_ζ ζ| over samples.
CheckResult geodesic_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                            const Tolerance& tol = {});

/// Terms of R(ζ,X,ζ,X) = g(D_X ζ, D_X ζ) + g(D_X D_ζ ζ, X) at one point,
/// where R(ζ,X,ζ,X) is read as g(R(ζ,X)X, ζ).
struct CurvatureIdentity {
  double curvature = 0.0;
  double stretch = 0.0;  // g(D_X ζ, D_X ζ)
  double drift = 0.0;    // g(D_X D_ζ ζ, X)

  double residual() const { return curvature - stretch - drift; }
  double scale() const;
};
CurvatureIdentity curvature_identity_at(const LocalGeometry& geo, const Riemann& r, const VectorFieldSpec& zeta,
                                        const VectorFieldSpec& x);

/// The identity above for every coordinate field X.  Status is
/// informational when ζ is not 2-Killing at the samples.
CheckResult curvature_identity_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                                      const Tolerance& tol = {});

/// Hypotheses of the parallelism theorem on a warped product, then the
/// conclusion that ζ is parallel on the product.  `spec` samples the product.
///   1: ζ₁, ζ₂ 2-Killing with Ric(ζᵢ,ζᵢ) ≤ 0, f constant
///   2: ζ = ζ₁ 2-Killing with Ric(ζ₁,ζ₁) ≤ 0, ζ₁(f) = 0
///   3: ζ = ζ₂ 2-Killing with Ric(ζ₂,ζ₂) ≤ 0, f constant
CheckResult check_parallel_theorem(const WarpedProduct& w, const SplitField& zeta, const SampleSpec& spec,
                                   int variant, const Tolerance& tol = {});

/// Needs ζ 2-Killing.  Identity branch: g(R(ζ,T)T,ζ) = ‖D_T ζ‖² + g(D_T D_ζ ζ, T)
/// for coordinate T.  Sign branch, gated on D_ζ ζ = 0: K(ζ, X) ≥ 0 for
/// every coordinate X spanning a nondegenerate plane with ζ.
CheckResult sectional_sign_check(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                                 const Tolerance& tol = {});

/// |2uü + 4u̇²| over samples of a one-dimensional chart.
CheckResult ode_2killing_residual(const Expr& u, const SampleSpec& spec, const Tolerance& tol = {});

/// max |Ric(ζ,ζ)⁺| over samples: passes when Ric(ζ,ζ) ≤ tolerance.
CheckResult ricci_nonpositive(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                              const Tolerance& tol = {});

/// max |∂h| over samples: passes when h is constant.
CheckResult constant_defect(const Manifold& m, const Expr& h, const SampleSpec& spec, const Tolerance& tol = {});

/// max |ζ(h)| over samples.
CheckResult derivative_defect(const Manifold& m, const VectorFieldSpec& zeta, const Expr& h, const SampleSpec& spec,
                              const Tolerance& tol = {});

/// max |ζ^k| over samples: passes when ζ vanishes.
CheckResult zero_defect(const Manifold& m, const VectorFieldSpec& zeta, const SampleSpec& spec,
                        const Tolerance& tol = {});

}  // namespace warpcheck
