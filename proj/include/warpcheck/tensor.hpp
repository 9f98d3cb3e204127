#pragma once

// Pointwise tensor algebra on a single chart, templated on the scalar.
//
// With Scalar = double these produce values at a point.  With Scalar = Dual
// every entry also carries its gradient, which is how the geometry layer
// obtains partial derivatives of Christoffel symbols, of L_ζ g, and of
// covariant derivatives without finite differences.

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/CXX11/Tensor>

#include "warpcheck/jet.hpp"

namespace warpcheck {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Vector field at a point: components and Jacobian, jacobian(k, i) = ∂_i V^k.
template <class Scalar>
struct VectorSample {
  VectorX<Scalar> value;
  MatrixX<Scalar> jacobian;
};

/// Symmetric (0,2) tensor field at a point with its first partials,
/// partial[l] = ∂_l T.
template <class Scalar>
struct TensorSample {
  MatrixX<Scalar> value;
  std::vector<MatrixX<Scalar>> partial;
};

/// gamma[k](i, j) = Γ^k_ij.
template <class Scalar>
using Christoffel = std::vector<MatrixX<Scalar>>;

/// Lowered Riemann array, R(a, b, c, d) = g(R(∂_c, ∂_d) ∂_b, ∂_a) with
/// R(X, Y) = [D_X, D_Y] - D_[X,Y].
using Riemann = Eigen::Tensor<double, 4>;

Eigen::MatrixXd inverse(const Eigen::MatrixXd& g);
MatrixX<Dual> inverse(const MatrixX<Dual>& g);

/// Gradient of a first-order jet as a length-n vector (empty means zero).
Eigen::VectorXd gradient(const Dual& x, Index n);
Eigen::MatrixXd value_of(const MatrixX<Dual>& m);
Eigen::VectorXd value_of(const VectorX<Dual>& v);
Eigen::MatrixXd partial_of(const MatrixX<Dual>& m, Index l);
/// Split a field of first-order jets into values and Jacobian.
VectorSample<double> split(const VectorX<Dual>& v);
TensorSample<double> split(const MatrixX<Dual>& m);
Christoffel<double> value_of(const Christoffel<Dual>& gamma);
VectorSample<double> value_of(const VectorSample<Dual>& v);
TensorSample<double> value_of(const TensorSample<Dual>& t);

template <class Scalar>
Christoffel<Scalar> christoffel(const TensorSample<Scalar>& g, const MatrixX<Scalar>& ginv) {
  const Index n = g.value.rows();
  std::vector<MatrixX<Scalar>> lowered(n, MatrixX<Scalar>(n, n));
  for (Index l = 0; l < n; ++l)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        lowered[l](i, j) =
            Scalar(0.5) * (g.partial[i](j, l) + g.partial[j](i, l) - g.partial[l](i, j));
  Christoffel<Scalar> gamma(n, MatrixX<Scalar>::Zero(n, n));
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l) gamma[k] += ginv(k, l) * lowered[l];
  return gamma;
}

/// Same symbols with their first partials, assembled from plain doubles.
Christoffel<Dual> christoffel(const TensorSample<Dual>& g, const MatrixX<Dual>& ginv);

/// (D_X Y)^k = X^i ∂_i Y^k + Γ^k_ij X^i Y^j.
template <class Scalar>
VectorX<Scalar> covariant_derivative(const Christoffel<Scalar>& gamma, const VectorX<Scalar>& x,
                                     const VectorSample<Scalar>& y) {
  VectorX<Scalar> result = y.jacobian * x;
  for (Index k = 0; k < result.size(); ++k) result(k) += x.dot(gamma[k] * y.value);
  return result;
}

/// [X, Y]^k = X^i ∂_i Y^k - Y^i ∂_i X^k.
template <class Scalar>
VectorX<Scalar> lie_bracket(const VectorSample<Scalar>& x, const VectorSample<Scalar>& y) {
  return y.jacobian * x.value - x.jacobian * y.value;
}

/// The two groups of terms of L_ζ T for symmetric T:
///   transport = ζ^l ∂_l T,   stretch = T J  with J(l, j) = ∂_j ζ^l,
/// so that L_ζ T = transport + stretch + stretchᵀ.
template <class Scalar>
struct LieTerms {
  MatrixX<Scalar> transport;
  MatrixX<Scalar> stretch;

  MatrixX<Scalar> sum() const { return transport + stretch + stretch.transpose(); }
};

template <class Scalar>
LieTerms<Scalar> lie_terms(const TensorSample<Scalar>& t, const VectorSample<Scalar>& zeta) {
  const Index n = t.value.rows();
  MatrixX<Scalar> transport = MatrixX<Scalar>::Zero(n, n);
  for (Index l = 0; l < n; ++l) transport += zeta.value(l) * t.partial[l];
  return {std::move(transport), t.value * zeta.jacobian};
}

template <class Scalar>
MatrixX<Scalar> lie_derivative(const TensorSample<Scalar>& t, const VectorSample<Scalar>& zeta) {
  return lie_terms(t, zeta).sum();
}

/// g(u, v), evaluated so that swapping u and v gives bit-identical results.
template <class Scalar>
Scalar inner(const MatrixX<Scalar>& g, const VectorX<Scalar>& u, const VectorX<Scalar>& v) {
  Scalar acc(0);
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) acc += g(i, j) * (Scalar(0.5) * (u(i) * v(j) + v(i) * u(j)));
  return acc;
}

Riemann riemann(const Eigen::MatrixXd& g, const Christoffel<Dual>& gamma);

/// Functional form g(R(X, Y) Z, W).
double curvature(const Riemann& r, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& z, const Eigen::VectorXd& w);

/// Ric_bd = g^ac R_abcd.
Eigen::MatrixXd ricci(const Riemann& r, const Eigen::MatrixXd& ginv);

/// Entry-wise max |m_ij|, 0 for empty.
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace warpcheck
