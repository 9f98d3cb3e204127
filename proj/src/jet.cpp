#include "warpcheck/jet.hpp"

#include <utility>

namespace warpcheck {

namespace {

void mirror(Eigen::MatrixXd& h) {
  for (Index j = 0; j < h.cols(); ++j)
    for (Index i = j + 1; i < h.rows(); ++i) h(i, j) = h(j, i);
}

// a b^T + b a^T, upper triangle only; mirrored by the Jet2 constructor.
Eigen::MatrixXd sym_outer(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a * b.transpose() + b * a.transpose();
}

}  // namespace

Jet2::Jet2(double v, Eigen::VectorXd g, Eigen::MatrixXd h)
    : value(v), grad(std::move(g)), hess(std::move(h)) {
  mirror(hess);
}

Jet2 Jet2::constant(double v, Index n) {
  return Jet2(v, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n));
}

Jet2 Jet2::variable(double v, Index n, Index i) {
  return Jet2(v, Eigen::VectorXd::Unit(n, i), Eigen::MatrixXd::Zero(n, n));
}

Dual Jet2::partial(Index i) const { return Dual(grad(i), hess.row(i).transpose()); }

Dual Jet2::as_dual() const { return Dual(value, grad); }

Jet2 operator-(const Jet2& a) { return Jet2(-a.value, -a.grad, -a.hess); }

Jet2 operator+(const Jet2& a, const Jet2& b) {
  return Jet2(a.value + b.value, a.grad + b.grad, a.hess + b.hess);
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  return Jet2(a.value - b.value, a.grad - b.grad, a.hess - b.hess);
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  return Jet2(a.value * b.value, b.value * a.grad + a.value * b.grad,
              b.value * a.hess + a.value * b.hess + sym_outer(a.grad, b.grad));
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  // a * (1/b), but the value lane must match plain division bit for bit.
  const double inv = 1.0 / b.value;
  Jet2 r = a * compose(b, inv, -inv * inv, 2.0 * inv * inv * inv);
  r.value = a.value / b.value;
  return r;
}

Jet2 compose(const Jet2& a, double f0, double f1, double f2) {
  return Jet2(f0, f1 * a.grad, f1 * a.hess + f2 * (a.grad * a.grad.transpose()));
}

Jet2 compose(const Jet2& a, const Jet2& b, const Partials2& p) {
  Eigen::MatrixXd h = p.fa * a.hess + p.fb * b.hess + p.faa * (a.grad * a.grad.transpose()) +
                      p.fab * sym_outer(a.grad, b.grad) + p.fbb * (b.grad * b.grad.transpose());
  return Jet2(p.f, p.fa * a.grad + p.fb * b.grad, std::move(h));
}

}  // namespace warpcheck
