#include "warpcheck/tensor.hpp"

namespace warpcheck {

Eigen::MatrixXd inverse(const Eigen::MatrixXd& g) { return g.fullPivLu().inverse(); }

MatrixX<Dual> inverse(const MatrixX<Dual>& g) {
  // ∂_l (g⁻¹) = -g⁻¹ (∂_l g) g⁻¹
  const Index n = g.rows();
  const Eigen::MatrixXd ginv = inverse(value_of(g));
  Index dim = 0;
  for (Index i = 0; i < g.size(); ++i) dim = std::max(dim, g.data()[i].derivatives().size());
  std::vector<Eigen::MatrixXd> partials(static_cast<std::size_t>(dim));
  for (Index l = 0; l < dim; ++l) partials[l] = -ginv * partial_of(g, l) * ginv;
  MatrixX<Dual> out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Eigen::VectorXd d(dim);
      for (Index l = 0; l < dim; ++l) d(l) = partials[l](i, j);
      out(i, j) = Dual(ginv(i, j), d);
    }
  return out;
}

Christoffel<Dual> christoffel(const TensorSample<Dual>& g, const MatrixX<Dual>& ginv) {
  // Γ^k = g^kl Γ_l and ∂_m Γ^k = (∂_m g^kl) Γ_l + g^kl ∂_m Γ_l
  const Index n = g.value.rows();
  const Eigen::MatrixXd gi = value_of(ginv);
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n));
  std::vector<Eigen::MatrixXd> dgi(static_cast<std::size_t>(n));
  std::vector<std::vector<Eigen::MatrixXd>> ddg(static_cast<std::size_t>(n));
  for (Index l = 0; l < n; ++l) {
    dg[l] = value_of(g.partial[l]);
    dgi[l] = partial_of(ginv, l);
    for (Index m = 0; m < n; ++m) ddg[l].push_back(partial_of(g.partial[l], m));
  }
  const auto lowered = [n](const auto& d) {
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(n), Eigen::MatrixXd(n, n));
    for (Index l = 0; l < n; ++l)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) out[l](i, j) = 0.5 * (d(i)(j, l) + d(j)(i, l) - d(l)(i, j));
    return out;
  };
  const auto low = lowered([&](Index a) -> const Eigen::MatrixXd& { return dg[a]; });
  std::vector<std::vector<Eigen::MatrixXd>> dlow;
  for (Index m = 0; m < n; ++m) dlow.push_back(lowered([&](Index a) -> const Eigen::MatrixXd& { return ddg[a][m]; }));

  Christoffel<Dual> gamma(static_cast<std::size_t>(n), MatrixX<Dual>(n, n));
  for (Index k = 0; k < n; ++k) {
    Eigen::MatrixXd value = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::MatrixXd> partial(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (Index l = 0; l < n; ++l) {
      value += gi(k, l) * low[l];
      for (Index m = 0; m < n; ++m) partial[m] += dgi[m](k, l) * low[l] + gi(k, l) * dlow[m][l];
    }
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        Eigen::VectorXd d(n);
        for (Index m = 0; m < n; ++m) d(m) = partial[m](i, j);
        gamma[k](i, j) = Dual(value(i, j), d);
      }
  }
  return gamma;
}

Eigen::VectorXd gradient(const Dual& x, Index n) {
  if (x.derivatives().size() == 0) return Eigen::VectorXd::Zero(n);
  return x.derivatives();
}

Eigen::MatrixXd value_of(const MatrixX<Dual>& m) {
  return m.unaryExpr([](const Dual& d) { return d.value(); });
}

Eigen::VectorXd value_of(const VectorX<Dual>& v) {
  return v.unaryExpr([](const Dual& d) { return d.value(); });
}

Eigen::MatrixXd partial_of(const MatrixX<Dual>& m, Index l) {
  return m.unaryExpr([l](const Dual& d) { return d.derivatives().size() == 0 ? 0.0 : d.derivatives()(l); });
}

VectorSample<double> split(const VectorX<Dual>& v) {
  const Index n = v.size();
  VectorSample<double> out{value_of(v), Eigen::MatrixXd::Zero(n, n)};
  for (Index k = 0; k < n; ++k) out.jacobian.row(k) = gradient(v(k), n).transpose();
  return out;
}

TensorSample<double> split(const MatrixX<Dual>& m) {
  TensorSample<double> out{value_of(m), {}};
  for (Index l = 0; l < m.rows(); ++l) out.partial.push_back(partial_of(m, l));
  return out;
}

Christoffel<double> value_of(const Christoffel<Dual>& gamma) {
  Christoffel<double> out;
  out.reserve(gamma.size());
  for (const auto& g : gamma) out.push_back(value_of(g));
  return out;
}

VectorSample<double> value_of(const VectorSample<Dual>& v) {
  return {value_of(v.value), value_of(v.jacobian)};
}

TensorSample<double> value_of(const TensorSample<Dual>& t) {
  TensorSample<double> out{value_of(t.value), {}};
  for (const auto& d : t.partial) out.partial.push_back(value_of(d));
  return out;
}

Riemann riemann(const Eigen::MatrixXd& g, const Christoffel<Dual>& gamma) {
  const Index n = g.rows();
  const Christoffel<double> gv = value_of(gamma);
  // up(m, b, c, d): component m of R(∂_c, ∂_d) ∂_b
  Riemann up(n, n, n, n);
  for (Index m = 0; m < n; ++m)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) {
          double v = gradient(gamma[m](d, b), n)(c) - gradient(gamma[m](c, b), n)(d);
          for (Index p = 0; p < n; ++p) v += gv[m](c, p) * gv[p](d, b) - gv[m](d, p) * gv[p](c, b);
          up(m, b, c, d) = v;
        }
  Riemann r(n, n, n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) {
          double v = 0.0;
          for (Index m = 0; m < n; ++m) v += g(a, m) * up(m, b, c, d);
          r(a, b, c, d) = v;
        }
  return r;
}

double curvature(const Riemann& r, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& z, const Eigen::VectorXd& w) {
  const Index n = x.size();
  double acc = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) acc += r(a, b, c, d) * w(a) * z(b) * x(c) * y(d);
  return acc;
}

Eigen::MatrixXd ricci(const Riemann& r, const Eigen::MatrixXd& ginv) {
  const Index n = ginv.rows();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (Index b = 0; b < n; ++b)
    for (Index d = 0; d < n; ++d)
      for (Index a = 0; a < n; ++a)
        for (Index c = 0; c < n; ++c) ric(b, d) += ginv(a, c) * r(a, b, c, d);
  return 0.5 * (ric + ric.transpose());
}

}  // namespace warpcheck
