#include "warpcheck/manifold.hpp"

#include <algorithm>

#include "warpcheck/errors.hpp"

namespace warpcheck {

namespace {

std::size_t upper_index(Index n, Index i, Index j) {
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

}  // namespace

bool same_chart(const CoordNames& a, const CoordNames& b) { return &a == &b || a == b; }

Manifold::Manifold(std::string name, std::shared_ptr<const CoordNames> coords, std::vector<Expr> upper)
    : name_(std::move(name)), coords_(std::move(coords)), upper_(std::move(upper)) {
  const Index n = dim();
  if (n == 0) throw DimensionError("manifold '" + name_ + "' has no coordinates");
  if (static_cast<Index>(upper_.size()) != n * (n + 1) / 2)
    throw DimensionError("manifold '" + name_ + "': metric needs " + std::to_string(n * (n + 1) / 2) +
                         " upper-triangle entries");
  for (const Expr& e : upper_)
    if (!e.valid() || !same_chart(e.coords(), *coords_))
      throw DimensionError("manifold '" + name_ + "': metric entry on a different chart");
}

Manifold Manifold::parse(std::string name, const CoordNames& coords,
                         const std::vector<std::vector<std::string>>& entries) {
  auto chart = std::make_shared<const CoordNames>(coords);
  const Index n = static_cast<Index>(coords.size());
  if (static_cast<Index>(entries.size()) != n)
    throw DimensionError("manifold '" + name + "': metric must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  for (const auto& row : entries)
    if (static_cast<Index>(row.size()) != n) throw DimensionError("manifold '" + name + "': ragged metric");
  std::vector<Expr> upper;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const std::string& a = entries[i][j];
      const std::string& b = entries[j][i];
      if (!b.empty() && !a.empty() && a != b)
        throw DimensionError("manifold '" + name + "': metric entries (" + coords[i] + "," + coords[j] +
                             ") and (" + coords[j] + "," + coords[i] + ") differ");
      const std::string& text = a.empty() ? b : a;
      upper.push_back(text.empty() ? Expr::constant(0.0, chart) : warpcheck::parse(text, chart));
    }
  return Manifold(std::move(name), chart, std::move(upper));
}

Manifold Manifold::diagonal(std::string name, const CoordNames& coords, const std::vector<std::string>& diag) {
  std::vector<std::vector<std::string>> entries(coords.size(), std::vector<std::string>(coords.size()));
  if (diag.size() != coords.size()) throw DimensionError("manifold '" + name + "': diagonal size mismatch");
  for (std::size_t i = 0; i < diag.size(); ++i) entries[i][i] = diag[i];
  return parse(std::move(name), coords, entries);
}

const Expr& Manifold::metric(Index i, Index j) const { return upper_[upper_index(dim(), i, j)]; }

Index Manifold::coord_index(const std::string& name) const {
  auto it = std::find(coords_->begin(), coords_->end(), name);
  if (it == coords_->end()) throw DimensionError("no coordinate '" + name + "' on '" + name_ + "'");
  return it - coords_->begin();
}

Manifold Manifold::with_constraint(Expr positive, std::string label) const {
  if (!same_chart(positive.coords(), *coords_))
    throw DimensionError("constraint on '" + name_ + "' lives on a different chart");
  Manifold copy = *this;
  copy.constraints_.push_back({std::move(positive), std::move(label)});
  return copy;
}

void Manifold::check_domain(const Point& p) const {
  if (p.size() != dim()) throw DimensionError("point dimension does not match '" + name_ + "'");
  for (const auto& c : constraints_)
    if (!(eval(c.expr, p) > 0.0)) throw DomainError("point outside domain of '" + name_ + "': " + c.label);
}

bool Manifold::in_domain(const Point& p) const {
  try {
    check_domain(p);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

VectorFieldSpec::VectorFieldSpec(std::shared_ptr<const CoordNames> coords, std::vector<Expr> components)
    : coords_(std::move(coords)), components_(std::move(components)) {
  if (static_cast<Index>(components_.size()) != static_cast<Index>(coords_->size()))
    throw DimensionError("vector field has " + std::to_string(components_.size()) + " components on a " +
                         std::to_string(coords_->size()) + "-dimensional chart");
  for (const Expr& e : components_)
    if (!e.valid() || !same_chart(e.coords(), *coords_))
      throw DimensionError("vector field component on a different chart");
}

VectorFieldSpec VectorFieldSpec::parse(std::shared_ptr<const CoordNames> coords,
                                       const std::vector<std::string>& components) {
  std::vector<Expr> parsed;
  for (const auto& c : components) parsed.push_back(c.empty() ? Expr::constant(0.0, coords) : warpcheck::parse(c, coords));
  return VectorFieldSpec(std::move(coords), std::move(parsed));
}

VectorFieldSpec VectorFieldSpec::zero(std::shared_ptr<const CoordNames> coords) {
  std::vector<Expr> parts(coords->size(), Expr::constant(0.0, coords));
  return VectorFieldSpec(std::move(coords), std::move(parts));
}

VectorFieldSpec VectorFieldSpec::coordinate(std::shared_ptr<const CoordNames> coords, Index i) {
  std::vector<Expr> parts(coords->size(), Expr::constant(0.0, coords));
  parts.at(static_cast<std::size_t>(i)) = Expr::constant(1.0, coords);
  return VectorFieldSpec(std::move(coords), std::move(parts));
}

bool VectorFieldSpec::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const Expr& e) { return e.is_zero(); });
}

TensorSample<Dual> metric_jets(const Manifold& m, const Point& p) {
  const Index n = m.dim();
  TensorSample<Dual> out{MatrixX<Dual>(n, n), std::vector<MatrixX<Dual>>(n, MatrixX<Dual>(n, n))};
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const Jet2 jet = eval_jet2(m.metric(i, j), p);
      out.value(i, j) = out.value(j, i) = jet.as_dual();
      for (Index l = 0; l < n; ++l) out.partial[l](i, j) = out.partial[l](j, i) = jet.partial(l);
    }
  return out;
}

Eigen::MatrixXd metric_values(const Manifold& m, const Point& p) {
  const Index n = m.dim();
  Eigen::MatrixXd g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) g(i, j) = g(j, i) = eval(m.metric(i, j), p);
  return g;
}

VectorSample<Dual> field_jets(const VectorFieldSpec& v, const Point& p) {
  const Index n = v.dim();
  VectorSample<Dual> out{VectorX<Dual>(n), MatrixX<Dual>(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Jet2 jet = eval_jet2(v[k], p);
    out.value(k) = jet.as_dual();
    for (Index i = 0; i < n; ++i) out.jacobian(k, i) = jet.partial(i);
  }
  return out;
}

VectorSample<double> field_at(const VectorFieldSpec& v, const Point& p) {
  const Index n = v.dim();
  VectorSample<double> out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Jet2 jet = eval_jet2(v[k], p);
    out.value(k) = jet.value;
    out.jacobian.row(k) = jet.grad.transpose();
  }
  return out;
}

Eigen::VectorXd field_values(const VectorFieldSpec& v, const Point& p) {
  Eigen::VectorXd out(v.dim());
  for (Index k = 0; k < v.dim(); ++k) out(k) = eval(v[k], p);
  return out;
}

}  // namespace warpcheck
