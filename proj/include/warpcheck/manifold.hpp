#pragma once

#include <string>
#include <vector>

#include "warpcheck/expr.hpp"
#include "warpcheck/tensor.hpp"

namespace warpcheck {

/// A positivity requirement on the chart, e.g. f > 0 or r > 0.
struct Constraint {
  Expr expr;
  std::string label;
};

/// One chart with a symmetric metric of expressions.  Signature is not
/// restricted.
class Manifold {
 public:
  Manifold() = default;
  /// `upper` holds the upper triangle row by row: (0,0) (0,1) ... (1,1) ...
  Manifold(std::string name, std::shared_ptr<const CoordNames> coords, std::vector<Expr> upper);

  /// Full n×n table of DSL strings; an empty string is 0.  A lower entry
  /// must be empty or repeat the upper one.
  static Manifold parse(std::string name, const CoordNames& coords,
                        const std::vector<std::vector<std::string>>& entries);
  static Manifold diagonal(std::string name, const CoordNames& coords,
                           const std::vector<std::string>& diag);

  const std::string& name() const { return name_; }
  const CoordNames& coords() const { return *coords_; }
  const std::shared_ptr<const CoordNames>& coords_ptr() const { return coords_; }
  Index dim() const { return static_cast<Index>(coords_->size()); }
  const Expr& metric(Index i, Index j) const;
  Index coord_index(const std::string& name) const;

  const std::vector<Constraint>& constraints() const { return constraints_; }
  Manifold with_constraint(Expr positive, std::string label) const;
  /// Throws DomainError naming the first violated constraint.
  void check_domain(const Point& p) const;
  bool in_domain(const Point& p) const;

 private:
  std::string name_;
  std::shared_ptr<const CoordNames> coords_;
  std::vector<Expr> upper_;
  std::vector<Constraint> constraints_;
};

/// Vector field components over a chart.
class VectorFieldSpec {
 public:
  VectorFieldSpec() = default;
  VectorFieldSpec(std::shared_ptr<const CoordNames> coords, std::vector<Expr> components);

  static VectorFieldSpec parse(std::shared_ptr<const CoordNames> coords,
                               const std::vector<std::string>& components);
  static VectorFieldSpec zero(std::shared_ptr<const CoordNames> coords);
  /// The coordinate field ∂_i.
  static VectorFieldSpec coordinate(std::shared_ptr<const CoordNames> coords, Index i);

  const CoordNames& coords() const { return *coords_; }
  const std::shared_ptr<const CoordNames>& coords_ptr() const { return coords_; }
  Index dim() const { return static_cast<Index>(components_.size()); }
  const Expr& operator[](Index k) const { return components_[static_cast<std::size_t>(k)]; }
  const std::vector<Expr>& components() const { return components_; }
  bool is_zero() const;

 private:
  std::shared_ptr<const CoordNames> coords_;
  std::vector<Expr> components_;
};

/// Metric with first partials carried as jets: value(i,j) knows ∂g_ij and
/// partial[l](i,j) = ∂_l g_ij knows ∂∂_l g_ij.
TensorSample<Dual> metric_jets(const Manifold& m, const Point& p);
Eigen::MatrixXd metric_values(const Manifold& m, const Point& p);

/// Field components and Jacobian, each entry carrying one more derivative.
VectorSample<Dual> field_jets(const VectorFieldSpec& v, const Point& p);
VectorSample<double> field_at(const VectorFieldSpec& v, const Point& p);
Eigen::VectorXd field_values(const VectorFieldSpec& v, const Point& p);

/// Same chart (identical pointer or identical names).
bool same_chart(const CoordNames& a, const CoordNames& b);

}  // namespace warpcheck
