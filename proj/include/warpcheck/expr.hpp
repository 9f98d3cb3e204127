#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warpcheck/jet.hpp"

namespace warpcheck {

/// Coordinates of a point in a chart.  Dimension is checked against the
/// chart by every operation that takes one.
using Point = Eigen::VectorXd;

using CoordNames = std::vector<std::string>;

/// Immutable scalar function of the coordinates of one chart.
///
/// Nodes are shared, never mutated after construction, so an Expr can be
/// copied cheaply and evaluated from several threads at once.
class Expr {
 public:
  enum class Op : std::uint8_t {
    constant,
    variable,
    neg,
    sin,
    cos,
    exp,
    log,
    sqrt,
    cbrt,
    add,
    sub,
    mul,
    div,
    pow_const,  // lhs ^ number, exponent folded at construction
    pow,        // lhs ^ rhs, both non-constant
  };

  struct Node {
    Op op = Op::constant;
    double number = 0.0;  // constant value, or the exponent of pow_const
    Index var = 0;
    std::size_t offset = 0;  // byte offset in the source, 0 for built nodes
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr() = default;
  Expr(std::shared_ptr<const Node> root, std::shared_ptr<const CoordNames> coords);

  static Expr constant(double v, std::shared_ptr<const CoordNames> coords);
  static Expr variable(Index i, std::shared_ptr<const CoordNames> coords);

  const Node& root() const { return *root_; }
  const std::shared_ptr<const Node>& root_ptr() const { return root_; }
  const CoordNames& coords() const { return *coords_; }
  const std::shared_ptr<const CoordNames>& coords_ptr() const { return coords_; }
  Index arity() const { return static_cast<Index>(coords_->size()); }
  bool valid() const { return root_ != nullptr; }

  std::size_t node_count() const;
  /// Which coordinates the expression reads.
  std::vector<bool> dependencies() const;
  bool is_constant() const;
  /// True for a literal zero constant node (structural, not numeric).
  bool is_zero() const;

  /// Fully parenthesised DSL text that parses back to the same function.
  std::string to_string() const;

 private:
  std::shared_ptr<const Node> root_;
  std::shared_ptr<const CoordNames> coords_;
};

/// Parse DSL source over the given coordinate names.  See docs/grammar.md.
Expr parse(std::string_view source, const CoordNames& coords);
Expr parse(std::string_view source, std::shared_ptr<const CoordNames> coords);

double eval(const Expr& e, const Point& p);
Jet2 eval_jet2(const Expr& e, const Point& p);

/// Central finite-difference estimate of the first or second directional
/// derivative along `dir`.  Shares nothing with eval_jet2 but eval.
double fd_oracle(const Expr& e, const Point& p, const Eigen::VectorXd& dir, int order,
                 double step);

Expr operator-(const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, double exponent);

/// Re-express `e` on another chart: variable i becomes variable index_map[i].
Expr remap(const Expr& e, std::span<const Index> index_map,
           std::shared_ptr<const CoordNames> coords);

}  // namespace warpcheck
