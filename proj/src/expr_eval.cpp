#include <charconv>
#include <cmath>

#include "warpcheck/errors.hpp"
#include "warpcheck/expr.hpp"

namespace warpcheck {

using Op = Expr::Op;

namespace {

struct Univariate {
  double f0 = 0, f1 = 0, f2 = 0;
};

double value(double a) { return a; }
double value(const Jet2& a) { return a.value; }

double lift(const double&, const Univariate& u) { return u.f0; }
Jet2 lift(const Jet2& a, const Univariate& u) { return compose(a, u.f0, u.f1, u.f2); }

double lift(const double&, const double&, const Partials2& p) { return p.f; }
Jet2 lift(const Jet2& a, const Jet2& b, const Partials2& p) { return compose(a, b, p); }

double ipow(double x, long long n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  double result = 1.0;
  double base = x;
  auto k = static_cast<unsigned long long>(n);
  while (k) {
    if (k & 1u) result *= base;
    base *= base;
    k >>= 1u;
  }
  return result;
}

bool integral(double q) { return std::trunc(q) == q && std::fabs(q) < 1e9; }

std::string show(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <class S>
class Evaluator {
 public:
  Evaluator(const Expr& e, const Point& p, bool jets) : expr_(e), point_(p), jets_(jets) {}

  S run(const Expr::Node& n) const {
    switch (n.op) {
      case Op::constant: return constant(n.number);
      case Op::variable: return variable(n.var);
      case Op::neg: return -run(*n.lhs);
      case Op::add: return run(*n.lhs) + run(*n.rhs);
      case Op::sub: return run(*n.lhs) - run(*n.rhs);
      case Op::mul: return run(*n.lhs) * run(*n.rhs);
      case Op::div: {
        S num = run(*n.lhs);
        S den = run(*n.rhs);
        if (value(den) == 0.0) fail<DomainError>(n, "division by zero");
        return num / den;
      }
      case Op::pow: {
        S base = run(*n.lhs);
        S ex = run(*n.rhs);
        return lift(base, ex, general_power(n, value(base), value(ex)));
      }
      default: {
        S a = run(*n.lhs);
        return lift(a, univariate(n, value(a)));
      }
    }
  }

 private:
  S constant(double v) const {
    if constexpr (std::is_same_v<S, double>)
      return v;
    else
      return Jet2::constant(v, point_.size());
  }

  S variable(Index i) const {
    if constexpr (std::is_same_v<S, double>)
      return point_(i);
    else
      return Jet2::variable(point_(i), point_.size(), i);
  }

  template <class E>
  [[noreturn]] void fail(const Expr::Node& n, const std::string& what) const {
    throw E(what + " in '" + Expr(std::shared_ptr<const Expr::Node>(&n, [](const Expr::Node*) {}),
                                  expr_.coords_ptr())
                                 .to_string() +
            "'");
  }

  Univariate univariate(const Expr::Node& n, double x) const {
    switch (n.op) {
      case Op::sin: return {std::sin(x), std::cos(x), -std::sin(x)};
      case Op::cos: return {std::cos(x), -std::sin(x), -std::cos(x)};
      case Op::exp: {
        const double e = std::exp(x);
        return {e, e, e};
      }
      case Op::log:
        if (x <= 0.0) fail<DomainError>(n, "log of non-positive value " + show(x));
        return {std::log(x), 1.0 / x, -1.0 / (x * x)};
      case Op::sqrt: {
        if (x < 0.0) fail<DomainError>(n, "sqrt of negative value " + show(x));
        const double s = std::sqrt(x);
        if (!jets_) return {s};
        if (x == 0.0) fail<NonDifferentiableError>(n, "sqrt is not differentiable at 0");
        return {s, 0.5 / s, -0.25 / (s * x)};
      }
      case Op::cbrt: {
        const double c = std::cbrt(x);
        if (!jets_) return {c};
        if (x == 0.0) fail<NonDifferentiableError>(n, "cbrt is not differentiable at 0");
        return {c, c / (3.0 * x), -2.0 * c / (9.0 * x * x)};
      }
      case Op::pow_const: return constant_power(n, x, n.number);
      default: break;
    }
    fail<Error>(n, "malformed expression node");
  }

  Univariate constant_power(const Expr::Node& n, double x, double q) const {
    if (integral(q)) {
      const auto k = static_cast<long long>(q);
      if (k < 0 && x == 0.0) fail<DomainError>(n, "zero raised to a negative power");
      if (!jets_) return {ipow(x, k)};
      const double d1 = k == 0 ? 0.0 : static_cast<double>(k) * ipow(x, k - 1);
      const double d2 = (k == 0 || k == 1) ? 0.0 : static_cast<double>(k * (k - 1)) * ipow(x, k - 2);
      return {ipow(x, k), d1, d2};
    }
    if (x < 0.0) fail<DomainError>(n, "non-integer power of negative value " + show(x));
    if (x == 0.0) {
      if (q < 0.0) fail<DomainError>(n, "zero raised to a negative power");
      if (jets_ && q < 2.0) fail<NonDifferentiableError>(n, "power is not twice differentiable at 0");
      return {0.0, 0.0, 0.0};
    }
    return {std::pow(x, q), q * std::pow(x, q - 1.0), q * (q - 1.0) * std::pow(x, q - 2.0)};
  }

  Partials2 general_power(const Expr::Node& n, double a, double b) const {
    if (a <= 0.0) fail<DomainError>(n, "variable power of non-positive value " + show(a));
    Partials2 p;
    p.f = std::pow(a, b);
    if (!jets_) return p;
    const double la = std::log(a);
    const double am1 = std::pow(a, b - 1.0);
    p.fa = b * am1;
    p.fb = p.f * la;
    p.faa = b * (b - 1.0) * std::pow(a, b - 2.0);
    p.fab = am1 * (1.0 + b * la);
    p.fbb = p.f * la * la;
    return p;
  }

  const Expr& expr_;
  const Point& point_;
  bool jets_;
};

void check_arity(const Expr& e, const Point& p) {
  if (p.size() != e.arity())
    throw DimensionError("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                         std::to_string(e.arity()));
}

}  // namespace

double eval(const Expr& e, const Point& p) {
  check_arity(e, p);
  return Evaluator<double>(e, p, false).run(e.root());
}

Jet2 eval_jet2(const Expr& e, const Point& p) {
  check_arity(e, p);
  return Evaluator<Jet2>(e, p, true).run(e.root());
}

double fd_oracle(const Expr& e, const Point& p, const Eigen::VectorXd& dir, int order, double step) {
  if (!(step > 0.0)) throw Error("fd_oracle: step must be positive");
  if (dir.size() != p.size()) throw DimensionError("fd_oracle: direction dimension mismatch");
  const double plus = eval(e, p + step * dir);
  const double minus = eval(e, p - step * dir);
  switch (order) {
    case 1: return (plus - minus) / (2.0 * step);
    case 2: return (plus - 2.0 * eval(e, p) + minus) / (step * step);
    default: throw Error("fd_oracle: order must be 1 or 2");
  }
}

}  // namespace warpcheck
