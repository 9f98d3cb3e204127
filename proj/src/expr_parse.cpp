#include <cctype>
#include <charconv>
#include <functional>
#include <utility>

#include "warpcheck/errors.hpp"
#include "warpcheck/expr.hpp"

namespace warpcheck {

using Op = Expr::Op;
using NodePtr = std::shared_ptr<const Expr::Node>;

namespace {

NodePtr make_node(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, std::size_t offset = 0) {
  auto n = std::make_shared<Expr::Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->offset = offset;
  return n;
}

NodePtr make_constant(double v, std::size_t offset = 0) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::constant;
  n->number = v;
  n->offset = offset;
  return n;
}

NodePtr make_variable(Index i, std::size_t offset = 0) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::variable;
  n->var = i;
  n->offset = offset;
  return n;
}

bool reads_variables(const Expr::Node& n) {
  if (n.op == Op::variable) return true;
  if (n.lhs && reads_variables(*n.lhs)) return true;
  return n.rhs && reads_variables(*n.rhs);
}

bool is_literal(const NodePtr& n, double v) { return n->op == Op::constant && n->number == v; }

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  return v < 0 ? "(" + s + ")" : s;
}

const char* function_name(Op op) {
  switch (op) {
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
    case Op::cbrt: return "cbrt";
    default: return nullptr;
  }
}

const char* operator_symbol(Op op) {
  switch (op) {
    case Op::add: return " + ";
    case Op::sub: return " - ";
    case Op::mul: return " * ";
    case Op::div: return " / ";
    case Op::pow: return " ^ ";
    default: return nullptr;
  }
}

std::string render(const Expr::Node& n, const CoordNames& coords) {
  switch (n.op) {
    case Op::constant: return format_number(n.number);
    case Op::variable: return coords[static_cast<std::size_t>(n.var)];
    case Op::neg: return "(-" + render(*n.lhs, coords) + ")";
    case Op::pow_const: return "(" + render(*n.lhs, coords) + " ^ " + format_number(n.number) + ")";
    default: break;
  }
  if (const char* f = function_name(n.op)) return std::string(f) + "(" + render(*n.lhs, coords) + ")";
  return "(" + render(*n.lhs, coords) + operator_symbol(n.op) + render(*n.rhs, coords) + ")";
}

// Folds a constant exponent; the caller guarantees `exponent` reads no variables.
double constant_value(const NodePtr& exponent) {
  static const auto no_coords = std::make_shared<const CoordNames>();
  return eval(Expr(exponent, no_coords), Point(0));
}

NodePtr make_power(NodePtr base, NodePtr exponent, std::size_t offset) {
  if (reads_variables(*exponent)) return make_node(Op::pow, std::move(base), std::move(exponent), offset);
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::pow_const;
  n->number = constant_value(exponent);
  n->lhs = std::move(base);
  n->offset = offset;
  return n;
}

struct Token {
  enum Kind { number, name, symbol, end } kind = end;
  std::string_view text;
  double value = 0.0;
  std::size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view src, const CoordNames& coords) : src_(src), coords_(coords) { advance(); }

  NodePtr parse_all() {
    NodePtr e = expression();
    if (tok_.kind != Token::end) throw ParseError("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
    return e;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ == src_.size()) return;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
      if (ec != std::errc()) throw ParseError("malformed number", pos_);
      const auto len = static_cast<std::size_t>(end - (src_.data() + pos_));
      tok_ = {Token::number, src_.substr(pos_, len), v, pos_};
      pos_ += len;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_ + 1;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      tok_ = {Token::name, src_.substr(pos_, end - pos_), 0.0, pos_};
      pos_ = end;
      return;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      tok_ = {Token::symbol, src_.substr(pos_, 1), 0.0, pos_};
      ++pos_;
      return;
    }
    throw ParseError("unexpected character", pos_);
  }

  bool at(char c) const { return tok_.kind == Token::symbol && tok_.text[0] == c; }

  void expect(char c) {
    if (!at(c)) throw ParseError(std::string("expected '") + c + "'", tok_.offset);
    advance();
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (at('+') || at('-')) {
      const Op op = at('+') ? Op::add : Op::sub;
      const std::size_t off = tok_.offset;
      advance();
      lhs = make_node(op, lhs, term(), off);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (at('*') || at('/')) {
      const Op op = at('*') ? Op::mul : Op::div;
      const std::size_t off = tok_.offset;
      advance();
      lhs = make_node(op, lhs, unary(), off);
    }
    return lhs;
  }

  NodePtr unary() {
    if (at('-')) {
      const std::size_t off = tok_.offset;
      advance();
      return make_node(Op::neg, unary(), nullptr, off);
    }
    if (at('+')) {
      advance();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (at('^')) {
      const std::size_t off = tok_.offset;
      advance();
      return make_power(base, unary(), off);
    }
    return base;
  }

  NodePtr primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Token::number:
        advance();
        return make_constant(t.value, t.offset);
      case Token::name: {
        advance();
        if (at('(')) {
          const Op op = function_op(t);
          advance();
          NodePtr arg = expression();
          expect(')');
          return make_node(op, arg, nullptr, t.offset);
        }
        for (std::size_t i = 0; i < coords_.size(); ++i)
          if (coords_[i] == t.text) return make_variable(static_cast<Index>(i), t.offset);
        throw UnknownVariableError(std::string(t.text), t.offset);
      }
      case Token::symbol:
        if (at('(')) {
          advance();
          NodePtr e = expression();
          expect(')');
          return e;
        }
        break;
      case Token::end:
        break;
    }
    throw ParseError("expected operand", t.offset);
  }

  static Op function_op(const Token& t) {
    static const std::pair<std::string_view, Op> table[] = {
        {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp},
        {"log", Op::log}, {"sqrt", Op::sqrt}, {"cbrt", Op::cbrt},
    };
    for (const auto& [name, op] : table)
      if (name == t.text) return op;
    throw ParseError("unknown function '" + std::string(t.text) + "'", t.offset);
  }

  std::string_view src_;
  const CoordNames& coords_;
  std::size_t pos_ = 0;
  Token tok_;
};

void require_same_chart(const Expr& a, const Expr& b) {
  if (a.coords_ptr() != b.coords_ptr() && a.coords() != b.coords())
    throw DimensionError("expressions live on different charts");
}

NodePtr remap_node(const NodePtr& n, std::span<const Index> index_map) {
  if (n->op == Op::variable) return make_variable(index_map[static_cast<std::size_t>(n->var)], n->offset);
  if (!n->lhs) return n;
  auto copy = std::make_shared<Expr::Node>(*n);
  copy->lhs = remap_node(n->lhs, index_map);
  if (n->rhs) copy->rhs = remap_node(n->rhs, index_map);
  return copy;
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root, std::shared_ptr<const CoordNames> coords)
    : root_(std::move(root)), coords_(std::move(coords)) {}

Expr Expr::constant(double v, std::shared_ptr<const CoordNames> coords) {
  return Expr(make_constant(v), std::move(coords));
}

Expr Expr::variable(Index i, std::shared_ptr<const CoordNames> coords) {
  if (i < 0 || i >= static_cast<Index>(coords->size())) throw DimensionError("variable index out of range");
  return Expr(make_variable(i), std::move(coords));
}

std::size_t Expr::node_count() const {
  std::function<std::size_t(const Node&)> count = [&](const Node& n) -> std::size_t {
    return 1 + (n.lhs ? count(*n.lhs) : 0) + (n.rhs ? count(*n.rhs) : 0);
  };
  return count(*root_);
}

std::vector<bool> Expr::dependencies() const {
  std::vector<bool> deps(coords_->size(), false);
  std::function<void(const Node&)> visit = [&](const Node& n) {
    if (n.op == Op::variable) deps[static_cast<std::size_t>(n.var)] = true;
    if (n.lhs) visit(*n.lhs);
    if (n.rhs) visit(*n.rhs);
  };
  visit(*root_);
  return deps;
}

bool Expr::is_constant() const { return !reads_variables(*root_); }

bool Expr::is_zero() const { return root_->op == Op::constant && root_->number == 0.0; }

std::string Expr::to_string() const { return render(*root_, *coords_); }

Expr parse(std::string_view source, std::shared_ptr<const CoordNames> coords) {
  Parser parser(source, *coords);
  NodePtr root = parser.parse_all();
  return Expr(std::move(root), std::move(coords));
}

Expr parse(std::string_view source, const CoordNames& coords) {
  return parse(source, std::make_shared<const CoordNames>(coords));
}

Expr operator-(const Expr& a) {
  if (a.is_zero()) return a;
  return Expr(make_node(Op::neg, a.root_ptr()), a.coords_ptr());
}

Expr operator+(const Expr& a, const Expr& b) {
  require_same_chart(a, b);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr(make_node(Op::add, a.root_ptr(), b.root_ptr()), a.coords_ptr());
}

Expr operator-(const Expr& a, const Expr& b) {
  require_same_chart(a, b);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr(make_node(Op::sub, a.root_ptr(), b.root_ptr()), a.coords_ptr());
}

Expr operator*(const Expr& a, const Expr& b) {
  require_same_chart(a, b);
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0, a.coords_ptr());
  if (is_literal(a.root_ptr(), 1.0)) return b;
  if (is_literal(b.root_ptr(), 1.0)) return a;
  return Expr(make_node(Op::mul, a.root_ptr(), b.root_ptr()), a.coords_ptr());
}

Expr operator/(const Expr& a, const Expr& b) {
  require_same_chart(a, b);
  if (is_literal(b.root_ptr(), 1.0)) return a;
  return Expr(make_node(Op::div, a.root_ptr(), b.root_ptr()), a.coords_ptr());
}

Expr pow(const Expr& base, double exponent) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Op::pow_const;
  n->number = exponent;
  n->lhs = base.root_ptr();
  return Expr(std::move(n), base.coords_ptr());
}

Expr remap(const Expr& e, std::span<const Index> index_map, std::shared_ptr<const CoordNames> coords) {
  if (index_map.size() != e.coords().size()) throw DimensionError("remap: index map size mismatch");
  for (Index target : index_map)
    if (target < 0 || target >= static_cast<Index>(coords->size()))
      throw DimensionError("remap: target index out of range");
  return Expr(remap_node(e.root_ptr(), index_map), std::move(coords));
}

}  // namespace warpcheck
