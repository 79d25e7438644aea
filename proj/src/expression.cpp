#include "fracform/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "fracform/errors.hpp"

namespace fracform {

namespace {

bool is_const(const ExprPtr& e, double v) {
  return e->kind == ExprKind::Constant && e->value == v;
}

double eval_node(const Expr& e, const Point& p) {
  switch (e.kind) {
    case ExprKind::Constant: return e.value;
    case ExprKind::Coordinate: return p[static_cast<std::size_t>(e.coord)];
    case ExprKind::Add: return eval_node(*e.a, p) + eval_node(*e.b, p);
    case ExprKind::Sub: return eval_node(*e.a, p) - eval_node(*e.b, p);
    case ExprKind::Mul: return eval_node(*e.a, p) * eval_node(*e.b, p);
    case ExprKind::Div: return eval_node(*e.a, p) / eval_node(*e.b, p);
    case ExprKind::Pow: return std::pow(eval_node(*e.a, p), e.exponent);
    case ExprKind::Sin: return std::sin(eval_node(*e.a, p));
    case ExprKind::Cos: return std::cos(eval_node(*e.a, p));
    case ExprKind::Exp: return std::exp(eval_node(*e.a, p));
    case ExprKind::Ln: return std::log(eval_node(*e.a, p));
  }
  return 0.0;
}

bool depends(const Expr& e, int var) {
  switch (e.kind) {
    case ExprKind::Constant: return false;
    case ExprKind::Coordinate: return e.coord == var;
    default:
      if (e.a && depends(*e.a, var)) return true;
      if (e.b && depends(*e.b, var)) return true;
      return false;
  }
}

ExprPtr diff_node(const ExprPtr& e, int var);

ExprPtr diff_node(const ExprPtr& e, int var) {
  switch (e->kind) {
    case ExprKind::Constant: return make_constant(0.0);
    case ExprKind::Coordinate: return make_constant(e->coord == var ? 1.0 : 0.0);
    case ExprKind::Add: return make_add(diff_node(e->a, var), diff_node(e->b, var));
    case ExprKind::Sub: return make_sub(diff_node(e->a, var), diff_node(e->b, var));
    case ExprKind::Mul:
      return make_add(make_mul(diff_node(e->a, var), e->b),
                      make_mul(e->a, diff_node(e->b, var)));
    case ExprKind::Div:
      return make_div(make_sub(make_mul(diff_node(e->a, var), e->b),
                               make_mul(e->a, diff_node(e->b, var))),
                      make_pow(e->b, 2.0));
    case ExprKind::Pow:
      if (e->exponent == 0.0) return make_constant(0.0);
      return make_mul(make_constant(e->exponent),
                      make_mul(make_pow(e->a, e->exponent - 1.0), diff_node(e->a, var)));
    case ExprKind::Sin: return make_mul(make_cos(e->a), diff_node(e->a, var));
    case ExprKind::Cos:
      return make_mul(make_constant(-1.0), make_mul(make_sin(e->a), diff_node(e->a, var)));
    case ExprKind::Exp: return make_mul(make_exp(e->a), diff_node(e->a, var));
    case ExprKind::Ln: return make_div(diff_node(e->a, var), e->a);
  }
  return make_constant(0.0);
}

void print_node(const Expr& e, std::ostream& os);

void print_operand(const Expr& e, std::ostream& os, bool parens) {
  if (parens) os << '(';
  print_node(e, os);
  if (parens) os << ')';
}

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Pow: return 3;
    default: return 4;
  }
}

void print_node(const Expr& e, std::ostream& os) {
  switch (e.kind) {
    case ExprKind::Constant: {
      if (e.value < 0) {
        os << '(' << e.value << ')';
      } else {
        os << e.value;
      }
      return;
    }
    case ExprKind::Coordinate: os << 'x' << (e.coord + 1); return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      const char* op = e.kind == ExprKind::Add   ? "+"
                       : e.kind == ExprKind::Sub ? "-"
                       : e.kind == ExprKind::Mul ? "*"
                                                 : "/";
      int prec = precedence(e.kind);
      print_operand(*e.a, os, precedence(e.a->kind) < prec);
      os << op;
      print_operand(*e.b, os, precedence(e.b->kind) <= prec &&
                                  !(e.kind == ExprKind::Add && precedence(e.b->kind) == prec));
      return;
    }
    case ExprKind::Pow:
      print_operand(*e.a, os, precedence(e.a->kind) <= 3);
      os << '^';
      if (e.exponent < 0) {
        os << '(' << e.exponent << ')';
      } else {
        os << e.exponent;
      }
      return;
    case ExprKind::Sin: os << "sin("; print_node(*e.a, os); os << ')'; return;
    case ExprKind::Cos: os << "cos("; print_node(*e.a, os); os << ')'; return;
    case ExprKind::Exp: os << "exp("; print_node(*e.a, os); os << ')'; return;
    case ExprKind::Ln: os << "ln("; print_node(*e.a, os); os << ')'; return;
  }
}

}  // namespace

ExprPtr make_constant(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Constant;
  e->value = v;
  return e;
}

ExprPtr make_coordinate(int index) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Coordinate;
  e->coord = index;
  return e;
}

ExprPtr make_add(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return make_constant(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Add;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return make_constant(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return make_mul(make_constant(-1.0), b);
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Sub;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return make_constant(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (b->kind == ExprKind::Constant) std::swap(a, b);  // constants print first
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Mul;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant && b->value != 0.0)
    return make_constant(a->value / b->value);
  if (is_const(a, 0.0)) return make_constant(0.0);
  if (is_const(b, 1.0)) return a;
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Div;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_pow(ExprPtr base, double p) {
  if (p == 0.0) return make_constant(1.0);
  if (p == 1.0) return base;
  if (base->kind == ExprKind::Constant) return make_constant(std::pow(base->value, p));
  if (base->kind == ExprKind::Pow) return make_pow(base->a, base->exponent * p);
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->a = std::move(base);
  e->exponent = p;
  return e;
}

ExprPtr make_sin(ExprPtr a) {
  if (a->kind == ExprKind::Constant) return make_constant(std::sin(a->value));
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Sin;
  e->a = std::move(a);
  return e;
}

ExprPtr make_cos(ExprPtr a) {
  if (a->kind == ExprKind::Constant) return make_constant(std::cos(a->value));
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Cos;
  e->a = std::move(a);
  return e;
}

ExprPtr make_exp(ExprPtr a) {
  if (a->kind == ExprKind::Constant) return make_constant(std::exp(a->value));
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Exp;
  e->a = std::move(a);
  return e;
}

ExprPtr make_ln(ExprPtr a) {
  if (a->kind == ExprKind::Constant && a->value > 0.0) return make_constant(std::log(a->value));
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Ln;
  e->a = std::move(a);
  return e;
}

double ScalarField::operator()(const Point& p) const {
  if (static_cast<int>(p.size()) < arity_) throw DomainError("point has too few coordinates");
  return eval_node(*root_, p);
}

double ScalarField::eval1(double t) const {
  Point p{t};
  p.resize(static_cast<std::size_t>(arity_ > 0 ? arity_ : 1), t);
  return eval_node(*root_, p);
}

ScalarField ScalarField::derivative(int var) const {
  return ScalarField(diff_node(root_, var), arity_);
}

ScalarField ScalarField::derivative(int var, int times) const {
  ExprPtr r = root_;
  for (int i = 0; i < times; ++i) r = diff_node(r, var);
  return ScalarField(r, arity_);
}

bool ScalarField::is_zero() const {
  return root_ && root_->kind == ExprKind::Constant && root_->value == 0.0;
}

bool ScalarField::depends_on(int var) const { return root_ && depends(*root_, var); }

namespace {

// Pattern match a section along `var` against c * (t - shift)^p.
std::optional<PowerForm> power_of(const Expr& e, int var, const Point& at) {
  if (!depends(e, var)) {
    double v = eval_node(e, at);
    return PowerForm{v, 0.0, 0.0, true};
  }
  switch (e.kind) {
    case ExprKind::Coordinate:
      return PowerForm{1.0, 1.0, 0.0, false};
    case ExprKind::Add: {
      // t + c  ->  (t - (-c))
      if (e.a->kind == ExprKind::Coordinate && e.a->coord == var && !depends(*e.b, var))
        return PowerForm{1.0, 1.0, -eval_node(*e.b, at), false};
      if (e.b->kind == ExprKind::Coordinate && e.b->coord == var && !depends(*e.a, var))
        return PowerForm{1.0, 1.0, -eval_node(*e.a, at), false};
      return std::nullopt;
    }
    case ExprKind::Sub: {
      if (e.a->kind == ExprKind::Coordinate && e.a->coord == var && !depends(*e.b, var))
        return PowerForm{1.0, 1.0, eval_node(*e.b, at), false};
      // c - t = -(t - c)
      if (e.b->kind == ExprKind::Coordinate && e.b->coord == var && !depends(*e.a, var))
        return PowerForm{-1.0, 1.0, eval_node(*e.a, at), false};
      return std::nullopt;
    }
    case ExprKind::Mul: {
      auto pa = power_of(*e.a, var, at);
      auto pb = power_of(*e.b, var, at);
      if (!pa || !pb) return std::nullopt;
      if (!pa->any_shift && !pb->any_shift && pa->shift != pb->shift) return std::nullopt;
      double shift = pa->any_shift ? pb->shift : pa->shift;
      return PowerForm{pa->coeff * pb->coeff, pa->exponent + pb->exponent, shift,
                       pa->any_shift && pb->any_shift};
    }
    case ExprKind::Div: {
      auto pa = power_of(*e.a, var, at);
      auto pb = power_of(*e.b, var, at);
      if (!pa || !pb || pb->coeff == 0.0) return std::nullopt;
      if (!pa->any_shift && !pb->any_shift && pa->shift != pb->shift) return std::nullopt;
      double shift = pa->any_shift ? pb->shift : pa->shift;
      return PowerForm{pa->coeff / pb->coeff, pa->exponent - pb->exponent, shift,
                       pa->any_shift && pb->any_shift};
    }
    case ExprKind::Pow: {
      auto pa = power_of(*e.a, var, at);
      if (!pa) return std::nullopt;
      if (pa->coeff != 1.0 && pa->exponent != 0.0) {
        // (c * u)^p only folds cleanly for positive c
        if (pa->coeff <= 0.0) return std::nullopt;
      }
      return PowerForm{std::pow(pa->coeff, e.exponent), pa->exponent * e.exponent, pa->shift,
                       pa->any_shift};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

std::optional<PowerForm> ScalarField::as_power(int var, const Point& at) const {
  if (!root_) return std::nullopt;
  return power_of(*root_, var, at);
}

std::string ScalarField::to_string() const {
  if (!root_) return "0";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  print_node(*root_, os);
  return os.str();
}

std::function<double(double)> ScalarField::section(int var, Point at) const {
  ExprPtr r = root_;
  return [r, var, at](double t) mutable {
    at[static_cast<std::size_t>(var)] = t;
    return eval_node(*r, at);
  };
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over the infix mini-language.

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;
  int arity;
  const std::vector<std::string>& names;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (eat('+')) {
        e = make_add(e, parse_term());
      } else if (eat('-')) {
        e = make_sub(e, parse_term());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    for (;;) {
      if (eat('*')) {
        e = make_mul(e, parse_unary());
      } else if (eat('/')) {
        e = make_div(e, parse_unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_unary() {
    if (eat('-')) return make_sub(make_constant(0.0), parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    skip_ws();
    if (eat('^')) {
      std::size_t at = pos;
      ExprPtr e = parse_unary();
      if (e->kind != ExprKind::Constant)
        throw ParseError("exponent must be a constant", at);
      return make_pow(base, e->value);
    }
    return base;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("unexpected end of input", pos);
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return e;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr parse_number() {
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos);
    pos += static_cast<std::size_t>(end - begin);
    return make_constant(v);
  }

  ExprPtr parse_ident() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string id = s.substr(start, pos - start);
    if (id == "sin" || id == "cos" || id == "exp" || id == "ln") {
      if (!eat('(')) throw ParseError("expected '(' after function name", pos);
      ExprPtr arg = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      if (id == "sin") return make_sin(arg);
      if (id == "cos") return make_cos(arg);
      if (id == "exp") return make_exp(arg);
      return make_ln(arg);
    }
    if (id == "pow") {
      if (!eat('(')) throw ParseError("expected '(' after pow", pos);
      ExprPtr base = parse_expr();
      if (!eat(',')) throw ParseError("pow takes two arguments", pos);
      std::size_t at = pos;
      ExprPtr p = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      if (p->kind != ExprKind::Constant)
        throw ParseError("pow exponent must be a constant", at);
      return make_pow(base, p->value);
    }
    if (id == "pi") return make_constant(3.141592653589793238462643383279502884);
    if (id.size() >= 2 && id[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < id.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) digits = false;
      if (digits) {
        int k = std::atoi(id.c_str() + 1);
        if (k < 1 || k > arity)
          throw ParseError("coordinate " + id + " out of range for arity " +
                               std::to_string(arity),
                           start);
        return make_coordinate(k - 1);
      }
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == id) return make_coordinate(static_cast<int>(i));
    }
    throw ParseError("unknown identifier '" + id + "'", start);
  }
};

}  // namespace

ScalarField ScalarField::parse(const std::string& text, int arity,
                               const std::vector<std::string>& names) {
  Parser p{text, 0, arity, names};
  ExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing input", p.pos);
  return ScalarField(e, arity);
}

}  // namespace fracform
