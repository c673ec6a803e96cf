#include "weylcalc/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstring>

namespace weyl {

namespace {

using Kind = ScalarField::Kind;
using NodePtr = ScalarField::NodePtr;

NodePtr node(Kind k, double value, int var, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ScalarField::Node>();
  n->kind = k;
  n->value = value;
  n->var = var;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodePtr& n) { return n->kind == Kind::Const; }
bool is_const(const NodePtr& n, double v) {
  return n->kind == Kind::Const && n->value == v;
}

NodePtr mk_const(double c) { return node(Kind::Const, c, -1, nullptr, nullptr); }

// Constant folding is deliberately local: enough to prune zero branches that
// metric adjugates and differentiation produce in bulk, nothing resembling a
// simplifier.
NodePtr mk_add(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return mk_const(a->value + b->value);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return node(Kind::Add, 0, -1, std::move(a), std::move(b));
}

NodePtr mk_neg(NodePtr a) {
  if (is_const(a)) return mk_const(-a->value);
  if (a->kind == Kind::Neg) return a->a;
  return node(Kind::Neg, 0, -1, std::move(a), nullptr);
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return mk_const(a->value - b->value);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return mk_neg(std::move(b));
  return node(Kind::Sub, 0, -1, std::move(a), std::move(b));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b)) return mk_const(a->value * b->value);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return mk_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return node(Kind::Mul, 0, -1, std::move(a), std::move(b));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
  if (is_const(a) && is_const(b) && b->value != 0.0)
    return mk_const(a->value / b->value);
  if (is_const(a, 0.0)) return mk_const(0.0);
  if (is_const(b, 1.0)) return a;
  return node(Kind::Div, 0, -1, std::move(a), std::move(b));
}

NodePtr mk_pow(NodePtr a, double k) {
  if (k == 1.0) return a;
  if (k == 0.0) return mk_const(1.0);
  if (is_const(a)) {
    double v = std::pow(a->value, k);
    if (std::isfinite(v)) return mk_const(v);
  }
  return node(Kind::Pow, k, -1, std::move(a), nullptr);
}

NodePtr mk_fn(Kind k, NodePtr a) {
  if (is_const(a)) {
    double x = a->value, v = 0;
    switch (k) {
      case Kind::Exp: v = std::exp(x); break;
      case Kind::Ln: v = x > 0 ? std::log(x) : NAN; break;
      case Kind::Sin: v = std::sin(x); break;
      case Kind::Cos: v = std::cos(x); break;
      default: v = NAN; break;
    }
    if (std::isfinite(v)) return mk_const(v);
  }
  return node(k, 0, -1, std::move(a), nullptr);
}

// ---- printing --------------------------------------------------------------

// precedence: add/sub 1, mul/div 2, unary minus 3, pow 4, atoms 5
int prec(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Const: return n->value < 0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const NodePtr& n, const std::vector<std::string>& names,
                int parent, std::string& out) {
  const int p = prec(n);
  const bool wrap = p < parent;
  if (wrap) out += '(';
  switch (n->kind) {
    case Kind::Const: out += format_double(n->value); break;
    case Kind::Var: out += names[static_cast<std::size_t>(n->var)]; break;
    case Kind::Add:
      print_node(n->a, names, 1, out);
      out += " + ";
      print_node(n->b, names, 2, out);
      break;
    case Kind::Sub:
      print_node(n->a, names, 1, out);
      out += " - ";
      print_node(n->b, names, 2, out);
      break;
    case Kind::Mul:
      print_node(n->a, names, 2, out);
      out += "*";
      print_node(n->b, names, 3, out);
      break;
    case Kind::Div:
      print_node(n->a, names, 2, out);
      out += "/";
      print_node(n->b, names, 3, out);
      break;
    case Kind::Neg:
      out += '-';
      print_node(n->a, names, 3, out);
      break;
    case Kind::Pow:
      print_node(n->a, names, 5, out);
      out += '^';
      if (n->value < 0) {
        out += '(';
        out += format_double(n->value);
        out += ')';
      } else {
        out += format_double(n->value);
      }
      break;
    case Kind::Exp: out += "exp("; print_node(n->a, names, 0, out); out += ')'; break;
    case Kind::Ln: out += "ln("; print_node(n->a, names, 0, out); out += ')'; break;
    case Kind::Sin: out += "sin("; print_node(n->a, names, 0, out); out += ')'; break;
    case Kind::Cos: out += "cos("; print_node(n->a, names, 0, out); out += ')'; break;
  }
  if (wrap) out += ')';
}

// ---- evaluation ------------------------------------------------------------

[[noreturn]] void domain_error(const char* what, const NodePtr& n,
                               const std::vector<std::string>& names) {
  std::string sub;
  print_node(n, names, 0, sub);
  throw EvalError(std::string(what) + " in '" + sub + "'");
}

double eval_node(const NodePtr& n, const std::vector<double>& x,
                 const std::vector<std::string>& names,
                 std::unordered_map<NodePtr, double>* memo) {
  if (memo) {
    auto it = memo->find(n);
    if (it != memo->end()) return it->second;
  }
  double v = 0;
  switch (n->kind) {
    case Kind::Const: v = n->value; break;
    case Kind::Var: v = x[static_cast<std::size_t>(n->var)]; break;
    case Kind::Add: v = eval_node(n->a, x, names, memo) + eval_node(n->b, x, names, memo); break;
    case Kind::Sub: v = eval_node(n->a, x, names, memo) - eval_node(n->b, x, names, memo); break;
    case Kind::Mul: v = eval_node(n->a, x, names, memo) * eval_node(n->b, x, names, memo); break;
    case Kind::Div: {
      double num = eval_node(n->a, x, names, memo);
      double den = eval_node(n->b, x, names, memo);
      if (den == 0.0) domain_error("division by zero", n, names);
      v = num / den;
      break;
    }
    case Kind::Pow: {
      double base = eval_node(n->a, x, names, memo);
      double k = n->value;
      if (std::nearbyint(k) != k && base <= 0.0)
        domain_error("fractional power of non-positive base", n, names);
      v = std::pow(base, k);
      break;
    }
    case Kind::Neg: v = -eval_node(n->a, x, names, memo); break;
    case Kind::Exp: v = std::exp(eval_node(n->a, x, names, memo)); break;
    case Kind::Ln: {
      double arg = eval_node(n->a, x, names, memo);
      if (arg <= 0.0) domain_error("ln of non-positive argument", n, names);
      v = std::log(arg);
      break;
    }
    case Kind::Sin: v = std::sin(eval_node(n->a, x, names, memo)); break;
    case Kind::Cos: v = std::cos(eval_node(n->a, x, names, memo)); break;
  }
  if (!std::isfinite(v)) domain_error("non-finite value", n, names);
  if (memo) memo->emplace(n, v);
  return v;
}

// ---- differentiation -------------------------------------------------------

NodePtr diff_node(const NodePtr& n, int i) {
  switch (n->kind) {
    case Kind::Const: return mk_const(0.0);
    case Kind::Var: return mk_const(n->var == i ? 1.0 : 0.0);
    case Kind::Add: return mk_add(diff_node(n->a, i), diff_node(n->b, i));
    case Kind::Sub: return mk_sub(diff_node(n->a, i), diff_node(n->b, i));
    case Kind::Mul:
      return mk_add(mk_mul(diff_node(n->a, i), n->b),
                    mk_mul(n->a, diff_node(n->b, i)));
    case Kind::Div:
      return mk_div(mk_sub(mk_mul(diff_node(n->a, i), n->b),
                           mk_mul(n->a, diff_node(n->b, i))),
                    mk_mul(n->b, n->b));
    case Kind::Pow:
      return mk_mul(mk_mul(mk_const(n->value), mk_pow(n->a, n->value - 1.0)),
                    diff_node(n->a, i));
    case Kind::Neg: return mk_neg(diff_node(n->a, i));
    case Kind::Exp: return mk_mul(diff_node(n->a, i), mk_fn(Kind::Exp, n->a));
    case Kind::Ln: return mk_div(diff_node(n->a, i), n->a);
    case Kind::Sin: return mk_mul(diff_node(n->a, i), mk_fn(Kind::Cos, n->a));
    case Kind::Cos:
      return mk_neg(mk_mul(diff_node(n->a, i), mk_fn(Kind::Sin, n->a)));
  }
  return mk_const(0.0);
}

// ---- parser ----------------------------------------------------------------

struct Parser {
  const std::string& text;
  const std::vector<std::string>& names;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+')) lhs = mk_add(std::move(lhs), parse_term());
      else if (eat('-')) lhs = mk_sub(std::move(lhs), parse_term());
      else return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*')) lhs = mk_mul(std::move(lhs), parse_unary());
      else if (eat('/')) lhs = mk_div(std::move(lhs), parse_unary());
      else return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return mk_neg(parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_ws();
    if (eat('^')) {
      std::size_t at = pos;
      NodePtr expo = parse_unary();  // right-associative; folds x^2^3 chains
      if (expo->kind != Kind::Const)
        throw ParseError("exponent must be a numeric constant", at);
      return mk_pow(std::move(base), expo->value);
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of expression", pos);
    char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  NodePtr parse_number() {
    std::size_t start = pos;
    double v = 0;
    auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (res.ec != std::errc{})
      throw ParseError("malformed numeric literal", start);
    pos = static_cast<std::size_t>(res.ptr - text.data());
    return mk_const(v);
  }

  NodePtr parse_ident() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    std::string id = text.substr(start, pos - start);
    if (id == "exp" || id == "ln" || id == "sin" || id == "cos") {
      if (!eat('(')) throw ParseError("expected '(' after function '" + id + "'", pos);
      NodePtr arg = parse_expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      Kind k = id == "exp" ? Kind::Exp
               : id == "ln" ? Kind::Ln
               : id == "sin" ? Kind::Sin
                             : Kind::Cos;
      return mk_fn(k, std::move(arg));
    }
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == id)
        return node(Kind::Var, 0, static_cast<int>(i), nullptr, nullptr);
    throw ParseError("unknown identifier '" + id + "'", start);
  }
};

void check_same_names(const ScalarField& a, const ScalarField& b) {
  if (a.names_ptr() != b.names_ptr() && a.names() != b.names())
    throw std::logic_error("ScalarField arithmetic over different coordinates");
}

}  // namespace

ScalarField ScalarField::parse(const std::string& text,
                               const std::vector<std::string>& coordinate_names) {
  Parser p{text, coordinate_names};
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size())
    throw ParseError("trailing input after expression", p.pos);
  return ScalarField(std::move(root), make_names(coordinate_names));
}

ScalarField::NamesPtr ScalarField::make_names(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

ScalarField ScalarField::constant(double c, NamesPtr names) {
  return ScalarField(mk_const(c), std::move(names));
}

ScalarField ScalarField::coordinate(int index, NamesPtr names) {
  return ScalarField(node(Kind::Var, 0, index, nullptr, nullptr),
                     std::move(names));
}

ScalarField ScalarField::differentiate(int i) const {
  return ScalarField(diff_node(root_, i), names_);
}

double ScalarField::evaluate(const std::vector<double>& point) const {
  if (point.size() != names_->size())
    throw EvalError("point dimension does not match field dimension");
  return eval_node(root_, point, *names_, nullptr);
}

double ScalarField::evaluate(const std::vector<double>& point,
                             EvalCache& cache) const {
  if (point.size() != names_->size())
    throw EvalError("point dimension does not match field dimension");
  return eval_node(root_, point, *names_, &cache.memo);
}

std::string ScalarField::print() const {
  std::string out;
  print_node(root_, *names_, 0, out);
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_names(a, b);
  return ScalarField(mk_add(a.root_, b.root_), a.names_);
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_names(a, b);
  return ScalarField(mk_sub(a.root_, b.root_), a.names_);
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same_names(a, b);
  return ScalarField(mk_mul(a.root_, b.root_), a.names_);
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  check_same_names(a, b);
  return ScalarField(mk_div(a.root_, b.root_), a.names_);
}
ScalarField operator-(const ScalarField& a) {
  return ScalarField(mk_neg(a.root_), a.names_);
}
ScalarField ScalarField::pow(double exponent) const {
  return ScalarField(mk_pow(root_, exponent), names_);
}

ScalarField exp(const ScalarField& a) {
  return ScalarField(mk_fn(Kind::Exp, a.root_), a.names_);
}
ScalarField ln(const ScalarField& a) {
  return ScalarField(mk_fn(Kind::Ln, a.root_), a.names_);
}
ScalarField sin(const ScalarField& a) {
  return ScalarField(mk_fn(Kind::Sin, a.root_), a.names_);
}
ScalarField cos(const ScalarField& a) {
  return ScalarField(mk_fn(Kind::Cos, a.root_), a.names_);
}

std::uint64_t field_digest(const ScalarField& f) {
  std::string s = f.print();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace weyl
