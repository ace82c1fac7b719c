#include "loewner/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

namespace detail {

enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Sqrt, Exp, Log, Native };

using NativeFn = std::function<double(std::span<const double>)>;

struct Node {
  Op op = Op::Num;
  double value = 0.0;     // Num
  std::size_t var = 0;    // Var, 0-based
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  NativeFn native;        // Native
  std::shared_ptr<const Node> equivalent;  // Native: the same function as a tree
};

}  // namespace detail

namespace {

using detail::Node;
using detail::Op;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Num;
  n->value = v;
  return n;
}

NodePtr make_var(std::size_t i) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = i;
  return n;
}

NodePtr make_unary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_native(detail::NativeFn fn, NodePtr equivalent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Native;
  n->native = std::move(fn);
  n->equivalent = std::move(equivalent);
  return n;
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

double eval_node(const Node& n, std::span<const double> x) {
  switch (n.op) {
    case Op::Num:
      return n.value;
    case Op::Var:
      return x[n.var];
    case Op::Neg:
      return -eval_node(*n.lhs, x);
    case Op::Add:
      return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Op::Sub:
      return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Op::Mul:
      return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Op::Div: {
      const double a = eval_node(*n.lhs, x);
      const double b = eval_node(*n.rhs, x);
      if (b == 0.0) throw DomainError("division by zero");
      return a / b;
    }
    case Op::Pow: {
      const double a = eval_node(*n.lhs, x);
      const double b = eval_node(*n.rhs, x);
      if (a == 0.0 && b < 0.0) throw DomainError("0 raised to a negative power");
      const double r = std::pow(a, b);
      if (std::isnan(r)) throw DomainError("negative base with non-integer exponent");
      return r;
    }
    case Op::Sqrt: {
      const double a = eval_node(*n.lhs, x);
      if (a < 0.0) throw DomainError("sqrt of a negative number");
      return std::sqrt(a);
    }
    case Op::Exp:
      return std::exp(eval_node(*n.lhs, x));
    case Op::Log: {
      const double a = eval_node(*n.lhs, x);
      if (!(a > 0.0)) throw DomainError("log of a non-positive number");
      return std::log(a);
    }
    case Op::Native:
      return n.native(x);
  }
  return 0.0;
}

void print_node(const Node& n, std::ostream& os) {
  auto bin = [&](const char* sym) {
    os << '(';
    print_node(*n.lhs, os);
    os << sym;
    print_node(*n.rhs, os);
    os << ')';
  };
  auto call = [&](const char* name) {
    os << name << '(';
    print_node(*n.lhs, os);
    os << ')';
  };
  switch (n.op) {
    case Op::Num:
      if (n.value < 0.0 || std::signbit(n.value)) {
        os << "(-" << format_number(-n.value) << ')';
      } else {
        os << format_number(n.value);
      }
      return;
    case Op::Var:
      os << 'r' << (n.var + 1);
      return;
    case Op::Neg:
      os << "(-";
      print_node(*n.lhs, os);
      os << ')';
      return;
    case Op::Add: bin("+"); return;
    case Op::Sub: bin("-"); return;
    case Op::Mul: bin("*"); return;
    case Op::Div: bin("/"); return;
    case Op::Pow: bin("^"); return;
    case Op::Sqrt: call("sqrt"); return;
    case Op::Exp: call("exp"); return;
    case Op::Log: call("log"); return;
    case Op::Native:
      print_node(*n.equivalent, os);
      return;
  }
}

// Replaces variables per `map`: map[i] is either a new variable index or a
// constant. Native nodes are replaced by their substituted equivalent.
struct VarMap {
  std::vector<bool> is_const;
  std::vector<double> value;
  std::vector<std::size_t> target;
};

NodePtr substitute(const NodePtr& n, const VarMap& map) {
  switch (n->op) {
    case Op::Num:
      return n;
    case Op::Var:
      return map.is_const[n->var] ? make_num(map.value[n->var]) : make_var(map.target[n->var]);
    case Op::Native:
      return substitute(n->equivalent, map);
    case Op::Neg:
    case Op::Sqrt:
    case Op::Exp:
    case Op::Log:
      return make_unary(n->op, substitute(n->lhs, map));
    default:
      return make_binary(n->op, substitute(n->lhs, map), substitute(n->rhs, map));
  }
}

NodePtr product_tree(std::size_t k) {
  NodePtr p = make_var(0);
  for (std::size_t i = 1; i < k; ++i) p = make_binary(Op::Mul, p, make_var(i));
  return p;
}

class Parser {
 public:
  Parser(std::string_view src, std::size_t k) : src_(src), k_(k) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError(ParseError::Kind::Syntax, pos_, "empty expression");
    }
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) {
      throw ParseError(ParseError::Kind::Syntax, pos_,
                       std::string("unexpected '") + src_[pos_] + "'");
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(ParseError::Kind::Syntax, pos_, std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make_binary(Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (accept('-')) return make_unary(Op::Neg, factor());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_binary(Op::Pow, base, factor());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) {
      throw ParseError(ParseError::Kind::Syntax, pos_, "unexpected end of input");
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(ParseError::Kind::Syntax, pos_, std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError(ParseError::Kind::Syntax, start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;
        throw ParseError(ParseError::Kind::Syntax, save, "malformed exponent");
      }
    }
    double v = 0.0;
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ParseError(ParseError::Kind::Syntax, start, "number out of range");
    }
    return make_num(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);

    if (name.size() > 1 && name[0] == 'r' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      std::size_t index = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (ec != std::errc() || index < 1 || index > k_) {
        throw ParseError(ParseError::Kind::UnknownVariable, start,
                         "unknown variable '" + std::string(name) + "' (arity " +
                             std::to_string(k_) + ")");
      }
      (void)ptr;
      return make_var(index - 1);
    }

    skip_ws();
    const bool is_call = pos_ < src_.size() && src_[pos_] == '(';
    if (!is_call) {
      throw ParseError(ParseError::Kind::UnknownVariable, start,
                       "unknown identifier '" + std::string(name) + "'");
    }
    Op op;
    if (name == "sqrt") {
      op = Op::Sqrt;
    } else if (name == "exp") {
      op = Op::Exp;
    } else if (name == "log") {
      op = Op::Log;
    } else {
      throw ParseError(ParseError::Kind::UnknownFunction, start,
                       "unknown function '" + std::string(name) + "'");
    }
    expect('(');
    NodePtr arg = expr();
    expect(')');
    return make_unary(op, arg);
  }

  std::string_view src_;
  std::size_t k_;
  std::size_t pos_ = 0;
};

}  // namespace

Interval Interval::open_positive(double hi) { return Interval{0.0, hi, false, false}; }

Interval Interval::closed_nonnegative(double hi) { return Interval{0.0, hi, true, false}; }

bool Interval::contains(double v) const noexcept {
  const bool above = lo_closed ? v >= lo : v > lo;
  const bool below = hi_closed ? v <= hi : v < hi;
  return above && below;
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : ']') << lo << ", ";
  if (upper_bounded()) {
    os << hi;
  } else {
    os << "inf";
  }
  os << (hi_closed ? ']' : '[');
  return os.str();
}

ScalarFunction::ScalarFunction(std::shared_ptr<const detail::Node> root, std::size_t arity,
                               std::vector<Interval> domain, std::string builtin_name)
    : root_(std::move(root)),
      arity_(arity),
      domain_(std::move(domain)),
      builtin_name_(std::move(builtin_name)) {}

double ScalarFunction::eval(std::span<const double> point) const {
  if (point.size() != arity_) {
    throw DimensionMismatch("eval: expected " + std::to_string(arity_) + " arguments, got " +
                            std::to_string(point.size()));
  }
  const double v = eval_node(*root_, point);
  if (!std::isfinite(v)) throw DomainError("evaluation produced a non-finite value");
  return v;
}

bool ScalarFunction::in_domain(std::span<const double> point) const {
  if (point.size() != arity_) return false;
  for (std::size_t i = 0; i < arity_; ++i) {
    if (!domain_[i].contains(point[i])) return false;
  }
  return true;
}

std::string ScalarFunction::source() const {
  std::ostringstream os;
  print_node(*root_, os);
  return os.str();
}

ScalarFunction ScalarFunction::with_domain(std::vector<Interval> domain) const {
  if (domain.size() != arity_) {
    throw DimensionMismatch("with_domain: expected " + std::to_string(arity_) + " intervals");
  }
  return ScalarFunction(root_, arity_, std::move(domain), builtin_name_);
}

ScalarFunction ScalarFunction::with_domain(const Interval& all) const {
  return with_domain(std::vector<Interval>(arity_, all));
}

ScalarFunction ScalarFunction::slice(std::size_t var, std::span<const double> frozen) const {
  if (var >= arity_ || frozen.size() != arity_) {
    throw DimensionMismatch("slice: bad variable index or frozen point size");
  }
  VarMap map;
  map.is_const.assign(arity_, true);
  map.value.assign(frozen.begin(), frozen.end());
  map.target.assign(arity_, 0);
  map.is_const[var] = false;
  return ScalarFunction(substitute(root_, map), 1, {domain_[var]});
}

ScalarFunction ScalarFunction::divided_by_product() const {
  std::vector<Interval> dom = domain_;
  for (auto& d : dom) {
    if (d.lo == 0.0) d.lo_closed = false;
  }
  return ScalarFunction(make_binary(Op::Div, root_, product_tree(arity_)), arity_,
                        std::move(dom));
}

ScalarFunction parse(std::string_view source, std::size_t k) {
  if (k == 0) throw ConfigError("parse: arity must be positive");
  Parser p(source, k);
  NodePtr root = p.parse_all();
  return ScalarFunction(std::move(root), k,
                        std::vector<Interval>(k, Interval::open_positive()));
}

namespace {

struct CatalogEntry {
  std::string name;
  std::size_t fixed_arity;  // 0: any arity
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"product", 0},   {"neg_inv_product", 0}, {"constant(c)", 0}, {"koranyi_g", 2},
      {"koranyi_f", 2}, {"sqrt1", 1},           {"square1", 1},
  };
  return entries;
}

bool parse_constant_name(std::string_view name, double& c) {
  constexpr std::string_view prefix = "constant(";
  if (name.size() <= prefix.size() + 1 || name.substr(0, prefix.size()) != prefix ||
      name.back() != ')') {
    return false;
  }
  const std::string_view body = name.substr(prefix.size(), name.size() - prefix.size() - 1);
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(first, last, c);
  return ec == std::errc() && ptr == last && std::isfinite(c);
}

std::string product_source(std::size_t k) {
  std::string s = "r1";
  for (std::size_t i = 2; i <= k; ++i) s += "*r" + std::to_string(i);
  return s;
}

}  // namespace

bool is_builtin_name(std::string_view name) {
  double c = 0.0;
  if (parse_constant_name(name, c)) return true;
  for (const auto& e : catalog()) {
    if (e.name == name && e.name != "constant(c)") return true;
  }
  return false;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.push_back(e.name);
  return out;
}

std::string builtin_equivalent_source(std::string_view name, std::size_t k) {
  double c = 0.0;
  if (parse_constant_name(name, c)) return format_number(c);
  if (name == "product") return product_source(k);
  if (name == "neg_inv_product") return "-1/(" + product_source(k) + ")";
  if (name == "koranyi_g") return "r1*r2/((1+r1)*(1+r2))";
  if (name == "koranyi_f") return "r1^2*r2^2/((1+r1)*(1+r2))";
  if (name == "sqrt1") return "sqrt(r1)";
  if (name == "square1") return "r1^2";
  throw ConfigError("unknown built-in function '" + std::string(name) + "'");
}

ScalarFunction builtin(std::string_view name, std::size_t k) {
  if (!is_builtin_name(name)) {
    throw ConfigError("unknown built-in function '" + std::string(name) + "'");
  }
  if (k == 0) throw ConfigError("builtin: arity must be positive");
  for (const auto& e : catalog()) {
    if (e.name == name && e.fixed_arity != 0 && e.fixed_arity != k) {
      throw ConfigError("built-in '" + std::string(name) + "' requires arity " +
                        std::to_string(e.fixed_arity));
    }
  }

  const NodePtr equivalent = parse(builtin_equivalent_source(name, k), k).root_;
  detail::NativeFn fn;
  std::vector<Interval> dom(k, Interval::closed_nonnegative());

  double c = 0.0;
  if (parse_constant_name(name, c)) {
    fn = [c](std::span<const double>) { return c; };
  } else if (name == "product") {
    fn = [](std::span<const double> r) {
      double p = r[0];
      for (std::size_t i = 1; i < r.size(); ++i) p = p * r[i];
      return p;
    };
  } else if (name == "neg_inv_product") {
    fn = [](std::span<const double> r) {
      double p = r[0];
      for (std::size_t i = 1; i < r.size(); ++i) p = p * r[i];
      if (p == 0.0) throw DomainError("division by zero");
      return -1.0 / p;
    };
    dom.assign(k, Interval::open_positive());
  } else if (name == "koranyi_g") {
    fn = [](std::span<const double> r) {
      const double den = (1.0 + r[0]) * (1.0 + r[1]);
      if (den == 0.0) throw DomainError("division by zero");
      return (r[0] * r[1]) / den;
    };
    dom.assign(k, Interval::open_positive(1.0));
  } else if (name == "koranyi_f") {
    fn = [](std::span<const double> r) {
      const double den = (1.0 + r[0]) * (1.0 + r[1]);
      if (den == 0.0) throw DomainError("division by zero");
      return (std::pow(r[0], 2.0) * std::pow(r[1], 2.0)) / den;
    };
    dom.assign(k, Interval::closed_nonnegative(1.0));
  } else if (name == "sqrt1") {
    fn = [](std::span<const double> r) {
      if (r[0] < 0.0) throw DomainError("sqrt of a negative number");
      return std::sqrt(r[0]);
    };
  } else {  // square1
    fn = [](std::span<const double> r) { return std::pow(r[0], 2.0); };
  }
  return ScalarFunction(make_native(std::move(fn), equivalent), k, std::move(dom),
                        std::string(name));
}

}  // namespace loewner
