#include "pedecomp/fields.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "pedecomp/errors.hpp"

namespace pedecomp {

namespace {

using Op = ScalarFieldExpr::Op;

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"cos", Op::kCos, 1}, {"sin", Op::kSin, 1},   {"exp", Op::kExp, 1},
    {"abs", Op::kAbs, 1}, {"sqrt", Op::kSqrt, 1}, {"min", Op::kMin, 2},
    {"max", Op::kMax, 2},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view op_symbol(Op op) {
  switch (op) {
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    case Op::kDiv: return "/";
    case Op::kPow: return "^";
    case Op::kLess: return "<";
    case Op::kLessEqual: return "<=";
    case Op::kGreater: return ">";
    case Op::kGreaterEqual: return ">=";
    default: return "?";
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// Recursive-descent parser building the flat node array of a ScalarFieldExpr.
class FieldParser {
 public:
  FieldParser(std::string_view source, int dimension)
      : src_(source), dimension_(dimension) {}

  ScalarFieldExpr run() {
    ScalarFieldExpr expr;
    expr.dimension_ = dimension_;
    out_ = &expr;
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    expr.root_ = parse_expr();
    skip_space();
    if (pos_ < src_.size()) {
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    }
    return expr;
  }

 private:
  int add(ScalarFieldExpr::Node node) {
    out_->nodes_.push_back(node);
    return static_cast<int>(out_->nodes_.size()) - 1;
  }

  int add_op(Op op, int a, int b = -1, int c = -1) {
    ScalarFieldExpr::Node node;
    node.op = op;
    node.args[0] = a;
    node.args[1] = b;
    node.args[2] = c;
    return add(node);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = add_op(Op::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = add_op(Op::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = add_op(Op::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = add_op(Op::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return add_op(Op::kNeg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_primary();
    if (accept('^')) return add_op(Op::kPow, base, parse_unary());
    return base;
  }

  int parse_condition() {
    int lhs = parse_expr();
    skip_space();
    std::size_t at = pos_;
    Op op;
    if (accept('<')) {
      op = accept('=') ? Op::kLessEqual : Op::kLess;
    } else if (accept('>')) {
      op = accept('=') ? Op::kGreaterEqual : Op::kGreater;
    } else {
      throw ParseError("expected comparison operator in if()", at);
    }
    return add_op(op, lhs, parse_expr());
  }

  int parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of expression", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  int parse_number() {
    std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value);
    if (ec != std::errc()) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    ScalarFieldExpr::Node node;
    node.op = Op::kNumber;
    node.number = value;
    return add(node);
  }

  int parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view name = src_.substr(start, pos_ - start);

    if (name == "pi") {
      ScalarFieldExpr::Node node;
      node.number = std::numbers::pi;
      return add(node);
    }
    if (name == "if") {
      expect('(');
      int cond = parse_condition();
      expect(',');
      int then_branch = parse_expr();
      expect(',');
      int else_branch = parse_expr();
      expect(')');
      return add_op(Op::kIf, cond, then_branch, else_branch);
    }
    if (name.size() >= 2 && name[0] == 'x' &&
        name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (index < 1 || index > dimension_) {
        throw ParseError("unknown variable '" + std::string(name) + "' (dimension is " +
                             std::to_string(dimension_) + ")",
                         start);
      }
      ScalarFieldExpr::Node node;
      node.op = Op::kVariable;
      node.variable = index - 1;
      return add(node);
    }
    if (const FunctionInfo* fn = find_function(name)) {
      expect('(');
      int args[2] = {-1, -1};
      int count = 0;
      skip_space();
      if (!accept(')')) {
        do {
          int arg = parse_expr();
          if (count < 2) args[count] = arg;
          ++count;
        } while (accept(','));
        expect(')');
      }
      if (count != fn->arity) {
        throw ParseError(std::string(fn->name) + "() takes " + std::to_string(fn->arity) +
                             " argument(s), got " + std::to_string(count),
                         start);
      }
      return add_op(fn->op, args[0], args[1]);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  int dimension_;
  std::size_t pos_ = 0;
  ScalarFieldExpr* out_ = nullptr;
};

ScalarFieldExpr parse_field(std::string_view source, int dimension) {
  if (dimension < 0) throw ParseError("negative dimension", 0);
  return FieldParser(source, dimension).run();
}

ScalarFieldExpr ScalarFieldExpr::constant(double value, int dimension) {
  ScalarFieldExpr expr;
  Node node;
  node.number = value;
  expr.nodes_.push_back(node);
  expr.root_ = 0;
  expr.dimension_ = dimension;
  return expr;
}

double ScalarFieldExpr::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw DomainError("point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(dimension_),
                      to_string());
  }
  return eval_node(root_, x);
}

double ScalarFieldExpr::eval_node(int index, std::span<const double> x) const {
  const Node& node = nodes_[index];
  auto arg = [&](int k) { return eval_node(node.args[k], x); };
  double v = 0.0;
  switch (node.op) {
    case Op::kNumber: return node.number;
    case Op::kVariable: return x[node.variable];
    case Op::kNeg: return -arg(0);
    case Op::kAdd: v = arg(0) + arg(1); break;
    case Op::kSub: v = arg(0) - arg(1); break;
    case Op::kMul: v = arg(0) * arg(1); break;
    case Op::kDiv: {
      double den = arg(1);
      if (den == 0.0) throw DomainError("division by zero", node_text(index));
      v = arg(0) / den;
      break;
    }
    case Op::kPow: {
      double base = arg(0);
      double exponent = arg(1);
      if (exponent != std::round(exponent)) {
        throw DomainError("non-integer exponent", node_text(index));
      }
      if (base == 0.0 && exponent < 0.0) {
        throw DomainError("division by zero", node_text(index));
      }
      v = std::pow(base, exponent);
      break;
    }
    case Op::kCos: return std::cos(arg(0));
    case Op::kSin: return std::sin(arg(0));
    case Op::kExp: v = std::exp(arg(0)); break;
    case Op::kAbs: return std::abs(arg(0));
    case Op::kSqrt: {
      double a = arg(0);
      if (a < 0.0) throw DomainError("sqrt of negative value", node_text(index));
      return std::sqrt(a);
    }
    case Op::kMin: return std::min(arg(0), arg(1));
    case Op::kMax: return std::max(arg(0), arg(1));
    case Op::kLess: return arg(0) < arg(1) ? 1.0 : 0.0;
    case Op::kLessEqual: return arg(0) <= arg(1) ? 1.0 : 0.0;
    case Op::kGreater: return arg(0) > arg(1) ? 1.0 : 0.0;
    case Op::kGreaterEqual: return arg(0) >= arg(1) ? 1.0 : 0.0;
    case Op::kIf: return arg(0) != 0.0 ? arg(1) : arg(2);
  }
  if (!std::isfinite(v)) throw DomainError("non-finite result", node_text(index));
  return v;
}

std::string ScalarFieldExpr::node_text(int index) const {
  std::string out;
  print_node(index, out);
  return out;
}

void ScalarFieldExpr::print_node(int index, std::string& out) const {
  const Node& node = nodes_[index];
  switch (node.op) {
    case Op::kNumber: {
      std::string text = format_number(node.number);
      if (node.number < 0.0) {
        out += "(" + text + ")";
      } else {
        out += text;
      }
      return;
    }
    case Op::kVariable: out += "x" + std::to_string(node.variable + 1); return;
    case Op::kNeg:
      out += "(-";
      print_node(node.args[0], out);
      out += ")";
      return;
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul:
    case Op::kDiv:
    case Op::kPow:
      out += "(";
      print_node(node.args[0], out);
      out += " ";
      out += op_symbol(node.op);
      out += " ";
      print_node(node.args[1], out);
      out += ")";
      return;
    // comparisons only occur as if() conditions, which take no parentheses
    case Op::kLess:
    case Op::kLessEqual:
    case Op::kGreater:
    case Op::kGreaterEqual:
      print_node(node.args[0], out);
      out += " ";
      out += op_symbol(node.op);
      out += " ";
      print_node(node.args[1], out);
      return;
    case Op::kIf:
      out += "if(";
      print_node(node.args[0], out);
      out += ", ";
      print_node(node.args[1], out);
      out += ", ";
      print_node(node.args[2], out);
      out += ")";
      return;
    default: break;
  }
  for (const auto& fn : kFunctions) {
    if (fn.op != node.op) continue;
    out += fn.name;
    out += "(";
    for (int k = 0; k < fn.arity; ++k) {
      if (k > 0) out += ", ";
      print_node(node.args[k], out);
    }
    out += ")";
    return;
  }
}

std::string ScalarFieldExpr::to_string() const { return node_text(root_); }

std::set<int> ScalarFieldExpr::variables() const {
  std::set<int> vars;
  for (const auto& node : nodes_) {
    if (node.op == Op::kVariable) vars.insert(node.variable);
  }
  return vars;
}

ScalarFieldExpr ScalarFieldExpr::remap(const std::map<int, int>& mapping,
                                       int new_dimension) const {
  ScalarFieldExpr out = *this;
  out.dimension_ = new_dimension;
  for (auto& node : out.nodes_) {
    if (node.op != Op::kVariable) continue;
    auto it = mapping.find(node.variable);
    if (it == mapping.end() || it->second < 0 || it->second >= new_dimension) {
      throw DomainError("variable x" + std::to_string(node.variable + 1) +
                            " has no image under the remapping",
                        to_string());
    }
    node.variable = it->second;
  }
  return out;
}

}  // namespace pedecomp
