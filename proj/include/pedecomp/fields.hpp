#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pedecomp {

// Parsed arithmetic expression for a spatial coefficient field.
//
// Grammar (standard precedence, + - * / left associative, ^ right
// associative with integer exponents):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'pi' | xK | func '(' args ')' | 'if' '(' cond ',' expr ',' expr ')'
//            | '(' expr ')'
//   cond    := expr ('<' | '<=' | '>' | '>=') expr
//
// Variables are x1..xK, 1-based. Functions: cos sin exp abs sqrt (unary),
// min max (binary).
class ScalarFieldExpr {
 public:
  enum class Op : std::uint8_t {
    kNumber,
    kVariable,
    kNeg,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPow,
    kCos,
    kSin,
    kExp,
    kAbs,
    kSqrt,
    kMin,
    kMax,
    kLess,
    kLessEqual,
    kGreater,
    kGreaterEqual,
    kIf,
  };

  struct Node {
    Op op = Op::kNumber;
    double number = 0.0;  // kNumber
    int variable = 0;     // kVariable, 0-based
    int args[3] = {-1, -1, -1};
  };

  // Constant field; dimension 0 admits no variables.
  static ScalarFieldExpr constant(double value, int dimension = 0);

  int dimension() const { return dimension_; }

  // Throws DomainError on division by zero, sqrt of a negative number,
  // non-integer exponents, or non-finite results.
  double eval(std::span<const double> x) const;

  // Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const;

  // 0-based indices of every variable referenced by the expression.
  std::set<int> variables() const;

  bool is_constant() const { return variables().empty(); }

  // Rewrites variable indices through `mapping` (old 0-based -> new 0-based)
  // and re-targets the expression at `new_dimension`. Unmapped variables
  // are an error.
  ScalarFieldExpr remap(const std::map<int, int>& mapping, int new_dimension) const;

 private:
  friend ScalarFieldExpr parse_field(std::string_view source, int dimension);
  friend class FieldParser;

  double eval_node(int index, std::span<const double> x) const;
  void print_node(int index, std::string& out) const;
  std::string node_text(int index) const;

  std::vector<Node> nodes_;
  int root_ = -1;
  int dimension_ = 0;
};

// Parses `source` for evaluation on points of dimension `dimension`.
// Throws ParseError carrying the byte offset of the problem.
ScalarFieldExpr parse_field(std::string_view source, int dimension);

// Convenience wrapper matching the library's free-function style.
inline double eval_field(const ScalarFieldExpr& expr, std::span<const double> x) {
  return expr.eval(x);
}

}  // namespace pedecomp
