#pragma once

// Expression language for scalar fields over a chart.
//
// Grammar (standard precedence, ^ right-associative and binding tighter
// than unary minus):
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?
//   primary := number | 'pi' | coordinate | constant
//            | ('sin'|'cos'|'exp'|'sqrt') '(' expr ')' | '(' expr ')'
//
// Exponents must fold to a constant at parse time. Named constants are
// bound to literals when parsing; the resulting tree is closed.

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>

#include "reebflow/chart.hpp"
#include "reebflow/dual.hpp"

namespace reebflow {

struct ParseError : std::runtime_error {
    size_t offset;  // byte offset into the source text
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class UnOp { Neg, Sin, Cos, Exp, Sqrt };
enum class BinOp { Add, Sub, Mul, Div, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Coord, Unary, Binary } kind;
    double number = 0.0;       // Number nodes, and the folded exponent of Pow
    bool exp_is_int = false;   // Pow: exponent is integral
    long exp_int = 0;
    int coord = -1;            // Coord nodes
    UnOp un{};
    BinOp bin{};
    ExprPtr a, b;
    size_t offset = 0;

    static ExprPtr number_node(double v, size_t off = 0);
    static ExprPtr coord_node(int i, size_t off = 0);
    static ExprPtr unary(UnOp op, ExprPtr x, size_t off = 0);
    static ExprPtr binary(BinOp op, ExprPtr x, ExprPtr y, size_t off = 0);
};

using ConstMap = std::map<std::string, double>;

// Parses src against the chart's coordinates; constants are substituted as
// literals. Throws ParseError with a byte offset on invalid input.
ExprPtr parse_expr_ast(const std::string& src, const Chart& chart, const ConstMap& consts = {});

// Canonical text form; printing a parsed tree and reparsing it reproduces
// the same printed text.
std::string print_expr(const Expr& e, const Chart& chart);
inline std::string print_expr(const ExprPtr& e, const Chart& chart) { return print_expr(*e, chart); }

// Evaluation at any dual level. Throws EvalError (with the offending
// subexpression printed) on domain violations.
template <class T>
T eval_expr(const Expr& e, std::span<const T> x, const Chart& chart);

extern template double eval_expr<double>(const Expr&, std::span<const double>, const Chart&);
extern template D1 eval_expr<D1>(const Expr&, std::span<const D1>, const Chart&);
extern template D2 eval_expr<D2>(const Expr&, std::span<const D2>, const Chart&);
extern template D3 eval_expr<D3>(const Expr&, std::span<const D3>, const Chart&);

}  // namespace reebflow
