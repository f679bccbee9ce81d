#include "reebflow/expr.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "reebflow/detail/lexer.hpp"

namespace reebflow {

ExprPtr Expr::number_node(double v, size_t off) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Number;
    e->number = v;
    e->offset = off;
    return e;
}
ExprPtr Expr::coord_node(int i, size_t off) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Coord;
    e->coord = i;
    e->offset = off;
    return e;
}
ExprPtr Expr::unary(UnOp op, ExprPtr x, size_t off) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->un = op;
    e->a = std::move(x);
    e->offset = off;
    return e;
}
ExprPtr Expr::binary(BinOp op, ExprPtr x, ExprPtr y, size_t off) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->bin = op;
    e->a = std::move(x);
    e->b = std::move(y);
    e->offset = off;
    if (op == BinOp::Pow) {
        if (e->b->kind != Expr::Kind::Number)
            throw ParseError("exponent must fold to a constant", e->b->offset);
        double ex = e->b->number;
        if (ex == std::floor(ex) && std::abs(ex) < 1e9) {
            e->exp_is_int = true;
            e->exp_int = static_cast<long>(ex);
        }
    }
    return e;
}

namespace {

using detail::Lexer;
using detail::Token;

class Parser {
public:
    Parser(const std::string& src, const Chart& chart, const ConstMap& consts)
        : lex_(src), chart_(chart), consts_(consts) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End) throw ParseError("trailing input", t.offset);
        return fold(e);
    }

private:
    ExprPtr expr() {
        ExprPtr e = term();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().op == '+' || lex_.peek().op == '-')) {
            Token t = lex_.take();
            ExprPtr r = term();
            e = Expr::binary(t.op == '+' ? BinOp::Add : BinOp::Sub, e, r, t.offset);
        }
        return e;
    }
    ExprPtr term() {
        ExprPtr e = factor();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().op == '*' || lex_.peek().op == '/')) {
            Token t = lex_.take();
            ExprPtr r = factor();
            e = Expr::binary(t.op == '*' ? BinOp::Mul : BinOp::Div, e, r, t.offset);
        }
        return e;
    }
    ExprPtr factor() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '-') {
            Token t = lex_.take();
            return Expr::unary(UnOp::Neg, factor(), t.offset);
        }
        return power();
    }
    ExprPtr power() {
        ExprPtr base = primary();
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '^') {
            Token t = lex_.take();
            ExprPtr e = factor();  // right associative; allows q^-2
            return Expr::binary(BinOp::Pow, base, fold(e), t.offset);
        }
        return base;
    }
    ExprPtr primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number:
                return Expr::number_node(t.number, t.offset);
            case Token::Kind::LParen: {
                ExprPtr e = expr();
                expect_rparen(t.offset);
                return e;
            }
            case Token::Kind::Ident: {
                if (t.ident == "pi") return Expr::number_node(M_PI, t.offset);
                if (t.ident == "sin" || t.ident == "cos" || t.ident == "exp" || t.ident == "sqrt") {
                    const Token& l = lex_.peek();
                    if (l.kind != Token::Kind::LParen)
                        throw ParseError("builtin '" + t.ident + "' expects one parenthesized argument",
                                         l.offset);
                    lex_.take();
                    ExprPtr arg = expr();
                    if (lex_.peek().kind == Token::Kind::Comma)
                        throw ParseError("builtin '" + t.ident + "' takes exactly one argument",
                                         lex_.peek().offset);
                    expect_rparen(t.offset);
                    UnOp op = t.ident == "sin"   ? UnOp::Sin
                              : t.ident == "cos" ? UnOp::Cos
                              : t.ident == "exp" ? UnOp::Exp
                                                 : UnOp::Sqrt;
                    return Expr::unary(op, arg, t.offset);
                }
                int ci = chart_.index_of(t.ident);
                if (ci >= 0) return Expr::coord_node(ci, t.offset);
                auto it = consts_.find(t.ident);
                if (it != consts_.end()) return Expr::number_node(it->second, t.offset);
                throw ParseError("unknown identifier '" + t.ident +
                                     "' (not a coordinate, constant, or builtin)",
                                 t.offset);
            }
            default:
                throw ParseError("expected a value", t.offset);
        }
    }
    void expect_rparen(size_t open_off) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::RParen)
            throw ParseError("unbalanced parenthesis opened earlier", open_off);
    }

    // constant folding, enough to let exponents like (1+1) or -2 fold
    ExprPtr fold(const ExprPtr& e) {
        if (e->kind == Expr::Kind::Unary && e->un == UnOp::Neg &&
            e->a->kind == Expr::Kind::Number)
            return Expr::number_node(-e->a->number, e->offset);
        if (e->kind == Expr::Kind::Binary && e->a->kind == Expr::Kind::Number &&
            e->b->kind == Expr::Kind::Number) {
            double l = e->a->number, r = e->b->number;
            switch (e->bin) {
                case BinOp::Add: return Expr::number_node(l + r, e->offset);
                case BinOp::Sub: return Expr::number_node(l - r, e->offset);
                case BinOp::Mul: return Expr::number_node(l * r, e->offset);
                case BinOp::Div:
                    if (r == 0.0) throw ParseError("constant division by zero", e->offset);
                    return Expr::number_node(l / r, e->offset);
                case BinOp::Pow: return Expr::number_node(std::pow(l, r), e->offset);
            }
        }
        return e;
    }

    Lexer lex_;
    const Chart& chart_;
    const ConstMap& consts_;
};

std::string fmt_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int precedence(const Expr& e) {
    if (e.kind == Expr::Kind::Binary) {
        switch (e.bin) {
            case BinOp::Add: case BinOp::Sub: return 1;
            case BinOp::Mul: case BinOp::Div: return 2;
            case BinOp::Pow: return 4;
        }
    }
    if (e.kind == Expr::Kind::Unary && e.un == UnOp::Neg) return 3;
    return 5;
}

void print_rec(const Expr& e, const Chart& chart, std::ostringstream& out, int parent_prec) {
    int prec = precedence(e);
    bool paren = prec < parent_prec;
    if (paren) out << '(';
    switch (e.kind) {
        case Expr::Kind::Number: {
            double v = e.number;
            if (v < 0) {
                out << '-';
                v = -v;
            }
            out << fmt_number(v);
            break;
        }
        case Expr::Kind::Coord:
            out << chart.coords.at(e.coord);
            break;
        case Expr::Kind::Unary:
            switch (e.un) {
                case UnOp::Neg:
                    out << '-';
                    print_rec(*e.a, chart, out, prec + 1);
                    break;
                case UnOp::Sin: out << "sin("; print_rec(*e.a, chart, out, 0); out << ')'; break;
                case UnOp::Cos: out << "cos("; print_rec(*e.a, chart, out, 0); out << ')'; break;
                case UnOp::Exp: out << "exp("; print_rec(*e.a, chart, out, 0); out << ')'; break;
                case UnOp::Sqrt: out << "sqrt("; print_rec(*e.a, chart, out, 0); out << ')'; break;
            }
            break;
        case Expr::Kind::Binary: {
            const char* op = e.bin == BinOp::Add   ? " + "
                             : e.bin == BinOp::Sub ? " - "
                             : e.bin == BinOp::Mul ? "*"
                             : e.bin == BinOp::Div ? "/"
                                                   : "^";
            // left operand associates; right side needs one level more
            print_rec(*e.a, chart, out, e.bin == BinOp::Pow ? prec + 1 : prec);
            out << op;
            print_rec(*e.b, chart, out, e.bin == BinOp::Pow ? prec : prec + 1);
            break;
        }
    }
    if (paren) out << ')';
}

}  // namespace

ExprPtr parse_expr_ast(const std::string& src, const Chart& chart, const ConstMap& consts) {
    return Parser(src, chart, consts).parse();
}

std::string print_expr(const Expr& e, const Chart& chart) {
    std::ostringstream out;
    print_rec(e, chart, out, 0);
    return out.str();
}

namespace {

[[noreturn]] void domain_error(const char* what, const Expr& e, const Chart& chart) {
    throw EvalError(std::string(what) + " in subexpression '" + print_expr(e, chart) + "'");
}

}  // namespace

template <class T>
T eval_expr(const Expr& e, std::span<const T> x, const Chart& chart) {
    switch (e.kind) {
        case Expr::Kind::Number:
            return T(e.number);
        case Expr::Kind::Coord:
            return x[static_cast<size_t>(e.coord)];
        case Expr::Kind::Unary: {
            T a = eval_expr(*e.a, x, chart);
            switch (e.un) {
                case UnOp::Neg: return -a;
                case UnOp::Sin: return sin(a);
                case UnOp::Cos: return cos(a);
                case UnOp::Exp: return exp(a);
                case UnOp::Sqrt:
                    if (value_of(a) <= 0.0) domain_error("sqrt of a non-positive value", e, chart);
                    return sqrt(a);
            }
            break;
        }
        case Expr::Kind::Binary: {
            T a = eval_expr(*e.a, x, chart);
            if (e.bin == BinOp::Pow) {
                if (e.exp_is_int) return pow_int(a, e.exp_int);
                if (value_of(a) <= 0.0)
                    domain_error("real power of a non-positive base", e, chart);
                return pow_real(a, e.b->number);
            }
            T b = eval_expr(*e.b, x, chart);
            switch (e.bin) {
                case BinOp::Add: return a + b;
                case BinOp::Sub: return a - b;
                case BinOp::Mul: return a * b;
                case BinOp::Div:
                    if (value_of(b) == 0.0) domain_error("division by zero", e, chart);
                    return a / b;
                default: break;
            }
            break;
        }
    }
    throw EvalError("malformed expression node");
}

template double eval_expr<double>(const Expr&, std::span<const double>, const Chart&);
template D1 eval_expr<D1>(const Expr&, std::span<const D1>, const Chart&);
template D2 eval_expr<D2>(const Expr&, std::span<const D2>, const Chart&);
template D3 eval_expr<D3>(const Expr&, std::span<const D3>, const Chart&);

}  // namespace reebflow
