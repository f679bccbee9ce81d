#include "reebflow/forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <sstream>

#include "reebflow/detail/lexer.hpp"

namespace reebflow {

int sort_index_sign(IndexTuple& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        int v = idx[i];
        size_t j = i;
        while (j > 0 && idx[j - 1] > v) {
            idx[j] = idx[j - 1];
            --j;
            sign = -sign;
        }
        idx[j] = v;
    }
    for (size_t i = 1; i < idx.size(); ++i)
        if (idx[i] == idx[i - 1]) return 0;
    return sign;
}

KForm KForm::zero(const Chart& chart, int degree) { return KForm{chart, degree, {}}; }

KForm KForm::from_scalar(const ScalarField& f) {
    KForm a{f.chart, 0, {}};
    a.coeffs.emplace(IndexTuple{}, f);
    return a;
}

KForm KForm::basis(const Chart& chart, int i) {
    KForm a{chart, 1, {}};
    a.coeffs.emplace(IndexTuple{i}, constant_field(chart, 1.0));
    return a;
}

VectorField basis_vector_field(const Chart& chart, int i) {
    VectorField X{chart, {}};
    for (int k = 0; k < chart.dim(); ++k)
        X.comps.push_back(constant_field(chart, k == i ? 1.0 : 0.0));
    return X;
}

VectorField make_vector_field(const Chart& chart, const std::vector<std::string>& component_srcs,
                              const ConstMap& consts) {
    if (static_cast<int>(component_srcs.size()) != chart.dim())
        throw std::invalid_argument("vector field needs one component per coordinate");
    VectorField X{chart, {}};
    for (const auto& s : component_srcs) X.comps.push_back(parse_expr(s, chart, consts));
    return X;
}

std::vector<std::vector<double>> SmoothMap::jacobian(std::span<const double> x) const {
    std::vector<std::vector<double>> J(comps.size(), std::vector<double>(source.dim()));
    for (size_t i = 0; i < comps.size(); ++i)
        for (int j = 0; j < source.dim(); ++j) J[i][j] = partial(comps[i], x, j);
    return J;
}

Point SmoothMap::push(std::span<const double> x, std::span<const double> v) const {
    Point out(comps.size(), 0.0);
    auto J = jacobian(x);
    for (size_t i = 0; i < comps.size(); ++i)
        for (int j = 0; j < source.dim(); ++j) out[i] += J[i][j] * v[j];
    return out;
}

SmoothMap identity_map(const Chart& chart) {
    SmoothMap m{chart, chart, {}};
    for (int i = 0; i < chart.dim(); ++i) m.comps.push_back(coordinate_field(chart, i));
    return m;
}

SmoothMap compose_maps(const SmoothMap& outer, const SmoothMap& inner) {
    if (!outer.source.same_as(inner.target))
        throw std::invalid_argument("map composition: chart mismatch");
    SmoothMap m{inner.source, outer.target, {}};
    for (const auto& c : outer.comps) m.comps.push_back(compose(c, inner.comps, inner.source));
    return m;
}

SmoothMap section_at(const Chart& ext, const Chart& base, const ScalarField& value) {
    if (ext.dim() != base.dim() + 1)
        throw std::invalid_argument("section_at expects a one-coordinate extension");
    SmoothMap m{base, ext, {}};
    for (int i = 0; i < base.dim(); ++i) m.comps.push_back(coordinate_field(base, i));
    m.comps.push_back(value);
    return m;
}

namespace {

void require_same_chart(const KForm& a, const KForm& b) {
    if (!a.chart.same_as(b.chart))
        throw std::invalid_argument("forms live on different charts: '" + a.chart.name + "' vs '" +
                                    b.chart.name + "'");
}

void accumulate(std::map<IndexTuple, ScalarField>& coeffs, const IndexTuple& idx,
                const ScalarField& f) {
    auto it = coeffs.find(idx);
    if (it == coeffs.end())
        coeffs.emplace(idx, f);
    else
        it->second = add(it->second, f);
}

void enumerate_tuples(int dim, int k, const std::function<void(const IndexTuple&)>& visit) {
    IndexTuple idx(k);
    std::function<void(int, int)> rec = [&](int start, int pos) {
        if (pos == k) {
            visit(idx);
            return;
        }
        for (int i = start; i <= dim - (k - pos); ++i) {
            idx[pos] = i;
            rec(i + 1, pos + 1);
        }
    };
    rec(0, 0);
}

void enumerate_permutations(int k, const std::function<void(const std::vector<int>&, int)>& visit) {
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    int sign = 1;
    // iterate in lexicographic order, tracking parity by counting swaps
    while (true) {
        IndexTuple copy(perm.begin(), perm.end());
        int s = sort_index_sign(copy);
        visit(perm, s);
        if (!std::next_permutation(perm.begin(), perm.end())) break;
        (void)sign;
    }
}

}  // namespace

KForm add(const KForm& a, const KForm& b) {
    require_same_chart(a, b);
    if (a.degree != b.degree) throw std::invalid_argument("cannot add forms of different degree");
    KForm r = a;
    for (const auto& [idx, f] : b.coeffs) accumulate(r.coeffs, idx, f);
    return r;
}

KForm sub(const KForm& a, const KForm& b) { return add(a, scale_form(-1.0, b)); }

KForm scale_form(double c, const KForm& a) {
    KForm r{a.chart, a.degree, {}};
    for (const auto& [idx, f] : a.coeffs) r.coeffs.emplace(idx, scale(c, f));
    return r;
}

KForm scale_form(const ScalarField& f, const KForm& a) {
    KForm r{a.chart, a.degree, {}};
    for (const auto& [idx, c] : a.coeffs) r.coeffs.emplace(idx, mul(f, c));
    return r;
}

KForm div_form(const KForm& a, const ScalarField& f) {
    KForm r{a.chart, a.degree, {}};
    for (const auto& [idx, c] : a.coeffs) r.coeffs.emplace(idx, div(c, f));
    return r;
}

KForm wedge(const KForm& a, const KForm& b) {
    require_same_chart(a, b);
    KForm r{a.chart, a.degree + b.degree, {}};
    if (r.degree > a.chart.dim()) return r;
    for (const auto& [ia, ca] : a.coeffs) {
        for (const auto& [ib, cb] : b.coeffs) {
            IndexTuple idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            int sign = sort_index_sign(idx);
            if (sign == 0) continue;
            ScalarField f = mul(ca, cb);
            if (sign < 0) f = scale(-1.0, f);
            accumulate(r.coeffs, idx, f);
        }
    }
    return r;
}

KForm exterior_derivative(const KForm& a) {
    KForm r{a.chart, a.degree + 1, {}};
    if (r.degree > a.chart.dim()) return r;
    for (const auto& [idx, c] : a.coeffs) {
        for (int i = 0; i < a.chart.dim(); ++i) {
            IndexTuple ext;
            ext.reserve(idx.size() + 1);
            ext.push_back(i);
            ext.insert(ext.end(), idx.begin(), idx.end());
            int sign = sort_index_sign(ext);
            if (sign == 0) continue;
            ScalarField dc = partial_field(c, i);
            if (sign < 0) dc = scale(-1.0, dc);
            accumulate(r.coeffs, ext, dc);
        }
    }
    return r;
}

KForm differential(const ScalarField& f) { return exterior_derivative(KForm::from_scalar(f)); }

KForm interior_product(const VectorField& X, const KForm& a) {
    if (!X.chart.same_as(a.chart))
        throw std::invalid_argument("interior product: field and form on different charts");
    if (a.degree < 1)
        throw std::invalid_argument("interior product needs a form of degree >= 1");
    KForm r{a.chart, a.degree - 1, {}};
    for (const auto& [idx, c] : a.coeffs) {
        for (size_t pos = 0; pos < idx.size(); ++pos) {
            IndexTuple rest;
            rest.reserve(idx.size() - 1);
            for (size_t q = 0; q < idx.size(); ++q)
                if (q != pos) rest.push_back(idx[q]);
            ScalarField f = mul(X.comps.at(idx[pos]), c);
            if (pos % 2 == 1) f = scale(-1.0, f);
            accumulate(r.coeffs, rest, f);
        }
    }
    return r;
}

KForm pullback(const SmoothMap& phi, const KForm& a) {
    if (!phi.target.same_as(a.chart))
        throw std::invalid_argument("pullback: map target does not carry the form");
    const int k = a.degree;
    KForm r{phi.source, k, {}};
    if (k > phi.source.dim()) return r;
    enumerate_tuples(phi.source.dim(), k, [&](const IndexTuple& J) {
        for (const auto& [I, c] : a.coeffs) {
            // det of the k x k block d(phi_{I_a}) / d(x_{J_b})
            ScalarField det = constant_field(phi.source, 0.0);
            bool first = true;
            enumerate_permutations(k, [&](const std::vector<int>& perm, int sign) {
                ScalarField term = constant_field(phi.source, 1.0);
                for (int a_pos = 0; a_pos < k; ++a_pos)
                    term = mul(term, partial_field(phi.comps.at(I[a_pos]), J[perm[a_pos]]));
                if (sign < 0) term = scale(-1.0, term);
                det = first ? term : add(det, term);
                first = false;
            });
            ScalarField coeff = mul(compose(c, phi.comps, phi.source), det);
            if (k == 0) coeff = compose(c, phi.comps, phi.source);
            accumulate(r.coeffs, J, coeff);
        }
    });
    return r;
}

KForm lie_derivative(const VectorField& X, const KForm& a) {
    if (a.degree == 0) {
        // L_X f = X(f) = i_X df
        return interior_product(X, exterior_derivative(a));
    }
    KForm term1 = interior_product(X, exterior_derivative(a));
    KForm term2 = exterior_derivative(interior_product(X, a));
    return add(term1, term2);
}

double evaluate_form(const KForm& a, std::span<const double> x, const std::vector<Point>& vectors) {
    if (static_cast<int>(vectors.size()) != a.degree)
        throw std::invalid_argument("evaluate_form needs exactly degree-many vectors");
    for (const auto& v : vectors)
        if (static_cast<int>(v.size()) != a.chart.dim())
            throw std::invalid_argument("tangent vector dimension mismatch");
    const int k = a.degree;
    double total = 0.0;
    Eigen::MatrixXd M(k, k);
    for (const auto& [idx, c] : a.coeffs) {
        for (int r = 0; r < k; ++r)
            for (int col = 0; col < k; ++col) M(r, col) = vectors[col][idx[r]];
        double det = (k == 0) ? 1.0 : M.determinant();
        total += c(x) * det;
    }
    return total;
}

double coefficient_at(const KForm& a, const IndexTuple& idx, std::span<const double> x) {
    auto it = a.coeffs.find(idx);
    if (it == a.coeffs.end()) return 0.0;
    return it->second(x);
}

double sup_difference(const KForm& a, const KForm& b, const std::vector<Point>& samples) {
    require_same_chart(a, b);
    if (a.degree != b.degree)
        throw std::invalid_argument("sup_difference: degree mismatch");
    double sup = 0.0;
    auto visit = [&](const IndexTuple& idx) {
        for (const auto& p : samples) {
            double d = std::abs(coefficient_at(a, idx, p) - coefficient_at(b, idx, p));
            if (d > sup) sup = d;
        }
    };
    for (const auto& [idx, f] : a.coeffs) visit(idx);
    for (const auto& [idx, f] : b.coeffs)
        if (a.coeffs.find(idx) == a.coeffs.end()) visit(idx);
    return sup;
}

double sup_norm(const KForm& a, const std::vector<Point>& samples) {
    double sup = 0.0;
    for (const auto& [idx, f] : a.coeffs)
        for (const auto& p : samples) sup = std::max(sup, std::abs(f(p)));
    return sup;
}

// --- form literals -----------------------------------------------------------

namespace {

using detail::Lexer;
using detail::Token;

// parser value: either a scalar AST or a form with AST coefficients
struct FormVal {
    bool is_form = false;
    ExprPtr scalar;                        // when !is_form
    int degree = 0;                        // when is_form
    std::map<IndexTuple, ExprPtr> coeffs;  // when is_form
};

ExprPtr ast_add(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Add, std::move(a), std::move(b)); }
ExprPtr ast_mul(ExprPtr a, ExprPtr b) { return Expr::binary(BinOp::Mul, std::move(a), std::move(b)); }
ExprPtr ast_neg(ExprPtr a) { return Expr::unary(UnOp::Neg, std::move(a)); }

class FormParser {
public:
    FormParser(const std::string& src, const Chart& chart, const ConstMap& consts)
        : lex_(src), chart_(chart), consts_(consts) {}

    FormVal parse() {
        FormVal v = expr();
        if (lex_.peek().kind != Token::Kind::End)
            throw ParseError("trailing input in form literal", lex_.peek().offset);
        return v;
    }

private:
    FormVal expr() {
        FormVal v = term();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().op == '+' || lex_.peek().op == '-')) {
            Token t = lex_.take();
            FormVal r = term();
            v = combine_sum(v, r, t.op == '-', t.offset);
        }
        return v;
    }
    FormVal term() {
        FormVal v = factor();
        while (lex_.peek().kind == Token::Kind::Op &&
               (lex_.peek().op == '*' || lex_.peek().op == '/')) {
            Token t = lex_.take();
            FormVal r = factor();
            v = t.op == '*' ? combine_mul(v, r, t.offset) : combine_div(v, r, t.offset);
        }
        return v;
    }
    FormVal factor() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '-') {
            lex_.take();
            FormVal v = factor();
            return negate(v);
        }
        return power();
    }
    FormVal power() {
        FormVal base = primary();
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().op == '^') {
            Token t = lex_.take();
            FormVal e = factor();
            if (base.is_form && e.is_form) return wedge_vals(base, e, t.offset);
            if (!base.is_form && !e.is_form)
                return scalar_val(Expr::binary(BinOp::Pow, base.scalar, e.scalar, t.offset));
            throw ParseError("'^' joins two forms (wedge) or two scalars (power)", t.offset);
        }
        return base;
    }
    FormVal primary() {
        const Token& pk = lex_.peek();
        if (pk.kind == Token::Kind::LParen) {
            Token open = lex_.take();
            FormVal v = expr();
            if (lex_.peek().kind != Token::Kind::RParen)
                throw ParseError("unbalanced parenthesis in form literal", open.offset);
            lex_.take();
            return v;
        }
        if (pk.kind == Token::Kind::Ident) {
            const std::string id = pk.ident;  // copy: take() invalidates pk
            // an exact coordinate name wins over a d-prefix reading
            if (chart_.index_of(id) < 0 && id.size() > 1 && id[0] == 'd' &&
                chart_.index_of(id.substr(1)) >= 0) {
                Token t = lex_.take();
                FormVal v;
                v.is_form = true;
                v.degree = 1;
                v.coeffs.emplace(IndexTuple{chart_.index_of(id.substr(1))},
                                 Expr::number_node(1.0, t.offset));
                return v;
            }
        }
        // defer to the scalar grammar for everything else
        return scalar_val(scalar_primary());
    }

    // scalar sub-grammar (primary level only; composite scalars arrive via
    // the shared expr/term/factor levels above)
    ExprPtr scalar_primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number:
                return Expr::number_node(t.number, t.offset);
            case Token::Kind::Ident: {
                if (t.ident == "pi") return Expr::number_node(M_PI, t.offset);
                if (t.ident == "sin" || t.ident == "cos" || t.ident == "exp" ||
                    t.ident == "sqrt") {
                    if (lex_.peek().kind != Token::Kind::LParen)
                        throw ParseError("builtin '" + t.ident + "' expects an argument", t.offset);
                    lex_.take();
                    FormVal arg = expr();
                    if (arg.is_form)
                        throw ParseError("builtin '" + t.ident + "' applies to scalars", t.offset);
                    if (lex_.peek().kind != Token::Kind::RParen)
                        throw ParseError("unbalanced parenthesis", t.offset);
                    lex_.take();
                    UnOp op = t.ident == "sin"   ? UnOp::Sin
                              : t.ident == "cos" ? UnOp::Cos
                              : t.ident == "exp" ? UnOp::Exp
                                                 : UnOp::Sqrt;
                    return Expr::unary(op, arg.scalar, t.offset);
                }
                int ci = chart_.index_of(t.ident);
                if (ci >= 0) return Expr::coord_node(ci, t.offset);
                auto it = consts_.find(t.ident);
                if (it != consts_.end()) return Expr::number_node(it->second, t.offset);
                throw ParseError("unknown identifier '" + t.ident + "' in form literal", t.offset);
            }
            default:
                throw ParseError("expected a value in form literal", t.offset);
        }
    }

    static FormVal scalar_val(ExprPtr e) {
        FormVal v;
        v.scalar = std::move(e);
        return v;
    }

    static FormVal negate(FormVal v) {
        if (!v.is_form) {
            v.scalar = ast_neg(v.scalar);
            return v;
        }
        for (auto& [idx, c] : v.coeffs) c = ast_neg(c);
        return v;
    }

    FormVal combine_sum(const FormVal& a, const FormVal& b, bool minus, size_t off) {
        if (a.is_form != b.is_form)
            throw ParseError("cannot add a scalar and a form", off);
        if (!a.is_form) {
            FormVal v;
            v.scalar = Expr::binary(minus ? BinOp::Sub : BinOp::Add, a.scalar, b.scalar, off);
            return v;
        }
        if (a.degree != b.degree) throw ParseError("cannot add forms of different degree", off);
        FormVal v = a;
        for (const auto& [idx, c] : b.coeffs) {
            ExprPtr rhs = minus ? ast_neg(c) : c;
            auto it = v.coeffs.find(idx);
            if (it == v.coeffs.end())
                v.coeffs.emplace(idx, rhs);
            else
                it->second = ast_add(it->second, rhs);
        }
        return v;
    }

    FormVal combine_mul(const FormVal& a, const FormVal& b, size_t off) {
        if (a.is_form && b.is_form)
            throw ParseError("use '^' to wedge two forms", off);
        if (!a.is_form && !b.is_form)
            return scalar_val(Expr::binary(BinOp::Mul, a.scalar, b.scalar, off));
        const FormVal& form = a.is_form ? a : b;
        const FormVal& s = a.is_form ? b : a;
        FormVal v = form;
        for (auto& [idx, c] : v.coeffs) c = ast_mul(s.scalar, c);
        return v;
    }

    FormVal combine_div(const FormVal& a, const FormVal& b, size_t off) {
        if (b.is_form) throw ParseError("cannot divide by a form", off);
        if (!a.is_form)
            return scalar_val(Expr::binary(BinOp::Div, a.scalar, b.scalar, off));
        FormVal v = a;
        for (auto& [idx, c] : v.coeffs) c = Expr::binary(BinOp::Div, c, b.scalar, off);
        return v;
    }

    FormVal wedge_vals(const FormVal& a, const FormVal& b, size_t off) {
        FormVal v;
        v.is_form = true;
        v.degree = a.degree + b.degree;
        for (const auto& [ia, ca] : a.coeffs) {
            for (const auto& [ib, cb] : b.coeffs) {
                IndexTuple idx = ia;
                idx.insert(idx.end(), ib.begin(), ib.end());
                int sign = sort_index_sign(idx);
                if (sign == 0) continue;
                ExprPtr c = ast_mul(ca, cb);
                if (sign < 0) c = ast_neg(c);
                auto it = v.coeffs.find(idx);
                if (it == v.coeffs.end())
                    v.coeffs.emplace(idx, c);
                else
                    it->second = ast_add(it->second, c);
            }
        }
        (void)off;
        return v;
    }

    Lexer lex_;
    const Chart& chart_;
    const ConstMap& consts_;
};

}  // namespace

KForm parse_form(const std::string& src, const Chart& chart, const ConstMap& consts) {
    FormVal v = FormParser(src, chart, consts).parse();
    if (!v.is_form) {
        // a bare scalar reads as a 0-form
        return KForm::from_scalar(field_from_ast(v.scalar, chart));
    }
    KForm r{chart, v.degree, {}};
    for (const auto& [idx, c] : v.coeffs) r.coeffs.emplace(idx, field_from_ast(c, chart));
    return r;
}

std::string print_form(const KForm& a) {
    if (a.coeffs.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [idx, c] : a.coeffs) {
        if (!first) out << " + ";
        first = false;
        out << "(" << c.text() << ")";
        for (int i : idx) out << "*d" << a.chart.coords.at(i);
    }
    return out.str();
}

}  // namespace reebflow
