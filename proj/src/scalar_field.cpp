#include "reebflow/scalar_field.hpp"

#include <stdexcept>

namespace reebflow {

namespace {

// CRTP shim: implement evalT<T> once per node, get all four virtuals.
template <class Derived>
class FieldFnBase : public FieldFn {
public:
    double eval0(std::span<const double> x) const override {
        return self().template evalT<double>(x);
    }
    D1 eval1(std::span<const D1> x) const override { return self().template evalT<D1>(x); }
    D2 eval2(std::span<const D2> x) const override { return self().template evalT<D2>(x); }
    D3 eval3(std::span<const D3> x) const override { return self().template evalT<D3>(x); }

private:
    const Derived& self() const { return static_cast<const Derived&>(*this); }
};

class AstFn : public FieldFnBase<AstFn> {
public:
    AstFn(ExprPtr ast, Chart chart) : ast_(std::move(ast)), chart_(std::move(chart)) {}
    template <class T>
    T evalT(std::span<const T> x) const {
        return eval_expr<T>(*ast_, x, chart_);
    }

private:
    ExprPtr ast_;
    Chart chart_;
};

class ConstFn : public FieldFnBase<ConstFn> {
public:
    explicit ConstFn(double c) : c_(c) {}
    template <class T>
    T evalT(std::span<const T>) const {
        return T(c_);
    }

private:
    double c_;
};

class SumFn : public FieldFnBase<SumFn> {
public:
    SumFn(FieldFnPtr a, FieldFnPtr b, double sign) : a_(std::move(a)), b_(std::move(b)), sign_(sign) {}
    template <class T>
    T evalT(std::span<const T> x) const {
        if (sign_ > 0) return field_eval<T>(*a_, x) + field_eval<T>(*b_, x);
        return field_eval<T>(*a_, x) - field_eval<T>(*b_, x);
    }

private:
    FieldFnPtr a_, b_;
    double sign_;
};

class ProdFn : public FieldFnBase<ProdFn> {
public:
    ProdFn(FieldFnPtr a, FieldFnPtr b) : a_(std::move(a)), b_(std::move(b)) {}
    template <class T>
    T evalT(std::span<const T> x) const {
        return field_eval<T>(*a_, x) * field_eval<T>(*b_, x);
    }

private:
    FieldFnPtr a_, b_;
};

class DivFn : public FieldFnBase<DivFn> {
public:
    DivFn(FieldFnPtr a, FieldFnPtr b) : a_(std::move(a)), b_(std::move(b)) {}
    template <class T>
    T evalT(std::span<const T> x) const {
        T den = field_eval<T>(*b_, x);
        if (value_of(den) == 0.0) throw EvalError("division by zero in derived field");
        return field_eval<T>(*a_, x) / den;
    }

private:
    FieldFnPtr a_, b_;
};

class ScaleFn : public FieldFnBase<ScaleFn> {
public:
    ScaleFn(double c, FieldFnPtr f) : c_(c), f_(std::move(f)) {}
    template <class T>
    T evalT(std::span<const T> x) const {
        return field_eval<T>(*f_, x) * c_;
    }

private:
    double c_;
    FieldFnPtr f_;
};

// Directional derivative along coordinate i, by promoting the evaluation
// one dual level and seeding slot i.
class PartialFn : public FieldFn {
public:
    PartialFn(FieldFnPtr f, int i) : f_(std::move(f)), i_(i) {}

    double eval0(std::span<const double> x) const override { return lift<double>(x).d; }
    D1 eval1(std::span<const D1> x) const override { return lift<D1>(x).d; }
    D2 eval2(std::span<const D2> x) const override { return lift<D2>(x).d; }
    D3 eval3(std::span<const D3>) const override {
        throw EvalError("derivative depth exceeds supported order");
    }

private:
    template <class T>
    Dual<T> lift(std::span<const T> x) const {
        std::vector<Dual<T>> xs(x.size());
        for (size_t k = 0; k < x.size(); ++k) xs[k] = Dual<T>(x[k], T(0.0));
        xs[static_cast<size_t>(i_)].d = T(1.0);
        return field_eval<Dual<T>>(*f_, xs);
    }

    FieldFnPtr f_;
    int i_;
};

class ComposeFn : public FieldFnBase<ComposeFn> {
public:
    ComposeFn(FieldFnPtr f, std::vector<FieldFnPtr> comps)
        : f_(std::move(f)), comps_(std::move(comps)) {}
    template <class T>
    T evalT(std::span<const T> x) const {
        std::vector<T> y(comps_.size());
        for (size_t k = 0; k < comps_.size(); ++k) y[k] = field_eval<T>(*comps_[k], x);
        return field_eval<T>(*f_, std::span<const T>(y));
    }

private:
    FieldFnPtr f_;
    std::vector<FieldFnPtr> comps_;
};

}  // namespace

std::string ScalarField::text() const {
    if (ast) return print_expr(*ast, chart);
    return "<derived field over " + chart.name + ">";
}

ScalarField parse_expr(const std::string& src, const Chart& chart, const ConstMap& consts) {
    ExprPtr ast = parse_expr_ast(src, chart, consts);
    return ScalarField{chart, std::make_shared<AstFn>(ast, chart), ast};
}

ScalarField field_from_ast(ExprPtr ast, const Chart& chart) {
    return ScalarField{chart, std::make_shared<AstFn>(ast, chart), ast};
}

ScalarField constant_field(const Chart& chart, double c) {
    return ScalarField{chart, std::make_shared<ConstFn>(c),
                       Expr::number_node(c)};
}

ScalarField coordinate_field(const Chart& chart, int i) {
    if (i < 0 || i >= chart.dim()) throw std::invalid_argument("coordinate index out of range");
    ExprPtr ast = Expr::coord_node(i);
    return ScalarField{chart, std::make_shared<AstFn>(ast, chart), ast};
}

double eval(const ScalarField& f, std::span<const double> x) { return f.fn->eval0(x); }

double partial(const ScalarField& f, std::span<const double> x, int i) {
    std::vector<D1> xs(x.size());
    for (size_t k = 0; k < x.size(); ++k) xs[k] = D1(x[k], 0.0);
    xs[static_cast<size_t>(i)].d = 1.0;
    return f.fn->eval1(xs).d;
}

double second_partial(const ScalarField& f, std::span<const double> x, int i, int j) {
    if (i > j) std::swap(i, j);  // exact symmetry by canonical seeding
    std::vector<D2> xs(x.size());
    for (size_t k = 0; k < x.size(); ++k) xs[k] = D2(D1(x[k], 0.0), D1(0.0, 0.0));
    xs[static_cast<size_t>(i)].v.d = 1.0;
    xs[static_cast<size_t>(j)].d.v = 1.0;
    return f.fn->eval2(xs).d.d;
}

namespace {
void require_same_chart(const ScalarField& a, const ScalarField& b) {
    if (!a.chart.same_as(b.chart))
        throw std::invalid_argument("scalar fields live on different charts: '" + a.chart.name +
                                    "' vs '" + b.chart.name + "'");
}
}  // namespace

ScalarField partial_field(const ScalarField& f, int i) {
    return ScalarField{f.chart, std::make_shared<PartialFn>(f.fn, i), std::nullopt};
}

ScalarField add(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return ScalarField{a.chart, std::make_shared<SumFn>(a.fn, b.fn, 1.0), std::nullopt};
}
ScalarField sub(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return ScalarField{a.chart, std::make_shared<SumFn>(a.fn, b.fn, -1.0), std::nullopt};
}
ScalarField mul(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return ScalarField{a.chart, std::make_shared<ProdFn>(a.fn, b.fn), std::nullopt};
}
ScalarField div(const ScalarField& a, const ScalarField& b) {
    require_same_chart(a, b);
    return ScalarField{a.chart, std::make_shared<DivFn>(a.fn, b.fn), std::nullopt};
}
ScalarField scale(double c, const ScalarField& f) {
    return ScalarField{f.chart, std::make_shared<ScaleFn>(c, f.fn), std::nullopt};
}

ScalarField compose(const ScalarField& f, const std::vector<ScalarField>& components,
                    const Chart& source) {
    if (static_cast<int>(components.size()) != f.chart.dim())
        throw std::invalid_argument("composition needs one component per target coordinate");
    std::vector<FieldFnPtr> comps;
    comps.reserve(components.size());
    for (const auto& c : components) {
        if (!c.chart.same_as(source))
            throw std::invalid_argument("composition component lives off the source chart");
        comps.push_back(c.fn);
    }
    return ScalarField{source, std::make_shared<ComposeFn>(f.fn, std::move(comps)), std::nullopt};
}

}  // namespace reebflow
