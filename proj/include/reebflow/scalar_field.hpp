#pragma once

// Scalar fields over a chart. A field is backed by a small immutable node
// graph: parsed expressions, partial derivatives of other fields, sums,
// products, quotients, and compositions with coordinate maps. Every node
// evaluates at dual levels D0..D3, so first derivatives of anything built
// from first derivatives (and second derivatives of parsed expressions)
// stay exact forward-mode, never finite differences.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reebflow/chart.hpp"
#include "reebflow/expr.hpp"

namespace reebflow {

class FieldFn {
public:
    virtual ~FieldFn() = default;
    virtual double eval0(std::span<const double> x) const = 0;
    virtual D1 eval1(std::span<const D1> x) const = 0;
    virtual D2 eval2(std::span<const D2> x) const = 0;
    virtual D3 eval3(std::span<const D3> x) const = 0;
};

using FieldFnPtr = std::shared_ptr<const FieldFn>;

struct ScalarField {
    Chart chart;
    FieldFnPtr fn;
    std::optional<ExprPtr> ast;  // present when parsed from text

    bool printable() const { return ast.has_value(); }
    std::string text() const;

    double operator()(std::span<const double> x) const { return fn->eval0(x); }
};

// --- construction -----------------------------------------------------------

// Parse src over the chart; named constants are bound as literals.
ScalarField parse_expr(const std::string& src, const Chart& chart, const ConstMap& consts = {});

// Wrap an already-built syntax tree (indices must refer to the chart).
ScalarField field_from_ast(ExprPtr ast, const Chart& chart);

ScalarField constant_field(const Chart& chart, double c);
ScalarField coordinate_field(const Chart& chart, int i);

// --- pointwise operations (spec surface) ------------------------------------

double eval(const ScalarField& f, std::span<const double> x);
double partial(const ScalarField& f, std::span<const double> x, int i);
// symmetric in (i, j) exactly: the index pair is canonicalized internally
double second_partial(const ScalarField& f, std::span<const double> x, int i, int j);

// --- field algebra ----------------------------------------------------------

ScalarField partial_field(const ScalarField& f, int i);
ScalarField add(const ScalarField& a, const ScalarField& b);
ScalarField sub(const ScalarField& a, const ScalarField& b);
ScalarField mul(const ScalarField& a, const ScalarField& b);
ScalarField div(const ScalarField& a, const ScalarField& b);
ScalarField scale(double c, const ScalarField& f);

// f on the target chart composed with one component field per target
// coordinate, all over the source chart.
ScalarField compose(const ScalarField& f, const std::vector<ScalarField>& components,
                    const Chart& source);

// Evaluation of a field at every dual level, dispatching on T.
template <class T>
T field_eval(const FieldFn& fn, std::span<const T> x);

template <> inline double field_eval<double>(const FieldFn& fn, std::span<const double> x) { return fn.eval0(x); }
template <> inline D1 field_eval<D1>(const FieldFn& fn, std::span<const D1> x) { return fn.eval1(x); }
template <> inline D2 field_eval<D2>(const FieldFn& fn, std::span<const D2> x) { return fn.eval2(x); }
template <> inline D3 field_eval<D3>(const FieldFn& fn, std::span<const D3> x) { return fn.eval3(x); }

}  // namespace reebflow
