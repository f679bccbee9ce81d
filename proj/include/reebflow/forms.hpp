#pragma once

// Differential forms and vector fields over a chart.
//
// A k-form stores coefficients on strictly increasing index tuples only;
// a missing tuple means coefficient zero. All sign bookkeeping funnels
// through sort_index_sign so there is a single place signs can go wrong.

#include <functional>
#include <map>
#include <vector>

#include "reebflow/scalar_field.hpp"

namespace reebflow {

using IndexTuple = std::vector<int>;

// Sorts idx ascending in place; returns 0 if an index repeats, otherwise
// the sign (+1 or -1) of the sorting permutation.
int sort_index_sign(IndexTuple& idx);

struct KForm {
    Chart chart;
    int degree = 0;
    std::map<IndexTuple, ScalarField> coeffs;

    static KForm zero(const Chart& chart, int degree);
    // 0-form wrapping a scalar field
    static KForm from_scalar(const ScalarField& f);
    // basis 1-form d x_i
    static KForm basis(const Chart& chart, int i);

    bool is_zero() const { return coeffs.empty(); }
};

struct VectorField {
    Chart chart;
    std::vector<ScalarField> comps;

    Point operator()(std::span<const double> x) const {
        Point v(comps.size());
        for (size_t i = 0; i < comps.size(); ++i) v[i] = comps[i](x);
        return v;
    }
};

VectorField basis_vector_field(const Chart& chart, int i);
VectorField make_vector_field(const Chart& chart, const std::vector<std::string>& component_srcs,
                              const ConstMap& consts = {});

struct SmoothMap {
    Chart source;
    Chart target;
    std::vector<ScalarField> comps;  // one per target coordinate, over source

    Point operator()(std::span<const double> x) const {
        Point y(comps.size());
        for (size_t i = 0; i < comps.size(); ++i) y[i] = comps[i](x);
        return y;
    }
    // d(comps_i)/d(x_j), target_dim x source_dim
    std::vector<std::vector<double>> jacobian(std::span<const double> x) const;
    // jacobian applied to a tangent vector at x
    Point push(std::span<const double> x, std::span<const double> v) const;
};

SmoothMap identity_map(const Chart& chart);
SmoothMap compose_maps(const SmoothMap& outer, const SmoothMap& inner);
// source -> extended chart of source (appended coordinate fixed at value)
SmoothMap section_at(const Chart& ext, const Chart& base, const ScalarField& value);

// --- form algebra -----------------------------------------------------------

KForm add(const KForm& a, const KForm& b);
KForm sub(const KForm& a, const KForm& b);
KForm scale_form(double c, const KForm& a);
KForm scale_form(const ScalarField& f, const KForm& a);
KForm div_form(const KForm& a, const ScalarField& f);

// --- spec operations --------------------------------------------------------

KForm wedge(const KForm& a, const KForm& b);
KForm exterior_derivative(const KForm& a);
KForm differential(const ScalarField& f);  // d of a 0-form
KForm interior_product(const VectorField& X, const KForm& a);
KForm pullback(const SmoothMap& phi, const KForm& a);
KForm lie_derivative(const VectorField& X, const KForm& a);  // Cartan formula

double evaluate_form(const KForm& a, std::span<const double> x,
                     const std::vector<Point>& vectors);
// coefficient of a sorted tuple at x (0 when absent)
double coefficient_at(const KForm& a, const IndexTuple& idx, std::span<const double> x);

// Numerical equality contract: sup over the sample set of coefficient
// (= increasing-basis-tuple) differences.
double sup_difference(const KForm& a, const KForm& b, const std::vector<Point>& samples);
double sup_norm(const KForm& a, const std::vector<Point>& samples);

// Parse a form literal: sums of terms `<expr> * d<coord>[^d<coord>...]`,
// with `^` acting as wedge between basis factors and as power between
// scalars, e.g. "dz - p*dq" or "dt + (q*dp - p*dq)/2".
KForm parse_form(const std::string& src, const Chart& chart, const ConstMap& consts = {});

std::string print_form(const KForm& a);

}  // namespace reebflow
