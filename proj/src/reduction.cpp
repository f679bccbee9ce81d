#include "reebflow/reduction.hpp"

#include <cmath>

namespace reebflow {

namespace {

double eval_two_form(const KForm& omega, std::span<const double> x, std::span<const double> u,
                     std::span<const double> v) {
    double total = 0.0;
    for (const auto& [idx, c] : omega.coeffs) {
        double det = u[idx[0]] * v[idx[1]] - u[idx[1]] * v[idx[0]];
        total += c(x) * det;
    }
    return total;
}

// remove the gradient component of v so it is tangent to {c = 0} at x
Point project_tangent(const ScalarField& c, std::span<const double> x, Point v) {
    const int d = static_cast<int>(x.size());
    Point grad(d);
    double g2 = 0.0, dot = 0.0;
    for (int i = 0; i < d; ++i) {
        grad[i] = partial(c, x, i);
        g2 += grad[i] * grad[i];
        dot += v[i] * grad[i];
    }
    if (g2 > 0)
        for (int i = 0; i < d; ++i) v[i] -= dot / g2 * grad[i];
    return v;
}

Point random_vector(SeededRng& rng, int d) {
    Point v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    return v;
}

}  // namespace

int ReducedForm::covering_section(std::span<const double> x) const {
    for (size_t i = 0; i < fib_.sections.size(); ++i)
        if (fib_.sections[i].in_domain(x)) return static_cast<int>(i);
    return -1;
}

double ReducedForm::with_section(size_t si, std::span<const double> x, std::span<const double> u,
                                 std::span<const double> v) const {
    const Section& s = fib_.sections.at(si);
    Point y = s.map(x);
    Point du = s.map.push(x, u);
    Point dv = s.map.push(x, v);
    return eval_two_form(fib_.d_eta, y, du, dv);
}

double ReducedForm::operator()(std::span<const double> x, std::span<const double> u,
                               std::span<const double> v) const {
    int si = covering_section(x);
    if (si < 0)
        throw ReductionError("base point lies outside every section domain");
    return with_section(static_cast<size_t>(si), x, u, v);
}

TwoFormEvaluator ReducedForm::evaluator() const {
    ReducedForm copy = *this;
    return [copy](std::span<const double> x, std::span<const double> u,
                  std::span<const double> v) { return copy(x, u, v); };
}

ReducedForm reduce(const Fibration& fib, const ReduceOptions& opts) {
    if (fib.sections.empty()) throw ReductionError("fibration carries no sections");
    if (!fib.base_sampler || !fib.total_sampler)
        throw ReductionError("fibration lacks its point samplers");
    SeededRng rng(opts.seed);

    // p o sigma = id on each section's domain
    for (int k = 0; k < opts.check_count; ++k) {
        Point x = fib.base_sampler(rng);
        for (const auto& s : fib.sections) {
            if (!s.in_domain(x)) continue;
            Point y = s.map(x);
            Point back = fib.projection(y);
            for (size_t i = 0; i < x.size(); ++i)
                if (std::abs(back[i] - x[i]) > opts.section_identity_tol)
                    throw ReductionError("p o sigma differs from the identity on section '" +
                                         s.name + "'");
        }
    }

    // fibers are generated by the Reeb field: dp(R) = 0
    for (int k = 0; k < opts.check_count; ++k) {
        Point y = fib.total_sampler(rng);
        Point r = fib.reeb_field(y);
        Point pr = fib.projection.push(y, r);
        for (double c : pr)
            if (std::abs(c) > opts.fiber_tangency_tol)
                throw ReductionError("projection does not kill the Reeb direction (fibers are "
                                     "not flow orbits)");
    }

    ReducedForm omega(fib);

    // well-definedness where section domains overlap
    for (int k = 0; k < opts.check_count; ++k) {
        Point x = fib.base_sampler(rng);
        Point u = random_vector(rng, fib.base.dim());
        Point v = random_vector(rng, fib.base.dim());
        if (fib.base_constraint) {
            u = project_tangent(*fib.base_constraint, x, u);
            v = project_tangent(*fib.base_constraint, x, v);
        }
        double ref = 0.0;
        bool have_ref = false;
        for (size_t si = 0; si < fib.sections.size(); ++si) {
            if (!fib.sections[si].in_domain(x)) continue;
            double val = omega.with_section(si, x, u, v);
            if (have_ref && std::abs(val - ref) > opts.overlap_tol)
                throw ReductionError(
                    "sections disagree on the reduced form (defect " +
                    std::to_string(std::abs(val - ref)) + "); broken fibration data");
            ref = val;
            have_ref = true;
        }
    }
    return omega;
}

double pullback_check_residual(const ReducedForm& omega, int count, uint64_t seed) {
    const Fibration& fib = omega.fibration();
    SeededRng rng(seed);
    double sup = 0.0;
    for (int k = 0; k < count; ++k) {
        Point y = fib.total_sampler(rng);
        Point u = random_vector(rng, fib.total.dim());
        Point v = random_vector(rng, fib.total.dim());
        if (fib.constraint) {
            u = project_tangent(*fib.constraint, y, u);
            v = project_tangent(*fib.constraint, y, v);
        }
        Point x = fib.projection(y);
        Point du = fib.projection.push(y, u);
        Point dv = fib.projection.push(y, v);
        double lhs = omega(x, du, dv);
        double rhs = eval_two_form(fib.d_eta, y, u, v);
        sup = std::max(sup, std::abs(lhs - rhs));
    }
    return sup;
}

double integrate_surface(const TwoFormEvaluator& omega, const SurfaceMesh& mesh, Exec exec) {
    validate_closed_oriented(mesh);
    // degree-2 rule on the unit parametric triangle, weights 1/6 each
    static const double qp[3][2] = {{1.0 / 6, 1.0 / 6}, {2.0 / 3, 1.0 / 6}, {1.0 / 6, 2.0 / 3}};
    std::vector<double> contrib(mesh.triangles.size());
    parallel_for(exec, static_cast<std::ptrdiff_t>(mesh.triangles.size()), [&](std::ptrdiff_t ti) {
        const auto& t = mesh.triangles[ti];
        const Vec3 &A = mesh.vertices[t[0]], &B = mesh.vertices[t[1]], &C = mesh.vertices[t[2]];
        Point e1{B.x - A.x, B.y - A.y, B.z - A.z};
        Point e2{C.x - A.x, C.y - A.y, C.z - A.z};
        double acc = 0.0;
        for (const auto& q : qp) {
            Point P{A.x + q[0] * e1[0] + q[1] * e2[0], A.y + q[0] * e1[1] + q[1] * e2[1],
                    A.z + q[0] * e1[2] + q[1] * e2[2]};
            if (mesh.on_unit_sphere) {
                // integrate on the sphere: nodes and tangents through x -> x/|x|
                double r = std::sqrt(P[0] * P[0] + P[1] * P[1] + P[2] * P[2]);
                Point n{P[0] / r, P[1] / r, P[2] / r};
                auto dproj = [&](const Point& w) {
                    double nd = n[0] * w[0] + n[1] * w[1] + n[2] * w[2];
                    return Point{(w[0] - n[0] * nd) / r, (w[1] - n[1] * nd) / r,
                                 (w[2] - n[2] * nd) / r};
                };
                acc += omega(n, dproj(e1), dproj(e2));
            } else {
                acc += omega(P, e1, e2);
            }
        }
        contrib[ti] = acc / 6.0;
    });
    return pairwise_sum(contrib);
}

IntegralityReport integrality_report(double integral, double hbar, double quad_error,
                                     int mesh_level) {
    if (!(hbar > 0)) throw std::invalid_argument("integrality_report needs hbar > 0");
    IntegralityReport r;
    r.integral = integral;
    r.hbar = hbar;
    r.quad_error = quad_error;
    r.mesh_level = mesh_level;
    double unit = 2 * M_PI * hbar;
    r.quotient = integral / unit;
    r.nearest = std::lround(r.quotient);
    r.deviation = std::abs(r.quotient - static_cast<double>(r.nearest));
    r.pass = r.deviation <= std::max(1e-2, 3.0 * quad_error / unit);
    return r;
}

ExactnessWitness exactness_witness(const Contactification& c, int sample_count) {
    ExactnessWitness w;
    // the global section has constant fiber coordinate, so sigma^*(eta)
    // is exactly the potential: the dt part dies under pullback
    w.vartheta = pullback(c.section, c.form.eta);

    auto base_samples = default_samples(c.base, sample_count);
    w.d_defect = sup_difference(exterior_derivative(w.vartheta), c.base_omega, base_samples);
    if (w.d_defect > 1e-9)
        throw ReductionError("exactness witness fails d vartheta = omega (defect " +
                             std::to_string(w.d_defect) + ")");

    auto ext_samples = default_samples(c.form.chart(), sample_count);
    w.pullback_defect =
        sup_difference(pullback(c.projection, c.base_omega), c.form.d_eta, ext_samples);
    return w;
}

Fibration fibration_of(const Contactification& c) {
    Fibration fib;
    fib.total = c.form.chart();
    fib.d_eta = c.form.d_eta;
    fib.reeb_field = basis_vector_field(fib.total, 0);  // d/dt
    fib.base = c.base;
    fib.projection = c.projection;
    Section s;
    s.name = "global";
    s.map = c.section;
    s.in_domain = [](std::span<const double>) { return true; };
    fib.sections.push_back(s);
    fib.hbar = std::nullopt;
    Chart base = c.base, total = c.form.chart();
    fib.base_sampler = [base](SeededRng& rng) {
        Point p(base.dim());
        for (int i = 0; i < base.dim(); ++i)
            p[i] = base.box[i].lo + rng.uniform() * (base.box[i].hi - base.box[i].lo);
        return p;
    };
    fib.total_sampler = [total](SeededRng& rng) {
        Point p(total.dim());
        for (int i = 0; i < total.dim(); ++i)
            p[i] = total.box[i].lo + rng.uniform() * (total.box[i].hi - total.box[i].lo);
        return p;
    };
    return fib;
}

}  // namespace reebflow
