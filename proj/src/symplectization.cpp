#include "reebflow/symplectization.hpp"

#include <Eigen/Dense>

#include "reebflow/sampling.hpp"

namespace reebflow {

SmoothMap Symplectization::scaling(double s) const {
    SmoothMap m{ext, ext, {}};
    for (int i = 0; i < ext.dim() - 1; ++i) m.comps.push_back(coordinate_field(ext, i));
    m.comps.push_back(scale(s, coordinate_field(ext, s_index())));
    return m;
}

HomogeneousModel Symplectization::model() const {
    HomogeneousModel m;
    m.chart = ext;
    m.omega = omega_tilde;
    m.theta = theta;
    m.euler = euler;
    Symplectization copy = *this;
    m.scaling = [copy](double s) { return copy.scaling(s); };
    return m;
}

Symplectization symplectize(const ContactForm& contact, int invariant_samples, Exec exec) {
    Symplectization sy;
    sy.base = contact;
    sy.ext = extend_chart(contact.chart(), "s",
                          Interval{0.0, std::numeric_limits<double>::infinity()}, Box{0.25, 4.0});
    const int d = sy.ext.dim();
    const int si = d - 1;

    SmoothMap proj{sy.ext, contact.chart(), {}};
    for (int i = 0; i < si; ++i) proj.comps.push_back(coordinate_field(sy.ext, i));
    sy.base_projection = proj;

    KForm eta_lift = pullback(proj, contact.eta);
    sy.theta = scale_form(coordinate_field(sy.ext, si), eta_lift);
    sy.omega_tilde = exterior_derivative(sy.theta);

    VectorField euler{sy.ext, {}};
    for (int i = 0; i < si; ++i) euler.comps.push_back(constant_field(sy.ext, 0.0));
    euler.comps.push_back(coordinate_field(sy.ext, si));
    sy.euler = euler;

    auto samples = default_samples(sy.ext, invariant_samples);
    double defect = sup_difference(exterior_derivative(sy.theta), sy.omega_tilde, samples);
    defect = std::max(defect, sup_difference(interior_product(sy.euler, sy.omega_tilde), sy.theta,
                                             samples));
    if (defect > 1e-9)
        throw ContactError("symplectization invariants failed (defect " + std::to_string(defect) +
                           "); the base form is inconsistent");

    // full rank of omega_tilde at samples
    std::vector<double> dets(samples.size());
    parallel_for(exec, static_cast<std::ptrdiff_t>(samples.size()), [&](std::ptrdiff_t k) {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(d, d);
        for (const auto& [idx, c] : sy.omega_tilde.coeffs) {
            double v = c(samples[k]);
            W(idx[0], idx[1]) += v;
            W(idx[1], idx[0]) -= v;
        }
        dets[k] = std::abs(W.determinant());
    });
    for (size_t k = 0; k < dets.size(); ++k)
        if (dets[k] <= 1e-12)
            throw ContactError("omega_tilde rank-deficient at a sample; internal inconsistency");
    return sy;
}

SolvedVectorField hamiltonian_field(const KForm& omega, const ScalarField& H) {
    if (omega.degree != 2) throw std::invalid_argument("hamiltonian_field needs a 2-form");
    if (!omega.chart.same_as(H.chart))
        throw std::invalid_argument("hamiltonian lives on a different chart");
    const int d = omega.chart.dim();
    SolvedVectorField f;
    f.chart = omega.chart;
    f.solve = [omega, H, d](std::span<const double> x) {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(d, d);
        for (const auto& [idx, c] : omega.coeffs) {
            double v = c(x);
            W(idx[0], idx[1]) += v;
            W(idx[1], idx[0]) -= v;
        }
        // i_X omega = -dH: rows j give sum_k X_k W(k, j) = -dH_j
        Eigen::VectorXd rhs(d);
        for (int j = 0; j < d; ++j) rhs(j) = -partial(H, x, j);
        Eigen::MatrixXd A = W.transpose();
        Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
        PointwiseSolve out;
        out.value.assign(sol.data(), sol.data() + d);
        out.residual = (A * sol - rhs).cwiseAbs().maxCoeff();
        return out;
    };
    return f;
}

SolvedVectorField hamiltonian_field(const Symplectization& sympl, const ScalarField& H) {
    return hamiltonian_field(sympl.omega_tilde, H);
}

double homogeneity_residual(const HomogeneousModel& model, const KForm& beta, double a,
                            const std::vector<Point>& samples, Exec exec) {
    static const double factors[] = {0.5, 2.0, 3.0};
    std::vector<double> sups(samples.size() * std::size(factors));
    std::vector<KForm> defects;
    for (double s : factors) {
        KForm pulled = pullback(model.scaling(s), beta);
        defects.push_back(sub(pulled, scale_form(std::pow(s, a), beta)));
    }
    parallel_for(exec, static_cast<std::ptrdiff_t>(samples.size()), [&](std::ptrdiff_t k) {
        for (size_t fi = 0; fi < std::size(factors); ++fi) {
            double sup = 0.0;
            for (const auto& [idx, c] : defects[fi].coeffs)
                sup = std::max(sup, std::abs(c(samples[k])));
            sups[k * std::size(factors) + fi] = sup;
        }
    });
    return max_of(sups);
}

Point project_to_contact(const Symplectization& sympl, const ExtFieldFn& X,
                         std::span<const double> base_point, double invariance_tol) {
    const int db = sympl.base.chart().dim();
    Point ext1(base_point.begin(), base_point.end());
    ext1.push_back(1.0);
    Point ext2(base_point.begin(), base_point.end());
    ext2.push_back(2.0);
    Point v1 = X(ext1), v2 = X(ext2);
    for (int i = 0; i < db; ++i)
        if (std::abs(v1[i] - v2[i]) > invariance_tol)
            throw ContactError("field is not invariant under the R_+ action (base component " +
                               std::to_string(i) + " varies with s by " +
                               std::to_string(std::abs(v1[i] - v2[i])) + ")");
    return Point(v1.begin(), v1.begin() + db);
}

ScalarField homogeneous_hamiltonian(const Symplectization& sympl, const ScalarField& F_base) {
    if (!F_base.chart.same_as(sympl.base.chart()))
        throw std::invalid_argument("F must live on the base chart");
    ScalarField F_lift = compose(F_base, sympl.base_projection.comps, sympl.ext);
    return div(coordinate_field(sympl.ext, sympl.s_index()), F_lift);
}

}  // namespace reebflow
