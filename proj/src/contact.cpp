#include "reebflow/contact.hpp"

#include <Eigen/Dense>
#include <sstream>

#include "reebflow/sampling.hpp"

namespace reebflow {

namespace {

std::string point_str(std::span<const double> x) {
    std::ostringstream s;
    s << "(";
    for (size_t i = 0; i < x.size(); ++i) s << (i ? ", " : "") << x[i];
    s << ")";
    return s.str();
}

// coefficient matrix W[i][j] = omega_x(e_i, e_j) of a 2-form
Eigen::MatrixXd two_form_matrix(const KForm& omega, std::span<const double> x) {
    const int d = omega.chart.dim();
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(d, d);
    for (const auto& [idx, c] : omega.coeffs) {
        double v = c(x);
        W(idx[0], idx[1]) += v;
        W(idx[1], idx[0]) -= v;
    }
    return W;
}

Eigen::VectorXd one_form_values(const KForm& alpha, std::span<const double> x) {
    const int d = alpha.chart.dim();
    Eigen::VectorXd row = Eigen::VectorXd::Zero(d);
    for (const auto& [idx, c] : alpha.coeffs) row(idx[0]) += c(x);
    return row;
}

// stacked (d+1) x d least-squares system: eta(X) = rhs0 over i_X d eta = rhs
PointwiseSolve stacked_solve(const KForm& eta, const KForm& d_eta, std::span<const double> x,
                             double rhs0, const Eigen::VectorXd& rhs_rest) {
    const int d = eta.chart.dim();
    Eigen::MatrixXd A(d + 1, d);
    Eigen::VectorXd b(d + 1);
    A.row(0) = one_form_values(eta, x).transpose();
    b(0) = rhs0;
    // row j below: sum_k X_k (d eta)(e_k, e_j) = rhs_j
    A.bottomRows(d) = two_form_matrix(d_eta, x).transpose();
    b.tail(d) = rhs_rest;
    Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
    PointwiseSolve out;
    out.value.assign(sol.data(), sol.data() + d);
    out.residual = (A * sol - b).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace

PointwiseSolve SolvedVectorField::checked(std::span<const double> x) const {
    PointwiseSolve s = solve(x);
    if (s.residual > kSolveResidualMax)
        throw SolveError("pointwise solve residual " + std::to_string(s.residual) + " at " +
                         point_str(x) + " signals degeneracy");
    return s;
}

ContactForm verify_contact(const KForm& eta, const std::vector<Point>& samples, double threshold,
                           Exec exec) {
    if (eta.degree != 1) throw std::invalid_argument("verify_contact expects a 1-form");
    const int d = eta.chart.dim();
    if (d % 2 == 0 || d < 3)
        throw std::invalid_argument("contact forms need odd chart dimension >= 3, got " +
                                    std::to_string(d));
    if (samples.empty()) throw std::invalid_argument("verify_contact needs a nonempty sample set");
    const int n = (d - 1) / 2;

    ContactForm c;
    c.eta = eta;
    c.d_eta = exterior_derivative(eta);
    KForm vol = eta;
    for (int k = 0; k < n; ++k) vol = wedge(vol, c.d_eta);
    c.volume = vol;
    c.n = n;

    IndexTuple top(d);
    for (int i = 0; i < d; ++i) top[i] = i;
    std::vector<double> values(samples.size());
    parallel_for(exec, static_cast<std::ptrdiff_t>(samples.size()),
                 [&](std::ptrdiff_t i) { values[i] = coefficient_at(vol, top, samples[i]); });

    double min_abs = std::numeric_limits<double>::infinity();
    size_t worst = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) < min_abs) {
            min_abs = std::abs(values[i]);
            worst = i;
        }
    }
    c.verification = ContactVerification{samples, min_abs, samples[worst], threshold};
    if (!(min_abs > threshold))
        throw DegeneracyError("eta ^ (d eta)^" + std::to_string(n) +
                                  " degenerates: |volume coefficient| = " + std::to_string(min_abs) +
                                  " at " + point_str(samples[worst]),
                              samples[worst], values[worst]);
    return c;
}

ContactForm verify_contact(const KForm& eta) {
    return verify_contact(eta, default_samples(eta.chart, 100));
}

ReebField reeb(const ContactForm& contact) {
    const int d = contact.chart().dim();
    KForm eta = contact.eta, d_eta = contact.d_eta;
    SolvedVectorField f;
    f.chart = contact.chart();
    f.solve = [eta, d_eta, d](std::span<const double> x) {
        return stacked_solve(eta, d_eta, x, 1.0, Eigen::VectorXd::Zero(d));
    };
    return ReebField{std::move(f)};
}

double ReebField::residual(std::span<const double> x) const {
    return field.solve(x).residual;
}

SolvedVectorField contact_hamiltonian_field(const ContactForm& contact, const ScalarField& G) {
    if (!G.chart.same_as(contact.chart()))
        throw std::invalid_argument("hamiltonian lives on a different chart than eta");
    const int d = contact.chart().dim();
    KForm eta = contact.eta, d_eta = contact.d_eta;
    SolvedVectorField f;
    f.chart = contact.chart();
    f.solve = [eta, d_eta, G, d](std::span<const double> x) {
        PointwiseSolve rb = stacked_solve(eta, d_eta, x, 1.0, Eigen::VectorXd::Zero(d));
        Eigen::VectorXd grad(d);
        for (int i = 0; i < d; ++i) grad(i) = partial(G, x, i);
        double rg = 0.0;
        for (int i = 0; i < d; ++i) rg += rb.value[i] * grad(i);
        Eigen::VectorXd rhs = rg * one_form_values(eta, x) - grad;
        PointwiseSolve s = stacked_solve(eta, d_eta, x, G(x), rhs);
        s.residual = std::max(s.residual, rb.residual);
        return s;
    };
    return f;
}

double contact_evolution_residual(const ContactForm& contact, const ScalarField& G,
                                  const std::vector<Point>& samples, Exec exec) {
    SolvedVectorField XG = contact_hamiltonian_field(contact, G);
    ReebField R = reeb(contact);
    const int d = contact.chart().dim();
    KForm eta = contact.eta, d_eta = contact.d_eta;
    std::vector<double> sups(samples.size());
    parallel_for(exec, static_cast<std::ptrdiff_t>(samples.size()), [&](std::ptrdiff_t k) {
        const Point& x = samples[k];
        Point Xg = XG.checked(x).value;
        Point Rv = R(x);
        double rg = 0.0;
        for (int i = 0; i < d; ++i) rg += Rv[i] * partial(G, x, i);
        Eigen::MatrixXd W = two_form_matrix(d_eta, x);
        Eigen::VectorXd eta_row = one_form_values(eta, x);
        double sup = 0.0;
        // defect of L_{X_G} eta = R(G) eta, written via Cartan as
        // dG + i_{X_G} d eta - R(G) eta
        for (int j = 0; j < d; ++j) {
            double ix = 0.0;
            for (int i = 0; i < d; ++i) ix += Xg[i] * W(i, j);
            double defect = partial(G, x, j) + ix - rg * eta_row(j);
            sup = std::max(sup, std::abs(defect));
        }
        sups[k] = sup;
    });
    return max_of(sups);
}

Point rescaling_defect(const ContactForm& contact, const ScalarField& f,
                       std::span<const double> x) {
    if (!(f(x) > 0.0))
        throw std::invalid_argument("conformal factor must be positive, got " +
                                    std::to_string(f(x)) + " at " + point_str(x));
    const int d = contact.chart().dim();
    KForm eta_over_f = div_form(contact.eta, f);
    KForm d_eta_over_f = exterior_derivative(eta_over_f);
    Point R = reeb(contact)(x);
    double fx = f(x);
    Eigen::MatrixXd W = two_form_matrix(d_eta_over_f, x);
    Point defect(d, 0.0);
    for (int j = 0; j < d; ++j) {
        double v = 0.0;
        for (int i = 0; i < d; ++i) v += fx * R[i] * W(i, j);
        defect[j] = v;
    }
    return defect;
}

double rescaling_residual(const ContactForm& contact, const ScalarField& f,
                          const std::vector<Point>& samples, Exec exec) {
    std::vector<double> sups(samples.size());
    parallel_for(exec, static_cast<std::ptrdiff_t>(samples.size()), [&](std::ptrdiff_t k) {
        Point defect = rescaling_defect(contact, f, samples[k]);
        double sup = 0.0;
        for (double v : defect) sup = std::max(sup, std::abs(v));
        sups[k] = sup;
    });
    return max_of(sups);
}

ContactForm hypersurface_contact(const KForm& Omega, const VectorField& nu, const SmoothMap& iota,
                                 const ScalarField& h, const std::vector<Point>& chart_samples,
                                 Exec exec) {
    if (Omega.degree != 2) throw std::invalid_argument("ambient form must have degree 2");
    if (!Omega.chart.same_as(nu.chart) || !Omega.chart.same_as(iota.target) ||
        !Omega.chart.same_as(h.chart))
        throw std::invalid_argument("ambient chart mismatch");

    // homogeneity L_nu Omega = Omega, checked at the embedded samples
    KForm lie = lie_derivative(nu, Omega);
    KForm homogeneity_defect = sub(lie, Omega);
    for (const auto& x : chart_samples) {
        Point y = iota(x);
        for (const auto& [idx, c] : homogeneity_defect.coeffs) {
            if (std::abs(c(y)) > 1e-9)
                throw ContactError("L_nu Omega differs from Omega at " + point_str(y) +
                                   "; the field does not rescale the symplectic form");
        }
    }

    // transversality: dh must pair nonzero with nu on the hypersurface
    for (const auto& x : chart_samples) {
        Point y = iota(x);
        double pairing = 0.0;
        for (int i = 0; i < Omega.chart.dim(); ++i) pairing += partial(h, y, i) * nu.comps[i](y);
        if (std::abs(pairing) <= 1e-8)
            throw ContactError("nu is tangent to the hypersurface at " + point_str(y) +
                               " (dh(nu) = " + std::to_string(pairing) + ")");
    }

    KForm eta_tilde = interior_product(nu, Omega);
    KForm eta = pullback(iota, eta_tilde);
    ContactForm contact = verify_contact(eta, chart_samples, kVolumeThreshold, exec);

    double pull_defect = sup_difference(contact.d_eta, pullback(iota, Omega), chart_samples);
    if (pull_defect > 1e-9)
        throw ContactError("d eta fails to match the restricted ambient form (defect " +
                           std::to_string(pull_defect) + ")");
    return contact;
}

Contactification standard_contactification(const KForm& vartheta, const std::string& t_name) {
    if (vartheta.degree != 1)
        throw std::invalid_argument("contactification takes a 1-form potential");
    const Chart& N = vartheta.chart;
    if (N.dim() % 2 != 0)
        throw std::invalid_argument("the symplectic base needs even dimension");
    const int n = N.dim() / 2;

    // d vartheta must be nondegenerate: (d vartheta)^n has nonzero top coefficient
    KForm omega = exterior_derivative(vartheta);
    KForm power = omega;
    for (int k = 1; k < n; ++k) power = wedge(power, omega);
    IndexTuple top(N.dim());
    for (int i = 0; i < N.dim(); ++i) top[i] = i;
    auto base_samples = default_samples(N, 50);
    double min_abs = std::numeric_limits<double>::infinity();
    Point worst;
    for (const auto& x : base_samples) {
        double v = std::abs(coefficient_at(power, top, x));
        if (v < min_abs) {
            min_abs = v;
            worst = x;
        }
    }
    if (!(min_abs > kVolumeThreshold))
        throw DegeneracyError("d vartheta is degenerate (top coefficient " +
                                  std::to_string(min_abs) + " at " + point_str(worst) + ")",
                              worst, min_abs);

    Chart ext = extend_chart(N, t_name, Interval{}, Box{-1.0, 1.0}, /*prepend=*/true,
                             N.name + "_contactified");
    SmoothMap proj{ext, N, {}};
    for (int i = 0; i < N.dim(); ++i) proj.comps.push_back(coordinate_field(ext, i + 1));

    KForm eta = add(KForm::basis(ext, 0), pullback(proj, vartheta));
    Contactification out;
    out.form = verify_contact(eta, default_samples(ext, 100));
    out.base = N;
    out.projection = proj;
    SmoothMap section{N, ext, {}};
    section.comps.push_back(constant_field(N, 0.0));
    for (int i = 0; i < N.dim(); ++i) section.comps.push_back(coordinate_field(N, i));
    out.section = section;
    out.vartheta = vartheta;
    out.base_omega = omega;
    return out;
}

}  // namespace reebflow
