#pragma once

// Contact forms, pointwise Reeb solving, contact Hamiltonian fields,
// conformal-rescaling defects, and the two reduction constructions that
// produce contact forms (hypersurface restriction and contactification).

#include <functional>

#include "reebflow/forms.hpp"
#include "reebflow/parallel.hpp"

namespace reebflow {

struct ContactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// eta ^ (d eta)^n fell below the acceptance threshold somewhere
struct DegeneracyError : ContactError {
    Point worst;
    double value;
    DegeneracyError(const std::string& msg, Point worst_, double value_)
        : ContactError(msg), worst(std::move(worst_)), value(value_) {}
};
struct SolveError : ContactError {
    using ContactError::ContactError;
};

// thresholds; well above roundoff for the degrees and dimensions in play,
// far below any genuine catalog value
inline constexpr double kVolumeThreshold = 1e-8;
inline constexpr double kSolveResidualMax = 1e-8;

struct ContactVerification {
    std::vector<Point> samples;
    double min_abs_volume = 0.0;
    Point worst;
    double threshold = kVolumeThreshold;
};

struct ContactForm {
    KForm eta;
    KForm d_eta;
    KForm volume;  // eta ^ (d eta)^n
    int n = 0;     // chart dim = 2n + 1
    ContactVerification verification;

    const Chart& chart() const { return eta.chart; }
};

// Accepts eta iff min over samples of |top coefficient of eta^(d eta)^n|
// exceeds the threshold; throws DegeneracyError with the worst point
// otherwise. Even dimension is an invalid_argument.
ContactForm verify_contact(const KForm& eta, const std::vector<Point>& samples,
                           double threshold = kVolumeThreshold, Exec exec = default_exec());
ContactForm verify_contact(const KForm& eta);  // default 100 Halton samples

struct PointwiseSolve {
    Point value;
    double residual;  // sup-norm of the stacked linear system's defect
};

// A vector field known through pointwise linear solves.
struct SolvedVectorField {
    Chart chart;
    std::function<PointwiseSolve(std::span<const double>)> solve;

    Point operator()(std::span<const double> x) const { return checked(x).value; }
    PointwiseSolve checked(std::span<const double> x) const;
};

struct ReebField {
    SolvedVectorField field;
    Point operator()(std::span<const double> x) const { return field(x); }
    // max of |i_R eta - 1| and sup |i_R d eta| over the coordinate basis
    double residual(std::span<const double> x) const;
};

// Pointwise least-squares solve of the stacked system (i_R eta = 1 on top
// of i_R d eta = 0) by orthogonal factorization.
ReebField reeb(const ContactForm& contact);

// X_G from i_X eta = G, i_X d eta = R(G) eta - dG, solved like reeb.
SolvedVectorField contact_hamiltonian_field(const ContactForm& contact, const ScalarField& G);

// sup over samples and basis covectors of |dG + i_{X_G} d eta - R(G) eta|,
// the pointwise defect of L_{X_G} eta = R(G) eta.
double contact_evolution_residual(const ContactForm& contact, const ScalarField& G,
                                  const std::vector<Point>& samples, Exec exec = default_exec());

// Coefficients of the 1-form i_{fR} d(eta/f) at x; identically zero only
// when f is constant on the (connected) chart.
Point rescaling_defect(const ContactForm& contact, const ScalarField& f,
                       std::span<const double> x);
// sup of the defect's coordinate-basis sup-norm over the samples
double rescaling_residual(const ContactForm& contact, const ScalarField& f,
                          const std::vector<Point>& samples, Exec exec = default_exec());

// Restriction of i_nu Omega to a hypersurface given by the embedding iota
// into the ambient chart; h is a defining function of the hypersurface
// (dh pairs with nu to witness transversality). Checks L_nu Omega = Omega,
// transversality, and d eta = iota^* Omega.
ContactForm hypersurface_contact(const KForm& Omega, const VectorField& nu, const SmoothMap& iota,
                                 const ScalarField& h, const std::vector<Point>& chart_samples,
                                 Exec exec = default_exec());

struct Contactification {
    ContactForm form;      // on the extended chart (t prepended)
    Chart base;            // N
    SmoothMap projection;  // ext -> N, drops t
    SmoothMap section;     // N -> ext at t = 0
    KForm vartheta;        // the 1-form on N with d vartheta = omega
    KForm base_omega;      // d vartheta on N
};

// eta = dt + vartheta on N x R; requires d(vartheta) nondegenerate on N.
Contactification standard_contactification(const KForm& vartheta,
                                           const std::string& t_name = "t");

}  // namespace reebflow
