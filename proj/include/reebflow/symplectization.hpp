#pragma once

// The symplectization M x R_+ with omega_tilde = d(s eta), its Euler field
// and Liouville form, pointwise Hamiltonian solves, homogeneity residuals,
// and the projection that recovers Reeb fields of rescaled contact forms.

#include "reebflow/contact.hpp"

namespace reebflow {

// Shared shape of a 1-homogeneous symplectic model: the product model
// (M x R_+, d(s eta)) and the ambient punctured-plane model of the sphere
// catalog both provide one.
struct HomogeneousModel {
    Chart chart;
    KForm omega;        // degree 2, 1-homogeneous for the scaling action
    KForm theta;        // i_euler omega
    VectorField euler;  // generator of the scaling action
    std::function<SmoothMap(double)> scaling;  // h_s for a fixed s > 0
};

struct Symplectization {
    ContactForm base;
    Chart ext;          // base coordinates plus s in (0, inf)
    KForm theta;        // s * eta, lifted
    KForm omega_tilde;  // d(theta)
    VectorField euler;  // s d/ds
    SmoothMap base_projection;  // (x, s) -> x

    SmoothMap scaling(double s) const;  // h_s(x, s0) = (x, s*s0)
    HomogeneousModel model() const;
    int s_index() const { return ext.dim() - 1; }
};

// Builds the structure and checks d theta = omega_tilde, i_nu omega_tilde
// = theta, and full rank of omega_tilde at the given samples.
Symplectization symplectize(const ContactForm& contact, int invariant_samples = 50,
                            Exec exec = default_exec());

// Pointwise solve of i_X omega = -dH on a (nondegenerate) 2-form's chart.
SolvedVectorField hamiltonian_field(const KForm& omega, const ScalarField& H);
SolvedVectorField hamiltonian_field(const Symplectization& sympl, const ScalarField& H);

// sup over samples and the scaling factors {0.5, 2, 3} of
// |h_s^* beta - s^a beta| on coefficient tuples.
double homogeneity_residual(const HomogeneousModel& model, const KForm& beta, double a,
                            const std::vector<Point>& samples, Exec exec = default_exec());

// Projection tau_* of an R_+-invariant field on the symplectization down to
// the base: checks the base components are s-independent, then drops s.
// The callable is evaluated at (x, s) for the s values probed.
using ExtFieldFn = std::function<Point(std::span<const double>)>;
Point project_to_contact(const Symplectization& sympl, const ExtFieldFn& X,
                         std::span<const double> base_point, double invariance_tol = 1e-9);

// 1-homogeneous Hamiltonian H(x, s) = s / F(x) on the extended chart.
ScalarField homogeneous_hamiltonian(const Symplectization& sympl, const ScalarField& F_base);

}  // namespace reebflow
