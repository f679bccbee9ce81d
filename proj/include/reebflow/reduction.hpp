#pragma once

// Contact-to-symplectic reduction along a fibration with explicit
// sections, surface quadrature of the reduced 2-form, and the
// integrality verdict against Z_hbar = 2*pi*hbar*Z.

#include <optional>

#include "reebflow/contact.hpp"
#include "reebflow/mesh.hpp"
#include "reebflow/sampling.hpp"

namespace reebflow {

struct Section {
    std::string name;
    SmoothMap map;  // base -> total
    std::function<bool(std::span<const double>)> in_domain;
};

struct Fibration {
    Chart total;                           // chart carrying the total space
    KForm d_eta;                           // 2-form restricting to d eta
    std::optional<ScalarField> constraint; // level set cutting out the total space
    VectorField reeb_field;                // fiber generator on the total chart
    Chart base;
    std::optional<ScalarField> base_constraint;  // level set of the base manifold
    SmoothMap projection;                  // total -> base
    std::vector<Section> sections;         // domains cover base minus measure zero
    std::optional<double> hbar;            // minimal period / (2 pi), when periodic

    // deterministic point generators on the actual manifolds
    std::function<Point(SeededRng&)> base_sampler;
    std::function<Point(SeededRng&)> total_sampler;
};

using TwoFormEvaluator =
    std::function<double(std::span<const double>, std::span<const double>, std::span<const double>)>;

struct ReductionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reduced symplectic form, evaluated through whichever section covers the
// requested base point: omega_x(u, v) = (d eta)_{sigma(x)}(d sigma u, d sigma v).
class ReducedForm {
public:
    explicit ReducedForm(Fibration fib) : fib_(std::move(fib)) {}

    double operator()(std::span<const double> x, std::span<const double> u,
                      std::span<const double> v) const;
    double with_section(size_t si, std::span<const double> x, std::span<const double> u,
                        std::span<const double> v) const;
    int covering_section(std::span<const double> x) const;  // -1 when uncovered

    TwoFormEvaluator evaluator() const;
    const Fibration& fibration() const { return fib_; }

private:
    Fibration fib_;
};

struct ReduceOptions {
    double section_identity_tol = 1e-9;  // p o sigma = id
    double fiber_tangency_tol = 1e-9;    // dp(R) = 0
    double overlap_tol = 1e-8;           // section agreement
    int check_count = 50;
    uint64_t seed = 31;
};

// Validates the fibration invariants and overlap well-definedness, then
// hands back the evaluator.
ReducedForm reduce(const Fibration& fib, const ReduceOptions& opts = {});

// sup over total-space points and (manifold-tangent) vector pairs of
// |omega_{p(y)}(dp u, dp v) - (d eta)_y(u, v)|
double pullback_check_residual(const ReducedForm& omega, int count = 50, uint64_t seed = 47);

// Degree-2 accurate 3-point rule per triangle, pairwise-summed in mesh
// order. Meshes marked on_unit_sphere are integrated on the sphere itself
// (quadrature nodes and tangents mapped through central projection).
double integrate_surface(const TwoFormEvaluator& omega, const SurfaceMesh& mesh,
                         Exec exec = default_exec());

struct IntegralityReport {
    double integral = 0.0;
    double hbar = 0.0;
    double quotient = 0.0;   // integral / (2 pi hbar)
    long nearest = 0;
    double deviation = 0.0;  // |quotient - nearest|, reported, never rounded away
    int mesh_level = -1;
    double quad_error = 0.0;
    bool pass = false;
};

IntegralityReport integrality_report(double integral, double hbar, double quad_error,
                                     int mesh_level = -1);

struct ExactnessWitness {
    KForm vartheta;          // 1-form on the base with d vartheta = omega
    double d_defect;         // sup |d vartheta - omega| at base samples
    double pullback_defect;  // sup |p^* omega - d eta| at total samples
};

// For the R-principal case (standard contactification): the global section
// pulls eta back to the exact potential of the reduced form.
ExactnessWitness exactness_witness(const Contactification& c, int sample_count = 50);

Fibration fibration_of(const Contactification& c);

}  // namespace reebflow
