#pragma once

// Numerical Reeb/Hamiltonian dynamics: adaptive embedded Runge-Kutta
// integration with dense output, periodic-orbit detection with minimal
// period refinement, period-constancy reports, and the fiber integral that
// recovers the period from a trivialization.

#include <functional>
#include <optional>
#include <string>

#include "reebflow/forms.hpp"
#include "reebflow/parallel.hpp"

namespace reebflow {

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// right-hand side of x' = f(x), with an optional conserved constraint
// (catalog sphere fields carry |z|^2 - 1) monitored along trajectories
struct FlowField {
    std::string id;
    Chart chart;
    std::function<void(std::span<const double>, std::span<double>)> f;
    std::optional<ScalarField> constraint;

    static FlowField of(const VectorField& X, std::string id_ = "field");
};

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    double tol = 0.0;
};

struct Trajectory {
    std::vector<double> times;          // strictly increasing
    std::vector<Point> points;          // accepted states
    std::vector<Point> derivs;          // f at accepted states (for dense output)
    std::string field_id;
    IntegratorStats stats;
    bool truncated = false;             // left chart bounds before T
    double constraint_drift = 0.0;      // max |c(x(t)) - c(x0)| when monitored

    // cubic Hermite interpolation between accepted steps
    Point at(double t) const;
    double distance_to(double t, std::span<const double> ref) const;
};

inline constexpr double kDefaultFlowTol = 1e-10;
inline constexpr double kDefaultReturnTol = 1e-6;
inline constexpr double kDefaultHorizon = 200.0;

// Dormand-Prince 5(4) pair, local error per unit step <= tol.
Trajectory flow(const FlowField& X, const Point& x0, double T, double tol = kDefaultFlowTol);

struct PeriodEstimate {
    enum class Classification { periodic, non_closed_within_horizon, undetermined };
    Classification classification = Classification::undetermined;
    double period = 0.0;    // minimal period, meaningful iff periodic
    double residual = 0.0;  // |x(period) - x0| after refinement
    double horizon = 0.0;
    double return_tol = 0.0;
    std::string note;
    IntegratorStats stats;
};

std::string to_string(PeriodEstimate::Classification c);

// Scans for near-returns within a coarse gate (10 x return_tol), refines
// candidates by bracketed minimization of |x(t) - x0| on the dense output,
// takes the earliest confirmed return, and replaces it by any confirmed
// integer-divisor return (period/k, k = 2..8) so the reported period is
// minimal. A refined return must also pass a flow-speed transversality
// check (speed >= 1e-6) to rule out slow quasi-periodic near-returns.
PeriodEstimate detect_period(const FlowField& X, const Point& x0,
                             double horizon = kDefaultHorizon,
                             double return_tol = kDefaultReturnTol,
                             double flow_tol = kDefaultFlowTol);

struct PeriodConstancyReport {
    std::vector<PeriodEstimate> estimates;  // by start index
    double min_period = 0.0;
    double max_period = 0.0;
    double spread = 0.0;
    bool pass = false;                // all periodic and spread <= 2 return_tol
    std::vector<size_t> non_periodic; // offending start indices, never dropped
};

PeriodConstancyReport period_constancy(const FlowField& X, const std::vector<Point>& starts,
                                       double horizon = kDefaultHorizon,
                                       double return_tol = kDefaultReturnTol,
                                       double flow_tol = kDefaultFlowTol,
                                       Exec exec = default_exec());

// Integral of g(x, .) over one fiber period: g lives on a chart whose last
// coordinate is the 1-periodic fiber coordinate. Checks positivity and
// |g(x,0) - g(x,1)| <= 1e-9, then integrates adaptively to abs error 1e-9.
double period_via_integral(const ScalarField& g, std::span<const double> base_point,
                           double abs_tol = 1e-9);

// adaptive Simpson quadrature on [a, b]
double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double abs_tol);

// Scalar minimization on [lo, hi] by golden-section with parabolic steps.
struct ScalarMin {
    double t;
    double value;
};
ScalarMin minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double t_tol);

}  // namespace reebflow
