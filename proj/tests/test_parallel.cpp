#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstring>

#include "reebflow/catalog.hpp"
#include "reebflow/dynamics.hpp"
#include "reebflow/parallel.hpp"
#include "reebflow/reduction.hpp"
#include "reebflow/sampling.hpp"

using namespace reebflow;

namespace {
bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
}  // namespace

TEST_CASE("parallel_for covers every index exactly once") {
    const int n = 1000;
    std::vector<std::atomic<int>> hits(n);
    parallel_for(Exec::parallel, n, [&](std::ptrdiff_t i) { hits[i]++; });
    for (int i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
}

TEST_CASE("exceptions surface from the parallel region") {
    CHECK_THROWS_AS(parallel_for(Exec::parallel, 64,
                                 [&](std::ptrdiff_t i) {
                                     if (i == 13) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("pairwise sum is exact on cancellation-free data and deterministic") {
    SeededRng rng(3);
    std::vector<double> v(10000);
    for (auto& x : v) x = rng.uniform();
    double s1 = pairwise_sum(v), s2 = pairwise_sum(v);
    CHECK(bits_equal(s1, s2));
    long double ref = 0;
    for (double x : v) ref += x;
    CHECK(std::abs(static_cast<double>(ref) - s1) <= 1e-9);
}

TEST_CASE("serial and parallel kernels give bit-identical results") {
    CatalogEntry hopf = build("hopf:2");
    auto samples = default_samples(hopf.chart, 200);

    // contact verification sweep
    ContactForm cs = verify_contact(hopf.contact.eta, samples, kVolumeThreshold, Exec::serial);
    ContactForm cp = verify_contact(hopf.contact.eta, samples, kVolumeThreshold, Exec::parallel);
    CHECK(bits_equal(cs.verification.min_abs_volume, cp.verification.min_abs_volume));

    // rescaling residual sweep
    CatalogEntry d1 = build("darboux:1");
    ScalarField f = parse_expr("1 + q/2", d1.chart);
    auto dsamples = default_samples(d1.chart, 100);
    CHECK(bits_equal(rescaling_residual(d1.contact, f, dsamples, Exec::serial),
                     rescaling_residual(d1.contact, f, dsamples, Exec::parallel)));

    // evolution-law sweep
    CHECK(bits_equal(
        contact_evolution_residual(d1.contact, parse_expr("q", d1.chart), dsamples, Exec::serial),
        contact_evolution_residual(d1.contact, parse_expr("q", d1.chart), dsamples,
                                   Exec::parallel)));

    // surface quadrature
    ReducedForm omega = reduce(*hopf.fibration);
    SurfaceMesh mesh = icosphere(4);
    double is = integrate_surface(omega.evaluator(), mesh, Exec::serial);
    double ip = integrate_surface(omega.evaluator(), mesh, Exec::parallel);
    CHECK(bits_equal(is, ip));

    // multi-start period detection
    FlowField R = FlowField::of(hopf.ambient->field, "hopf-reeb");
    R.constraint = hopf.ambient->constraint;
    SeededRng rng(7);
    std::vector<Point> starts;
    for (int i = 0; i < 6; ++i) starts.push_back(rng.unit_sphere_point(4));
    PeriodConstancyReport rs = period_constancy(R, starts, 20.0, kDefaultReturnTol,
                                                kDefaultFlowTol, Exec::serial);
    PeriodConstancyReport rp = period_constancy(R, starts, 20.0, kDefaultReturnTol,
                                                kDefaultFlowTol, Exec::parallel);
    REQUIRE(rs.estimates.size() == rp.estimates.size());
    for (size_t i = 0; i < rs.estimates.size(); ++i) {
        CHECK(rs.estimates[i].classification == rp.estimates[i].classification);
        CHECK(bits_equal(rs.estimates[i].period, rp.estimates[i].period));
        CHECK(bits_equal(rs.estimates[i].residual, rp.estimates[i].residual));
    }
    CHECK(bits_equal(rs.spread, rp.spread));
}
