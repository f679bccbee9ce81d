#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reebflow/catalog.hpp"
#include "reebflow/sampling.hpp"
#include "reebflow/symplectization.hpp"

using namespace reebflow;

TEST_CASE("symplectization structure of the standard contact space") {
    CatalogEntry d1 = build("darboux:1");
    Symplectization sy = symplectize(d1.contact);
    auto samples = default_samples(sy.ext, 100);

    CHECK(sup_difference(exterior_derivative(sy.theta), sy.omega_tilde, samples) <= 1e-9);
    CHECK(sup_difference(interior_product(sy.euler, sy.omega_tilde), sy.theta, samples) <= 1e-9);
    CHECK(sup_difference(lie_derivative(sy.euler, sy.omega_tilde), sy.omega_tilde, samples) <=
          1e-9);

    // omega_tilde = ds^dz - s dp^dq - p ds^dq, frozen at one point
    Point x{0.3, 0.7, -0.2, 1.5};  // (z, p, q, s)
    auto ev = [&](int i, int j) {
        Point u(4, 0.0), v(4, 0.0);
        u[i] = 1;
        v[j] = 1;
        return evaluate_form(sy.omega_tilde, x, {u, v});
    };
    CHECK(ev(0, 3) == doctest::Approx(-1.0));
    CHECK(ev(1, 2) == doctest::Approx(-1.5));
    CHECK(ev(2, 3) == doctest::Approx(0.7));
    CHECK(ev(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("symplectization invariants hold across the catalog") {
    for (const std::string& name : catalog_default_instances()) {
        CatalogEntry e = build(name);
        Symplectization sy = symplectize(e.contact);
        auto samples = default_samples(sy.ext, 100);
        CHECK(sup_difference(exterior_derivative(sy.theta), sy.omega_tilde, samples) <= 1e-9);
        CHECK(sup_difference(interior_product(sy.euler, sy.omega_tilde), sy.theta, samples) <=
              1e-9);
        CHECK(sup_difference(lie_derivative(sy.euler, sy.omega_tilde), sy.omega_tilde, samples) <=
              1e-9);
    }
}

TEST_CASE("hamiltonian fields on the flat ambient model") {
    CatalogEntry hopf = build("hopf:2");
    const AmbientBlock& ab = *hopf.ambient;
    auto samples = default_samples(ab.chart, 50);

    // sign calibration: H = |z|^2 gives the circle generator 2(q d/dp - p d/dq)
    ScalarField H11 = parse_expr("q1^2 + p1^2 + q2^2 + p2^2", ab.chart);
    SolvedVectorField X11 = hamiltonian_field(ab.omega0, H11);
    for (const auto& x : samples) {
        Point got = X11(x);
        Point expect = ab.field(x);
        for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-10));
    }

    // anisotropic case, frozen from the hand expansion
    ScalarField H12 =
        parse_expr("a*(q1^2 + p1^2) + b*(q2^2 + p2^2)", ab.chart, {{"a", 1.0}, {"b", 2.0}});
    SolvedVectorField X12 = hamiltonian_field(ab.omega0, H12);
    CatalogEntry deformed = build("deformed-hopf:1,2");
    for (const auto& x : samples) {
        Point got = X12(x);
        Point expect = deformed.ambient->field(x);
        for (int i = 0; i < 4; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-10));
    }

    // 1-homogeneous hamiltonians satisfy H = i_{X_H} theta
    for (const auto& x : samples) {
        double theta_x = evaluate_form(ab.liouville, x, {X11(x)});
        CHECK(theta_x == doctest::Approx(eval(H11, x)).epsilon(1e-10));
    }
}

TEST_CASE("projection of homogeneous hamiltonian fields onto the base") {
    // F = 1: X_{s/F} projects to the Reeb field
    CatalogEntry d1 = build("darboux:1");
    Symplectization sy = symplectize(d1.contact);
    ScalarField H = homogeneous_hamiltonian(sy, constant_field(d1.chart, 1.0));
    SolvedVectorField XH = hamiltonian_field(sy, H);
    ReebField R = reeb(d1.contact);
    auto field_fn = [&XH](std::span<const double> x) { return XH.checked(x).value; };
    for (const auto& x : default_samples(d1.chart, 25)) {
        Point proj = project_to_contact(sy, field_fn, x);
        Point r = R(x);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(proj[i] - r[i]) <= 1e-8);
    }

    // F = 1 + q^2/4: projection equals the Reeb field of F eta (two
    // independent solve paths)
    ScalarField F = parse_expr("1 + q^2/4", d1.chart);
    ScalarField HF = homogeneous_hamiltonian(sy, F);
    SolvedVectorField XF = hamiltonian_field(sy, HF);
    ContactForm f_eta = verify_contact(scale_form(F, d1.contact.eta),
                                       default_samples(d1.chart, 100));
    ReebField RF = reeb(f_eta);
    auto xf_fn = [&XF](std::span<const double> x) { return XF.checked(x).value; };
    for (const auto& x : default_samples(d1.chart, 50)) {
        Point proj = project_to_contact(sy, xf_fn, x);
        Point r = RF(x);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(proj[i] - r[i]) <= 1e-8);
    }
}

TEST_CASE("rescaled sphere forms: H = s F_ab recovers the deformed Reeb field") {
    CatalogEntry hopf = build("hopf:2");
    CatalogEntry deformed = build("deformed-hopf:1,2");
    Symplectization sy = symplectize(hopf.contact);

    // H = s * F_{1,2} is the homogeneous hamiltonian of the contact form
    // eta / F_{1,2}
    ScalarField F12_lift = compose(*deformed.big_f, sy.base_projection.comps, sy.ext);
    ScalarField H = mul(coordinate_field(sy.ext, sy.s_index()), F12_lift);
    SolvedVectorField XH = hamiltonian_field(sy, H);
    auto xh = [&XH](std::span<const double> x) { return XH.checked(x).value; };

    ReebField R_deformed = reeb(deformed.contact);
    for (const auto& x : default_samples(hopf.chart, 40)) {
        Point proj = project_to_contact(sy, xh, x);
        Point direct = R_deformed(x);
        Point closed = (*deformed.reeb_closed)(x);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(proj[i] - direct[i]) <= 1e-8);
            CHECK(std::abs(proj[i] - closed[i]) <= 1e-8);
        }
    }
}

TEST_CASE("non-invariant fields are rejected by the projection") {
    CatalogEntry d1 = build("darboux:1");
    Symplectization sy = symplectize(d1.contact);
    auto bad = [](std::span<const double> x) {
        // base component depends on s
        return Point{x[3], 0.0, 0.0, 0.0};
    };
    Point x0{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(project_to_contact(sy, bad, x0), ContactError);
}

TEST_CASE("homogeneity degrees") {
    CatalogEntry d1 = build("darboux:1");
    Symplectization sy = symplectize(d1.contact);
    HomogeneousModel m = sy.model();
    auto samples = default_samples(sy.ext, 30);

    CHECK(homogeneity_residual(m, sy.theta, 1.0, samples) <= 1e-9);
    CHECK(homogeneity_residual(m, sy.omega_tilde, 1.0, samples) <= 1e-9);
    CHECK(homogeneity_residual(m, parse_form("dz", sy.ext), 0.0, samples) <= 1e-9);
    // wrong degree shows up as a clear nonzero residual
    CHECK(homogeneity_residual(m, sy.theta, 0.0, samples) > 0.1);

    // ambient sphere model: theta and omega are 1-homogeneous for
    // z -> sqrt(s) z
    CatalogEntry hopf = build("hopf:2");
    const HomogeneousModel& am = hopf.ambient->model;
    auto amb_samples = default_samples(am.chart, 30);
    CHECK(homogeneity_residual(am, am.theta, 1.0, amb_samples) <= 1e-9);
    CHECK(homogeneity_residual(am, am.omega, 1.0, amb_samples) <= 1e-9);
}
