#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reebflow/catalog.hpp"
#include "reebflow/contact.hpp"
#include "reebflow/sampling.hpp"

using namespace reebflow;

TEST_CASE("verify_contact accepts the standard forms and records the volume") {
    CatalogEntry d1 = build("darboux:1");
    // the expanded top coefficient is constant -1, so |.| = 1 everywhere
    CHECK(d1.contact.verification.min_abs_volume == doctest::Approx(1.0).epsilon(1e-14));

    CatalogEntry d2 = build("darboux:2");
    CHECK(d2.contact.verification.min_abs_volume == doctest::Approx(2.0).epsilon(1e-13));

    CatalogEntry hopf = build("hopf:2");
    CHECK(hopf.contact.verification.min_abs_volume > 1e-3);
    CHECK(hopf.contact.verification.samples.size() == 100);
}

TEST_CASE("verify_contact rejects degenerate and even-dimensional input") {
    Chart ch("r3", {"z", "p", "q"});
    CHECK_THROWS_AS(verify_contact(parse_form("dz", ch)), DegeneracyError);

    Chart even("r4", {"a", "b", "c", "d"});
    CHECK_THROWS_AS(verify_contact(parse_form("da", even)), std::invalid_argument);

    try {
        verify_contact(parse_form("dz", ch));
    } catch (const DegeneracyError& e) {
        CHECK(e.worst.size() == 3);
        CHECK(std::abs(e.value) <= 1e-12);
    }
}

TEST_CASE("reeb field of the standard forms") {
    for (int n : {1, 2, 3}) {
        CatalogEntry d = build("darboux:" + std::to_string(n));
        ReebField R = reeb(d.contact);
        for (const auto& x : default_samples(d.chart, 20)) {
            Point r = R(x);
            CHECK(std::abs(r[0] - 1.0) < 1e-12);
            for (int i = 1; i < d.chart.dim(); ++i) CHECK(std::abs(r[i]) < 1e-12);
            CHECK(R.residual(x) < 1e-12);
        }
    }
}

TEST_CASE("reeb field on the sphere patch matches the circle generator") {
    CatalogEntry hopf = build("hopf:2");
    ReebField R = reeb(hopf.contact);

    // chart origin corresponds to the ambient point (1, 0, 0, 0)
    Point origin{0.0, 0.0, 0.0};
    Point r = R(origin);
    CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-10));  // dp1/dt = 2 q1 = 2
    CHECK(std::abs(r[1]) < 1e-10);
    CHECK(std::abs(r[2]) < 1e-10);

    // ambient view: dq1/dt = -2 p1 = 0, so the full vector is 2 d/dp1
    Point amb = hopf.ambient->embedding.push(origin, r);
    CHECK(std::abs(amb[0]) < 1e-10);
    CHECK(amb[1] == doctest::Approx(2.0).epsilon(1e-10));

    // everywhere on the patch, solved Reeb = closed-form circle generator
    for (const auto& x : default_samples(hopf.chart, 50)) {
        Point solved = R(x);
        Point closed = (*hopf.reeb_closed)(x);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(solved[i] - closed[i]) < 1e-9);
    }
}

TEST_CASE("rescaled form halves the Reeb field") {
    Chart ch("r3", {"z", "p", "q"});
    ContactForm doubled = verify_contact(parse_form("2*dz - 2*p*dq", ch));
    ReebField R = reeb(doubled);
    for (const auto& x : default_samples(ch, 10)) {
        Point r = R(x);
        CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(r[1]) < 1e-12);
        CHECK(std::abs(r[2]) < 1e-12);
    }
}

TEST_CASE("contact hamiltonian fields") {
    CatalogEntry d1 = build("darboux:1");
    auto samples = default_samples(d1.chart, 30);

    // G = 1 reduces to the Reeb equations
    SolvedVectorField X1 = contact_hamiltonian_field(d1.contact, constant_field(d1.chart, 1.0));
    ReebField R = reeb(d1.contact);
    for (const auto& x : samples) {
        Point a = X1(x), b = R(x);
        for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }

    // G = q on (z, p, q): X_G = q d/dz + d/dp
    SolvedVectorField Xq = contact_hamiltonian_field(d1.contact, parse_expr("q", d1.chart));
    for (const auto& x : samples) {
        Point v = Xq(x);
        CHECK(v[0] == doctest::Approx(x[2]).epsilon(1e-11));
        CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(std::abs(v[2]) < 1e-11);
    }

    // restriction of the anisotropic quadratic hamiltonian on the sphere
    // patch reproduces its ambient field
    CatalogEntry hopf = build("hopf:2");
    CatalogEntry deformed = build("deformed-hopf:1,2");
    SolvedVectorField XF = contact_hamiltonian_field(hopf.contact, *deformed.big_f);
    for (const auto& x : default_samples(hopf.chart, 30)) {
        Point got = XF(x);
        Point expect = (*deformed.reeb_closed)(x);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-8);
    }
}

TEST_CASE("contact evolution law L_{X_G} eta = R(G) eta") {
    CatalogEntry d1 = build("darboux:1");
    auto samples = default_samples(d1.chart, 50);
    CHECK(contact_evolution_residual(d1.contact, constant_field(d1.chart, 1.0), samples) <= 1e-8);
    CHECK(contact_evolution_residual(d1.contact, parse_expr("q", d1.chart), samples) <= 1e-8);

    CatalogEntry hopf = build("hopf:2");
    CatalogEntry deformed = build("deformed-hopf:1,2");
    auto hopf_samples = default_samples(hopf.chart, 50);
    CHECK(contact_evolution_residual(hopf.contact, *deformed.big_f, hopf_samples) <= 1e-8);
}

TEST_CASE("conformal rescaling defect") {
    CatalogEntry d1 = build("darboux:1");
    auto samples = default_samples(d1.chart, 30);

    CHECK(rescaling_residual(d1.contact, constant_field(d1.chart, 1.0), samples) <= 1e-9);
    CHECK(rescaling_residual(d1.contact, constant_field(d1.chart, 2.0), samples) <= 1e-9);

    // f = 1 + q/2 at the origin: defect = df/f - (R(f)/f) eta = dq/2
    ScalarField f = parse_expr("1 + q/2", d1.chart);
    Point origin{0.0, 0.0, 0.0};
    Point defect = rescaling_defect(d1.contact, f, origin);
    CHECK(std::abs(defect[0]) < 1e-12);
    CHECK(std::abs(defect[1]) < 1e-12);
    CHECK(defect[2] == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(rescaling_residual(d1.contact, f, {origin}) == doctest::Approx(0.5).epsilon(1e-12));

    // near-origin samples stay well above the acceptance floor
    Chart near_origin = d1.chart;
    near_origin.set_box_all(-0.2, 0.2);
    CHECK(rescaling_residual(d1.contact, f, default_samples(near_origin, 30)) >= 0.1);

    // the defect scales with the non-constant part in the linear regime
    double r1 = rescaling_residual(d1.contact, parse_expr("1 + 0.01*q", d1.chart), {origin});
    double r2 = rescaling_residual(d1.contact, parse_expr("1 + 0.02*q", d1.chart), {origin});
    CHECK(r2 > 1.9 * r1);
    CHECK(r2 < 2.1 * r1);

    CHECK_THROWS(rescaling_residual(d1.contact, parse_expr("q - 10", d1.chart), samples));
}

TEST_CASE("rescaling defect agrees with the direct formula df/f - (R(f)/f) eta") {
    CatalogEntry d1 = build("darboux:1");
    ScalarField f = parse_expr("1 + q/2 + z/5", d1.chart);
    ReebField R = reeb(d1.contact);
    for (const auto& x : default_samples(d1.chart, 20)) {
        Point defect = rescaling_defect(d1.contact, f, x);
        double fx = f(x);
        Point r = R(x);
        double rf = 0.0;
        for (int i = 0; i < 3; ++i) rf += r[i] * partial(f, x, i);
        for (int j = 0; j < 3; ++j) {
            double eta_j = coefficient_at(d1.contact.eta, {j}, x);
            double expect = partial(f, x, j) / fx - (rf / fx) * eta_j;
            CHECK(defect[j] == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("hypersurface restriction recovers the sphere contact form") {
    CatalogEntry hopf = build("hopf:2");
    const AmbientBlock& ab = *hopf.ambient;
    auto samples = default_samples(hopf.chart, 40);

    ContactForm from_ambient =
        hypersurface_contact(ab.omega0, ab.euler, ab.embedding, ab.constraint, samples);
    CHECK(sup_difference(from_ambient.eta, hopf.contact.eta, samples) <= 1e-9);
    CHECK(sup_difference(from_ambient.d_eta, pullback(ab.embedding, ab.omega0), samples) <= 1e-9);

    // doubling the field breaks the rescaling property L_nu Omega = Omega
    VectorField doubled{ab.chart, {}};
    for (const auto& c : ab.euler.comps) doubled.comps.push_back(scale(2.0, c));
    CHECK_THROWS_AS(
        hypersurface_contact(ab.omega0, doubled, ab.embedding, ab.constraint, samples),
        ContactError);

    // a field tangent to the sphere fails transversality
    CHECK_THROWS_AS(
        hypersurface_contact(ab.omega0, ab.field, ab.embedding, ab.constraint, samples),
        ContactError);
}

TEST_CASE("standard contactification") {
    Chart plane("plane", {"q", "p"});

    // vartheta = -p dq gives the standard contact form with z = t
    Contactification c1 = standard_contactification(parse_form("-p*dq", plane));
    CHECK(c1.form.chart().coords[0] == "t");
    ReebField R1 = reeb(c1.form);
    for (const auto& x : default_samples(c1.form.chart(), 15)) {
        Point r = R1(x);
        CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(r[1]) < 1e-12);
        CHECK(std::abs(r[2]) < 1e-12);
        CHECK(R1.residual(x) < 1e-12);
    }
    // coefficients match the standard form: eta(d/dt) = 1, eta(d/dq) = -p
    CatalogEntry d1 = build("darboux:1");
    for (const auto& x : default_samples(c1.form.chart(), 15)) {
        // contactified chart is (t, q, p); the standard chart is (z, p, q)
        Point y{x[0], x[2], x[1]};
        CHECK(coefficient_at(c1.form.eta, {0}, x) ==
              doctest::Approx(coefficient_at(d1.contact.eta, {0}, y)));
        CHECK(coefficient_at(c1.form.eta, {1}, x) ==
              doctest::Approx(coefficient_at(d1.contact.eta, {2}, y)));
    }

    // rotationally symmetric potential works too
    Contactification c2 = standard_contactification(parse_form("(q*dp - p*dq)/2", plane));
    ReebField R2 = reeb(c2.form);
    Point x0{0.3, -0.2, 0.7};
    CHECK(R2.residual(x0) < 1e-12);

    // zero potential is not symplectic
    CHECK_THROWS_AS(standard_contactification(KForm::zero(plane, 1)), DegeneracyError);
}

TEST_CASE("lie derivative of eta along the closed-form Reeb field vanishes") {
    for (const std::string& name : catalog_default_instances()) {
        CatalogEntry e = build(name);
        REQUIRE(e.reeb_closed.has_value());
        auto samples = default_samples(e.chart, 40);
        KForm l = lie_derivative(*e.reeb_closed, e.contact.eta);
        CHECK(sup_norm(l, samples) <= 1e-9);
    }
}

TEST_CASE("catalog parameter validation") {
    CHECK_THROWS_AS(build("darboux:0"), CatalogError);
    CHECK_THROWS_AS(build("hopf:1"), CatalogError);
    CHECK_THROWS_AS(build("deformed-hopf:0,1"), CatalogError);
    CHECK_THROWS_AS(build("deformed-hopf:1"), CatalogError);
    CHECK_THROWS_AS(build("torus-point:1.5,0"), CatalogError);
    CHECK_THROWS_AS(build("unknown:1"), CatalogError);
    CHECK_THROWS_AS(build("std-contactification:bogus"), CatalogError);
}
