#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "reebflow/forms.hpp"
#include "reebflow/sampling.hpp"

using namespace reebflow;

namespace {

Chart darboux1() { return Chart("darboux1", {"z", "p", "q"}); }

Chart darboux1_ext() {
    Chart c = extend_chart(darboux1(), "s", Interval{0.0, std::numeric_limits<double>::infinity()},
                           Box{0.25, 4.0});
    return c;
}

Point e(int dim, int i) {
    Point v(dim, 0.0);
    v[i] = 1.0;
    return v;
}

// independent oracle: evaluate a wedge product by full antisymmetrization
// of the factor evaluations over all permutations
double wedge_oracle(const KForm& a, const KForm& b, const Point& x,
                    const std::vector<Point>& vectors) {
    int j = a.degree, k = b.degree;
    std::vector<int> perm(j + k);
    for (int i = 0; i < j + k; ++i) perm[i] = i;
    double sum = 0.0;
    do {
        IndexTuple copy(perm.begin(), perm.end());
        int sign = sort_index_sign(copy);
        std::vector<Point> va(perm.begin(), perm.begin() + j), vb;
        std::vector<Point> left, right;
        for (int i = 0; i < j; ++i) left.push_back(vectors[perm[i]]);
        for (int i = j; i < j + k; ++i) right.push_back(vectors[perm[i]]);
        sum += sign * evaluate_form(a, x, left) * evaluate_form(b, x, right);
    } while (std::next_permutation(perm.begin(), perm.end()));
    double jf = 1, kf = 1;
    for (int i = 2; i <= j; ++i) jf *= i;
    for (int i = 2; i <= k; ++i) kf *= i;
    return sum / (jf * kf);
}

}  // namespace

TEST_CASE("permutation sign routine") {
    IndexTuple t{2, 0, 1};
    CHECK(sort_index_sign(t) == 1);
    CHECK(t == IndexTuple{0, 1, 2});
    IndexTuple u{1, 0};
    CHECK(sort_index_sign(u) == -1);
    IndexTuple r{1, 1};
    CHECK(sort_index_sign(r) == 0);
}

TEST_CASE("wedge basics on the standard contact chart") {
    Chart ch = darboux1();
    KForm dq = KForm::basis(ch, 2), dp = KForm::basis(ch, 1);
    KForm eta = parse_form("dz - p*dq", ch);

    CHECK(wedge(dq, dq).is_zero());

    // antisymmetry
    auto samples = default_samples(ch, 20);
    CHECK(sup_difference(wedge(dq, dp), scale_form(-1.0, wedge(dp, dq)), samples) == 0.0);

    // (dz - p dq) ^ (dq ^ dp) = dz ^ dq ^ dp
    KForm vol = wedge(eta, wedge(dq, dp));
    Point x{0.0, 0.5, -0.3};
    CHECK(evaluate_form(vol, x, {e(3, 0), e(3, 2), e(3, 1)}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("wedge agrees with the antisymmetrization oracle") {
    Chart ch = darboux1();
    KForm a = parse_form("dz - p*dq", ch);
    KForm b = parse_form("q*dq^dp + z*dz^dq", ch);
    auto samples = default_samples(ch, 5);
    std::vector<Point> vecs = {e(3, 0), e(3, 1), e(3, 2)};
    KForm w = wedge(a, b);
    for (const auto& x : samples) {
        double lhs = evaluate_form(w, x, vecs);
        double rhs = wedge_oracle(a, b, x, vecs);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("graded commutativity on sampled forms") {
    Chart ch = darboux1_ext();
    auto samples = default_samples(ch, 30);
    KForm a1 = parse_form("s*dz - p*dq", ch);              // degree 1
    KForm b1 = parse_form("q*dp + z*ds", ch);              // degree 1
    KForm b2 = parse_form("s*dq^dp - dz^ds", ch);          // degree 2
    CHECK(sup_difference(wedge(a1, b1), scale_form(-1.0, wedge(b1, a1)), samples) <= 1e-12);
    CHECK(sup_difference(wedge(a1, b2), wedge(b2, a1), samples) <= 1e-12);
    CHECK(sup_difference(wedge(b2, b2), wedge(b2, b2), samples) == 0.0);
}

TEST_CASE("exterior derivative: hand-computed cases") {
    Chart ch = darboux1();
    auto samples = default_samples(ch, 25);

    KForm constant = parse_form("2*dz + 3*dp - dq", ch);
    CHECK(sup_norm(exterior_derivative(constant), samples) <= 1e-15);

    // d(dz - p dq) = dq ^ dp
    KForm eta = parse_form("dz - p*dq", ch);
    KForm deta = exterior_derivative(eta);
    KForm expect = parse_form("dq^dp", ch);
    CHECK(sup_difference(deta, expect, samples) <= 1e-14);
    Point x{0.1, 0.2, 0.3};
    CHECK(evaluate_form(deta, x, {e(3, 2), e(3, 1)}) == doctest::Approx(1.0));
}

TEST_CASE("d(s*eta) = ds^eta + s*deta on the extended chart") {
    Chart ext = darboux1_ext();
    auto samples = default_samples(ext, 40);
    KForm eta = parse_form("dz - p*dq", ext);
    KForm theta = parse_form("s*dz - s*p*dq", ext);
    KForm lhs = exterior_derivative(theta);
    KForm ds = KForm::basis(ext, 3);
    KForm rhs = add(wedge(ds, eta), scale_form(coordinate_field(ext, 3), exterior_derivative(eta)));
    CHECK(sup_difference(lhs, rhs, samples) <= 1e-13);

    // frozen values at (z,p,q,s) = (0.3, 0.7, -0.2, 1.5)
    Point x{0.3, 0.7, -0.2, 1.5};
    CHECK(evaluate_form(lhs, x, {e(4, 0), e(4, 3)}) == doctest::Approx(-1.0));
    CHECK(evaluate_form(lhs, x, {e(4, 1), e(4, 2)}) == doctest::Approx(-1.5));
    CHECK(evaluate_form(lhs, x, {e(4, 2), e(4, 3)}) == doctest::Approx(0.7));
}

TEST_CASE("d of d vanishes to roundoff") {
    Chart ch = darboux1();
    auto samples = default_samples(ch, 100);
    for (const char* src : {"dz - p*dq", "sin(q)*exp(p)*dz + sqrt(1 + z^2)*dq",
                            "q*p*z*dp + cos(p)*dq"}) {
        KForm a = parse_form(src, ch);
        CHECK(sup_norm(exterior_derivative(exterior_derivative(a)), samples) <= 1e-9);
    }
}

TEST_CASE("interior product") {
    Chart ch = darboux1();
    auto samples = default_samples(ch, 25);
    KForm eta = parse_form("dz - p*dq", ch);
    VectorField dz = basis_vector_field(ch, 0);

    KForm one = interior_product(dz, eta);
    CHECK(one.degree == 0);
    for (const auto& x : samples) CHECK(coefficient_at(one, {}, x) == doctest::Approx(1.0));

    KForm zero = interior_product(dz, parse_form("dq^dp", ch));
    CHECK(sup_norm(zero, samples) <= 1e-15);

    // i_X i_X = 0
    VectorField X = make_vector_field(ch, {"q^2", "z - p", "sin(q)"});
    KForm omega = parse_form("z*dz^dp + q*dz^dq + p*dp^dq", ch);
    CHECK(sup_norm(interior_product(X, interior_product(X, omega)), samples) <= 1e-12);

    CHECK_THROWS(interior_product(dz, one));  // degree 0 rejected
}

TEST_CASE("pullback: identity, scaling action, sections") {
    Chart base = darboux1();
    Chart ext = darboux1_ext();
    auto base_samples = default_samples(base, 10);
    auto ext_samples = default_samples(ext, 10);

    KForm eta = parse_form("dz - p*dq", base);
    CHECK(sup_difference(pullback(identity_map(base), eta), eta, base_samples) <= 1e-14);

    // h_2 doubles s; the Liouville form s*eta is 1-homogeneous
    KForm theta = parse_form("s*dz - s*p*dq", ext);
    SmoothMap h2{ext, ext, {coordinate_field(ext, 0), coordinate_field(ext, 1),
                            coordinate_field(ext, 2), parse_expr("2*s", ext)}};
    CHECK(sup_difference(pullback(h2, theta), scale_form(2.0, theta), ext_samples) <= 1e-13);

    // sigma_F pulls the Liouville form back to F*eta
    ScalarField F = parse_expr("1 + q^2/4", base);
    SmoothMap sigmaF = section_at(ext, base, F);
    CHECK(sup_difference(pullback(sigmaF, theta), scale_form(F, eta), base_samples) <= 1e-13);
}

TEST_CASE("pullback is functorial under composition") {
    Chart base = darboux1();
    Chart ext = darboux1_ext();
    auto samples = default_samples(base, 10);
    KForm theta = parse_form("s*dz - s*p*dq", ext);

    SmoothMap psi{base, base, {parse_expr("z + p", base), parse_expr("p", base),
                               parse_expr("q - z", base)}};
    SmoothMap phi = section_at(ext, base, parse_expr("1 + q^2/4", base));
    KForm direct = pullback(compose_maps(phi, psi), theta);
    KForm staged = pullback(psi, pullback(phi, theta));
    CHECK(sup_difference(direct, staged, samples) <= 1e-9);
}

TEST_CASE("lie derivative") {
    Chart ch = darboux1();
    Chart ext = darboux1_ext();
    auto samples = default_samples(ch, 30);
    auto ext_samples = default_samples(ext, 30);

    KForm eta = parse_form("dz - p*dq", ch);
    VectorField reeb = basis_vector_field(ch, 0);
    CHECK(sup_norm(lie_derivative(reeb, eta), samples) <= 1e-14);

    // Euler field scales the symplectization form
    KForm omega_tilde = exterior_derivative(parse_form("s*dz - s*p*dq", ext));
    VectorField euler = make_vector_field(ext, {"0", "0", "0", "s"});
    CHECK(sup_difference(lie_derivative(euler, omega_tilde), omega_tilde, ext_samples) <= 1e-12);

    // on functions, L_X f is the directional derivative
    VectorField X = make_vector_field(ch, {"q^2", "z - p", "sin(q)"});
    ScalarField f = parse_expr("z*p + cos(q)", ch);
    KForm lf = lie_derivative(X, KForm::from_scalar(f));
    for (const auto& x : samples) {
        double expect = X.comps[0](x) * partial(f, x, 0) + X.comps[1](x) * partial(f, x, 1) +
                        X.comps[2](x) * partial(f, x, 2);
        CHECK(coefficient_at(lf, {}, x) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("evaluate_form is antisymmetric and matches hand expansions") {
    Chart ch = darboux1();
    KForm dqdp = parse_form("dq^dp", ch);
    Point x{0, 0, 0};
    CHECK(evaluate_form(dqdp, x, {e(3, 2), e(3, 1)}) == doctest::Approx(1.0));
    CHECK(evaluate_form(dqdp, x, {e(3, 1), e(3, 2)}) == doctest::Approx(-1.0));

    KForm eta = parse_form("dz - p*dq", ch);
    KForm vol = wedge(eta, exterior_derivative(eta));
    CHECK(evaluate_form(vol, x, {e(3, 0), e(3, 2), e(3, 1)}) == doctest::Approx(1.0));

    CHECK_THROWS(evaluate_form(dqdp, x, {e(3, 0)}));           // arity
    CHECK_THROWS(evaluate_form(dqdp, x, {e(2, 0), e(2, 1)}));  // dimension
}

TEST_CASE("form literal parsing") {
    Chart ch("ext", {"t", "q", "p"});
    auto samples = default_samples(ch, 10);
    KForm a = parse_form("dt + (q*dp - p*dq)/2", ch);
    KForm b = add(KForm::basis(ch, 0),
                  scale_form(0.5, sub(scale_form(coordinate_field(ch, 1), KForm::basis(ch, 2)),
                                      scale_form(coordinate_field(ch, 2), KForm::basis(ch, 1)))));
    CHECK(sup_difference(a, b, samples) <= 1e-15);

    KForm c = parse_form("q^2*dq^dp", ch);
    CHECK(c.degree == 2);
    Point x{0.0, 3.0, 1.0};
    CHECK(coefficient_at(c, {1, 2}, x) == doctest::Approx(9.0));

    KForm d = parse_form("-dq", ch);
    CHECK(coefficient_at(d, {1}, x) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(parse_form("dq + q", ch), ParseError);
    CHECK_THROWS_AS(parse_form("dq*dp", ch), ParseError);
    CHECK_THROWS_AS(parse_form("dbogus", ch), ParseError);
}
