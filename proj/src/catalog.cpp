#include "reebflow/catalog.hpp"

#include <cmath>
#include <sstream>

namespace reebflow {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double param_number(const std::string& s, const std::string& name) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw CatalogError("catalog parameter '" + s + "' of " + name + " is not a number");
    }
}

std::string coord_list_str(const Chart& c) {
    std::string s;
    for (int i = 0; i < c.dim(); ++i) s += (i ? ", " : "") + c.coords[i];
    return s;
}

// ---- darboux:n --------------------------------------------------------------

CatalogEntry build_darboux(int n) {
    if (n < 1) throw CatalogError("darboux:n needs n >= 1");
    std::vector<std::string> coords{"z"};
    if (n == 1) {
        coords.push_back("p");
        coords.push_back("q");
    } else {
        for (int i = 1; i <= n; ++i) coords.push_back("p" + std::to_string(i));
        for (int i = 1; i <= n; ++i) coords.push_back("q" + std::to_string(i));
    }
    Chart ch("darboux" + std::to_string(n), coords);

    std::string eta_src = "dz";
    if (n == 1) {
        eta_src += " - p*dq";
    } else {
        for (int i = 1; i <= n; ++i)
            eta_src += " - p" + std::to_string(i) + "*dq" + std::to_string(i);
    }

    CatalogEntry e;
    e.name = "darboux:" + std::to_string(n);
    e.title = "standard contact space R^" + std::to_string(2 * n + 1);
    e.chart = ch;
    e.contact = verify_contact(parse_form(eta_src, ch));
    e.reeb_closed = basis_vector_field(ch, 0);
    e.description = {
        "chart coordinates: " + coord_list_str(ch),
        "contact form: " + eta_src,
        "Reeb field: d/dz (constant), flow translates z at unit speed",
    };
    return e;
}

// ---- hopf:n -----------------------------------------------------------------

struct SphereData {
    Chart ambient;    // (q1, p1, ..., qn, pn)
    Chart patch;      // graph over q1 > 0: drop q1
    SmoothMap embed;  // patch -> ambient
    std::string q1_expr;
};

SphereData sphere_charts(int n) {
    SphereData sd;
    std::vector<std::string> amb;
    for (int k = 1; k <= n; ++k) {
        amb.push_back("q" + std::to_string(k));
        amb.push_back("p" + std::to_string(k));
    }
    sd.ambient = Chart("c" + std::to_string(n), amb);

    std::vector<std::string> patch(amb.begin() + 1, amb.end());
    sd.patch = Chart("s" + std::to_string(2 * n - 1) + "patch", patch);
    const double hb = 0.9 / std::sqrt(static_cast<double>(2 * n - 1));
    for (int i = 0; i < sd.patch.dim(); ++i) {
        sd.patch.set_bounds(i, -hb, hb);
        sd.patch.set_box(i, -0.95 * hb, 0.95 * hb);
    }

    std::string q1 = "sqrt(1";
    for (const auto& c : patch) q1 += " - " + c + "^2";
    q1 += ")";
    sd.q1_expr = q1;

    SmoothMap embed{sd.patch, sd.ambient, {}};
    embed.comps.push_back(parse_expr(q1, sd.patch));
    for (int i = 0; i < sd.patch.dim(); ++i) embed.comps.push_back(coordinate_field(sd.patch, i));
    sd.embed = embed;
    return sd;
}

std::string liouville_src(int n) {
    std::string s = "(";
    for (int k = 1; k <= n; ++k) {
        std::string q = "q" + std::to_string(k), p = "p" + std::to_string(k);
        if (k > 1) s += " + ";
        s += q + "*d" + p + " - " + p + "*d" + q;
    }
    return s + ")/2";
}

std::string sphere_constraint_src(int n) {
    std::string s;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) s += " + ";
        s += "q" + std::to_string(k) + "^2 + p" + std::to_string(k) + "^2";
    }
    return s + " - 1";
}

AmbientBlock ambient_block(int n, const SphereData& sd, const VectorField& field) {
    AmbientBlock ab;
    ab.chart = sd.ambient;
    ab.liouville = parse_form(liouville_src(n), sd.ambient);
    std::string omega0;
    for (int k = 1; k <= n; ++k) {
        if (k > 1) omega0 += " + ";
        omega0 += "dq" + std::to_string(k) + "^dp" + std::to_string(k);
    }
    ab.omega0 = parse_form(omega0, sd.ambient);
    ab.field = field;
    ab.constraint = parse_expr(sphere_constraint_src(n), sd.ambient);
    std::vector<std::string> euler;
    for (int k = 1; k <= n; ++k) {
        euler.push_back("q" + std::to_string(k) + "/2");
        euler.push_back("p" + std::to_string(k) + "/2");
    }
    ab.euler = make_vector_field(sd.ambient, euler);
    ab.embedding = sd.embed;

    HomogeneousModel model;
    model.chart = sd.ambient;
    model.omega = ab.omega0;
    model.theta = ab.liouville;
    model.euler = ab.euler;
    Chart amb = sd.ambient;
    model.scaling = [amb](double s) {
        SmoothMap m{amb, amb, {}};
        for (int i = 0; i < amb.dim(); ++i)
            m.comps.push_back(scale(std::sqrt(s), coordinate_field(amb, i)));
        return m;
    };
    ab.model = model;
    return ab;
}

// ambient field 2 sum_k (a_k) (q_k d/dp_k - p_k d/dq_k)
VectorField circle_field(const Chart& ambient, const std::vector<double>& a) {
    std::vector<std::string> comps;
    ConstMap consts;
    for (size_t k = 0; k < a.size(); ++k) {
        std::string ak = "a" + std::to_string(k + 1);
        consts[ak] = a[k];
        comps.push_back("-2*" + ak + "*p" + std::to_string(k + 1));
        comps.push_back("2*" + ak + "*q" + std::to_string(k + 1));
    }
    return make_vector_field(ambient, comps, consts);
}

// closed-form chart components of the ambient circle field on the patch
VectorField circle_field_on_patch(const SphereData& sd, const std::vector<double>& a) {
    std::vector<std::string> comps;
    ConstMap consts;
    for (size_t k = 0; k < a.size(); ++k) consts["a" + std::to_string(k + 1)] = a[k];
    // patch coords: p1, then (q2, p2), ...; dq1/dt is dropped
    comps.push_back("2*a1*" + sd.q1_expr);
    for (size_t k = 2; k <= a.size(); ++k) {
        std::string ak = "a" + std::to_string(k);
        comps.push_back("-2*" + ak + "*p" + std::to_string(k));
        comps.push_back("2*" + ak + "*q" + std::to_string(k));
    }
    return make_vector_field(sd.patch, comps, consts);
}

Fibration hopf_fibration(const SphereData& sd, const AmbientBlock& ab) {
    Fibration fib;
    fib.total = sd.ambient;
    fib.d_eta = ab.omega0;
    fib.constraint = ab.constraint;
    fib.reeb_field = ab.field;
    Chart base("bloch", {"x", "y", "z"});
    fib.base = base;
    fib.base_constraint = parse_expr("x^2 + y^2 + z^2 - 1", base);
    fib.projection = SmoothMap{
        sd.ambient, base,
        {parse_expr("2*(q1*q2 + p1*p2)", sd.ambient),
         parse_expr("2*(q1*p2 - p1*q2)", sd.ambient),
         parse_expr("q1^2 + p1^2 - q2^2 - p2^2", sd.ambient)}};

    Section away_south;
    away_south.name = "away-from-south-pole";
    away_south.map = SmoothMap{base, sd.ambient,
                               {parse_expr("sqrt((1 + z)/2)", base), constant_field(base, 0.0),
                                parse_expr("x/sqrt(2*(1 + z))", base),
                                parse_expr("y/sqrt(2*(1 + z))", base)}};
    away_south.in_domain = [](std::span<const double> x) { return x[2] > -0.99; };

    Section away_north;
    away_north.name = "away-from-north-pole";
    away_north.map = SmoothMap{base, sd.ambient,
                               {parse_expr("x/sqrt(2*(1 - z))", base),
                                parse_expr("-y/sqrt(2*(1 - z))", base),
                                parse_expr("sqrt((1 - z)/2)", base), constant_field(base, 0.0)}};
    away_north.in_domain = [](std::span<const double> x) { return x[2] < 0.99; };

    fib.sections = {away_south, away_north};
    fib.hbar = 0.5;
    fib.base_sampler = [](SeededRng& rng) { return rng.unit_sphere_point(3); };
    fib.total_sampler = [](SeededRng& rng) { return rng.unit_sphere_point(4); };
    return fib;
}

ScalarField hopf_trivialization() {
    // fiber chart over polar coordinates of the base sphere: the section
    // away from the south pole, advanced along the circle action by a full
    // turn as tau runs over [0, 1)
    Chart triv("hopf_triv", {"alpha", "beta", "tau"});
    triv.set_bounds(0, 0.05, M_PI - 0.05);
    triv.set_box(0, 0.3, 2.7);
    triv.set_box(1, 0.0, 6.28);
    triv.set_box(2, 0.0, 1.0);

    Chart ambient = sphere_charts(2).ambient;
    SmoothMap Phi{triv, ambient,
                  {parse_expr("sqrt((1 + cos(alpha))/2)*cos(2*pi*tau)", triv),
                   parse_expr("sqrt((1 + cos(alpha))/2)*sin(2*pi*tau)", triv),
                   parse_expr("(sin(alpha)*cos(beta)*cos(2*pi*tau) - "
                              "sin(alpha)*sin(beta)*sin(2*pi*tau))/sqrt(2*(1 + cos(alpha)))",
                              triv),
                   parse_expr("(sin(alpha)*cos(beta)*sin(2*pi*tau) + "
                              "sin(alpha)*sin(beta)*cos(2*pi*tau))/sqrt(2*(1 + cos(alpha)))",
                              triv)}};
    KForm pulled = pullback(Phi, parse_form(liouville_src(2), ambient));
    auto it = pulled.coeffs.find(IndexTuple{2});
    if (it == pulled.coeffs.end())
        throw CatalogError("trivialization pullback lost its fiber component");
    return it->second;
}

CatalogEntry build_hopf(int n) {
    if (n < 2) throw CatalogError("hopf:n needs n >= 2 (odd-dimensional sphere of dim >= 3)");
    if (n > 4) throw CatalogError("hopf:n supported for n <= 4");
    SphereData sd = sphere_charts(n);

    CatalogEntry e;
    e.name = "hopf:" + std::to_string(n);
    e.title = "unit sphere S^" + std::to_string(2 * n - 1) + " with the Liouville restriction";
    e.chart = sd.patch;
    KForm eta = pullback(sd.embed, parse_form(liouville_src(n), sd.ambient));
    e.contact = verify_contact(eta);
    e.reeb_closed = circle_field_on_patch(sd, std::vector<double>(n, 1.0));
    e.ambient = ambient_block(n, sd, circle_field(sd.ambient, std::vector<double>(n, 1.0)));
    e.hbar = 0.5;  // minimal period pi
    if (n == 2) {
        e.fibration = hopf_fibration(sd, *e.ambient);
        e.trivialization = hopf_trivialization();
    }
    e.description = {
        "graph chart over q1 > 0 with coordinates " + coord_list_str(sd.patch),
        "eta = restriction of (1/2) sum(q^k dp_k - p_k dq^k) to the unit sphere",
        "ambient Reeb field 2 sum(q^k d/dp_k - p_k d/dq^k) generates z -> exp(2it) z",
    };
    if (n == 2)
        e.description.push_back(
            "fibration over S^2 via (2 Re(conj(z1) z2), 2 Im(conj(z1) z2), |z1|^2 - |z2|^2) "
            "with antipodal-pole sections");
    return e;
}

CatalogEntry build_deformed_hopf(double a, double b) {
    if (!(a > 0) || !(b > 0)) throw CatalogError("deformed-hopf:a,b needs a, b > 0");
    SphereData sd = sphere_charts(2);
    CatalogEntry e;
    std::ostringstream nm;
    nm << "deformed-hopf:" << a << "," << b;
    e.name = nm.str();
    e.title = "conformally rescaled sphere form with anisotropic circle speeds";
    e.chart = sd.patch;

    KForm eta = pullback(sd.embed, parse_form(liouville_src(2), sd.ambient));
    ScalarField F_ambient =
        parse_expr("a*(q1^2 + p1^2) + b*(q2^2 + p2^2)", sd.ambient, {{"a", a}, {"b", b}});
    ScalarField F = compose(F_ambient, sd.embed.comps, sd.patch);
    e.big_f = F;
    e.conformal_factor = div(constant_field(sd.patch, 1.0), F);
    e.contact = verify_contact(div_form(eta, F));
    e.reeb_closed = circle_field_on_patch(sd, {a, b});
    e.ambient = ambient_block(2, sd, circle_field(sd.ambient, {a, b}));
    e.description = {
        "contact form eta / F with F = a |z1|^2 + b |z2|^2 on the unit 3-sphere",
        "Reeb field = restriction of 2a(q1 d/dp1 - p1 d/dq1) + 2b(q2 d/dp2 - p2 d/dq2)",
        "axis circles close with periods pi/a and pi/b; torus orbits close iff a/b is rational",
    };
    return e;
}

CatalogEntry build_contactification(const std::string& id) {
    Chart base("plane", {"q", "p"});
    KForm vartheta;
    std::string desc;
    if (id == "pdq") {
        vartheta = parse_form("-p*dq", base);
        desc = "vartheta = -p dq (d vartheta = dq ^ dp)";
    } else if (id == "rot") {
        vartheta = parse_form("(q*dp - p*dq)/2", base);
        desc = "vartheta = (q dp - p dq)/2 (d vartheta = dq ^ dp)";
    } else {
        throw CatalogError("std-contactification ids: pdq | rot");
    }
    Contactification c = standard_contactification(vartheta);
    CatalogEntry e;
    e.name = "std-contactification:" + id;
    e.title = "contactification dt + vartheta of the exact symplectic plane";
    e.chart = c.form.chart();
    e.contact = c.form;
    e.reeb_closed = basis_vector_field(e.chart, 0);
    e.contactification = c;
    e.fibration = fibration_of(c);
    e.description = {
        desc,
        "total space R x R^2 with eta = dt + vartheta; Reeb field d/dt",
        "projection drops t; the global section t = 0 witnesses exactness of the reduced form",
    };
    return e;
}

CatalogEntry build_torus_point(double r, double phase) {
    if (!(r > 0) || !(r < 1)) throw CatalogError("torus-point:r,phase needs 0 < r < 1");
    CatalogEntry e = build_hopf(2);
    std::ostringstream nm;
    nm << "torus-point:" << r << "," << phase;
    e.name = nm.str();
    e.title = "start point on the Clifford-type torus |z1|^2 = r inside S^3";
    e.start_point = Point{std::sqrt(r), 0.0, std::sqrt(1 - r) * std::cos(phase),
                          std::sqrt(1 - r) * std::sin(phase)};
    e.description = {
        "ambient start (q1, p1, q2, p2) = (sqrt(r), 0, sqrt(1-r) cos(phase), sqrt(1-r) sin(phase))",
        "orbits of the deformed circle fields stay on this torus",
    };
    return e;
}

}  // namespace

CatalogEntry build(const std::string& name) {
    auto head_tail = split(name, ':');
    const std::string& head = head_tail[0];
    std::string params = head_tail.size() > 1 ? head_tail[1] : "";
    if (head_tail.size() > 2) throw CatalogError("malformed catalog name '" + name + "'");

    if (head == "darboux") {
        if (params.empty()) throw CatalogError("darboux:n needs n");
        double n = param_number(params, name);
        if (n != std::floor(n)) throw CatalogError("darboux:n needs integer n");
        return build_darboux(static_cast<int>(n));
    }
    if (head == "hopf") {
        if (params.empty()) throw CatalogError("hopf:n needs n");
        double n = param_number(params, name);
        if (n != std::floor(n)) throw CatalogError("hopf:n needs integer n");
        return build_hopf(static_cast<int>(n));
    }
    if (head == "deformed-hopf") {
        auto ab = split(params, ',');
        if (ab.size() != 2) throw CatalogError("deformed-hopf:a,b needs two parameters");
        return build_deformed_hopf(param_number(ab[0], name), param_number(ab[1], name));
    }
    if (head == "std-contactification") return build_contactification(params);
    if (head == "torus-point") {
        auto rp = split(params, ',');
        if (rp.size() != 2) throw CatalogError("torus-point:r,phase needs two parameters");
        return build_torus_point(param_number(rp[0], name), param_number(rp[1], name));
    }
    throw CatalogError("unknown catalog entry '" + name + "'");
}

std::vector<std::pair<std::string, std::string>> catalog_templates() {
    return {
        {"darboux:n", "standard contact form dz - p_i dq^i on R^(2n+1), n >= 1"},
        {"hopf:n", "Liouville restriction to S^(2n-1) with circle dynamics, n in [2, 4]; "
                   "n = 2 adds the fibration over S^2 and a fiber trivialization"},
        {"deformed-hopf:a,b", "eta/F with F = a|z1|^2 + b|z2|^2 on S^3; a, b > 0"},
        {"std-contactification:id", "dt + vartheta over the exact plane; id in {pdq, rot}"},
        {"torus-point:r,phase", "start point on the torus |z1|^2 = r in S^3; 0 < r < 1"},
    };
}

std::vector<std::string> catalog_default_instances() {
    return {"darboux:1",  "darboux:2", "hopf:2", "hopf:3", "deformed-hopf:1,2",
            "std-contactification:pdq", "std-contactification:rot"};
}

}  // namespace reebflow
