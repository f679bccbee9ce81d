#include "reebflow/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace reebflow {

FlowField FlowField::of(const VectorField& X, std::string id_) {
    FlowField ff;
    ff.id = std::move(id_);
    ff.chart = X.chart;
    std::vector<ScalarField> comps = X.comps;
    ff.f = [comps](std::span<const double> x, std::span<double> out) {
        for (size_t i = 0; i < comps.size(); ++i) out[i] = comps[i](x);
    };
    return ff;
}

Point Trajectory::at(double t) const {
    if (times.empty()) throw IntegrationError("empty trajectory");
    if (t <= times.front()) return points.front();
    if (t >= times.back()) return points.back();
    size_t hi = static_cast<size_t>(
        std::upper_bound(times.begin(), times.end(), t) - times.begin());
    size_t lo = hi - 1;
    double h = times[hi] - times[lo];
    double s = (t - times[lo]) / h;
    double s2 = s * s, s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const Point &p0 = points[lo], &p1 = points[hi];
    const Point &m0 = derivs[lo], &m1 = derivs[hi];
    Point out(p0.size());
    for (size_t i = 0; i < p0.size(); ++i)
        out[i] = h00 * p0[i] + h10 * h * m0[i] + h01 * p1[i] + h11 * h * m1[i];
    return out;
}

double Trajectory::distance_to(double t, std::span<const double> ref) const {
    Point p = at(t);
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        double d = p[i] - ref[i];
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (5th-order weights minus the embedded 4th-order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory flow(const FlowField& X, const Point& x0, double T, double tol) {
    if (!(T > 0)) throw std::invalid_argument("flow needs T > 0");
    if (!(tol > 0)) throw std::invalid_argument("flow needs tol > 0");
    const int d = X.chart.dim();
    if (static_cast<int>(x0.size()) != d)
        throw std::invalid_argument("start point dimension mismatch");
    if (!X.chart.in_bounds(x0)) throw std::invalid_argument("start point outside chart bounds");

    Trajectory tr;
    tr.field_id = X.id;
    tr.stats.tol = tol;

    Point y = x0, k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), ytmp(d), ynew(d);
    double t = 0.0;
    X.f(y, k1);

    double c0 = 0.0;
    if (X.constraint) c0 = (*X.constraint)(y);

    tr.times.push_back(0.0);
    tr.points.push_back(y);
    tr.derivs.push_back(k1);

    double ynorm = 1.0;
    for (double v : y) ynorm = std::max(ynorm, std::abs(v));
    double fnorm = 1e-8;
    for (double v : k1) fnorm = std::max(fnorm, std::abs(v));
    double h = std::min(0.01 * ynorm / fnorm, T);
    const double h_min = 1e-13 * std::max(1.0, T);

    while (t < T) {
        if (h < h_min)
            throw IntegrationError("step size underflow at t = " + std::to_string(t) +
                                   " while integrating '" + X.id + "'");
        if (t + h > T) h = T - t;

        auto stage = [&](Point& k, double /*c*/, std::initializer_list<std::pair<double, const Point*>> terms) {
            for (int i = 0; i < d; ++i) {
                double acc = y[i];
                for (const auto& [coef, kv] : terms) acc += h * coef * (*kv)[i];
                ytmp[i] = acc;
            }
            X.f(ytmp, k);
        };
        stage(k2, 0.2, {{a21, &k1}});
        stage(k3, 0.3, {{a31, &k1}, {a32, &k2}});
        stage(k4, 0.8, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        stage(k5, 8.0 / 9, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        stage(k6, 1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        for (int i = 0; i < d; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        X.f(ynew, k7);

        double err = 0.0;
        for (int i = 0; i < d; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
            err = std::max(err, std::abs(ei));
        }

        // local error per unit step
        if (err <= tol * h) {
            t += h;
            y = ynew;
            k1 = k7;  // first-same-as-last
            ++tr.stats.steps;
            if (!X.chart.in_bounds(y)) {
                tr.truncated = true;
                break;
            }
            tr.times.push_back(t);
            tr.points.push_back(y);
            tr.derivs.push_back(k1);
            if (X.constraint)
                tr.constraint_drift =
                    std::max(tr.constraint_drift, std::abs((*X.constraint)(y)-c0));
        } else {
            ++tr.stats.rejected;
        }
        double factor = err > 0 ? 0.9 * std::pow(tol * h / err, 0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return tr;
}

ScalarMin minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double t_tol) {
    // Brent's method: golden-section with parabolic interpolation steps
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 120; ++iter) {
        double m = 0.5 * (a + b);
        double tol1 = t_tol * std::abs(x) + 1e-15, tol2 = 2 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2 * (q - r);
            if (q > 0) p = -p;
            q = std::abs(q);
            if (std::abs(p) < std::abs(0.5 * q * e) && p > q * (a - x) && p < q * (b - x)) {
                e = d;
                d = p / q;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
        double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

std::string to_string(PeriodEstimate::Classification c) {
    switch (c) {
        case PeriodEstimate::Classification::periodic: return "periodic";
        case PeriodEstimate::Classification::non_closed_within_horizon:
            return "non-closed-within-horizon";
        default: return "undetermined";
    }
}

namespace {

struct Refined {
    double t;
    double dist;
    bool ok;  // confirmed: dist <= return_tol and transversal
};

Refined refine_return(const Trajectory& tr, const FlowField& X, const Point& x0, double t_lo,
                      double t_hi, double return_tol) {
    auto dist = [&](double t) { return tr.distance_to(t, x0); };
    ScalarMin m = minimize_scalar(dist, t_lo, t_hi, 1e-12);
    Refined r{m.t, m.value, false};
    if (m.value <= return_tol) {
        Point xT = tr.at(m.t);
        Point v(xT.size());
        X.f(xT, v);
        double speed = 0.0;
        for (double c : v) speed += c * c;
        if (std::sqrt(speed) >= 1e-6) r.ok = true;
    }
    return r;
}

}  // namespace

PeriodEstimate detect_period(const FlowField& X, const Point& x0, double horizon,
                             double return_tol, double flow_tol) {
    PeriodEstimate est;
    est.horizon = horizon;
    est.return_tol = return_tol;

    Trajectory tr = flow(X, x0, horizon, flow_tol);
    est.stats = tr.stats;
    if (tr.truncated) {
        est.classification = PeriodEstimate::Classification::undetermined;
        est.note = "trajectory left the chart bounds before the horizon";
        return est;
    }

    const double gate = 10.0 * return_tol;
    const double escape_radius = std::max(1e-3, 20.0 * gate);
    const double scan_dt = std::min(0.01, horizon / 1000.0);

    // the orbit must first leave a neighborhood of the start, otherwise
    // every early time looks like a return
    double t_escape = -1.0;
    for (double t = 0.0; t <= tr.times.back(); t += scan_dt) {
        if (tr.distance_to(t, x0) > escape_radius) {
            t_escape = t;
            break;
        }
    }
    if (t_escape < 0) {
        est.classification = PeriodEstimate::Classification::undetermined;
        est.note = "orbit never left the start neighborhood (stationary or too-short horizon)";
        return est;
    }

    // scan the dense output for local minima of |x(t) - x0|; a grid
    // minimum can sit up to speed * scan_dt above the true approach, so
    // the coarse gate widens by that resolution term before refinement
    double t_end = tr.times.back();
    double prev2 = -1.0, prev = -1.0;
    double found_t = -1.0, found_dist = 0.0;
    Point ftmp(x0.size());
    for (double t = t_escape; t <= t_end + scan_dt * 0.5; t += scan_dt) {
        double dcur = tr.distance_to(std::min(t, t_end), x0);
        if (prev >= 0 && prev2 >= 0 && prev <= prev2 && prev <= dcur) {
            double t_mid = t - scan_dt;
            Point xm = tr.at(t_mid);
            X.f(xm, ftmp);
            double speed = 0.0;
            for (double c : ftmp) speed += c * c;
            speed = std::sqrt(speed);
            if (prev <= gate + speed * scan_dt) {
                Refined r =
                    refine_return(tr, X, x0, t_mid - scan_dt, std::min(t, t_end), return_tol);
                if (r.ok) {
                    found_t = r.t;
                    found_dist = r.dist;
                    break;
                }
            }
        }
        prev2 = prev;
        prev = dcur;
    }

    if (found_t < 0) {
        est.classification = PeriodEstimate::Classification::non_closed_within_horizon;
        return est;
    }

    // minimality: replace by any confirmed integer-divisor return
    double period = found_t, residual = found_dist;
    bool shrunk = true;
    while (shrunk) {
        shrunk = false;
        for (int k = 2; k <= 8; ++k) {
            double t_div = period / k;
            if (t_div <= 2 * scan_dt) continue;
            double w = std::max(4 * scan_dt, 1e-3 * period);
            Refined r = refine_return(tr, X, x0, std::max(t_div - w, scan_dt), t_div + w,
                                      return_tol);
            if (r.ok) {
                period = r.t;
                residual = r.dist;
                shrunk = true;
                break;
            }
        }
    }

    est.classification = PeriodEstimate::Classification::periodic;
    est.period = period;
    est.residual = residual;
    return est;
}

PeriodConstancyReport period_constancy(const FlowField& X, const std::vector<Point>& starts,
                                       double horizon, double return_tol, double flow_tol,
                                       Exec exec) {
    PeriodConstancyReport rep;
    rep.estimates.resize(starts.size());
    parallel_for(exec, static_cast<std::ptrdiff_t>(starts.size()), [&](std::ptrdiff_t i) {
        rep.estimates[i] = detect_period(X, starts[i], horizon, return_tol, flow_tol);
    });
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t i = 0; i < rep.estimates.size(); ++i) {
        const auto& e = rep.estimates[i];
        if (e.classification != PeriodEstimate::Classification::periodic) {
            rep.non_periodic.push_back(i);
            continue;
        }
        lo = std::min(lo, e.period);
        hi = std::max(hi, e.period);
    }
    if (rep.non_periodic.empty() && !rep.estimates.empty()) {
        rep.min_period = lo;
        rep.max_period = hi;
        rep.spread = hi - lo;
        rep.pass = rep.spread <= 2 * return_tol;
    }
    return rep;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                           double abs_tol) {
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return adapt(f, a, fa, b, fb, m, fm, whole, abs_tol, 40);
}

double period_via_integral(const ScalarField& g, std::span<const double> base_point,
                           double abs_tol) {
    const int d = g.chart.dim();
    if (static_cast<int>(base_point.size()) != d - 1)
        throw std::invalid_argument("base point must fill all but the fiber coordinate");
    Point x(base_point.begin(), base_point.end());
    x.push_back(0.0);
    auto at_tau = [&](double tau) {
        Point p = x;
        p[d - 1] = tau;
        return eval(g, p);
    };
    double g0 = at_tau(0.0), g1 = at_tau(1.0);
    if (std::abs(g0 - g1) > 1e-9)
        throw std::invalid_argument("trivialization data is not 1-periodic in the fiber: |g(x,0) - g(x,1)| = " +
                                    std::to_string(std::abs(g0 - g1)));
    for (double tau : {0.0, 0.21, 0.43, 0.58, 0.77, 0.92})
        if (!(at_tau(tau) > 0.0))
            throw std::invalid_argument("trivialization data must be positive along the fiber");
    return adaptive_quadrature(at_tau, 0.0, 1.0, abs_tol);
}

}  // namespace reebflow
