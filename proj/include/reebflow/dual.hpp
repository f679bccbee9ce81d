#pragma once

// Forward-mode dual numbers, nestable for higher derivatives.
// Dual<double> carries one directional derivative; Dual<Dual<double>>
// carries a mixed second derivative in its d.d slot, and so on.

#include <cmath>

namespace reebflow {

template <class T>
struct Dual {
    T v{};  // value
    T d{};  // derivative

    Dual() = default;
    Dual(double c) : v(c), d() {}
    Dual(const T& v_, const T& d_) : v(v_), d(d_) {}
};

using D0 = double;
using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double c) { return a + Dual<T>(c); }
template <class T> Dual<T> operator+(double c, const Dual<T>& a) { return Dual<T>(c) + a; }
template <class T> Dual<T> operator-(const Dual<T>& a, double c) { return a - Dual<T>(c); }
template <class T> Dual<T> operator-(double c, const Dual<T>& a) { return Dual<T>(c) - a; }
template <class T> Dual<T> operator*(const Dual<T>& a, double c) { return a * Dual<T>(c); }
template <class T> Dual<T> operator*(double c, const Dual<T>& a) { return Dual<T>(c) * a; }
template <class T> Dual<T> operator/(const Dual<T>& a, double c) { return a / Dual<T>(c); }
template <class T> Dual<T> operator/(double c, const Dual<T>& a) { return Dual<T>(c) / a; }

using std::cos;
using std::exp;
using std::pow;
using std::sin;
using std::sqrt;

template <class T> Dual<T> sin(const Dual<T>& x) { return {sin(x.v), x.d * cos(x.v)}; }
template <class T> Dual<T> cos(const Dual<T>& x) { return {cos(x.v), -(x.d * sin(x.v))}; }
template <class T> Dual<T> exp(const Dual<T>& x) {
    T e = exp(x.v);
    return {e, x.d * e};
}
template <class T> Dual<T> sqrt(const Dual<T>& x) {
    T r = sqrt(x.v);
    return {r, x.d / (r * 2.0)};
}

// integer power by repeated squaring; valid for any base sign
inline double pow_int(double x, long n) {
    if (n < 0) return 1.0 / pow_int(x, -n);
    double r = 1.0, b = x;
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}
template <class T>
Dual<T> pow_int(const Dual<T>& x, long n) {
    if (n == 0) return Dual<T>(1.0);
    if (n < 0) return 1.0 / pow_int(x, -n);
    Dual<T> r(1.0), b = x;
    while (n > 0) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

// real power; base must be positive
inline double pow_real(double x, double r) { return std::pow(x, r); }
template <class T>
Dual<T> pow_real(const Dual<T>& x, double r) {
    return {pow_real(x.v, r), x.d * (pow_real(x.v, r - 1.0) * r)};
}

}  // namespace reebflow
