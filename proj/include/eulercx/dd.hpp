#pragma once
// Double-double arithmetic (~31 significant digits) with just enough
// transcendental support for the elliptic-curve / dilogarithm pipeline:
// exp, log, sin/cos, atan2 on reals and exp/log/abs/arg on complex values.
// Error-free transforms use std::fma.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <ostream>

namespace eulercx {

struct dd {
    double hi = 0.0, lo = 0.0;
    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}
};

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
}

inline dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}
inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }
inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}
inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd(q3);
}
inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline double to_double(dd a) { return a.hi + a.lo; }
inline dd dd_abs(dd a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }

inline std::ostream& operator<<(std::ostream& os, dd a) { return os << to_double(a); }

// constants
inline const dd DD_PI{3.141592653589793116, 1.2246467991473531772e-16};
inline const dd DD_2PI{6.283185307179586232, 2.4492935982947063545e-16};
inline const dd DD_PI_2{1.570796326794896558, 6.123233995736765886e-17};
inline const dd DD_LN2{0.69314718055994530942, 2.3190468138462995584e-17};

inline dd dd_ldexp(dd a, int n) { return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)}; }

inline dd dd_exp(dd a) {
    if (a.hi > 700.0) return {HUGE_VAL, 0.0};
    if (a.hi < -746.0) return {0.0, 0.0};
    int k = static_cast<int>(std::lround(a.hi / DD_LN2.hi));
    dd r = a - dd(static_cast<double>(k)) * DD_LN2;
    // Taylor on |r| <= ln2/2
    dd sum{1.0}, term{1.0};
    for (int n = 1; n <= 30; ++n) {
        term = term * r / dd(static_cast<double>(n));
        sum += term;
        if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
    }
    return dd_ldexp(sum, k);
}

inline dd dd_log(dd a) {
    // Newton refinement of the double log: x' = x + a e^{-x} - 1
    dd x{std::log(a.hi)};
    for (int it = 0; it < 3; ++it) x = x + a * dd_exp(-x) - dd(1.0);
    return x;
}

inline int mod_pos_q(long q) { long r = q % 4; return static_cast<int>(r < 0 ? r + 4 : r); }

inline void dd_sincos(dd a, dd& s, dd& c) {
    // reduce modulo pi/2 with quadrant bookkeeping; fine for |a| << 1e10
    double kq = std::floor(a.hi / DD_PI_2.hi + 0.5);
    long q = static_cast<long>(kq);
    dd r = a - dd(kq) * DD_PI_2;
    dd r2 = r * r;
    dd ss = r, term = r;
    for (int n = 1; n <= 16; ++n) {
        term = term * r2 / dd(static_cast<double>(2 * n * (2 * n + 1)));
        if (n % 2) ss -= term; else ss += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    dd cc{1.0}; term = dd(1.0);
    for (int n = 1; n <= 16; ++n) {
        term = term * r2 / dd(static_cast<double>((2 * n - 1) * 2 * n));
        if (n % 2) cc -= term; else cc += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    switch (mod_pos_q(q)) {
        case 0: s = ss; c = cc; break;
        case 1: s = cc; c = -ss; break;
        case 2: s = -ss; c = -cc; break;
        default: s = -cc; c = ss; break;
    }
}

inline dd dd_atan2(dd y, dd x) {
    if (y.hi == 0.0 && y.lo == 0.0) return x.hi >= 0 ? dd(0.0) : DD_PI;
    dd t{std::atan2(y.hi, x.hi)};
    // Newton on f(t) = sin(t) x - cos(t) y
    for (int it = 0; it < 2; ++it) {
        dd s, c;
        dd_sincos(t, s, c);
        dd f = s * x - c * y;
        dd fp = c * x + s * y;
        t = t - f / fp;
    }
    return t;
}

inline dd dd_sqrt(dd a) {
    if (a.hi <= 0.0) return {std::sqrt(a.hi), 0.0};
    dd x{std::sqrt(a.hi)};
    // Newton: x' = (x + a/x)/2
    x = (x + a / x) * dd(0.5);
    x = (x + a / x) * dd(0.5);
    return x;
}

// --- complex double-double ------------------------------------------------------

struct cdd {
    dd re, im;
    cdd() = default;
    cdd(dd r) : re(r), im(0.0) {}
    cdd(dd r, dd i) : re(r), im(i) {}
    cdd(double r, double i = 0.0) : re(r), im(i) {}
};

inline cdd operator+(cdd a, cdd b) { return {a.re + b.re, a.im + b.im}; }
inline cdd operator-(cdd a, cdd b) { return {a.re - b.re, a.im - b.im}; }
inline cdd operator-(cdd a) { return {-a.re, -a.im}; }
inline cdd operator*(cdd a, cdd b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline cdd operator/(cdd a, cdd b) {
    dd d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline cdd& operator+=(cdd& a, cdd b) { a = a + b; return a; }
inline cdd& operator-=(cdd& a, cdd b) { a = a - b; return a; }
inline cdd& operator*=(cdd& a, cdd b) { a = a * b; return a; }

inline dd cdd_abs2(cdd a) { return a.re * a.re + a.im * a.im; }
inline dd cdd_abs(cdd a) { return dd_sqrt(cdd_abs2(a)); }
inline dd cdd_log_abs(cdd a) { return dd_log(cdd_abs2(a)) * dd(0.5); }
inline dd cdd_arg(cdd a) { return dd_atan2(a.im, a.re); }
inline cdd cdd_exp(cdd a) {
    dd m = dd_exp(a.re), s, c;
    dd_sincos(a.im, s, c);
    return {m * c, m * s};
}
inline cdd cdd_log(cdd a) { return {cdd_log_abs(a), cdd_arg(a)}; }
inline std::complex<double> to_cd(cdd a) { return {to_double(a.re), to_double(a.im)}; }
inline cdd from_cd(std::complex<double> z) { return {dd(z.real()), dd(z.imag())}; }

} // namespace eulercx
