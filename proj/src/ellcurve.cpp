#include "eulercx/ellcurve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eulercx {

namespace {

const int kSeriesCap = 400;
const double kSeriesEps = 1e-34;

// e^{2 pi i (a + b tau)} for exact rationals a, b
cdd torus_exp(const cdd& tau, const Rat& a, const Rat& b) {
    dd da = rat_dd(a), db = rat_dd(b);
    cdd expo(-DD_2PI * (db * tau.im), DD_2PI * (da + db * tau.re));
    return cdd_exp(expo);
}

} // namespace

LatticePt lpt(const Rat& a, const Rat& b) {
    return LatticePt{mod1(a), mod1(b)};
}

LatticePt lpt_add(const LatticePt& p, const LatticePt& q) {
    return lpt(p.a + q.a, p.b + q.b);
}

LatticePt lpt_neg(const LatticePt& p) {
    return lpt(-p.a, -p.b);
}

LatticePt lpt_mul(long k, const LatticePt& p) {
    return lpt(k * p.a, k * p.b);
}

bool lpt_is_zero(const LatticePt& p) {
    return p.a == 0 && p.b == 0;
}

bool operator==(const LatticePt& p, const LatticePt& q) {
    return p.a == q.a && p.b == q.b;
}

bool operator<(const LatticePt& p, const LatticePt& q) {
    if (p.a != q.a) return p.a < q.a;
    return p.b < q.b;
}

EllCurveC::EllCurveC(cdd tau) : tau_(tau) {
    if (to_double(tau.im) <= 0)
        throw std::invalid_argument("ell curve: tau must lie in the upper half plane");
    q_ = cdd_exp(cdd(-DD_2PI * tau.im, DD_2PI * tau.re));

    // Eisenstein sums E4 = sum n^3 q^n/(1-q^n), E6 = sum n^5 q^n/(1-q^n)
    cdd e4(dd(0.0)), e6(dd(0.0));
    cdd qn = q_;
    for (int n = 1; n <= kSeriesCap; ++n) {
        cdd t = qn / (cdd(dd(1.0)) - qn);
        dd n3 = dd(double(n)) * dd(double(n)) * dd(double(n));
        e4 = e4 + n3 * t;
        e6 = e6 + (n3 * dd(double(n)) * dd(double(n))) * t;
        qn = qn * q_;
        if (to_double(cdd_abs2(qn)) < kSeriesEps * kSeriesEps) break;
    }
    dd twopi2 = DD_2PI * DD_2PI;
    dd twopi4 = twopi2 * twopi2;
    dd twopi6 = twopi4 * twopi2;
    g2_ = twopi4 * (cdd(dd(1.0)) + dd(240.0) * e4) / dd(12.0);
    g3_ = twopi6 * (cdd(dd(1.0)) - dd(504.0) * e6) / dd(216.0);
}

void EllCurveC::weierstrass(const LatticePt& p, cdd& P, cdd& Pp) const {
    if (lpt_is_zero(p))
        throw std::invalid_argument("weierstrass: pole at the origin");
    cdd u = torus_exp(tau_, p.a, p.b);
    cdd one(dd(1.0));

    // P / (2 pi i)^2 = 1/12 + u/(1-u)^2 + sum_n [ q^n u/(1-q^n u)^2
    //                  + (q^n/u)/(1-q^n/u)^2 - 2 q^n/(1-q^n)^2 ]
    cdd omu = one - u;
    cdd Ps = cdd(rat_dd(rat(1, 12))) + u / (omu * omu);
    // P' / (2 pi i)^3 = u(1+u)/(1-u)^3 + sum_n [ q^n u (1+q^n u)/(1-q^n u)^3
    //                  - (q^n/u)(1+q^n/u)/(1-q^n/u)^3 ]
    cdd Pps = u * (one + u) / (omu * omu * omu);

    cdd qu = q_ * u;
    cdd qiu = q_ / u;
    cdd qn = q_;
    for (int n = 1; n <= kSeriesCap; ++n) {
        cdd d1 = one - qu, d2 = one - qiu, d3 = one - qn;
        Ps = Ps + qu / (d1 * d1) + qiu / (d2 * d2) - dd(2.0) * qn / (d3 * d3);
        Pps = Pps + qu * (one + qu) / (d1 * d1 * d1)
                  - qiu * (one + qiu) / (d2 * d2 * d2);
        double worst = std::max(to_double(cdd_abs2(qu)), to_double(cdd_abs2(qiu)));
        qu = qu * q_;
        qiu = qiu * q_;
        qn = qn * q_;
        if (worst < kSeriesEps * kSeriesEps) break;
    }
    // multiply back the (2 pi i) powers: (2 pi i)^2 = -(2 pi)^2,
    // (2 pi i)^3 = -i (2 pi)^3
    dd twopi2 = DD_2PI * DD_2PI;
    P = cdd(-twopi2) * Ps;
    Pp = cdd(dd(0.0), -twopi2 * DD_2PI) * Pps;
}

Proj3 EllCurveC::point(const LatticePt& p) const {
    if (lpt_is_zero(p))
        return Proj3{cdd(dd(0.0)), cdd(dd(1.0)), cdd(dd(0.0))};
    auto key = std::make_pair(p.a, p.b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    cdd P, Pp;
    weierstrass(p, P, Pp);
    Proj3 pt{P, Pp, cdd(dd(1.0))};
    if (!frozen_) cache_.emplace(key, pt);
    return pt;
}

void EllCurveC::precompute(long N) const {
    if (grid_n_ == N) return;
    frozen_ = false;
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j)
            if (i || j) (void)point(lpt(rat(i, N), rat(j, N)));
    frozen_ = true;
    grid_n_ = N;
}

double EllCurveC::curve_identity_residual(const std::vector<LatticePt>& sample) const {
    double worst = 0;
    for (const auto& p : sample) {
        if (lpt_is_zero(p)) continue;
        cdd P, Pp;
        weierstrass(p, P, Pp);
        cdd lhs = Pp * Pp;
        cdd rhs = dd(4.0) * P * P * P - g2_ * P - g3_;
        double num = to_double(cdd_abs(lhs - rhs));
        double den = 1 + to_double(cdd_abs2(Pp));
        worst = std::max(worst, num / den);
    }
    return worst;
}

cdd EllCurveC::siegel_value(const LatticePt& p) const {
    if (lpt_is_zero(p))
        throw std::invalid_argument("siegel: value undefined at the origin");
    // alpha1 is the tau coefficient, alpha2 the rational shift
    Rat a1 = p.b, a2 = p.a;
    Rat b2 = a1 * a1 - a1 + rat(1, 6);
    cdd one(dd(1.0));
    // -exp(i pi tau B2(a1)) exp(i pi a2 (a1 - 1))
    dd halfb2 = rat_dd(b2) / dd(2.0);
    cdd ph1 = cdd_exp(cdd(-DD_2PI * halfb2 * tau_.im, DD_2PI * halfb2 * tau_.re));
    dd half2 = rat_dd(a2 * (a1 - 1)) / dd(2.0);
    cdd ph2 = cdd_exp(cdd(dd(0.0), DD_2PI * half2));
    cdd z = torus_exp(tau_, p.a, p.b);
    cdd val = (cdd(dd(0.0)) - one) * ph1 * ph2 * (one - z);
    cdd qz = q_ * z;
    cdd qiz = q_ / z;
    for (int n = 1; n <= kSeriesCap; ++n) {
        val = val * (one - qz) * (one - qiz);
        double worst = std::max(to_double(cdd_abs2(qz)), to_double(cdd_abs2(qiz)));
        qz = qz * q_;
        qiz = qiz * q_;
        if (worst < kSeriesEps * kSeriesEps) break;
    }
    return val;
}

int ChordLine::mult(const LatticePt& t) const {
    return int(P == t) + int(Q == t) + int(R == t);
}

std::array<Rat, 6> ChordLine::key() const {
    std::array<LatticePt, 3> d{P, Q, R};
    std::sort(d.begin(), d.end());
    return {d[0].a, d[0].b, d[1].a, d[1].b, d[2].a, d[2].b};
}

ChordLine chord(const LatticePt& P, const LatticePt& Q) {
    LatticePt p = lpt(P.a, P.b), q = lpt(Q.a, Q.b);
    LatticePt r = lpt_neg(lpt_add(p, q));
    return ChordLine{p, q, r};
}

bool chord_same(const ChordLine& x, const ChordLine& y) {
    return x.key() == y.key();
}

Proj3 chord_coeffs(const EllCurveC& E, const ChordLine& ch) {
    if (ch.P == ch.Q) {
        if (lpt_is_zero(ch.P))
            return Proj3{cdd(dd(0.0)), cdd(dd(0.0)), cdd(dd(1.0))};
        // tangent line: minus the gradient of 4X^3 - g2 X Z^2 - g3 Z^3 - Y^2 Z
        Proj3 pt = E.point(ch.P);
        const cdd &X = pt[0], &Y = pt[1], &Z = pt[2];
        cdd A = E.g2() * Z * Z - dd(12.0) * X * X;
        cdd B = dd(2.0) * Y * Z;
        cdd C = Y * Y + dd(2.0) * E.g2() * X * Z + dd(3.0) * E.g3() * Z * Z;
        return Proj3{A, B, C};
    }
    Proj3 u = E.point(ch.P), v = E.point(ch.Q);
    return Proj3{u[1] * v[2] - u[2] * v[1],
                 u[2] * v[0] - u[0] * v[2],
                 u[0] * v[1] - u[1] * v[0]};
}

double chord_incidence_residual(const EllCurveC& E, const ChordLine& ch) {
    Proj3 l = chord_coeffs(E, ch);
    double lnorm = std::sqrt(to_double(cdd_abs2(l[0]) + cdd_abs2(l[1]) + cdd_abs2(l[2])));
    double worst = 0;
    for (const auto& t : ch.divisor()) {
        Proj3 p = E.point(t);
        cdd dot = l[0] * p[0] + l[1] * p[1] + l[2] * p[2];
        double pnorm = std::sqrt(to_double(cdd_abs2(p[0]) + cdd_abs2(p[1]) + cdd_abs2(p[2])));
        worst = std::max(worst, to_double(cdd_abs(dot)) / (lnorm * pnorm));
    }
    return worst;
}

TorsionDivisor difference_divisor(const LatticePt& a, const LatticePt& x, long N) {
    TorsionDivisor D;
    D[lpt(a.a, a.b)] += N;
    D[lpt(x.a, x.b)] -= N;
    if (D.count(a) && D[a] == 0) D.erase(a);
    return D;
}

ChordDecomp divisor_decompose(const TorsionDivisor& D0) {
    TorsionDivisor D;
    Rat suma = 0, sumb = 0;
    long deg = 0;
    for (const auto& [pt, v] : D0) {
        if (v == 0) continue;
        D[lpt(pt.a, pt.b)] += v;
        deg += v;
        suma += v * pt.a;
        sumb += v * pt.b;
    }
    if (deg != 0)
        throw std::invalid_argument("divisor_decompose: nonzero degree");
    if (mod1(suma) != 0 || mod1(sumb) != 0)
        throw std::invalid_argument("divisor_decompose: group sum is not zero");

    const LatticePt O = lpt(0, 0);
    ChordDecomp out;
    auto add = [&D](const LatticePt& pt, long v) {
        D[pt] += v;
        if (D[pt] == 0) D.erase(pt);
    };

    for (int guard = 0;; ++guard) {
        if (guard > 1000)
            throw std::runtime_error("divisor_decompose: failed to terminate");
        std::vector<LatticePt> pos, neg;
        long pmass = 0, nmass = 0;
        for (const auto& [pt, v] : D) {
            if (lpt_is_zero(pt)) continue;
            if (v > 0) { pos.push_back(pt); pmass += v; }
            if (v < 0) { neg.push_back(pt); nmass -= v; }
        }
        if (pos.empty() && neg.empty()) break;
        std::sort(pos.begin(), pos.end());
        std::sort(neg.begin(), neg.end());
        int sgn;
        std::vector<LatticePt>* side;
        if (pmass >= nmass && !pos.empty()) { sgn = 1; side = &pos; }
        else { sgn = -1; side = &neg; }
        LatticePt P = (*side)[0];
        LatticePt Q;
        if (std::labs(D[P]) >= 2) Q = P;
        else if (side->size() >= 2) Q = (*side)[1];
        else Q = lpt_neg(P);
        ChordLine ch = chord(P, Q);
        out.terms.emplace_back(ch, sgn);
        for (const auto& t : ch.divisor()) add(t, -sgn);
        add(O, 3 * sgn);
    }
    if (!D.empty())
        throw std::runtime_error("divisor_decompose: residue left at the origin");
    return out;
}

bool decomp_audit(const TorsionDivisor& D, const ChordDecomp& dec) {
    TorsionDivisor got;
    auto add = [&got](const LatticePt& pt, long v) {
        got[pt] += v;
        if (got[pt] == 0) got.erase(pt);
    };
    const LatticePt O = lpt(0, 0);
    for (const auto& [ch, e] : dec.terms) {
        for (const auto& t : ch.divisor()) add(t, e);
        add(O, -3 * e);
    }
    TorsionDivisor want;
    for (const auto& [pt, v] : D)
        if (v != 0) want[lpt(pt.a, pt.b)] += v;
    return got == want;
}

long decomp_valuation(const ChordDecomp& dec, const LatticePt& pt) {
    LatticePt t = lpt(pt.a, pt.b);
    bool at_origin = lpt_is_zero(t);
    long v = 0;
    for (const auto& [ch, e] : dec.terms)
        v += e * (ch.mult(t) - (at_origin ? 3 : 0));
    return v;
}

namespace {

// leading coefficient of the affine chord section l(z) = A P(z) + B P'(z) + C
// at a non-origin point, in the uniformizer z - z0, where m is the vanishing
// order of l at z0 (0 <= m <= 3)
cdd chord_lead(const EllCurveC& E, const ChordLine& ch, const LatticePt& pt, int m) {
    Proj3 l = chord_coeffs(E, ch);
    cdd P, Pp;
    E.weierstrass(pt, P, Pp);
    const cdd &A = l[0], &B = l[1], &C = l[2];
    if (m == 0) return A * P + B * Pp + C;
    cdd Ppp = dd(6.0) * P * P - E.g2() / dd(2.0);
    if (m == 1) return A * Pp + B * Ppp;
    cdd P3 = dd(12.0) * P * Pp;
    if (m == 2) return (A * Ppp + B * P3) / dd(2.0);
    cdd P4 = dd(12.0) * (Pp * Pp + P * Ppp);
    if (m == 3) return (A * P3 + B * P4) / dd(6.0);
    throw std::logic_error("chord_lead: vanishing order out of range");
}

// leading Laurent coefficient of l(z) at the origin: from P = z^-2 + O(z^2)
// and P' = -2 z^-3 + O(z), the expansion is -2B z^-3 + A z^-2 + C + O(z)
cdd chord_lead_origin(const EllCurveC& E, const ChordLine& ch) {
    Proj3 l = chord_coeffs(E, ch);
    double sc = to_double(cdd_abs2(l[0]) + cdd_abs2(l[1]) + cdd_abs2(l[2]));
    if (to_double(cdd_abs2(l[1])) > 1e-40 * sc) return cdd(dd(-2.0)) * l[1];
    if (to_double(cdd_abs2(l[0])) > 1e-40 * sc) return l[0];
    return l[2];
}

cdd decomp_lead_inner(const EllCurveC& E, const ChordDecomp& dec, const LatticePt& pt) {
    LatticePt t = lpt(pt.a, pt.b);
    bool at_origin = lpt_is_zero(t);
    cdd acc(dd(1.0));
    for (const auto& [ch, e] : dec.terms) {
        cdd base = at_origin ? chord_lead_origin(E, ch)
                             : chord_lead(E, ch, t, ch.mult(t));
        if (e > 0)
            for (int k = 0; k < e; ++k) acc = acc * base;
        else
            for (int k = 0; k < -e; ++k) acc = acc / base;
    }
    return acc;
}

} // namespace

cdd decomp_value(const EllCurveC& E, const ChordDecomp& dec, const LatticePt& pt) {
    if (decomp_valuation(dec, pt) != 0)
        throw std::invalid_argument("decomp_value: nonzero valuation at the point");
    return decomp_lead_inner(E, dec, pt);
}

cdd decomp_lead(const EllCurveC& E, const ChordDecomp& dec, const LatticePt& pt) {
    return decomp_lead_inner(E, dec, pt);
}

} // namespace eulercx
