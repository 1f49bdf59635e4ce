#pragma once
// Numerical elliptic curves C/(Z + Z tau) in double-double precision:
// Eisenstein-series invariants g2, g3, Weierstrass P and P' by q-series,
// torsion points with exact lattice coordinates, chord lines through pairs
// of torsion points, exact decomposition of principal torsion divisors into
// chord-line ratios, and Siegel unit values.

#include "eulercx/dd.hpp"
#include "eulercx/rational.hpp"

#include <array>
#include <map>
#include <utility>
#include <vector>

namespace eulercx {

// exact rational to double-double (numerator and denominator stay exact in
// the double range for every lattice coordinate used here)
inline dd rat_dd(const Rat& r) {
    return dd(r.get_num().get_d()) / dd(r.get_den().get_d());
}

// point of the lattice-coordinate torus: z = a + b*tau with a, b in Q mod 1
struct LatticePt {
    Rat a, b; // stored reduced to [0, 1)
};

LatticePt lpt(const Rat& a, const Rat& b);
LatticePt lpt_add(const LatticePt& p, const LatticePt& q);
LatticePt lpt_neg(const LatticePt& p);
LatticePt lpt_mul(long k, const LatticePt& p);
bool lpt_is_zero(const LatticePt& p);
bool operator==(const LatticePt& p, const LatticePt& q);
bool operator<(const LatticePt& p, const LatticePt& q);

// projective coordinates over complex double-double
using Proj3 = std::array<cdd, 3>;

class EllCurveC {
public:
    explicit EllCurveC(cdd tau); // requires Im tau > 0

    cdd tau() const { return tau_; }
    cdd q() const { return q_; }
    cdd g2() const { return g2_; }
    cdd g3() const { return g3_; }

    // Weierstrass P, P' at z = a + b tau; (a, b) must not be the origin
    void weierstrass(const LatticePt& p, cdd& P, cdd& Pp) const;

    // embedded projective point (P : P' : 1); the origin maps to (0 : 1 : 0)
    Proj3 point(const LatticePt& p) const;

    // fill the point cache with the full N-torsion grid; after this, point()
    // lookups for N-torsion arguments are read-only and safe to share
    void precompute(long N) const;

    // max over the sample points of |P'^2 - (4P^3 - g2 P - g3)| / (1 + |P'|^2)
    double curve_identity_residual(const std::vector<LatticePt>& sample) const;

    // Siegel unit value at a nonzero torsion point (a, b), q-product form:
    //   -e^{i pi tau B2(b)} e^{i pi a (b - 1)} (1 - z) prod_n (1-q^n z)(1-q^n/z)
    // with z = e^{2 pi i (a + b tau)} and B2(t) = t^2 - t + 1/6
    cdd siegel_value(const LatticePt& p) const;

private:
    cdd tau_, q_, g2_, g3_;
    mutable std::map<std::pair<Rat, Rat>, Proj3> cache_;
    mutable bool frozen_ = false;
    mutable long grid_n_ = 0;
};

// chord line through torsion points P and Q (tangent line when P == Q); the
// third intersection of the line with the curve is R = -(P + Q), so the
// intersection divisor of the line section is (P) + (Q) + (R)
struct ChordLine {
    LatticePt P, Q, R;
    std::array<LatticePt, 3> divisor() const { return {P, Q, R}; }
    int mult(const LatticePt& t) const;
    // canonical key: the three divisor points sorted
    std::array<Rat, 6> key() const;
};

ChordLine chord(const LatticePt& P, const LatticePt& Q);
bool chord_same(const ChordLine& x, const ChordLine& y);

// numeric line coefficients (A, B, C) with A X + B Y + C Z = 0 on the chord
Proj3 chord_coeffs(const EllCurveC& E, const ChordLine& ch);

// max over divisor points of |coeffs . point| / (|coeffs| |point|)
double chord_incidence_residual(const EllCurveC& E, const ChordLine& ch);

// formal divisor with exact lattice-coordinate support
using TorsionDivisor = std::map<LatticePt, long>;

// div f_{a,x} = N (a) - N (x)
TorsionDivisor difference_divisor(const LatticePt& a, const LatticePt& x, long N);

// signed chords: f = prod (l_i / Z)^{e_i} with div f = D; the decomposition
// is exact integer bookkeeping on lattice coordinates
struct ChordDecomp {
    std::vector<std::pair<ChordLine, int>> terms;
};

// throws std::invalid_argument when D is not principal (degree or group sum)
ChordDecomp divisor_decompose(const TorsionDivisor& D);

// recompute the divisor from the chords and compare with D, exactly
bool decomp_audit(const TorsionDivisor& D, const ChordDecomp& dec);

// valuation of the decomposed function at pt (Z-line bookkeeping included)
long decomp_valuation(const ChordDecomp& dec, const LatticePt& pt);

// value of f at a point where decomp_valuation is zero
cdd decomp_value(const EllCurveC& E, const ChordDecomp& dec, const LatticePt& pt);

// leading coefficient of f at a non-origin point in the z-uniformizer:
// lim f(z) / (z - z_pt)^v with v = decomp_valuation(dec, pt); equals the
// plain value when v = 0; throws at the origin
cdd decomp_lead(const EllCurveC& E, const ChordDecomp& dec, const LatticePt& pt);

} // namespace eulercx
