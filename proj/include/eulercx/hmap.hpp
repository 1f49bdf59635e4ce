#pragma once
// The h-map on a numerical elliptic curve: Bloch-sum values of wedge products
// of chord-line sections, theta elements of torsion-point triples, residue
// wedges of function triples, and finite-difference verification of the
// differential identities along the modular family.

#include "eulercx/bloch.hpp"
#include "eulercx/ellcurve.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace eulercx {

// raised when the four cross-ratio points on a line degenerate (concurrent
// chord configurations); h evaluation retries once with perturbed line
// coefficients and rethrows when the degeneracy persists
struct degenerate_wedge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// the rational-curve h value: -{ r(a0, a1, a2, a3) }_2 with the cross-ratio
// r = (a0 - a2)(a1 - a3) / ((a0 - a3)(a1 - a2))
BlochSum h_rational(const cdd& a0, const cdd& a1, const cdd& a2, const cdd& a3);

// registry of chord lines on one curve: numeric projective coefficients,
// incidence-checked against the exact divisor points (tolerance 1e-6,
// mismatch throws), plus memoized h values of ordered chord triples
class HCache {
public:
    explicit HCache(const EllCurveC& E) : E_(&E) {}
    const EllCurveC& curve() const { return *E_; }

    int chord_id(const ChordLine& ch);

    // h((l1/Z) ^ (l2/Z) ^ (l3/Z)) for three distinct registered chords, as
    // (cross-ratio argument, sign) pairs; infinite cross-ratios are dropped
    // since {inf}_2 = 0
    const std::vector<std::pair<cdd, int>>& h_elem(int c1, int c2, int c3);

private:
    struct Entry {
        ChordLine ch;
        Proj3 coeffs;
    };
    const EllCurveC* E_;
    std::map<std::array<Rat, 6>, int> ids_;
    std::vector<Entry> chords_;
    std::map<std::array<int, 3>, std::vector<std::pair<cdd, int>>> helems_;
};

// trilinear h on decomposed function triples; expansion terms with a repeated
// chord are skipped exactly (antisymmetry)
BlochSum h_map(HCache& C, const ChordDecomp& f1, const ChordDecomp& f2,
               const ChordDecomp& f3);

// decomposition of the difference function with divisor N (a) - N (x)
ChordDecomp f_ax(const LatticePt& a, const LatticePt& x, long N);

// point-supported 2-wedge: coef * (u ^ v) located at a torsion point
struct WedgeEntry {
    LatticePt at;
    cdd u, v;
    long coef = 0;
};
using WedgeSum = std::vector<WedgeEntry>;

// residue of f1 ^ f2 ^ f3 from exact valuations and numeric leading values,
// oriented so the boundary triangle closes along the modular family:
// d/dtau eval_L2(h_map(f1, f2, f3)) = -omega(res_wedge3(f1, f2, f3)).
// Throws when some f_i has a zero or pole at the origin.
WedgeSum res_wedge3(const EllCurveC& E, const ChordDecomp& f1,
                    const ChordDecomp& f2, const ChordDecomp& f3);

// omega(u ^ v) = log|u| d arg v - log|v| d arg u, with d arg by centered
// differences of the phase between the minus and plus family members
double omega_pair(const cdd& u0, const cdd& um, const cdd& up, const cdd& v0,
                  const cdd& vm, const cdd& vp, double step);

// omega applied to a wedge sum along a family; the three sums must have the
// same support in the same order
double omega_wedge(const WedgeSum& w0, const WedgeSum& wm, const WedgeSum& wp,
                   double step);

// theta element of a colon triple (b1 : b2 : b3): -(1/N^5) times the sum over
// x in E[N] of h(f_{b1,x} ^ f_{b2,x} ^ f_{b3,x}); empty when the b's are not
// pairwise distinct
BlochSum theta_colon(const EllCurveC& E, const LatticePt& b1, const LatticePt& b2,
                     const LatticePt& b3, long N);
BlochSum theta_colon_serial(const EllCurveC& E, const LatticePt& b1,
                            const LatticePt& b2, const LatticePt& b3, long N);

// same element built from level-M difference functions (divisors M (b) - M (x),
// normalization -(1/(M^3 N^2))); agreement across M is the level-independence
// property
BlochSum theta_colon_level(const EllCurveC& E, const LatticePt& b1,
                           const LatticePt& b2, const LatticePt& b3, long N, long M);

// one-index average: when every b_i = c_i p lies in the cyclic group generated
// by the N-torsion point p, x runs over <p> only and the normalization is
// -(1/N^4)
BlochSum theta_cyclic(const EllCurveC& E, const LatticePt& p, long c1, long c2,
                      long c3, long N);
BlochSum theta_cyclic_serial(const EllCurveC& E, const LatticePt& p, long c1,
                             long c2, long c3, long N);

// theta of a comma triple (a1, a2, a3) with a1 + a2 + a3 = 0: the colon
// element of (0, a1, a1 + a2)
BlochSum theta_triple(const EllCurveC& E, const LatticePt& a1, const LatticePt& a2,
                      const LatticePt& a3, long N);
BlochSum theta_triple_serial(const EllCurveC& E, const LatticePt& a1,
                             const LatticePt& a2, const LatticePt& a3, long N);

// centered-difference comparison of one identity along the tau family
struct FamilyCheck {
    double deriv = 0;     // d/dt of the left-side L2 value along the direction
    double omega = 0;     // the 1-form value on the realized right side
    double residual = 0;  // |deriv - omega| (delta check), |deriv + omega| (reciprocity)
};

// d/dt eval_L2(theta(p, q, -p-q)) against omega(sum of Siegel-unit wedges
// u_i ^ u_{i+1}) along tau = tau0 + t e^{0.7 i}, p = (1/N, 0), q = (0, 1/N)
FamilyCheck verify_delta_22_10(long N, cdd tau0, double step);

// d/dt eval_L2(h(f1 ^ f2 ^ f3)) against -omega(res_wedge3) for the difference
// functions f_i = f_{a_i, x}
FamilyCheck verify_reciprocity(cdd tau0, double step,
                               const std::array<LatticePt, 3>& a,
                               const LatticePt& x, long N);
// canonical configuration: N = 3, a = (1/3,0), (0,1/3), (1/3,1/3), x = (2/3,1/3)
FamilyCheck verify_reciprocity(cdd tau0, double step);

struct DegenerationRow {
    double height = 0;
    double theta_val = 0;
    double li11_val = 0;
    double diff = 0;
};

// eval_L2 of theta((a1/N,0), (a2/N,0), (-(a1+a2)/N,0)) on the curve with
// tau = i*height, tabulated against L2(li11(zeta_N^a1, zeta_N^a2))
std::vector<DegenerationRow> degeneration_check(long N, long a1, long a2,
                                                const std::vector<double>& heights);

} // namespace eulercx
