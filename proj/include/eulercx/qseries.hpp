#pragma once
// Truncated fractional-exponent Laurent series over Q(zeta), Siegel unit
// expansions, the 12th root of the discriminant, multiplicative distribution
// relations, and specialization at the cusp q = 0.

#include "eulercx/numberfield.hpp"

#include <map>
#include <string>

namespace eulercx {

// Laurent series in q^{1/scale}: key k holds the coefficient of q^{k/scale}.
// Coefficients live in Q(zeta_level). trunc is exclusive: exponents >= trunc
// are unknown (discarded). marker_pow counts formal 2*pi*i prefactors; they
// are never evaluated and must cancel before any value-level comparison.
struct FracLaurentSeries {
    int level = 1;
    long scale = 12;
    long trunc = 0;
    int marker_pow = 0;
    std::map<long, CycloNum> c;

    bool is_zero() const { return c.empty(); }
    long lead_exp() const;           // throws on zero series
    const CycloNum& lead_coeff() const;
    void drop_zeros_and_tail();      // remove zero coeffs and terms >= trunc
};

FracLaurentSeries fls_add(const FracLaurentSeries& a, const FracLaurentSeries& b);
FracLaurentSeries fls_sub(const FracLaurentSeries& a, const FracLaurentSeries& b);
FracLaurentSeries fls_mul(const FracLaurentSeries& a, const FracLaurentSeries& b);
FracLaurentSeries fls_scale(const FracLaurentSeries& a, const CycloNum& s);
// shift exponents by ds scaled units
FracLaurentSeries fls_shift(const FracLaurentSeries& a, long ds);
// q -> q^{num/den}; every scaled exponent and trunc must stay integral
FracLaurentSeries fls_subst_pow(const FracLaurentSeries& a, long num, long den);
// multiplicative inverse to the truncation order implied by a
FracLaurentSeries fls_inv(const FracLaurentSeries& a);

// torsion point alpha1*tau + alpha2 = (a1/den)tau + (a2/den) on the Tate curve
struct TorsionCoord {
    int a1 = 0, a2 = 0, den = 1;
};

// Siegel unit g_{a1/N, a2/N} as a q-expansion:
//   -q^{B2(a1/N)/2} e^{2 pi i (a2/N)((a1/N)-1)/2} (1-z) prod_{n>=1}(1-q^n z)(1-q^n z^{-1})
// with z = q^{a1/N} zeta_N^{a2}. Coefficients live at cyclotomic level `level`
// (0 = pick 2N^2, the smallest level containing the phase); scale 0 = 12N^2.
// trunc_qorders counts full q-orders past the leading exponent.
FracLaurentSeries siegel_unit(int N, int a1, int a2, int trunc_qorders = 10,
                              int level = 0, long scale = 0);

// Delta(tau)^{1/12} = (2 pi i) q^{1/12} prod_{n>=1}(1-q^n)^2, marker_pow = 1
FracLaurentSeries delta12(int trunc_qorders, long scale = 12);

struct DistributionReport {
    std::string status;      // "ok", "inconclusive", or "fail"
    bool constant = false;   // all comparable coefficients proportional
    bool root_of_unity = false; // exact: constant^(2*level) == 1
    double max_abs_dev = 0;  // max over embeddings of ||constant| - 1|
    int compared_terms = 0;
    CycloNum ratio;          // leading-coefficient ratio when defined
};

// case (i): nonzero target t' = (t1/N, t2/N); product of siegel units over the
// m preimages of t' under the degree-m isogeny z -> z^m against the target
// curve series (q -> q^m)
DistributionReport distribution_check_torsion(int m, int N, int t1, int t2,
                                              int trunc_qorders = 10);
// case (ii): t' = 0; product over the nontrivial kernel {(j/m, 0)} of the
// degree-m isogeny in the tau direction against (Delta(q^{1/m})/Delta(q))^{1/12}
DistributionReport distribution_check_zero(int m, int trunc_qorders = 40);

// leading coefficient = value of s / q^{v(s)} at q = 0; input error on zero
CycloNum sp_cusp(const FracLaurentSeries& s);

// formal specialization on unit symbols w(a1/den, a2/den): symbols with
// a1 != 0 die, w(0, a2/den) maps to the cusp unit label u(a2 mod den)
struct SpSymbol {
    bool zero = true;
    int unit_label = 0; // folded label in (Z/den) / +-1, valid when !zero
};
SpSymbol sp_symbol(int a1, int a2, int den);

// exactness data for the specialization square on a Bloch generator
// g = siegel(0,a/N)/siegel(0,b/N): series-level sp of g and 1-g versus the
// field values computed from the leading coefficients
struct CommuteSquareReport {
    bool ok = false;
    bool sp_g_matches = false;       // sp(g series) == lead(a)/lead(b) exactly
    bool sp_one_minus_g_matches = false; // sp(1-g series) == 1 - sp(g) exactly
    bool wedge_slots_root_of_unity = false; // sp slots vs (1-zeta^a)-type values
};
CommuteSquareReport commute_square_check(int N, int a, int b);

// ratio siegel(-t)/siegel(t): constant series, constant a root of unity
DistributionReport siegel_negation_check(int N, int a1, int a2,
                                         int trunc_qorders = 8);

std::string fls_to_json(const FracLaurentSeries& s);
FracLaurentSeries fls_from_json(const std::string& text);

} // namespace eulercx
