#pragma once
// Bloch-Wigner dilogarithm L2 and numeric Bloch-group elements.
//
// L2(z) = Im Li2(z) + arg(1-z) log|z| is single-valued, real-analytic off
// {0,1}, vanishes identically on the real line, and satisfies
// L2(1/z) = L2(z-bar) = -L2(z) and the five-term relation. Evaluation is in
// double-double: direct power series away from the unit circle, and a
// Bernoulli expansion of Li2(e^mu) near it.

#include "eulercx/dd.hpp"
#include "eulercx/rational.hpp"

#include <array>
#include <complex>
#include <vector>

namespace eulercx {

// Bloch-Wigner function, double-double core
dd L2_dd(cdd z);
double L2(std::complex<double> z);

// exact Bernoulli number B_n
Rat bernoulli(int n);

// numeric element of the pre-Bloch group: sum of coef * {arg}_2
struct BlochTerm {
    cdd arg;
    Rat coef;
};
using BlochSum = std::vector<BlochTerm>;

inline void bloch_add(BlochSum& s, cdd arg, const Rat& c) { s.push_back({arg, c}); }
double eval_L2(const BlochSum& s);

// |{a}+{b}+{(1-a)/(1-ab)}+{1-ab}+{(1-b)/(1-ab)}| under L2; zero in exact arithmetic
double five_term_residual(std::complex<double> a, std::complex<double> b);

// alternating sum of the cross-ratio classes of the five 4-point subtuples;
// at most one coordinate may be infinite (any non-finite complex value).
// Throws on coincident points.
BlochSum five_term(const std::array<std::complex<double>, 5>& x);

// |eval_L2(five_term(x))|; zero in exact arithmetic for any distinct 5-tuple
double five_point_residual(const std::array<std::complex<double>, 5>& x);

// weight-(1,1) double polylogarithm at roots of unity, literal evaluation:
// L2 of {(xy-y)/(1-y)} - {y/(y-1)} - {xy}, degenerate subterms contribute 0
double li11_L2(std::complex<double> x, std::complex<double> y);

// three-slot form: I(a1:a2:a3) = li11(a2/a1, a3/a2)
double colon_L2(std::complex<double> a1, std::complex<double> a2, std::complex<double> a3);

// cross-ratio of four points on the projective line over C, nan on 0/0
std::complex<double> cross_ratio4(std::complex<double> a, std::complex<double> b,
                                  std::complex<double> c, std::complex<double> d);

// Residual of the four-term relation for I(. : . : .) on a quadruple
// (b0,b1,b2,b3) of distinct nonzero points:
//   sum_i (-1)^i I(b-hat_i)  =  {r(b0,b1,b2,b3)}_2 + {b1/b2}_2 + {b2/b0}_2
double four_term_residual(std::complex<double> b0, std::complex<double> b1,
                          std::complex<double> b2, std::complex<double> b3);

// Residuals of the summed relation over x in mu_N for a triple of distinct
// N-th roots of unity: returns {corrected, as_printed}. The corrected right
// side carries the boundary terms that survive the telescoping; the second
// value is the residual of the shorter historical form kept for reporting.
std::pair<double, double> mu_sum_residuals(int N, std::complex<double> a1,
                                           std::complex<double> a2,
                                           std::complex<double> a3);

} // namespace eulercx
