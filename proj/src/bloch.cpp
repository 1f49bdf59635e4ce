#include "eulercx/bloch.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace eulercx {

Rat bernoulli(int n) {
    static std::vector<Rat> cache{Rat(1)};
    // B_0 = 1, and sum_{j=0}^{m} C(m+1,j) B_j = 0 for m >= 1
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        Rat acc(0);
        Rat binom(1); // C(m+1, 0)
        for (int j = 0; j < m; ++j) {
            acc += binom * cache[j];
            binom *= Rat(m + 1 - j);
            binom /= Rat(j + 1);
        }
        // binom now C(m+1, m) = m+1
        cache.push_back(-acc / Rat(m + 1));
    }
    return cache[n];
}

namespace {

// coefficients b_k = B_{2k} / (2k (2k+1) (2k)!) of the expansion
// Li2(e^mu) = pi^2/6 + mu - mu Log(-mu) - mu^2/4 - sum_k b_k mu^{2k+1}
const std::vector<dd>& mu_coeffs() {
    static std::vector<dd> c = [] {
        std::vector<dd> out;
        Rat fact(1); // (2k)!
        for (int k = 1; k <= 60; ++k) {
            fact *= Rat(2 * k - 1) * Rat(2 * k);
            Rat b = bernoulli(2 * k) / (Rat(2 * k) * Rat(2 * k + 1) * fact);
            // split into double-double
            double hi = b.get_d();
            Rat rem = b - Rat(hi);
            out.push_back(dd(hi, rem.get_d()));
        }
        return out;
    }();
    return c;
}

const dd PI2_6 = DD_PI * DD_PI / dd(6.0);

// Im Li2 for |z| <= 0.8 by direct series
dd im_li2_series(cdd z) {
    cdd term = z, sum = z;
    for (int n = 2; n <= 400; ++n) {
        term = term * z;
        sum += term / cdd(dd(static_cast<double>(n) * n));
        if (std::abs(term.re.hi) + std::abs(term.im.hi) < 1e-36) break;
    }
    return sum.im;
}

// Im Li2 for 0.64 < |z|^2 <= 1 via mu = log z and the Bernoulli expansion
dd im_li2_near_circle(cdd z) {
    cdd mu = cdd_log(z); // Re <= 0
    cdd neg_mu = -mu;
    cdd log_neg_mu = cdd_log(neg_mu);
    cdd acc = cdd(PI2_6) + mu - mu * log_neg_mu - mu * mu * cdd(dd(0.25));
    cdd mu2 = mu * mu;
    cdd pw = mu * mu2; // mu^3
    const auto& bc = mu_coeffs();
    for (std::size_t k = 0; k < bc.size(); ++k) {
        cdd t = pw * cdd(bc[k]);
        acc -= t;
        if (std::abs(t.re.hi) + std::abs(t.im.hi) < 1e-36) break;
        pw = pw * mu2;
    }
    return acc.im;
}

} // namespace

dd L2_dd(cdd z) {
    // exact zeros on the real axis and at 0, 1
    if (z.im.hi == 0.0 && z.im.lo == 0.0) return dd(0.0);
    dd sign{1.0};
    dd r2 = cdd_abs2(z);
    if (!(r2.hi < HUGE_VAL)) return dd(0.0); // infinite argument: {inf}_2 = 0
    if (r2 > dd(1.0)) {
        z = cdd(dd(1.0)) / z;
        sign = dd(-1.0);
        r2 = cdd_abs2(z);
    }
    dd im_li2 = (r2 < dd(0.64)) ? im_li2_series(z) : im_li2_near_circle(z);
    cdd one_minus{dd(1.0) - z.re, -z.im};
    dd out = im_li2 + cdd_arg(one_minus) * cdd_log_abs(z);
    return sign * out;
}

double L2(std::complex<double> z) {
    if (std::isnan(z.real()) || std::isnan(z.imag())) return 0.0;
    // real arguments (up to rounding fuzz from upstream complex arithmetic)
    if (std::abs(z.imag()) < 1e-15 * (1.0 + std::abs(z.real()))) return 0.0;
    return to_double(L2_dd(from_cd(z)));
}

double eval_L2(const BlochSum& s) {
    dd acc{0.0};
    for (const auto& t : s) {
        if (t.coef == 0) continue;
        acc += dd(t.coef.get_d()) * L2_dd(t.arg);
    }
    return to_double(acc);
}

double five_term_residual(std::complex<double> a, std::complex<double> b) {
    std::complex<double> one{1.0, 0.0};
    std::complex<double> ab = a * b;
    double r = L2(a) + L2(b) + L2((one - a) / (one - ab)) + L2(one - ab) +
               L2((one - b) / (one - ab));
    return std::abs(r);
}

BlochSum five_term(const std::array<std::complex<double>, 5>& x) {
    // projective coordinates: a non-finite entry is the point at infinity
    std::complex<double> num[5], den[5];
    for (int i = 0; i < 5; ++i) {
        if (std::isfinite(x[i].real()) && std::isfinite(x[i].imag())) {
            num[i] = x[i];
            den[i] = 1.0;
        } else {
            num[i] = 1.0;
            den[i] = 0.0;
        }
    }
    auto wedge = [&](int i, int j) { return num[i] * den[j] - num[j] * den[i]; };
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (std::abs(wedge(i, j)) < 1e-12)
                throw std::invalid_argument("five_term: coincident points");
    BlochSum out;
    int sign = -1; // (-1)^i with i starting at 1
    for (int i = 0; i < 5; ++i) {
        int s[4], k = 0;
        for (int j = 0; j < 5; ++j)
            if (j != i) s[k++] = j;
        std::complex<double> r =
            (wedge(s[0], s[2]) * wedge(s[1], s[3])) / (wedge(s[0], s[3]) * wedge(s[1], s[2]));
        bloch_add(out, cdd(r.real(), r.imag()), Rat(sign));
        sign = -sign;
    }
    return out;
}

double five_point_residual(const std::array<std::complex<double>, 5>& x) {
    return std::abs(eval_L2(five_term(x)));
}

namespace {

constexpr double kDegenerate = 1e-13;

bool near(std::complex<double> z, std::complex<double> w) { return std::abs(z - w) < kDegenerate; }

// {z}_2 with degenerate arguments 0, 1, infinity treated as 0
double l2_guarded(std::complex<double> num, std::complex<double> den) {
    if (std::abs(den) < kDegenerate) return 0.0; // infinity
    std::complex<double> z = num / den;
    if (near(z, {0.0, 0.0}) || near(z, {1.0, 0.0})) return 0.0;
    return L2(z);
}

} // namespace

double li11_L2(std::complex<double> x, std::complex<double> y) {
    std::complex<double> one{1.0, 0.0};
    double t1 = l2_guarded(x * y - y, one - y);
    double t2 = l2_guarded(y, y - one);
    double t3 = near(x * y, one) || near(x * y, {0.0, 0.0}) ? 0.0 : L2(x * y);
    return t1 - t2 - t3;
}

double colon_L2(std::complex<double> a1, std::complex<double> a2, std::complex<double> a3) {
    return li11_L2(a2 / a1, a3 / a2);
}

std::complex<double> cross_ratio4(std::complex<double> a, std::complex<double> b,
                                  std::complex<double> c, std::complex<double> d) {
    // r(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c))
    std::complex<double> num = (a - c) * (b - d);
    std::complex<double> den = (a - d) * (b - c);
    if (std::abs(den) < 1e-300) {
        if (std::abs(num) < 1e-300) return {std::nan(""), std::nan("")};
        return {HUGE_VAL, 0.0};
    }
    return num / den;
}

double four_term_residual(std::complex<double> b0, std::complex<double> b1,
                          std::complex<double> b2, std::complex<double> b3) {
    double lhs = colon_L2(b1, b2, b3) - colon_L2(b0, b2, b3) + colon_L2(b0, b1, b3) -
                 colon_L2(b0, b1, b2);
    std::complex<double> r = cross_ratio4(b0, b1, b2, b3);
    double rhs = L2(r) + L2(b1 / b2) + L2(b2 / b0);
    return std::abs(lhs - rhs);
}

std::pair<double, double> mu_sum_residuals(int N, std::complex<double> a1,
                                           std::complex<double> a2,
                                           std::complex<double> a3) {
    auto S = [&](std::complex<double> x) {
        return colon_L2(a2, a3, x) - colon_L2(a1, a3, x) + colon_L2(a1, a2, x);
    };
    double lhs = 0.0, altv = 0.0;
    for (int k = 0; k < N; ++k) {
        std::complex<double> x = std::polar(1.0, 2.0 * M_PI * k / N);
        altv += S(x);
        bool is_slot = near(x, a1) || near(x, a2) || near(x, a3);
        if (!is_slot) lhs += std::real(L2(cross_ratio4(a1, a2, a3, x)));
    }
    double I = colon_L2(a1, a2, a3);
    double tail = L2(a2 / a3) + L2(a3 / a1);
    double corrected = lhs - (altv - S(a1) - S(a2) - S(a3) - (N - 3) * (I + tail));
    double printed = lhs - (altv - N * I);
    return {std::abs(corrected), std::abs(printed)};
}

} // namespace eulercx
