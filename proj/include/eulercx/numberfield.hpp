#pragma once
// Exact arithmetic in Q(zeta_N), the Gaussian and Eisenstein integer rings,
// their small prime ideals, residue fields, and unit-group images.

#include "eulercx/dd.hpp"
#include "eulercx/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulercx {

// dense polynomial over Q, coefficient i is the x^i coefficient
using QPoly = std::vector<Rat>;

QPoly poly_mul(const QPoly& a, const QPoly& b);
QPoly poly_mod(QPoly a, const QPoly& m);
// exact division; throws if not divisible
QPoly poly_div_exact(QPoly a, const QPoly& b);
const QPoly& cyclotomic_poly(int n); // cached

int euler_phi(int n);

// element of Q(zeta_N) in the power basis zeta^0 .. zeta^{phi(N)-1}
class CycloNum {
public:
    CycloNum() : n_(1), c_{Rat(0)} {}
    explicit CycloNum(int level) : n_(level), c_(euler_phi(level), Rat(0)) {}
    CycloNum(int level, const Rat& scalar);

    static CycloNum zeta_pow(int level, int k); // zeta_N^k reduced
    static CycloNum one(int level) { return CycloNum(level, Rat(1)); }
    // from power-basis coefficients (size at most phi(level))
    static CycloNum from_coeffs(int level, std::vector<Rat> coeffs);

    int level() const { return n_; }
    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const;
    bool operator==(const CycloNum& o) const { return n_ == o.n_ && c_ == o.c_; }

    CycloNum operator+(const CycloNum& o) const;
    CycloNum operator-(const CycloNum& o) const;
    CycloNum operator-() const;
    CycloNum operator*(const CycloNum& o) const;
    CycloNum operator*(const Rat& s) const;
    CycloNum inv() const; // arithmetic error on zero
    CycloNum pow(long e) const;

    // embedding zeta_N -> exp(2 pi i k / N); requires gcd(k, N) = 1
    cdd embed(int k) const;

    std::string str() const;

private:
    void check_level(const CycloNum& o) const;
    int n_;
    std::vector<Rat> c_;
};

// true iff x is a root of unity in Q(zeta_N), decided exactly (x^{2N} == 1)
bool is_root_of_unity(const CycloNum& x);

// lift x into Q(zeta_M) via zeta_n -> zeta_M^{M/n}; requires level(x) | M
CycloNum cyclo_lift(const CycloNum& x, int M);

// x * zeta_M^k using a cached table of reduced zeta powers (fast monomial mult)
CycloNum cyclo_mul_zeta(const CycloNum& x, long k);

// 1 - zeta_N^a
CycloNum one_minus_zeta(int N, int a);

// --- imaginary quadratic integers ------------------------------------------------
//
// d = 1: Z[i], basis (1, i). d = 3: Z[rho] with rho = exp(pi i/3), rho^2 = rho - 1.
struct ImagQuadInt {
    int d = 1;
    long a = 0, b = 0;
    ImagQuadInt() = default;
    ImagQuadInt(int dd_, long a_, long b_) : d(dd_), a(a_), b(b_) {}
    bool operator==(const ImagQuadInt& o) const { return d == o.d && a == o.a && b == o.b; }
    bool operator<(const ImagQuadInt& o) const {
        return std::pair(a, b) < std::pair(o.a, o.b);
    }
};

ImagQuadInt iq_add(const ImagQuadInt& x, const ImagQuadInt& y);
ImagQuadInt iq_sub(const ImagQuadInt& x, const ImagQuadInt& y);
ImagQuadInt iq_neg(const ImagQuadInt& x);
ImagQuadInt iq_mul(const ImagQuadInt& x, const ImagQuadInt& y);
long iq_norm(const ImagQuadInt& x);
std::string iq_str(const ImagQuadInt& x);

// the unit group: 4 elements for d=1, 6 for d=3
std::vector<ImagQuadInt> iq_units(int d);

std::complex<double> iq_embed(const ImagQuadInt& x);

struct PrimeIdeal {
    int d;
    ImagQuadInt gen;
    long norm;                 // residue field size q
    std::string kind;          // "split", "inert", "ramified"
    // residue map data: images of 1 and of the generator (i or rho) in F_q;
    // for inert primes F_q = F_p[t] and elements are encoded as a + b*t with
    // t the image of i (resp. rho); for split/ramified q is prime and the
    // image is a single residue
    long p;                    // rational prime below
    bool field_is_fp;          // true when q = p (split/ramified)
    long gen_residue;          // image of i (resp. rho) when field_is_fp
};

// residue of x in F_q encoded as a + b*t (b = 0 when field_is_fp)
std::pair<long, long> residue(const PrimeIdeal& P, const ImagQuadInt& x);
bool residue_is_zero(const PrimeIdeal& P, const ImagQuadInt& x);

std::vector<PrimeIdeal> primes_up_to_norm(int d, long bound);
std::optional<PrimeIdeal> prime_of_norm(int d, long norm);

struct UnitImage {
    PrimeIdeal P;
    std::vector<std::pair<long, long>> mu; // image of O_K^* in F_q
    long qprime;                            // |F_q^* / mu|
};
UnitImage residue_units(const PrimeIdeal& P);

// multiplication in the residue field F_q (encoded as above)
std::pair<long, long> residue_mul(const PrimeIdeal& P, std::pair<long, long> x,
                                  std::pair<long, long> y);

} // namespace eulercx
