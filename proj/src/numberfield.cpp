#include "eulercx/numberfield.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace eulercx {

// --- polynomial helpers ----------------------------------------------------------

static void poly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

QPoly poly_mod(QPoly a, const QPoly& m) {
    poly_trim(a);
    if (m.empty()) throw std::invalid_argument("poly_mod: zero modulus");
    while (a.size() >= m.size()) {
        Rat q = a.back() / m.back();
        size_t off = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) a[off + i] -= q * m[i];
        poly_trim(a);
    }
    return a;
}

QPoly poly_div_exact(QPoly a, const QPoly& b) {
    poly_trim(a);
    if (b.empty()) throw std::invalid_argument("poly_div_exact: zero divisor");
    if (a.empty()) return {};
    if (a.size() < b.size()) throw std::invalid_argument("poly_div_exact: not divisible");
    QPoly q(a.size() - b.size() + 1, Rat(0));
    while (a.size() >= b.size()) {
        Rat c = a.back() / b.back();
        size_t off = a.size() - b.size();
        q[off] = c;
        for (size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        poly_trim(a);
        if (a.empty()) break;
    }
    if (!a.empty()) throw std::invalid_argument("poly_div_exact: nonzero remainder");
    return q;
}

const QPoly& cyclotomic_poly(int n) {
    static std::map<int, QPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("cyclotomic_poly: n must be positive");
    QPoly num(n + 1, Rat(0));
    num[0] = Rat(-1);
    num[n] = Rat(1);
    QPoly den{Rat(1)};
    for (int d = 1; d < n; ++d)
        if (n % d == 0) den = poly_mul(den, cyclotomic_poly(d));
    return cache.emplace(n, poly_div_exact(num, den)).first->second;
}

int euler_phi(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

// --- CycloNum --------------------------------------------------------------------

CycloNum::CycloNum(int level, const Rat& scalar) : n_(level), c_(euler_phi(level), Rat(0)) {
    c_[0] = scalar;
}

CycloNum CycloNum::zeta_pow(int level, int k) {
    int deg = euler_phi(level);
    k = mod_pos(k, level);
    QPoly p(k + 1, Rat(0));
    p[k] = Rat(1);
    p = poly_mod(p, cyclotomic_poly(level));
    CycloNum z(level);
    for (size_t i = 0; i < p.size() && i < (size_t)deg; ++i) z.c_[i] = p[i];
    return z;
}

CycloNum CycloNum::from_coeffs(int level, std::vector<Rat> coeffs) {
    CycloNum r(level);
    if (coeffs.size() > r.c_.size())
        throw std::invalid_argument("CycloNum::from_coeffs: too many coefficients");
    std::copy(coeffs.begin(), coeffs.end(), r.c_.begin());
    return r;
}

bool CycloNum::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rat& x) { return x == 0; });
}

void CycloNum::check_level(const CycloNum& o) const {
    if (n_ != o.n_) throw std::invalid_argument("CycloNum: mixed levels");
}

CycloNum CycloNum::operator+(const CycloNum& o) const {
    check_level(o);
    CycloNum r(n_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

CycloNum CycloNum::operator-(const CycloNum& o) const {
    check_level(o);
    CycloNum r(n_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

CycloNum CycloNum::operator-() const {
    CycloNum r(n_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
}

CycloNum CycloNum::operator*(const CycloNum& o) const {
    check_level(o);
    QPoly a(c_.begin(), c_.end()), b(o.c_.begin(), o.c_.end());
    QPoly p = poly_mod(poly_mul(a, b), cyclotomic_poly(n_));
    CycloNum r(n_);
    for (size_t i = 0; i < p.size(); ++i) r.c_[i] = p[i];
    return r;
}

CycloNum CycloNum::operator*(const Rat& s) const {
    CycloNum r(n_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
}

// extended Euclid in Q[x] against the cyclotomic modulus
CycloNum CycloNum::inv() const {
    if (is_zero()) throw std::domain_error("CycloNum::inv of zero");
    QPoly r0 = cyclotomic_poly(n_);
    QPoly r1(c_.begin(), c_.end());
    poly_trim(r1);
    QPoly s0{}, s1{Rat(1)}; // coefficients of this element in the Bezout combo
    while (true) {
        if (r1.size() == 1) break; // constant gcd reached
        // one Euclid step: r0 = q*r1 + r2, s2 = s0 - q*s1
        QPoly a = r0, q(r0.size() - r1.size() + 1, Rat(0));
        while (a.size() >= r1.size()) {
            Rat c = a.back() / r1.back();
            size_t off = a.size() - r1.size();
            q[off] += c;
            for (size_t i = 0; i < r1.size(); ++i) a[off + i] -= c * r1[i];
            poly_trim(a);
            if (a.empty()) break;
        }
        QPoly s2 = s0;
        QPoly qs = poly_mul(q, s1);
        if (s2.size() < qs.size()) s2.resize(qs.size(), Rat(0));
        for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        poly_trim(s2);
        r0 = std::move(r1);
        r1 = std::move(a);
        s0 = std::move(s1);
        s1 = std::move(s2);
        if (r1.empty()) throw std::domain_error("CycloNum::inv: zero divisor");
    }
    Rat g = r1[0];
    QPoly res = poly_mod(s1, cyclotomic_poly(n_));
    CycloNum out(n_);
    for (size_t i = 0; i < res.size(); ++i) out.c_[i] = res[i] / g;
    return out;
}

CycloNum CycloNum::pow(long e) const {
    if (e < 0) return inv().pow(-e);
    CycloNum r = one(n_), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

cdd CycloNum::embed(int k) const {
    if (gcd_long(mod_pos(k, n_) == 0 ? n_ : mod_pos(k, n_), n_) != 1 && n_ > 1)
        throw std::invalid_argument("CycloNum::embed: k must be coprime to level");
    cdd acc{dd(0.0), dd(0.0)};
    for (size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        long e = mod_pos((long)j * k, n_);
        dd theta = (DD_PI * dd(2.0 * (double)e)) / dd((double)n_);
        dd s, c;
        dd_sincos(theta, s, c);
        dd w = dd(c_[j].get_d());
        acc.re = acc.re + w * c;
        acc.im = acc.im + w * s;
    }
    return acc;
}

std::string CycloNum::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << rat_str(c_[i]);
        if (i > 0) os << "*z^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

bool is_root_of_unity(const CycloNum& x) {
    if (x.is_zero()) return false;
    return x.pow(2L * x.level()) == CycloNum::one(x.level());
}

CycloNum one_minus_zeta(int N, int a) {
    return CycloNum::one(N) - CycloNum::zeta_pow(N, a);
}

CycloNum cyclo_lift(const CycloNum& x, int M) {
    int n = x.level();
    if (M % n != 0) throw std::invalid_argument("cyclo_lift: level must divide target");
    if (M == n) return x;
    int step = M / n;
    CycloNum r(M);
    for (size_t i = 0; i < x.coeffs().size(); ++i) {
        if (x.coeffs()[i] == 0) continue;
        r = r + CycloNum::zeta_pow(M, (int)((long)i * step % M)) * x.coeffs()[i];
    }
    return r;
}

static const std::vector<CycloNum>& zeta_power_table(int M) {
    static std::map<int, std::vector<CycloNum>> cache;
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    std::vector<CycloNum> tbl;
    tbl.reserve(M);
    for (int k = 0; k < M; ++k) tbl.push_back(CycloNum::zeta_pow(M, k));
    return cache.emplace(M, std::move(tbl)).first->second;
}

CycloNum cyclo_mul_zeta(const CycloNum& x, long k) {
    int M = x.level();
    const auto& tbl = zeta_power_table(M);
    k = mod_pos(k, M);
    std::vector<Rat> acc(euler_phi(M), Rat(0));
    for (size_t i = 0; i < x.coeffs().size(); ++i) {
        if (x.coeffs()[i] == 0) continue;
        const auto& z = tbl[(i + k) % M].coeffs();
        for (size_t j = 0; j < z.size(); ++j)
            if (z[j] != 0) acc[j] += x.coeffs()[i] * z[j];
    }
    return CycloNum::from_coeffs(M, std::move(acc));
}

// --- imaginary quadratic rings ----------------------------------------------------

static void check_d(int d) {
    if (d != 1 && d != 3) throw std::invalid_argument("imag quad ring: d must be 1 or 3");
}

ImagQuadInt iq_add(const ImagQuadInt& x, const ImagQuadInt& y) {
    return {x.d, x.a + y.a, x.b + y.b};
}
ImagQuadInt iq_sub(const ImagQuadInt& x, const ImagQuadInt& y) {
    return {x.d, x.a - y.a, x.b - y.b};
}
ImagQuadInt iq_neg(const ImagQuadInt& x) { return {x.d, -x.a, -x.b}; }

ImagQuadInt iq_mul(const ImagQuadInt& x, const ImagQuadInt& y) {
    check_d(x.d);
    if (x.d == 1) // i^2 = -1
        return {1, x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a};
    // rho^2 = rho - 1
    return {3, x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a + x.b * y.b};
}

long iq_norm(const ImagQuadInt& x) {
    check_d(x.d);
    if (x.d == 1) return x.a * x.a + x.b * x.b;
    return x.a * x.a + x.a * x.b + x.b * x.b;
}

std::string iq_str(const ImagQuadInt& x) {
    std::ostringstream os;
    os << x.a;
    if (x.b != 0) os << (x.b >= 0 ? "+" : "") << x.b << (x.d == 1 ? "i" : "r");
    return os.str();
}

std::vector<ImagQuadInt> iq_units(int d) {
    check_d(d);
    if (d == 1) return {{1, 1, 0}, {1, 0, 1}, {1, -1, 0}, {1, 0, -1}};
    std::vector<ImagQuadInt> u;
    ImagQuadInt w{3, 1, 0};
    ImagQuadInt rho{3, 0, 1};
    for (int k = 0; k < 6; ++k) {
        u.push_back(w);
        w = iq_mul(w, rho);
    }
    return u;
}

std::complex<double> iq_embed(const ImagQuadInt& x) {
    check_d(x.d);
    std::complex<double> tau = x.d == 1 ? std::complex<double>(0, 1)
                                        : std::complex<double>(0.5, std::sqrt(3.0) / 2);
    return std::complex<double>((double)x.a, 0) + std::complex<double>((double)x.b, 0) * tau;
}

static long inv_mod(long a, long p) {
    a = mod_pos(a, p);
    long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::domain_error("inv_mod: not invertible");
    return mod_pos(t, p);
}

// canonical generator: the unit-orbit representative in the closed-open
// fundamental sector a > 0, b >= 0 (one per orbit for both rings)
static ImagQuadInt canonical_assoc(const ImagQuadInt& x) {
    for (const auto& u : iq_units(x.d)) {
        ImagQuadInt y = iq_mul(x, u);
        if (y.a > 0 && y.b >= 0) return y;
    }
    throw std::logic_error("canonical_assoc: no representative found");
}

static PrimeIdeal make_prime(int d, ImagQuadInt gen, long p, const std::string& kind) {
    PrimeIdeal P;
    P.d = d;
    P.gen = canonical_assoc(gen);
    P.norm = iq_norm(gen);
    P.kind = kind;
    P.p = p;
    P.field_is_fp = kind != "inert";
    if (P.field_is_fp) {
        // gen = a + b*t = 0 in the residue field fixes t = -a/b mod p
        long a = mod_pos(P.gen.a, p), b = mod_pos(P.gen.b, p);
        P.gen_residue = mod_pos(-a * inv_mod(b, p), p);
    } else {
        P.gen_residue = 0;
    }
    return P;
}

std::vector<PrimeIdeal> primes_up_to_norm(int d, long bound) {
    check_d(d);
    std::vector<PrimeIdeal> out;
    long ram_p = d == 1 ? 2 : 3;
    for (long p = 2; p <= bound; ++p) {
        bool is_prime = p >= 2;
        for (long q = 2; q * q <= p; ++q)
            if (p % q == 0) is_prime = false;
        if (!is_prime) continue;
        if (p == ram_p) {
            ImagQuadInt g = d == 1 ? ImagQuadInt{1, 1, 1} : ImagQuadInt{3, 1, 1};
            out.push_back(make_prime(d, g, p, "ramified"));
            continue;
        }
        long split_mod = d == 1 ? 4 : 3;
        if (p % split_mod == 1) {
            // two conjugate ideals, found by norm-equation search
            std::vector<ImagQuadInt> gens;
            for (long a = 1; a * a <= p; ++a)
                for (long b = 0; b * b <= p; ++b) {
                    ImagQuadInt g{d, a, b};
                    if (iq_norm(g) == p) {
                        ImagQuadInt c = canonical_assoc(g);
                        if (std::find(gens.begin(), gens.end(), c) == gens.end())
                            gens.push_back(c);
                        ImagQuadInt gc = canonical_assoc({d, g.a + (d == 3 ? g.b : 0), -g.b});
                        if (std::find(gens.begin(), gens.end(), gc) == gens.end())
                            gens.push_back(gc);
                    }
                }
            std::sort(gens.begin(), gens.end());
            for (const auto& g : gens) out.push_back(make_prime(d, g, p, "split"));
        } else if (p * p <= bound) {
            out.push_back(make_prime(d, {d, p, 0}, p, "inert"));
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& x, const PrimeIdeal& y) {
        return std::pair(x.norm, x.gen) < std::pair(y.norm, y.gen);
    });
    return out;
}

std::optional<PrimeIdeal> prime_of_norm(int d, long norm) {
    for (const auto& P : primes_up_to_norm(d, norm))
        if (P.norm == norm) return P;
    return std::nullopt;
}

std::pair<long, long> residue(const PrimeIdeal& P, const ImagQuadInt& x) {
    if (x.d != P.d) throw std::invalid_argument("residue: ring mismatch");
    if (P.field_is_fp) return {mod_pos(x.a + x.b * P.gen_residue, P.p), 0};
    return {mod_pos(x.a, P.p), mod_pos(x.b, P.p)};
}

bool residue_is_zero(const PrimeIdeal& P, const ImagQuadInt& x) {
    auto [u, v] = residue(P, x);
    return u == 0 && v == 0;
}

std::pair<long, long> residue_mul(const PrimeIdeal& P, std::pair<long, long> x,
                                  std::pair<long, long> y) {
    long p = P.p;
    if (P.field_is_fp) return {mod_pos(x.first * y.first, p), 0};
    long ac = x.first * y.first, ad_bc = x.first * y.second + x.second * y.first,
         bd = x.second * y.second;
    if (P.d == 1) // t^2 = -1
        return {mod_pos(ac - bd, p), mod_pos(ad_bc, p)};
    // t^2 = t - 1
    return {mod_pos(ac - bd, p), mod_pos(ad_bc + bd, p)};
}

UnitImage residue_units(const PrimeIdeal& P) {
    UnitImage U;
    U.P = P;
    for (const auto& u : iq_units(P.d)) {
        auto r = residue(P, u);
        if (std::find(U.mu.begin(), U.mu.end(), r) == U.mu.end()) U.mu.push_back(r);
    }
    long q = P.norm;
    U.qprime = (q - 1) / (long)U.mu.size();
    return U;
}

} // namespace eulercx
