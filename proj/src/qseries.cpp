#include "eulercx/qseries.hpp"

#include "nlohmann/json.hpp"

#include <numeric>
#include <stdexcept>

namespace eulercx {

long FracLaurentSeries::lead_exp() const {
    if (c.empty()) throw std::domain_error("lead_exp of zero series");
    return c.begin()->first;
}

const CycloNum& FracLaurentSeries::lead_coeff() const {
    if (c.empty()) throw std::domain_error("lead_coeff of zero series");
    return c.begin()->second;
}

void FracLaurentSeries::drop_zeros_and_tail() {
    for (auto it = c.begin(); it != c.end();) {
        if (it->first >= trunc || it->second.is_zero())
            it = c.erase(it);
        else
            ++it;
    }
}

// bring two series to a common coefficient level and exponent scale
static void fls_align(FracLaurentSeries& a, FracLaurentSeries& b) {
    int L = (int)std::lcm((long)a.level, (long)b.level);
    auto lift_all = [L](FracLaurentSeries& s) {
        if (s.level == L) return;
        for (auto& [k, v] : s.c) v = cyclo_lift(v, L);
        s.level = L;
    };
    lift_all(a);
    lift_all(b);
    long S = std::lcm(a.scale, b.scale);
    auto rescale = [S](FracLaurentSeries& s) {
        if (s.scale == S) return;
        long f = S / s.scale;
        std::map<long, CycloNum> nc;
        for (auto& [k, v] : s.c) nc.emplace(k * f, std::move(v));
        s.c = std::move(nc);
        s.trunc *= f;
        s.scale = S;
    };
    rescale(a);
    rescale(b);
}

FracLaurentSeries fls_add(const FracLaurentSeries& a0, const FracLaurentSeries& b0) {
    FracLaurentSeries a = a0, b = b0;
    fls_align(a, b);
    if (a.marker_pow != b.marker_pow)
        throw std::invalid_argument("fls_add: marker mismatch");
    FracLaurentSeries r = a;
    r.trunc = std::min(a.trunc, b.trunc);
    for (const auto& [k, v] : b.c) {
        auto it = r.c.find(k);
        if (it == r.c.end())
            r.c.emplace(k, v);
        else
            it->second = it->second + v;
    }
    r.drop_zeros_and_tail();
    return r;
}

FracLaurentSeries fls_sub(const FracLaurentSeries& a, const FracLaurentSeries& b) {
    FracLaurentSeries nb = b;
    for (auto& [k, v] : nb.c) v = -v;
    return fls_add(a, nb);
}

FracLaurentSeries fls_mul(const FracLaurentSeries& a0, const FracLaurentSeries& b0) {
    FracLaurentSeries a = a0, b = b0;
    fls_align(a, b);
    FracLaurentSeries r;
    r.level = a.level;
    r.scale = a.scale;
    r.marker_pow = a.marker_pow + b.marker_pow;
    if (a.c.empty() || b.c.empty()) {
        r.trunc = std::min(a.trunc, b.trunc);
        return r;
    }
    r.trunc = std::min(a.trunc + b.lead_exp(), b.trunc + a.lead_exp());
    for (const auto& [ka, ca] : a.c)
        for (const auto& [kb, cb] : b.c) {
            long k = ka + kb;
            if (k >= r.trunc) continue;
            CycloNum p = ca * cb;
            auto it = r.c.find(k);
            if (it == r.c.end())
                r.c.emplace(k, std::move(p));
            else
                it->second = it->second + p;
        }
    r.drop_zeros_and_tail();
    return r;
}

FracLaurentSeries fls_scale(const FracLaurentSeries& a, const CycloNum& s) {
    FracLaurentSeries r = a;
    CycloNum sl = s;
    if (sl.level() != r.level) {
        int L = (int)std::lcm((long)sl.level(), (long)r.level);
        sl = cyclo_lift(sl, L);
        for (auto& [k, v] : r.c) v = cyclo_lift(v, L);
        r.level = L;
    }
    for (auto& [k, v] : r.c) v = v * sl;
    r.drop_zeros_and_tail();
    return r;
}

FracLaurentSeries fls_shift(const FracLaurentSeries& a, long ds) {
    FracLaurentSeries r;
    r.level = a.level;
    r.scale = a.scale;
    r.marker_pow = a.marker_pow;
    r.trunc = a.trunc + ds;
    for (const auto& [k, v] : a.c) r.c.emplace(k + ds, v);
    return r;
}

FracLaurentSeries fls_subst_pow(const FracLaurentSeries& a, long num, long den) {
    if (num <= 0 || den <= 0) throw std::invalid_argument("fls_subst_pow: bad exponent");
    FracLaurentSeries r;
    r.level = a.level;
    r.scale = a.scale;
    r.marker_pow = a.marker_pow;
    for (const auto& [k, v] : a.c) {
        long t = k * num;
        if (t % den != 0)
            throw std::invalid_argument("fls_subst_pow: non-integral exponent produced");
        r.c.emplace(t / den, v);
    }
    // exclusive bound maps to the smallest integer >= trunc*num/den
    long tn = a.trunc * num;
    r.trunc = tn >= 0 ? (tn + den - 1) / den : -((-tn) / den);
    return r;
}

FracLaurentSeries fls_inv(const FracLaurentSeries& a) {
    if (a.c.empty()) throw std::domain_error("fls_inv of zero series");
    long v = a.lead_exp();
    CycloNum lead_inv = a.lead_coeff().inv();
    // step size of the exponent lattice of a (relative to its lead)
    long g = 0;
    for (const auto& [k, c] : a.c) g = std::gcd(g, k - v);
    if (g == 0) g = a.trunc - v; // single term
    FracLaurentSeries r;
    r.level = a.level;
    r.scale = a.scale;
    r.marker_pow = -a.marker_pow;
    r.trunc = a.trunc - 2 * v;
    for (long j = -v; j < r.trunc; j += g) {
        // coefficient x_j from sum_{k>v} a_k x_{(v+j... ) } via (a*x)_n = [n==0]
        CycloNum s(a.level);
        bool any = false;
        for (const auto& [k, ak] : a.c) {
            if (k == v) continue;
            auto it = r.c.find(j - (k - v));
            if (it == r.c.end()) continue;
            s = s + ak * it->second;
            any = true;
        }
        CycloNum xj = j == -v ? lead_inv : (any ? -(s * lead_inv) : CycloNum(a.level));
        if (!xj.is_zero()) r.c.emplace(j, std::move(xj));
    }
    return r;
}

// --- Siegel units -----------------------------------------------------------------

namespace {

// a Siegel unit as lead shift * constant prefactor * prod (1 - zeta^j q^{e/D})
struct SiegelFactored {
    long lead = 0;
    CycloNum pre;
    std::vector<std::pair<long, long>> factors; // (scaled exponent e, zeta exponent j)
};

SiegelFactored siegel_factored(int N, int a1, int a2, long T_rel, int M, long D) {
    a1 = (int)mod_pos(a1, N);
    a2 = (int)mod_pos(a2, N);
    if (a1 == 0 && a2 == 0)
        throw std::invalid_argument("siegel_unit: torsion coordinate (0,0)");
    if (a2 != 0 && M % N != 0)
        throw std::invalid_argument("siegel_unit: level not divisible by N");
    long two_nsq = 2L * N * N;
    long bnum = D * (6L * a1 * a1 - 6L * a1 * N + (long)N * N);
    if (bnum % (12L * N * N) != 0)
        throw std::invalid_argument("siegel_unit: scale incompatible with B2 exponent");
    if ((D * a1) % N != 0)
        throw std::invalid_argument("siegel_unit: scale incompatible with z exponent");
    SiegelFactored f;
    f.lead = bnum / (12L * N * N);
    long pe = mod_pos((long)a2 * (a1 - N), two_nsq);
    long jphase = 0;
    if (pe != 0) {
        if (M % two_nsq != 0)
            throw std::invalid_argument("siegel_unit: level cannot hold the phase");
        jphase = (M / two_nsq) * pe;
    }
    f.pre = -cyclo_mul_zeta(CycloNum::one(M), jphase);
    long ez = (D * a1) / N;
    long jz = a2 == 0 ? 0 : (long)(M / N) * a2;
    f.factors.emplace_back(ez, jz); // the (1 - z) factor
    for (long n = 1;; ++n) {
        long e1 = n * D + ez, e2 = n * D - ez;
        if (e1 >= T_rel && e2 >= T_rel) break;
        if (e1 < T_rel) f.factors.emplace_back(e1, jz);
        if (e2 < T_rel) f.factors.emplace_back(e2, -jz);
    }
    return f;
}

// expand a product of factored units, truncated T_rel scaled units past the lead
FracLaurentSeries assemble(const std::vector<SiegelFactored>& parts, long T_rel, int M,
                           long D, int marker = 0) {
    FracLaurentSeries s;
    s.level = M;
    s.scale = D;
    s.trunc = T_rel;
    s.marker_pow = marker;
    CycloNum pre = CycloNum::one(M);
    long lead = 0;
    for (const auto& p : parts) {
        pre = pre * p.pre;
        lead += p.lead;
    }
    s.c.emplace(0, pre);
    for (const auto& p : parts)
        for (const auto& [e, j] : p.factors) {
            // multiply by (1 - zeta^j q^{e/D}) in place of a fresh copy
            std::map<long, CycloNum> out = s.c;
            for (const auto& [k, c] : s.c) {
                long t = k + e;
                if (t >= s.trunc) continue;
                CycloNum sub = cyclo_mul_zeta(c, j);
                auto it = out.find(t);
                if (it == out.end())
                    out.emplace(t, -sub);
                else
                    it->second = it->second - sub;
            }
            s.c = std::move(out);
            s.drop_zeros_and_tail();
        }
    return fls_shift(s, lead);
}

} // namespace

FracLaurentSeries siegel_unit(int N, int a1, int a2, int trunc_qorders, int level,
                              long scale) {
    if (trunc_qorders <= 0) throw std::invalid_argument("siegel_unit: prec must be positive");
    int M = level > 0 ? level : 2 * N * N;
    long D = scale > 0 ? scale : 12L * N * N;
    long T_rel = (long)trunc_qorders * D;
    auto f = siegel_factored(N, a1, a2, T_rel, M, D);
    return assemble({f}, T_rel, M, D);
}

FracLaurentSeries delta12(int trunc_qorders, long scale) {
    if (trunc_qorders <= 0) throw std::invalid_argument("delta12: prec must be positive");
    if (scale % 12 != 0) throw std::invalid_argument("delta12: scale must be divisible by 12");
    long D = scale;
    long T_rel = (long)trunc_qorders * D;
    SiegelFactored f;
    f.lead = D / 12;
    f.pre = CycloNum::one(1);
    for (long n = 1; n * D < T_rel; ++n) {
        f.factors.emplace_back(n * D, 0);
        f.factors.emplace_back(n * D, 0);
    }
    return assemble({f}, T_rel, 1, D, 1);
}

// --- distribution relations -------------------------------------------------------

// proportionality of two series by exact cross-multiplication of coefficients
static DistributionReport compare_proportional(const FracLaurentSeries& lhs0,
                                               const FracLaurentSeries& rhs0) {
    FracLaurentSeries lhs = lhs0, rhs = rhs0;
    fls_align(lhs, rhs);
    DistributionReport rep;
    rep.ratio = CycloNum::one(lhs.level);
    if (lhs.marker_pow != rhs.marker_pow) {
        rep.status = "fail";
        return rep;
    }
    long T = std::min(lhs.trunc, rhs.trunc);
    if (lhs.c.empty() || rhs.c.empty() || lhs.lead_exp() != rhs.lead_exp()) {
        rep.status = "fail";
        return rep;
    }
    const CycloNum cl = lhs.lead_coeff(), cr = rhs.lead_coeff();
    bool ok = true;
    int compared = 0;
    for (const auto& [k, v] : lhs.c) {
        if (k >= T) break;
        auto it = rhs.c.find(k);
        CycloNum rv = it == rhs.c.end() ? CycloNum(rhs.level) : it->second;
        if (!(v * cr == rv * cl)) ok = false;
        ++compared;
    }
    for (const auto& [k, v] : rhs.c) {
        if (k >= T) break;
        if (lhs.c.find(k) == lhs.c.end()) ok = false; // rhs has a term lhs lacks, ratio 0 needed
    }
    rep.compared_terms = compared - 1;
    rep.constant = ok;
    rep.ratio = cl * cr.inv();
    rep.root_of_unity = ok && is_root_of_unity(rep.ratio);
    double dev = 0;
    int M = rep.ratio.level();
    for (int k = 1; k <= M; ++k) {
        if (gcd_long(k, M) != 1) continue;
        cdd w = rep.ratio.embed(k);
        dd a2 = w.re * w.re + w.im * w.im;
        dev = std::max(dev, std::abs(dd_sqrt(a2).hi - 1.0));
    }
    rep.max_abs_dev = dev;
    if (rep.compared_terms < 3)
        rep.status = "inconclusive";
    else
        rep.status = (rep.constant && rep.root_of_unity) ? "ok" : "fail";
    return rep;
}

DistributionReport distribution_check_torsion(int m, int N, int t1, int t2,
                                              int trunc_qorders) {
    t1 = (int)mod_pos(t1, N);
    t2 = (int)mod_pos(t2, N);
    if (t1 == 0 && t2 == 0)
        throw std::invalid_argument("distribution_check_torsion: target must be nonzero");
    if (m < 1) throw std::invalid_argument("distribution_check_torsion: m must be >= 1");
    int N2 = m * N;
    int M = 2 * N2 * N2;
    long D = 12L * N2 * N2;
    long T_rel = (long)trunc_qorders * D;
    // preimages of (t1/N, t2/N) under the mu_m isogeny z -> z^m keep the
    // tau coordinate and split the second one: (t1/N, (t2 + jN)/(mN))
    std::vector<SiegelFactored> parts;
    for (int j = 0; j < m; ++j)
        parts.push_back(siegel_factored(N2, m * t1, t2 + j * N, T_rel, M, D));
    FracLaurentSeries lhs = assemble(parts, T_rel, M, D);
    FracLaurentSeries tgt = siegel_unit(N, t1, t2, trunc_qorders, M, D);
    FracLaurentSeries rhs = fls_subst_pow(tgt, m, 1);
    return compare_proportional(lhs, rhs);
}

DistributionReport distribution_check_zero(int m, int trunc_qorders) {
    if (m < 1) throw std::invalid_argument("distribution_check_zero: m must be >= 1");
    long D = 12L * m * m;
    if (m == 1) { // empty product against Delta/Delta: identically 1
        DistributionReport rep;
        rep.status = "ok";
        rep.constant = true;
        rep.root_of_unity = true;
        rep.compared_terms = trunc_qorders;
        rep.ratio = CycloNum::one(1);
        return rep;
    }
    long T_rel = (long)trunc_qorders * D;
    std::vector<SiegelFactored> parts;
    for (int j = 1; j < m; ++j) parts.push_back(siegel_factored(m, j, 0, T_rel, 1, D));
    FracLaurentSeries lhs = assemble(parts, T_rel, 1, D);
    FracLaurentSeries num = fls_subst_pow(delta12(trunc_qorders * m, D), 1, m);
    FracLaurentSeries den = delta12(trunc_qorders, D);
    FracLaurentSeries rhs = fls_mul(num, fls_inv(den));
    return compare_proportional(lhs, rhs);
}

CycloNum sp_cusp(const FracLaurentSeries& s) {
    if (s.c.empty()) throw std::domain_error("sp_cusp of zero series");
    if (s.marker_pow != 0)
        throw std::domain_error("sp_cusp: unevaluated transcendental marker");
    return s.lead_coeff();
}

SpSymbol sp_symbol(int a1, int a2, int den) {
    a1 = (int)mod_pos(a1, den);
    a2 = (int)mod_pos(a2, den);
    if (a1 == 0 && a2 == 0) throw std::invalid_argument("sp_symbol: zero torsion coordinate");
    SpSymbol r;
    if (a1 != 0) return r; // dies at the cusp
    r.zero = false;
    r.unit_label = std::min(a2, den - a2);
    return r;
}

CommuteSquareReport commute_square_check(int N, int a, int b) {
    a = (int)mod_pos(a, N);
    b = (int)mod_pos(b, N);
    if (a == 0 || b == 0 || a == b)
        throw std::invalid_argument("commute_square_check: need distinct nonzero labels");
    CommuteSquareReport rep;
    FracLaurentSeries ta = siegel_unit(N, 0, a, 8), tb = siegel_unit(N, 0, b, 8);
    FracLaurentSeries g = fls_mul(ta, fls_inv(tb));
    if (g.lead_exp() != 0) return rep; // v(g) must vanish for sp to act as value
    CycloNum gbar = sp_cusp(ta) * sp_cusp(tb).inv();
    rep.sp_g_matches = sp_cusp(g) == gbar;
    FracLaurentSeries one;
    one.level = g.level;
    one.scale = g.scale;
    one.trunc = g.trunc;
    one.c.emplace(0, CycloNum::one(g.level));
    FracLaurentSeries omg = fls_sub(one, g);
    CycloNum one_minus_gbar = CycloNum::one(g.level) - cyclo_lift(gbar, g.level);
    if (one_minus_gbar.is_zero())
        rep.sp_one_minus_g_matches = omg.is_zero() || omg.lead_exp() > 0;
    else
        rep.sp_one_minus_g_matches =
            omg.lead_exp() == 0 && sp_cusp(omg) == one_minus_gbar;
    // cusp values of the wedge slots are cyclotomic units up to torsion
    int M = ta.level;
    CycloNum ua = cyclo_lift(one_minus_zeta(N, a), M), ub = cyclo_lift(one_minus_zeta(N, b), M);
    rep.wedge_slots_root_of_unity = is_root_of_unity(sp_cusp(ta) * ua.inv()) &&
                                    is_root_of_unity(sp_cusp(tb) * ub.inv());
    rep.ok = rep.sp_g_matches && rep.sp_one_minus_g_matches && rep.wedge_slots_root_of_unity;
    return rep;
}

DistributionReport siegel_negation_check(int N, int a1, int a2, int trunc_qorders) {
    FracLaurentSeries s = siegel_unit(N, a1, a2, trunc_qorders);
    FracLaurentSeries sn = siegel_unit(N, -a1, -a2, trunc_qorders);
    return compare_proportional(sn, s);
}

// --- serialization ----------------------------------------------------------------

std::string fls_to_json(const FracLaurentSeries& s) {
    nlohmann::json j;
    j["level"] = s.level;
    j["scale"] = s.scale;
    j["trunc"] = s.trunc;
    j["marker_pow"] = s.marker_pow;
    auto arr = nlohmann::json::array();
    for (const auto& [k, v] : s.c) {
        auto coeffs = nlohmann::json::array();
        for (const auto& r : v.coeffs()) coeffs.push_back(rat_str(r));
        arr.push_back(nlohmann::json::array({k, coeffs}));
    }
    j["coeffs"] = arr;
    return j.dump(2);
}

FracLaurentSeries fls_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    FracLaurentSeries s;
    s.level = j.at("level").get<int>();
    s.scale = j.at("scale").get<long>();
    s.trunc = j.at("trunc").get<long>();
    s.marker_pow = j.value("marker_pow", 0);
    for (const auto& e : j.at("coeffs")) {
        long k = e.at(0).get<long>();
        std::vector<Rat> cs;
        for (const auto& rs : e.at(1)) {
            mpq_class q(rs.get<std::string>());
            q.canonicalize();
            cs.push_back(std::move(q));
        }
        s.c.emplace(k, CycloNum::from_coeffs(s.level, std::move(cs)));
    }
    s.drop_zeros_and_tail();
    return s;
}

} // namespace eulercx
