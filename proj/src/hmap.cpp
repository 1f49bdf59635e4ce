#include "eulercx/hmap.hpp"

#include "eulercx/bianchi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <set>
#include <string>

namespace eulercx {

namespace {

Proj3 proj_meet(const Proj3& l1, const Proj3& l2) {
    return Proj3{l1[1] * l2[2] - l1[2] * l2[1],
                 l1[2] * l2[0] - l1[0] * l2[2],
                 l1[0] * l2[1] - l1[1] * l2[0]};
}

// cross-ratio of four collinear projective points, evaluated on the best
// conditioned coordinate pair; sets `infinite` instead of dividing by zero
// (an infinite argument contributes {inf}_2 = 0), throws degenerate_wedge on
// an indeterminate 0/0
cdd proj_cross_ratio(const Proj3& p1, const Proj3& p2, const Proj3& p3,
                     const Proj3& p4, bool& infinite) {
    static const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    int bi = 0, bj = 1;
    double best = -1;
    for (const auto& pr : pairs) {
        double m = -1;
        for (const Proj3* p : {&p1, &p2, &p3, &p4}) {
            double v = to_double(cdd_abs((*p)[pr[0]])) + to_double(cdd_abs((*p)[pr[1]]));
            if (m < 0 || v < m) m = v;
        }
        if (m > best) { best = m; bi = pr[0]; bj = pr[1]; }
    }
    auto det = [&](const Proj3& u, const Proj3& v) {
        return u[bi] * v[bj] - u[bj] * v[bi];
    };
    cdd n1 = det(p1, p3), n2 = det(p2, p4);
    cdd d1 = det(p1, p4), d2 = det(p2, p3);
    double sc = 1e-300;
    for (const Proj3* p : {&p1, &p2, &p3, &p4})
        sc = std::max(sc, to_double(cdd_abs2((*p)[bi]) + cdd_abs2((*p)[bj])));
    cdd num = n1 * n2, den = d1 * d2;
    infinite = false;
    if (to_double(cdd_abs(den)) < 1e-22 * sc) {
        if (to_double(cdd_abs(num)) < 1e-22 * sc)
            throw degenerate_wedge("cross-ratio degenerates to 0/0 (concurrent lines)");
        infinite = true;
        return cdd(dd(0.0));
    }
    return num / den;
}

// h of the wedge of three affine chord sections l_i/Z: for each of the four
// lines (the Z line and the chords), cross-ratios of the three pairwise
// intersections against the divisor points of that line, with sign -(-1)^i
std::vector<std::pair<cdd, int>> h_elem_eval(
    const EllCurveC& E, const std::array<Proj3, 4>& lines,
    const std::array<std::array<LatticePt, 3>, 4>& divs) {
    std::vector<std::pair<cdd, int>> out;
    for (int i = 0; i < 4; ++i) {
        std::array<Proj3, 3> pts;
        int n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) pts[n++] = proj_meet(lines[i], lines[j]);
        int sign = (i % 2 == 0) ? -1 : 1;
        for (const auto& dpt : divs[i]) {
            Proj3 d = E.point(dpt);
            bool infinite = false;
            cdd r = proj_cross_ratio(pts[0], pts[1], pts[2], d, infinite);
            if (!infinite) out.emplace_back(r, sign);
        }
    }
    return out;
}

} // namespace

BlochSum h_rational(const cdd& a0, const cdd& a1, const cdd& a2, const cdd& a3) {
    cdd num = (a0 - a2) * (a1 - a3);
    cdd den = (a0 - a3) * (a1 - a2);
    BlochSum s;
    bloch_add(s, num / den, Rat(-1));
    return s;
}

int HCache::chord_id(const ChordLine& ch) {
    auto key = ch.key();
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (chord_incidence_residual(*E_, ch) > 1e-6)
        throw std::runtime_error("hmap: chord misses its predicted divisor points");
    int id = int(chords_.size());
    chords_.push_back({ch, chord_coeffs(*E_, ch)});
    ids_.emplace(key, id);
    return id;
}

const std::vector<std::pair<cdd, int>>& HCache::h_elem(int c1, int c2, int c3) {
    std::array<int, 3> k{c1, c2, c3};
    auto it = helems_.find(k);
    if (it != helems_.end()) return it->second;

    std::array<Proj3, 4> lines;
    lines[0] = Proj3{cdd(dd(0.0)), cdd(dd(0.0)), cdd(dd(1.0))};
    std::array<std::array<LatticePt, 3>, 4> divs;
    divs[0] = {lpt(0, 0), lpt(0, 0), lpt(0, 0)};
    for (int i = 0; i < 3; ++i) {
        lines[i + 1] = chords_[k[i]].coeffs;
        divs[i + 1] = chords_[k[i]].ch.divisor();
    }
    std::vector<std::pair<cdd, int>> out;
    try {
        out = h_elem_eval(*E_, lines, divs);
    } catch (const degenerate_wedge&) {
        // concurrent chord triple: evaluate the whole elementary wedge at a
        // deterministically perturbed nearby configuration; the summed h value
        // extends continuously across the concurrency locus even though the
        // individual cross-ratios do not
        auto plines = lines;
        for (int i = 1; i < 4; ++i) {
            double s = std::sqrt(to_double(cdd_abs2(plines[i][0]) + cdd_abs2(plines[i][1]) +
                                           cdd_abs2(plines[i][2])));
            plines[i][0] = plines[i][0] + cdd(s * 1e-12 * i, 0.0);
            plines[i][1] = plines[i][1] + cdd(0.0, s * 2e-12 * i);
        }
        try {
            out = h_elem_eval(*E_, plines, divs);
        } catch (const degenerate_wedge&) {
            throw std::runtime_error(
                "hmap: concurrent chord lines persist after perturbation");
        }
    }
    return helems_.emplace(k, std::move(out)).first->second;
}

BlochSum h_map(HCache& C, const ChordDecomp& f1, const ChordDecomp& f2,
               const ChordDecomp& f3) {
    std::vector<std::pair<int, int>> d1, d2, d3;
    for (const auto& [ch, e] : f1.terms) d1.emplace_back(C.chord_id(ch), e);
    for (const auto& [ch, e] : f2.terms) d2.emplace_back(C.chord_id(ch), e);
    for (const auto& [ch, e] : f3.terms) d3.emplace_back(C.chord_id(ch), e);
    BlochSum out;
    for (const auto& [i1, e1] : d1)
        for (const auto& [i2, e2] : d2)
            for (const auto& [i3, e3] : d3) {
                if (i1 == i2 || i1 == i3 || i2 == i3) continue;
                long coeff = long(e1) * e2 * e3;
                for (const auto& [z, s] : C.h_elem(i1, i2, i3))
                    bloch_add(out, z, Rat(coeff * s));
            }
    return out;
}

ChordDecomp f_ax(const LatticePt& a, const LatticePt& x, long N) {
    return divisor_decompose(difference_divisor(a, x, N));
}

WedgeSum res_wedge3(const EllCurveC& E, const ChordDecomp& f1, const ChordDecomp& f2,
                    const ChordDecomp& f3) {
    const ChordDecomp* fs[3] = {&f1, &f2, &f3};
    std::set<LatticePt> support;
    support.insert(lpt(0, 0));
    for (const auto* f : fs)
        for (const auto& [ch, e] : f->terms)
            for (const auto& t : ch.divisor()) support.insert(t);
    WedgeSum out;
    for (const auto& pt : support) {
        long v[3];
        bool trivial = true;
        for (int k = 0; k < 3; ++k) {
            v[k] = decomp_valuation(*fs[k], pt);
            if (v[k]) trivial = false;
        }
        if (trivial) continue;
        cdd w[3];
        for (int k = 0; k < 3; ++k) w[k] = decomp_lead(E, *fs[k], pt);
        if (v[0]) out.push_back({pt, w[1], w[2], -v[0]});
        if (v[1]) out.push_back({pt, w[0], w[2], v[1]});
        if (v[2]) out.push_back({pt, w[0], w[1], -v[2]});
    }
    return out;
}

double omega_pair(const cdd& u0, const cdd& um, const cdd& up, const cdd& v0,
                  const cdd& vm, const cdd& vp, double step) {
    double dav = to_double(cdd_arg(vp / vm)) / (2 * step);
    double dau = to_double(cdd_arg(up / um)) / (2 * step);
    return to_double(cdd_log_abs(u0)) * dav - to_double(cdd_log_abs(v0)) * dau;
}

double omega_wedge(const WedgeSum& w0, const WedgeSum& wm, const WedgeSum& wp,
                   double step) {
    if (w0.size() != wm.size() || w0.size() != wp.size())
        throw std::logic_error("omega_wedge: family members differ in support");
    double om = 0;
    for (std::size_t k = 0; k < w0.size(); ++k) {
        if (!(w0[k].at == wm[k].at) || !(w0[k].at == wp[k].at) ||
            w0[k].coef != wm[k].coef || w0[k].coef != wp[k].coef)
            throw std::logic_error("omega_wedge: family members differ in support");
        om += double(w0[k].coef) *
              omega_pair(w0[k].u, wm[k].u, wp[k].u, w0[k].v, wm[k].v, wp[k].v, step);
    }
    return om;
}

namespace {

BlochSum theta_slice(HCache& C, const std::array<LatticePt, 3>& bs, const LatticePt& x,
                     long M) {
    ChordDecomp d1 = f_ax(bs[0], x, M);
    ChordDecomp d2 = f_ax(bs[1], x, M);
    ChordDecomp d3 = f_ax(bs[2], x, M);
    return h_map(C, d1, d2, d3);
}

// common average kernel: sum over x in A of h(f_{b1,x} ^ f_{b2,x} ^ f_{b3,x})
// with level-M difference functions, scaled by -1/(M^3 |A|); slices are merged
// in the order of A, so the parallel and serial paths return identical sums
BlochSum theta_average(const EllCurveC& E, const std::array<LatticePt, 3>& bs,
                       const std::vector<LatticePt>& A, long M, bool parallel) {
    if (bs[0] == bs[1] || bs[0] == bs[2] || bs[1] == bs[2]) return {};
    std::vector<BlochSum> slices(A.size());
    auto skip = [&bs](const LatticePt& x) {
        return x == bs[0] || x == bs[1] || x == bs[2];
    };
#ifdef _OPENMP
    if (parallel) {
        std::exception_ptr err;
        #pragma omp parallel
        {
            HCache C(E);
            #pragma omp for schedule(dynamic)
            for (long k = 0; k < long(A.size()); ++k) {
                if (skip(A[k])) continue;
                try {
                    slices[k] = theta_slice(C, bs, A[k], M);
                } catch (...) {
                    #pragma omp critical
                    if (!err) err = std::current_exception();
                }
            }
        }
        if (err) std::rethrow_exception(err);
    } else
#else
    (void)parallel;
#endif
    {
        HCache C(E);
        for (std::size_t k = 0; k < A.size(); ++k) {
            if (skip(A[k])) continue;
            slices[k] = theta_slice(C, bs, A[k], M);
        }
    }
    Rat coef = rat(-1, M * M * M * long(A.size()));
    BlochSum out;
    for (const auto& s : slices)
        for (const auto& t : s) bloch_add(out, t.arg, coef * t.coef);
    return out;
}

std::vector<LatticePt> full_grid(long N) {
    std::vector<LatticePt> A;
    A.reserve(std::size_t(N) * N);
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) A.push_back(lpt(rat(i, N), rat(j, N)));
    return A;
}

std::vector<LatticePt> cyclic_orbit(const LatticePt& p, long N) {
    std::vector<LatticePt> A;
    A.reserve(std::size_t(N));
    for (long k = 0; k < N; ++k) A.push_back(lpt_mul(k, p));
    return A;
}

} // namespace

BlochSum theta_colon(const EllCurveC& E, const LatticePt& b1, const LatticePt& b2,
                     const LatticePt& b3, long N) {
    E.precompute(N);
    return theta_average(E, {b1, b2, b3}, full_grid(N), N, true);
}

BlochSum theta_colon_serial(const EllCurveC& E, const LatticePt& b1,
                            const LatticePt& b2, const LatticePt& b3, long N) {
    return theta_average(E, {b1, b2, b3}, full_grid(N), N, false);
}

BlochSum theta_colon_level(const EllCurveC& E, const LatticePt& b1,
                           const LatticePt& b2, const LatticePt& b3, long N, long M) {
    return theta_average(E, {b1, b2, b3}, full_grid(N), M, false);
}

BlochSum theta_cyclic(const EllCurveC& E, const LatticePt& p, long c1, long c2,
                      long c3, long N) {
    E.precompute(N);
    return theta_average(E, {lpt_mul(c1, p), lpt_mul(c2, p), lpt_mul(c3, p)},
                         cyclic_orbit(p, N), N, true);
}

BlochSum theta_cyclic_serial(const EllCurveC& E, const LatticePt& p, long c1, long c2,
                             long c3, long N) {
    return theta_average(E, {lpt_mul(c1, p), lpt_mul(c2, p), lpt_mul(c3, p)},
                         cyclic_orbit(p, N), N, false);
}

BlochSum theta_triple(const EllCurveC& E, const LatticePt& a1, const LatticePt& a2,
                      const LatticePt& a3, long N) {
    if (!lpt_is_zero(lpt_add(lpt_add(a1, a2), a3)))
        throw std::invalid_argument("theta_triple: arguments must sum to zero");
    return theta_colon(E, lpt(0, 0), a1, lpt_add(a1, a2), N);
}

BlochSum theta_triple_serial(const EllCurveC& E, const LatticePt& a1,
                             const LatticePt& a2, const LatticePt& a3, long N) {
    if (!lpt_is_zero(lpt_add(lpt_add(a1, a2), a3)))
        throw std::invalid_argument("theta_triple: arguments must sum to zero");
    return theta_colon_serial(E, lpt(0, 0), a1, lpt_add(a1, a2), N);
}

FamilyCheck verify_delta_22_10(long N, cdd tau0, double step) {
    LatticePt p = lpt(rat(1, N), 0), q = lpt(0, rat(1, N));
    LatticePt r = lpt_neg(lpt_add(p, q));
    cdd dirn = cdd_exp(cdd(0.0, 0.7));
    auto theta_at = [&](double t) {
        EllCurveC E(tau0 + cdd(t) * dirn);
        return eval_L2(theta_triple(E, p, q, r, N));
    };
    double Lp = theta_at(step), Lm = theta_at(-step);

    std::array<LatticePt, 3> pts{p, q, r};
    std::array<std::array<cdd, 3>, 3> u; // [family member -,0,+][point]
    double ts[3] = {-step, 0.0, step};
    for (int m = 0; m < 3; ++m) {
        EllCurveC E(tau0 + cdd(ts[m]) * dirn);
        for (int i = 0; i < 3; ++i) u[m][i] = E.siegel_value(pts[i]);
    }
    static const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    double om = 0;
    for (const auto& pr : pairs)
        om += omega_pair(u[1][pr[0]], u[0][pr[0]], u[2][pr[0]],
                         u[1][pr[1]], u[0][pr[1]], u[2][pr[1]], step);
    double deriv = (Lp - Lm) / (2 * step);
    return FamilyCheck{deriv, om, std::abs(deriv - om)};
}

FamilyCheck verify_reciprocity(cdd tau0, double step, const std::array<LatticePt, 3>& a,
                               const LatticePt& x, long N) {
    cdd dirn = cdd_exp(cdd(0.0, 0.7));
    double hv[3];
    WedgeSum res[3];
    double ts[3] = {-step, 0.0, step};
    for (int m = 0; m < 3; ++m) {
        EllCurveC E(tau0 + cdd(ts[m]) * dirn);
        ChordDecomp d1 = f_ax(a[0], x, N);
        ChordDecomp d2 = f_ax(a[1], x, N);
        ChordDecomp d3 = f_ax(a[2], x, N);
        HCache C(E);
        hv[m] = eval_L2(h_map(C, d1, d2, d3));
        res[m] = res_wedge3(E, d1, d2, d3);
    }
    double deriv = (hv[2] - hv[0]) / (2 * step);
    double om = omega_wedge(res[1], res[0], res[2], step);
    return FamilyCheck{deriv, om, std::abs(deriv + om)};
}

FamilyCheck verify_reciprocity(cdd tau0, double step) {
    std::array<LatticePt, 3> a{lpt(rat(1, 3), 0), lpt(0, rat(1, 3)),
                               lpt(rat(1, 3), rat(1, 3))};
    return verify_reciprocity(tau0, step, a, lpt(rat(2, 3), rat(1, 3)), 3);
}

std::vector<DegenerationRow> degeneration_check(long N, long a1, long a2,
                                                const std::vector<double>& heights) {
    std::vector<DegenerationRow> rows;
    for (double h : heights) {
        EllCurveC E(cdd(0.0, h));
        // the triple lies in the cyclic group of (1/N, 0), so the one-index
        // average applies; it stays numerically separated as q -> 0, where the
        // full E[N] grid collapses onto the node of the limiting cubic
        double tv = eval_L2(theta_cyclic(E, lpt(rat(1, N), 0), 0, a1, a1 + a2, N));
        double lv = 0;
        if (a1 % N != 0 && a2 % N != 0) {
            std::complex<double> z1 = std::polar(1.0, 2 * M_PI * double(a1) / double(N));
            std::complex<double> z2 = std::polar(1.0, 2 * M_PI * double(a2) / double(N));
            lv = li11_L2(z1, z2);
        }
        rows.push_back({h, tv, lv, std::abs(tv - lv)});
    }
    return rows;
}

// ---- theta images of the Bianchi polyhedron boundaries over the CM curve ----

namespace {

long numeric_rank(std::vector<std::vector<double>> M, double tol) {
    if (M.empty() || M[0].empty()) return 0;
    std::size_t rows = M.size(), cols = M[0].size();
    double scale = 1;
    for (const auto& r : M)
        for (double v : r) scale = std::max(scale, std::abs(v));
    double thr = tol * scale;
    long rank = 0;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols && lead < rows; ++c) {
        std::size_t piv = lead;
        for (std::size_t r = lead + 1; r < rows; ++r)
            if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        if (std::abs(M[piv][c]) <= thr) continue;
        std::swap(M[piv], M[lead]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == lead) continue;
            double f = M[r][c] / M[lead][c];
            for (std::size_t cc = c; cc < cols; ++cc) M[r][cc] -= f * M[lead][cc];
        }
        ++lead;
        ++rank;
    }
    return rank;
}

// theta evaluation over the CM curve of the field: each triangle label triple
// maps to torsion points of the residue field, cyclic one-index averages when
// the residue field is F_p, full E[p] averages in the inert case
struct CmThetaPipeline {
    BianchiComplex bc;
    EllCurveC E;
    long N = 0;
    bool cyclic = false;
    LatticePt p0{Rat(0), Rat(0)};
    std::map<std::string, BlochSum> cache;

    CmThetaPipeline(int d, const ImagQuadInt& gen)
        : bc(build_bianchi_complex(d, gen, "full-units", true, true)),
          E(d == 1 ? cdd(dd(0.0), dd(1.0)) : cdd(dd(0.5), dd_sqrt(dd(3.0)) / dd(2.0))) {
        if (!bc.ctx.prime)
            throw std::invalid_argument("alpha_kp: prime level required");
        cyclic = bc.ctx.P.field_is_fp;
        N = cyclic ? bc.ctx.P.norm : bc.ctx.P.p;
        p0 = torsion({1, 0});
        E.precompute(N);
    }

    // the q-torsion point z = r * conj(gen) / q of the CM curve (split and
    // ramified levels), resp. (x + y w)/p (inert levels)
    LatticePt torsion(Res r) const {
        const PrimeIdeal& P = bc.ctx.P;
        if (P.field_is_fp) {
            long q = P.norm, A = P.gen.a, B = P.gen.b;
            if (bc.ctx.d == 1) return lpt(rat(r.first * A, q), rat(-r.first * B, q));
            return lpt(rat(r.first * (A + B), q), rat(-r.first * B, q));
        }
        return lpt(rat(r.first, P.p), rat(r.second, P.p));
    }

    const BlochSum& theta_of(Res x, Res y, Res z) {
        std::string key = bianchi_tri_key(x, y, z);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        BlochSum th = cyclic
                          ? theta_cyclic(E, p0, x.first, y.first, z.first, N)
                          : theta_colon(E, torsion(x), torsion(y), torsion(z), N);
        return cache.emplace(key, std::move(th)).first->second;
    }

    // theta image of the boundary of polyhedron coset g, twisted by m
    BlochSum element(std::size_t g, Res m) {
        BlochSum out;
        for (std::size_t t = 0; t < bc.tri.dim(); ++t) {
            Rat c = bc.d0[t][g];
            if (c == 0) continue;
            auto [x, y, z] = bianchi_parse_tri(bc.tri.basis()[t]);
            const BlochSum& th =
                theta_of(bc.ctx.mul(m, x), bc.ctx.mul(m, y), bc.ctx.mul(m, z));
            for (const auto& term : th) bloch_add(out, term.arg, c * term.coef);
        }
        return out;
    }
};

} // namespace

AlphaReport alpha_kp(int d, const ImagQuadInt& gen) {
    CmThetaPipeline pl(d, gen);
    AlphaReport rep;
    std::size_t G = pl.bc.poly.dim();
    Res one = pl.bc.ctx.reduce_int(1);
    double cycle = 0;
    for (std::size_t g = 0; g < G; ++g) {
        rep.elements.push_back(pl.element(g, one));
        cycle += eval_L2(rep.elements.back());
    }
    rep.cycle_residual = std::abs(cycle);
    std::vector<std::vector<double>> M(G);
    for (std::size_t g = 0; g < G; ++g)
        for (const auto& m : pl.bc.labels) M[g].push_back(eval_L2(pl.element(g, m)));
    rep.rank = numeric_rank(std::move(M), 1e-7);
    return rep;
}

ConjectureReport conjecture_experiment(int d, const ImagQuadInt& gen) {
    CmThetaPipeline pl(d, gen);
    ConjectureReport rep;
    Res zero = pl.bc.ctx.reduce_int(0), one = pl.bc.ctx.reduce_int(1);
    auto [idx, sgn] = pl.bc.poly.project(bianchi_edge_key(zero, one));
    (void)sgn;
    if (idx < 0) return rep;
    for (const auto& m : pl.bc.labels)
        rep.residuals.push_back(std::abs(eval_L2(pl.element(std::size_t(idx), m))));
    for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
    return rep;
}

} // namespace eulercx
