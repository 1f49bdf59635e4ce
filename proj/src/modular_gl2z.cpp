#include "eulercx/modular_gl2z.hpp"

#include "eulercx/qseries.hpp"
#include "nlohmann/json.hpp"

#include <array>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace eulercx {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

std::string tri_key(int N, long c, long d) {
    long e = mod_pos(-c - d, N);
    std::ostringstream os;
    os << mod_pos(c, N) << "," << mod_pos(d, N) << "," << e;
    return os.str();
}

std::string edge_key(int N, long c, long d) {
    std::ostringstream os;
    os << mod_pos(c, N) << "," << mod_pos(d, N);
    return os.str();
}

std::array<long, 3> parse3(const std::string& k) {
    std::array<long, 3> v{};
    sscanf(k.c_str(), "%ld,%ld,%ld", &v[0], &v[1], &v[2]);
    return v;
}

std::array<long, 2> parse2(const std::string& k) {
    std::array<long, 2> v{};
    sscanf(k.c_str(), "%ld,%ld", &v[0], &v[1]);
    return v;
}

// cusp coordinate: [b,0] fills 0..m-1, [0,b] fills m..2m-1
int cusp_index(int N, long b, bool second_block) {
    int f = unit_label((int)mod_pos(b, N), N);
    int m = (N - 1) / 2;
    return (second_block ? m : 0) + f - 1;
}

void add_edge_boundary(const ModularComplex& mc, const std::string& ekey, const Rat& w,
                       Vec& cusp_acc) {
    auto [c, d] = parse2(ekey);
    int N = mc.N;
    if (c != 0 && d != 0) {
        cusp_acc[cusp_index(N, c, true)] += w;
        cusp_acc[cusp_index(N, d, true)] -= w;
    } else if (c == 0) {
        cusp_acc[cusp_index(N, d, false)] -= w;
        cusp_acc[cusp_index(N, d, true)] += w;
    } else { // d == 0
        cusp_acc[cusp_index(N, c, false)] += w;
        cusp_acc[cusp_index(N, c, true)] -= w;
    }
}

} // namespace

ModularComplex build_gamma1_complex(int N, const std::string& mode, bool with_cusp) {
    if (N < 3) throw std::invalid_argument("build_gamma1_complex: level must be >= 3");
    bool full_units = mode == "full-units";
    if (!full_units && mode != "diagonal")
        throw std::invalid_argument("build_gamma1_complex: unknown mode " + mode);
    ModularComplex mc;
    mc.N = N;
    mc.full_units = full_units;
    bool prime = is_prime(N);
    if (with_cusp && !prime)
        throw std::invalid_argument(
            "build_gamma1_complex: cusp degree is only supported at prime level");
    mc.has_cusp = with_cusp && prime;
    mc.m = (N - 1) / 2;

    // collect generators
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (gcd_long(gcd_long(c, d), N) != 1) continue;
            mc.edge.add_key(edge_key(N, c, d));
            mc.tri.add_key(tri_key(N, c, d));
        }
    // relations
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (gcd_long(gcd_long(c, d), N) != 1) continue;
            std::string e = edge_key(N, c, d);
            mc.edge.relate(e, edge_key(N, d, c), -1);
            if (full_units) {
                mc.edge.relate(e, edge_key(N, -c, d), 1);
                mc.edge.relate(e, edge_key(N, c, -d), 1);
            } else {
                mc.edge.relate(e, edge_key(N, -c, -d), 1);
            }
            long ee = mod_pos(-c - d, N);
            std::string t = tri_key(N, c, d);
            mc.tri.relate(t, tri_key(N, d, c), -1);  // swap first two slots
            mc.tri.relate(t, tri_key(N, c, ee), -1); // swap last two slots
            mc.tri.relate(t, tri_key(N, -c, -d), 1); // global negation
        }
    mc.edge.freeze();
    mc.tri.freeze();

    // triangle boundary (c,d,e) -> (c,d) + (d,e) + (e,c)
    std::size_t ed = mc.edge.dim(), td = mc.tri.dim();
    mc.d1.assign(ed, Vec(td, Rat(0)));
    for (std::size_t j = 0; j < td; ++j) {
        auto [c, d, e] = parse3(mc.tri.basis()[j]);
        std::array<std::pair<long, long>, 3> sides{{{c, d}, {d, e}, {e, c}}};
        for (auto [a, b] : sides) {
            auto [idx, sgn] = mc.edge.project(edge_key(N, a, b));
            if (idx >= 0) mc.d1[idx][j] += sgn;
        }
    }

    if (mc.has_cusp) {
        std::size_t cd = (std::size_t)(N - 1);
        mc.d2.assign(cd, Vec(ed, Rat(0)));
        for (std::size_t j = 0; j < ed; ++j) {
            Vec col(cd, Rat(0));
            add_edge_boundary(mc, mc.edge.basis()[j], Rat(1), col);
            for (std::size_t i = 0; i < cd; ++i) mc.d2[i][j] = col[i];
        }
    }
    return mc;
}

bool chain_check(const ModularComplex& mc) {
    if (!mc.has_cusp) return true;
    Mat z = mat_mul(mc.d2, mc.d1);
    for (const auto& row : z)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

long dim_s2_gamma1_prime(int p) {
    if (!is_prime(p)) throw std::invalid_argument("dim_s2_gamma1_prime: prime required");
    if (p < 5) return 0;
    long v = (long)(p - 5) * (p - 7);
    if (v % 24 != 0) throw std::logic_error("dim_s2_gamma1_prime: non-integral value");
    return v / 24;
}

std::size_t h1_cusp_dim(int p) {
    if (!is_prime(p) || p < 3) throw std::invalid_argument("h1_cusp_dim: prime >= 3 required");
    ModularComplex mc = build_gamma1_complex(p);
    std::size_t ker = mc.edge.dim() - mat_rank(mc.d2);
    std::size_t im = mat_rank(mc.d1);
    if (im > ker) throw std::logic_error("h1_cusp_dim: boundary image escapes kernel");
    return ker - im;
}

// --- cyclotomic side ---------------------------------------------------------------

namespace {

// index of basis pair (i,j), 0 <= i < j <= m, in lexicographic order
std::size_t pair_index(int i, int j, int m) {
    // pairs starting at i: (i,i+1)..(i,m); offset = sum_{t<i} (m-t)
    std::size_t off = 0;
    for (int t = 0; t < i; ++t) off += (std::size_t)(m - t);
    return off + (std::size_t)(j - i - 1);
}

// wedge of two hat vectors into coordinates
Vec hat_wedge(const Vec& v, const Vec& w, int m) {
    std::size_t n = (std::size_t)(m + 1) * m / 2;
    Vec r(n, Rat(0));
    for (int i = 0; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) r[pair_index(i, j, m)] = v[i] * w[j] - v[j] * w[i];
    return r;
}

Vec hat_vector(int c, int N) {
    int m = N / 2;
    Vec v(m + 1, Rat(0));
    v[0] = Rat(1, 12); // kappa, the leading-exponent weight of the unit expansion
    int f = unit_label(mod_pos(c, N), N);
    if (f > 0) v[f] += 1;
    return v;
}

} // namespace

CyclotomicSquare build_cyclotomic_map(const ModularComplex& mc) {
    int N = mc.N;
    CyclotomicSquare sq;
    sq.N = N;
    sq.m = N / 2;

    // formal triple-symbol presentation: same generators and relations as the
    // triangle module (sum-zero triples, alternating, negation-invariant)
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (gcd_long(gcd_long(c, d), N) != 1) continue;
            sq.sym.add_key(tri_key(N, c, d));
        }
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (gcd_long(gcd_long(c, d), N) != 1) continue;
            long e = mod_pos(-c - d, N);
            std::string t = tri_key(N, c, d);
            sq.sym.relate(t, tri_key(N, d, c), -1);
            sq.sym.relate(t, tri_key(N, c, e), -1);
            sq.sym.relate(t, tri_key(N, -c, -d), 1);
        }
    sq.sym.freeze();

    std::size_t td = mc.tri.dim(), ed = mc.edge.dim(), sd = sq.sym.dim();
    std::size_t wd = sq.wedgehat_dim();

    // degree 1: triangle (a1,a2,a3) -> symbol t(a1,a2,a3)
    sq.deg1.assign(sd, Vec(td, Rat(0)));
    for (std::size_t j = 0; j < td; ++j) {
        auto [idx, sgn] = sq.sym.project(mc.tri.basis()[j]);
        if (idx >= 0) sq.deg1[idx][j] += sgn;
    }

    // degree 2: edge (c,d) -> h(c) ^ h(d)
    sq.deg2.assign(wd, Vec(ed, Rat(0)));
    for (std::size_t j = 0; j < ed; ++j) {
        auto [c, d] = parse2(mc.edge.basis()[j]);
        Vec w = hat_wedge(hat_vector((int)c, N), hat_vector((int)d, N), sq.m);
        for (std::size_t i = 0; i < wd; ++i) sq.deg2[i][j] = w[i];
    }

    // coboundary of a symbol: the cyclic wedge, via the two-parameter closed
    // form (basis representatives have nonzero pairwise-distinct slots, so the
    // closed form applies)
    sq.delta2.assign(wd, Vec(sd, Rat(0)));
    for (std::size_t j = 0; j < sd; ++j) {
        auto [a1, a2, a3] = parse3(sq.sym.basis()[j]);
        (void)a3;
        Wedge2 w = coproduct_pair(N, (int)a1, (int)a2);
        for (const auto& [ij, coef] : w)
            sq.delta2[pair_index(ij.first, ij.second, sq.m)][j] += coef;
    }
    return sq;
}

bool cyclotomic_square_commutes(const ModularComplex& mc, const CyclotomicSquare& sq) {
    Mat lhs = mat_mul(sq.deg2, mc.d1);
    Mat rhs = mat_mul(sq.delta2, sq.deg1);
    return lhs == rhs;
}

bool diamond_intertwines(const ModularComplex& mc, const CyclotomicSquare& sq) {
    int N = mc.N, m = sq.m;
    std::size_t ed = mc.edge.dim(), cd = sq.sym.dim(), wd = sq.wedgehat_dim();
    for (int a = 1; a < N; ++a) {
        if (gcd_long(a, N) != 1) continue;
        // edge permutation (c,d) -> (ac, ad)
        Mat P(ed, Vec(ed, Rat(0)));
        for (std::size_t j = 0; j < ed; ++j) {
            auto [c, d] = parse2(mc.edge.basis()[j]);
            auto [idx, sgn] = mc.edge.project(edge_key(N, a * c, a * d));
            if (idx >= 0) P[idx][j] += sgn;
        }
        // induced map on the hat wedge: u(x) -> u(|ax|), qhat fixed
        Mat Q(wd, Vec(wd, Rat(0)));
        auto image = [&](int i) { return i == 0 ? 0 : unit_label(mod_pos((long)a * i, N), N); };
        for (int i = 0; i <= m; ++i)
            for (int j = i + 1; j <= m; ++j) {
                int ii = image(i), jj = image(j);
                int sgn = 1;
                if (ii > jj) {
                    std::swap(ii, jj);
                    sgn = -1;
                }
                if (ii == jj) continue; // wedge collapses
                Q[pair_index(ii, jj, m)][pair_index(i, j, m)] += sgn;
            }
        if (mat_mul(sq.deg2, P) != mat_mul(Q, sq.deg2)) return false;
        // symbol scaling t(a1,a2,a3) -> t(a*a1, a*a2, a*a3)
        Mat R(cd, Vec(cd, Rat(0)));
        for (std::size_t j = 0; j < cd; ++j) {
            auto [a1, a2, a3] = parse3(sq.sym.basis()[j]);
            (void)a3;
            auto [idx, sgn] = sq.sym.project(tri_key(N, a * a1, a * a2));
            if (idx >= 0) R[idx][j] += sgn;
        }
        if (mat_mul(sq.delta2, R) != mat_mul(Q, sq.delta2)) return false;
    }
    return true;
}

IsoReport verify_iso_prime(int p, const std::string& mode) {
    if (!is_prime(p) || p < 3)
        throw std::invalid_argument("verify_iso_prime: prime level >= 3 required");
    ModularComplex mc = build_gamma1_complex(p, mode);
    CyclotomicSquare sq = build_cyclotomic_map(mc);
    IsoReport r;
    r.p = p;
    r.edge_dim = mc.edge.dim();
    r.wedgehat_dim = sq.wedgehat_dim();
    r.deg2_bijective =
        r.edge_dim == r.wedgehat_dim && mat_rank(sq.deg2) == r.wedgehat_dim;
    r.tri_dim = mc.tri.dim();
    r.sym_dim = sq.sym.dim();
    std::size_t rank1 = mat_rank(sq.deg1);
    r.deg1_surjective = rank1 == r.sym_dim;
    r.deg1_formal_kernel = r.tri_dim - rank1;
    r.imported_k3_dim = (std::size_t)(p - 1) / 2;
    return r;
}

bool euler_specialization_check(int N) {
    ModularComplex mc = build_gamma1_complex(N, "full-units", false);
    for (std::size_t j = 0; j < mc.edge.dim(); ++j) {
        auto [c, d] = parse2(mc.edge.basis()[j]);
        for (long slot : {c, d}) {
            if (slot == 0) continue; // formal zero symbol, no expansion exists
            FracLaurentSeries s = siegel_unit(N, 0, (int)slot, 3);
            // leading exponent encodes kappa = 1/12 exactly
            if (s.lead_exp() * 12 != s.scale) return false;
            // cusp value is the cyclotomic unit of the folded label, up to torsion
            int f = unit_label((int)mod_pos(slot, N), N);
            CycloNum unit = cyclo_lift(one_minus_zeta(N, f), s.level);
            if (!is_root_of_unity(sp_cusp(s) * unit.inv())) return false;
        }
    }
    return true;
}

// --- unit label spaces -------------------------------------------------------------

std::size_t cyclo_unit_label_dim(int N, bool distribution) {
    if (N < 2) throw std::invalid_argument("cyclo_unit_label_dim: level must be >= 2");
    if (!distribution) return (std::size_t)N / 2;
    // variables: (M, folded label) for M | N, M >= 2
    std::vector<std::pair<int, int>> vars;
    auto var_index = [&](int M, int lab) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == std::pair(M, lab)) return (long)i;
        return -1L;
    };
    for (int M = 2; M <= N; ++M) {
        if (N % M != 0) continue;
        for (int lab = 1; lab <= M / 2; ++lab) vars.emplace_back(M, lab);
    }
    Mat rel;
    for (int M = 2; M < N; ++M) {
        if (N % M != 0) continue;
        for (int beta = 1; beta < M; ++beta) {
            Vec row(vars.size(), Rat(0));
            for (int alpha = beta; alpha < N; alpha += M) {
                if (alpha == 0) continue;
                row[var_index(N, unit_label(alpha, N))] += 1;
            }
            row[var_index(M, unit_label(beta, M))] -= 1;
            rel.push_back(std::move(row));
        }
    }
    return vars.size() - mat_rank(rel);
}

// --- full level --------------------------------------------------------------------

namespace {

using M2 = std::array<long, 4>; // row-major (a b; c d)

M2 m2_mul(const M2& x, const M2& y, int N) {
    return {mod_pos(x[0] * y[0] + x[1] * y[2], N), mod_pos(x[0] * y[1] + x[1] * y[3], N),
            mod_pos(x[2] * y[0] + x[3] * y[2], N), mod_pos(x[2] * y[1] + x[3] * y[3], N)};
}

std::string m2_key(const M2& g) {
    std::ostringstream os;
    os << g[0] << "," << g[1] << "," << g[2] << "," << g[3];
    return os.str();
}

M2 m2_parse(const std::string& k) {
    M2 g{};
    sscanf(k.c_str(), "%ld,%ld,%ld,%ld", &g[0], &g[1], &g[2], &g[3]);
    return g;
}

// the order-3 rotation used by the triangle boundary
const M2 kRot{0, -1, 1, -1};

// the two right-action groups with their sign characters
std::vector<std::pair<M2, int>> edge_group(int N) {
    std::vector<std::pair<M2, int>> g;
    for (long s : {1L, -1L}) {
        g.push_back({{mod_pos(s, N), 0, 0, mod_pos(s, N)}, 1});        // +-I
        g.push_back({{mod_pos(s, N), 0, 0, mod_pos(-s, N)}, 1});       // +-J
        g.push_back({{0, mod_pos(s, N), mod_pos(s, N), 0}, -1});       // +-S
        g.push_back({{0, mod_pos(-s, N), mod_pos(s, N), 0}, -1});      // +-SJ
    }
    return g;
}

std::vector<std::pair<M2, int>> tri_group(int N) {
    std::vector<std::pair<M2, int>> g;
    M2 rot{mod_pos(kRot[0], N), mod_pos(kRot[1], N), mod_pos(kRot[2], N), mod_pos(kRot[3], N)};
    M2 swp{0, 1, 1, 0};
    for (long s : {1L, -1L}) {
        M2 base{mod_pos(s, N), 0, 0, mod_pos(s, N)};
        M2 a = base;
        for (int k = 0; k < 3; ++k) {
            g.push_back({a, 1});                 // +-rot^k, even
            g.push_back({m2_mul(a, swp, N), -1}); // +-rot^k * swap, odd
            a = m2_mul(a, rot, N);
        }
    }
    return g;
}

} // namespace

FullLevelComplex build_full_level(int N) {
    if (N < 3) throw std::invalid_argument("build_full_level: level must be >= 3");
    FullLevelComplex fl;
    fl.N = N;
    std::vector<M2> gens;
    for (long a = 0; a < N; ++a)
        for (long b = 0; b < N; ++b)
            for (long c = 0; c < N; ++c)
                for (long d = 0; d < N; ++d) {
                    long det = mod_pos(a * d - b * c, N);
                    if (det != 1 && det != mod_pos(-1, N)) continue;
                    gens.push_back({a, b, c, d});
                }
    for (const auto& g : gens) {
        fl.edge.add_key(m2_key(g));
        fl.tri.add_key(m2_key(g));
    }
    auto eg = edge_group(N);
    auto tg = tri_group(N);
    for (const auto& g : gens) {
        std::string k = m2_key(g);
        for (const auto& [h, sgn] : eg) fl.edge.relate(k, m2_key(m2_mul(g, h, N)), sgn);
        for (const auto& [h, sgn] : tg) fl.tri.relate(k, m2_key(m2_mul(g, h, N)), sgn);
    }
    fl.edge.freeze();
    fl.tri.freeze();
    std::size_t ed = fl.edge.dim(), td = fl.tri.dim();
    fl.d1.assign(ed, Vec(td, Rat(0)));
    M2 rotN{mod_pos(kRot[0], N), mod_pos(kRot[1], N), mod_pos(kRot[2], N), mod_pos(kRot[3], N)};
    for (std::size_t j = 0; j < td; ++j) {
        M2 g = m2_parse(fl.tri.basis()[j]);
        M2 a = g;
        for (int k = 0; k < 3; ++k) {
            auto [idx, sgn] = fl.edge.project(m2_key(a));
            if (idx >= 0) fl.d1[idx][j] += sgn;
            a = m2_mul(a, rotN, N);
        }
    }
    return fl;
}

bool full_level_surjection_check(const FullLevelComplex& fl, const ModularComplex& mc) {
    if (fl.N != mc.N) throw std::invalid_argument("full_level_surjection_check: level mismatch");
    int N = fl.N;
    std::size_t fe = fl.edge.dim(), ft = fl.tri.dim();
    std::size_t ge = mc.edge.dim(), gt = mc.tri.dim();
    // bottom-row projections
    Mat Pe(ge, Vec(fe, Rat(0))), Pt(gt, Vec(ft, Rat(0)));
    for (std::size_t j = 0; j < fe; ++j) {
        M2 g = m2_parse(fl.edge.basis()[j]);
        auto [idx, sgn] = mc.edge.project(edge_key(N, g[2], g[3]));
        if (idx >= 0) Pe[idx][j] += sgn;
    }
    for (std::size_t j = 0; j < ft; ++j) {
        M2 g = m2_parse(fl.tri.basis()[j]);
        auto [idx, sgn] = mc.tri.project(tri_key(N, g[2], g[3]));
        if (idx >= 0) Pt[idx][j] += sgn;
    }
    // assemble d1 * Pt with explicit shape; mat_mul cannot infer the width
    // of the product when the triangle module is zero-dimensional
    Mat rhs(ge, Vec(ft, Rat(0)));
    for (std::size_t i = 0; i < ge; ++i)
        for (std::size_t t = 0; t < gt; ++t) {
            if (mc.d1[i][t] == 0) continue;
            for (std::size_t j = 0; j < ft; ++j) rhs[i][j] += mc.d1[i][t] * Pt[t][j];
        }
    if (mat_mul(Pe, fl.d1) != rhs) return false;
    return mat_rank(Pe) == ge && mat_rank(Pt) == gt;
}

std::string modular_report_json(int p, const std::string& mode) {
    ModularComplex mc = build_gamma1_complex(p, mode);
    nlohmann::json j;
    j["level"] = p;
    j["mode"] = mode;
    j["dims"] = {{"tri", mc.tri.dim()}, {"edge", mc.edge.dim()}, {"cusp", p - 1}};
    j["h1_cusp"] = h1_cusp_dim(p);
    j["coker"] = conclusion1_coker(p);
    j["s2_dim_oracle"] = dim_s2_gamma1_prime(p);
    return j.dump(2);
}

} // namespace eulercx
