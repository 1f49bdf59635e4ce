#include "eulercx/bianchi.hpp"

#include "nlohmann/json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace eulercx {

namespace {

using M4 = std::array<ImagQuadInt, 4>;

ImagQuadInt iq(int d, long a, long b) { return ImagQuadInt{d, a, b}; }

bool iq_is_unit(const ImagQuadInt& x) { return iq_norm(x) == 1; }

bool is_associate(const ImagQuadInt& x, const ImagQuadInt& y) {
    for (const auto& u : iq_units(x.d))
        if (iq_mul(x, u) == y) return true;
    return false;
}

ImagQuadInt m4_det(const M4& m) {
    return iq_sub(iq_mul(m[0], m[3]), iq_mul(m[1], m[2]));
}

std::array<long, 8> m4_key(const M4& m) {
    return {m[0].a, m[0].b, m[1].a, m[1].b, m[2].a, m[2].b, m[3].a, m[3].b};
}

Cusp moebius(const M4& m, const Cusp& c) {
    return {iq_add(iq_mul(m[0], c.num), iq_mul(m[1], c.den)),
            iq_add(iq_mul(m[2], c.num), iq_mul(m[3], c.den))};
}

// elements of O_K with norm at most the given bound
std::vector<ImagQuadInt> small_elements(int d, long bound) {
    std::vector<ImagQuadInt> out;
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) {
            ImagQuadInt x = iq(d, a, b);
            if (iq_norm(x) <= bound) out.push_back(x);
        }
    return out;
}

constexpr std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

TessellationData build_tessellation(int d) {
    if (d != 1 && d != 3) throw std::invalid_argument("tessellation_data: d must be 1 or 3");
    TessellationData td;
    td.d = d;
    long nu = (long)iq_units(d).size();
    td.d1_order = 6 * nu;
    td.d2_order = 2 * nu * nu;

    const Cusp zero{iq(d, 0, 0), iq(d, 1, 0)};
    const Cusp one{iq(d, 1, 0), iq(d, 1, 0)};
    const Cusp inf{iq(d, 1, 0), iq(d, 0, 0)};
    std::vector<std::array<int, 3>> face_sets;
    int inf_index;
    if (d == 1) {
        td.vertices = {zero, one, {iq(1, 0, 1), iq(1, 1, 0)}, {iq(1, 1, 1), iq(1, 1, 0)},
                       {iq(1, 1, 1), iq(1, 2, 0)}, inf};
        inf_index = 5;
        // octahedron faces: one vertex from each opposite pair (0,1+i), (1,i), (c,inf)
        for (int x : {0, 3})
            for (int y : {1, 2})
                for (int z : {4, 5}) {
                    std::array<int, 3> f{x, y, z};
                    std::sort(f.begin(), f.end());
                    face_sets.push_back(f);
                }
    } else {
        td.vertices = {zero, one, {iq(3, 0, 1), iq(3, 1, 0)}, inf};
        inf_index = 3;
        face_sets = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    }
    std::sort(face_sets.begin(), face_sets.end());

    auto vertex_index = [&](const Cusp& c) -> int {
        if (c.num == iq(d, 0, 0) && c.den == iq(d, 0, 0)) return -1;
        for (std::size_t i = 0; i < td.vertices.size(); ++i)
            if (cusp_eq(c, td.vertices[i])) return (int)i;
        return -1;
    };

    // best candidate matrix per (face, permutation of the sorted triple)
    std::vector<std::array<std::optional<M4>, 6>> cand(face_sets.size());
    auto values = small_elements(d, 4);
    for (const auto& a : values)
        for (const auto& b : values)
            for (const auto& c : values)
                for (const auto& e : values) {
                    M4 m{a, b, c, e};
                    if (!iq_is_unit(m4_det(m))) continue;
                    // stabilizer: the vertex set is carried into itself
                    bool stab = true;
                    for (const auto& v : td.vertices)
                        if (vertex_index(moebius(m, v)) < 0) {
                            stab = false;
                            break;
                        }
                    if (stab) td.stabilizer.push_back(m);
                    int i0 = vertex_index(moebius(m, zero));
                    int i1 = vertex_index(moebius(m, one));
                    int i2 = vertex_index(moebius(m, inf));
                    if (i0 < 0 || i1 < 0 || i2 < 0) continue;
                    std::array<int, 3> srt{i0, i1, i2};
                    std::sort(srt.begin(), srt.end());
                    auto fit = std::find(face_sets.begin(), face_sets.end(), srt);
                    if (fit == face_sets.end()) continue;
                    std::size_t f = fit - face_sets.begin();
                    // normalize the unit scaling on the first nonzero entry
                    M4 nm = m;
                    for (const auto& entry : m)
                        if (!(entry == iq(d, 0, 0))) {
                            for (const auto& u : iq_units(d)) {
                                ImagQuadInt y = iq_mul(entry, u);
                                if (y.a > 0 && y.b >= 0) {
                                    for (auto& w : nm) w = iq_mul(w, u);
                                    break;
                                }
                            }
                            break;
                        }
                    for (int k = 0; k < 6; ++k) {
                        std::array<int, 3> img{srt[kPerms[k][0]], srt[kPerms[k][1]],
                                               srt[kPerms[k][2]]};
                        if (img != std::array<int, 3>{i0, i1, i2}) continue;
                        if (!cand[f][k] || m4_key(nm) < m4_key(*cand[f][k])) cand[f][k] = nm;
                        break;
                    }
                }

    long expect_stab = (d == 1 ? 24 : 12) * nu;
    if ((long)td.stabilizer.size() != expect_stab)
        throw std::runtime_error("tessellation_data: stabilizer search failed");

    for (std::size_t f = 0; f < face_sets.size(); ++f) {
        FaceData fd;
        bool found = false;
        for (int k = 0; k < 6 && !found; ++k)
            if (cand[f][k]) {
                fd.mat = *cand[f][k];
                fd.vidx = {face_sets[f][kPerms[k][0]], face_sets[f][kPerms[k][1]],
                           face_sets[f][kPerms[k][2]]};
                found = true;
            }
        if (!found) throw std::runtime_error("tessellation_data: face matrix search failed");
        for (int s = 0; s < 3; ++s) fd.verts[s] = td.vertices[fd.vidx[s]];
        td.faces.push_back(fd);
    }

    // orientation signs: the signed face sum must be an edge-boundary cycle,
    // normalized so the face on (0, 1, inf) carries +1
    std::map<std::pair<int, int>, std::size_t> edge_ix;
    for (const auto& fd : td.faces)
        for (int s = 0; s < 3; ++s) {
            int u = fd.vidx[s], v = fd.vidx[(s + 1) % 3];
            std::pair<int, int> key{std::min(u, v), std::max(u, v)};
            if (!edge_ix.count(key)) edge_ix[key] = edge_ix.size();
        }
    Mat bmat(edge_ix.size(), Vec(td.faces.size(), Rat(0)));
    for (std::size_t f = 0; f < td.faces.size(); ++f)
        for (int s = 0; s < 3; ++s) {
            int u = td.faces[f].vidx[s], v = td.faces[f].vidx[(s + 1) % 3];
            std::pair<int, int> key{std::min(u, v), std::max(u, v)};
            bmat[edge_ix[key]][f] += u < v ? 1 : -1;
        }
    Mat ker = kernel_basis(bmat, td.faces.size());
    if (ker.size() != 1) throw std::runtime_error("tessellation_data: face cycle is not unique");
    std::size_t base_face = 0;
    for (std::size_t f = 0; f < face_sets.size(); ++f)
        if (face_sets[f] == std::array<int, 3>{0, 1, inf_index}) base_face = f;
    Rat scale = ker[0][base_face];
    if (scale == 0) throw std::runtime_error("tessellation_data: degenerate cycle");
    for (std::size_t f = 0; f < td.faces.size(); ++f) {
        Rat s = ker[0][f] / scale;
        if (s != 1 && s != -1)
            throw std::runtime_error("tessellation_data: cycle is not a face orientation");
        td.faces[f].sign = s == 1 ? 1 : -1;
    }
    return td;
}

std::string res_str(Res r) {
    return std::to_string(r.first) + "," + std::to_string(r.second);
}

std::string edge_key(Res x, Res y) { return res_str(x) + "|" + res_str(y); }

std::string tri_key(Res x, Res y, Res z) {
    return res_str(x) + "|" + res_str(y) + "|" + res_str(z);
}

std::array<Res, 2> parse2(const std::string& key) {
    std::array<long, 4> v{};
    if (std::sscanf(key.c_str(), "%ld,%ld|%ld,%ld", &v[0], &v[1], &v[2], &v[3]) != 4)
        throw std::logic_error("parse2: bad key " + key);
    return {Res{v[0], v[1]}, Res{v[2], v[3]}};
}

std::array<Res, 3> parse3(const std::string& key) {
    std::array<long, 6> v{};
    if (std::sscanf(key.c_str(), "%ld,%ld|%ld,%ld|%ld,%ld", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5]) != 6)
        throw std::logic_error("parse3: bad key " + key);
    return {Res{v[0], v[1]}, Res{v[2], v[3]}, Res{v[4], v[5]}};
}

// row vector times reduced 2x2 matrix
std::array<Res, 2> row_mul(const ResidueCtx& ctx, Res x, Res y, const std::array<Res, 4>& m) {
    return {ctx.add(ctx.mul(x, m[0]), ctx.mul(y, m[2])),
            ctx.add(ctx.mul(x, m[1]), ctx.mul(y, m[3]))};
}

long pair_index(long i, long j, long h) {
    // lexicographic index of the pair (i, j), 0 <= i < j < h
    return i * h - i * (i + 1) / 2 + (j - i - 1);
}

bool mat_is_zero(const Mat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

// triangle-symbol presentation shared by the chain module and the formal
// degree-1 target of the theta map
SignedOrbitPresentation make_triples(const ResidueCtx& ctx) {
    SignedOrbitPresentation pres;
    std::vector<std::array<Res, 3>> keys;
    for (const auto& x : ctx.elements)
        for (const auto& y : ctx.elements) {
            if (!ctx.coprime(x, y)) continue;
            Res z = ctx.neg(ctx.add(x, y));
            pres.add_key(tri_key(x, y, z));
            keys.push_back({x, y, z});
        }
    for (const auto& [x, y, z] : keys) {
        pres.relate(tri_key(x, y, z), tri_key(y, x, z), -1);
        pres.relate(tri_key(x, y, z), tri_key(x, z, y), -1);
        for (const auto& u : ctx.units)
            pres.relate(tri_key(x, y, z), tri_key(ctx.mul(u, x), ctx.mul(u, y), ctx.mul(u, z)),
                        1);
    }
    pres.freeze();
    return pres;
}

Mat make_deltaprime(long qprime) {
    long hat = qprime + 1;
    Mat dp(2 * qprime, Vec(hat * (hat - 1) / 2, Rat(0)));
    for (long i = 0; i < hat; ++i)
        for (long j = i + 1; j < hat; ++j) {
            long col = pair_index(i, j, hat);
            if (i == 0) {
                dp[j - 1][col] -= 1;           // -theta(b) in the first summand
                dp[qprime + j - 1][col] += 1;  // +theta(b) in the second
            } else {
                dp[qprime + i - 1][col] += 1;  // 0 + (theta(a) - theta(b))
                dp[qprime + j - 1][col] -= 1;
            }
        }
    return dp;
}

// wedges of consecutive label differences: a basis of Lambda^2 C_1^un inside
// Lambda^2 of the label space; hat_offset 1 embeds into hat coordinates
Mat unit_wedge_basis(long qprime, long hat_offset) {
    long h = qprime + hat_offset;
    long wdim = h * (h - 1) / 2;
    Mat out;
    for (long i = 0; i + 1 < qprime; ++i)
        for (long j = i + 1; j + 1 < qprime; ++j) {
            Vec w(wdim, Rat(0));
            auto add = [&](long a, long b, int s) {
                a += hat_offset;
                b += hat_offset;
                if (a == b) return;
                if (a < b)
                    w[pair_index(a, b, h)] += s;
                else
                    w[pair_index(b, a, h)] -= s;
            };
            add(i, j, 1);
            add(i, j + 1, -1);
            add(i + 1, j, -1);
            add(i + 1, j + 1, 1);
            out.push_back(w);
        }
    return out;
}

} // namespace

bool cusp_eq(const Cusp& a, const Cusp& b) {
    return iq_mul(a.num, b.den) == iq_mul(b.num, a.den);
}

std::string bianchi_tri_key(Res x, Res y, Res z) { return tri_key(x, y, z); }

std::array<Res, 3> bianchi_parse_tri(const std::string& key) { return parse3(key); }

std::string bianchi_edge_key(Res x, Res y) { return edge_key(x, y); }

const TessellationData& tessellation_data(int d) {
    static std::map<int, TessellationData> cache;
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, build_tessellation(d)).first;
    return it->second;
}

FieldPlan field_plan(int d) {
    switch (d) {
    case 1:
        return {1, true, "ideal octahedron on (0, 1, i, 1+i, (1+i)/2, inf)", 1,
                "8 triangular faces, one symmetry orbit"};
    case 2:
        return {2, false, "plan-only polyhedron", 2,
                "triangular and quadrilateral faces; two vertical triangles, two vertical "
                "quadrilaterals"};
    case 3:
        return {3, true, "ideal tetrahedron on (0, 1, rho, inf)", 1,
                "4 triangular faces, one symmetry orbit"};
    case 7:
        return {7, false, "plan-only polyhedron", 2,
                "triangular and quadrilateral faces; two vertical quadrilaterals, one vertical "
                "triangle"};
    case 11:
        return {11, false, "plan-only polyhedron", 2,
                "triangular and hexagonal faces; two vertical hexagons, one vertical triangle"};
    default:
        throw std::invalid_argument("field_plan: d must be one of 1, 2, 3, 7, 11");
    }
}

Res ResidueCtx::reduce(const ImagQuadInt& x) const {
    if (x.d != d) throw std::invalid_argument("ResidueCtx::reduce: ring mismatch");
    if (prime) return residue(P, x);
    return {mod_pos(x.a, n), mod_pos(x.b, n)};
}

Res ResidueCtx::reduce_int(long k) const { return reduce(ImagQuadInt{d, k, 0}); }

Res ResidueCtx::add(Res x, Res y) const {
    return {mod_pos(x.first + y.first, n), mod_pos(x.second + y.second, n)};
}

Res ResidueCtx::neg(Res x) const {
    return {mod_pos(-x.first, n), mod_pos(-x.second, n)};
}

Res ResidueCtx::mul(Res x, Res y) const {
    if (prime) return residue_mul(P, x, y);
    long ac = x.first * y.first, ad_bc = x.first * y.second + x.second * y.first,
         bd = x.second * y.second;
    if (d == 1) return {mod_pos(ac - bd, n), mod_pos(ad_bc, n)};
    return {mod_pos(ac - bd, n), mod_pos(ad_bc + bd, n)}; // rho^2 = rho - 1
}

bool ResidueCtx::invertible(Res x) const {
    if (prime) return !is_zero(x);
    // nonunits are the multiples of the ramified prime over n
    if (d == 1) return mod_pos(x.first + x.second, 2) != 0;
    return mod_pos(x.first + 2 * x.second, 3) != 0;
}

bool ResidueCtx::coprime(Res x, Res y) const {
    if (prime) return !(is_zero(x) && is_zero(y));
    return invertible(x) || invertible(y);
}

Res ResidueCtx::fold(Res x) const {
    Res best = x;
    for (const auto& u : units) best = std::min(best, mul(u, x));
    return best;
}

ResidueCtx residue_ctx(int d, const ImagQuadInt& gen) {
    if (d != 1 && d != 3) throw std::invalid_argument("residue_ctx: d must be 1 or 3");
    if (gen.d != d) throw std::invalid_argument("residue_ctx: ring mismatch");
    long norm = iq_norm(gen);
    if (norm <= 1) throw std::invalid_argument("residue_ctx: level must be a proper ideal");
    ResidueCtx ctx;
    ctx.d = d;
    ctx.norm = norm;
    bool found_prime = false;
    for (const auto& P : primes_up_to_norm(d, norm))
        if (P.norm == norm && is_associate(gen, P.gen)) {
            ctx.prime = true;
            ctx.P = P;
            ctx.n = P.p;
            ctx.label = "(" + iq_str(P.gen) + ")";
            found_prime = true;
            break;
        }
    if (!found_prime) {
        long n0 = d == 1 ? 2 : 3;
        if (!is_associate(gen, ImagQuadInt{d, n0, 0}))
            throw std::invalid_argument(
                "residue_ctx: composite levels are supported only for (" +
                std::to_string(n0) + ")");
        ctx.prime = false;
        ctx.n = n0;
        ctx.label = "(" + std::to_string(n0) + ")";
    }
    bool two_coord = !ctx.prime || !ctx.P.field_is_fp;
    for (long a = 0; a < ctx.n; ++a) {
        if (two_coord)
            for (long b = 0; b < ctx.n; ++b) ctx.elements.push_back({a, b});
        else
            ctx.elements.push_back({a, 0});
    }
    for (const auto& u : iq_units(d)) {
        Res r = ctx.reduce(u);
        if (std::find(ctx.units.begin(), ctx.units.end(), r) == ctx.units.end())
            ctx.units.push_back(r);
    }
    return ctx;
}

int BianchiComplex::label_pos(Res r) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), r);
    if (it == labels.end() || *it != r) return -1;
    return (int)(it - labels.begin());
}

BianchiComplex build_bianchi_complex(int d, const ImagQuadInt& gen, const std::string& mode,
                                     bool with_cusp, bool with_poly) {
    BianchiComplex bc;
    bc.ctx = residue_ctx(d, gen);
    if (mode == "full-units")
        bc.full_units = true;
    else if (mode == "paper-literal")
        bc.full_units = false;
    else
        throw std::invalid_argument("build_bianchi_complex: unknown mode " + mode);
    if (with_cusp && !bc.ctx.prime)
        throw std::invalid_argument(
            "build_bianchi_complex: the cusp degree needs a prime level");
    bc.has_cusp = with_cusp;
    bc.has_poly = with_poly;
    const ResidueCtx& ctx = bc.ctx;

    std::set<Res> seen;
    for (const auto& x : ctx.elements)
        if (!ctx.is_zero(x)) seen.insert(ctx.fold(x));
    bc.labels.assign(seen.begin(), seen.end());
    for (const auto& l : bc.labels)
        if (ctx.invertible(l)) ++bc.qprime;
    if (ctx.prime && bc.qprime != residue_units(ctx.P).qprime)
        throw std::logic_error("build_bianchi_complex: unit-orbit count mismatch");

    std::vector<std::array<Res, 2>> rows;
    for (const auto& x : ctx.elements)
        for (const auto& y : ctx.elements)
            if (ctx.coprime(x, y)) rows.push_back({x, y});

    bc.tri = make_triples(ctx);
    for (const auto& [x, y] : rows) bc.edge.add_key(edge_key(x, y));
    for (const auto& [x, y] : rows) {
        bc.edge.relate(edge_key(x, y), edge_key(y, x), -1);
        for (const auto& u : ctx.units) {
            if (bc.full_units) {
                bc.edge.relate(edge_key(x, y), edge_key(ctx.mul(u, x), y), 1);
                bc.edge.relate(edge_key(x, y), edge_key(x, ctx.mul(u, y)), 1);
            } else {
                bc.edge.relate(edge_key(x, y), edge_key(ctx.mul(u, x), ctx.mul(u, y)), 1);
            }
        }
    }
    bc.edge.freeze();

    bc.d1 = Mat(bc.edge.dim(), Vec(bc.tri.dim(), Rat(0)));
    for (std::size_t t = 0; t < bc.tri.dim(); ++t) {
        auto [x, y, z] = parse3(bc.tri.basis()[t]);
        for (const auto& side : {std::pair{x, y}, std::pair{y, z}, std::pair{z, x}}) {
            auto [idx, sgn] = bc.edge.project(edge_key(side.first, side.second));
            if (idx >= 0) bc.d1[idx][t] += sgn;
        }
    }

    if (bc.has_cusp) {
        bc.d2 = Mat(bc.cusp_dim(), Vec(bc.edge.dim(), Rat(0)));
        for (std::size_t e = 0; e < bc.edge.dim(); ++e) {
            auto [x, y] = parse2(bc.edge.basis()[e]);
            if (!ctx.is_zero(x) && !ctx.is_zero(y)) {
                bc.d2[bc.qprime + bc.label_pos(ctx.fold(x))][e] += 1;
                bc.d2[bc.qprime + bc.label_pos(ctx.fold(y))][e] -= 1;
            } else if (ctx.is_zero(x)) {
                bc.d2[bc.label_pos(ctx.fold(y))][e] -= 1;
                bc.d2[bc.qprime + bc.label_pos(ctx.fold(y))][e] += 1;
            } else {
                bc.d2[bc.label_pos(ctx.fold(x))][e] += 1;
                bc.d2[bc.qprime + bc.label_pos(ctx.fold(x))][e] -= 1;
            }
        }
    }

    if (bc.has_poly) {
        const TessellationData& td = tessellation_data(d);
        std::vector<std::array<Res, 4>> stab;
        for (const auto& m : td.stabilizer)
            stab.push_back({ctx.reduce(m[0]), ctx.reduce(m[1]), ctx.reduce(m[2]),
                            ctx.reduce(m[3])});
        for (const auto& [x, y] : rows) bc.poly.add_key(edge_key(x, y));
        for (const auto& [x, y] : rows)
            for (const auto& m : stab) {
                auto [xx, yy] = row_mul(ctx, x, y, m);
                bc.poly.relate(edge_key(x, y), edge_key(xx, yy), 1);
            }
        bc.poly.freeze();

        std::vector<std::array<Res, 4>> fmats;
        for (const auto& fd : td.faces)
            fmats.push_back({ctx.reduce(fd.mat[0]), ctx.reduce(fd.mat[1]),
                             ctx.reduce(fd.mat[2]), ctx.reduce(fd.mat[3])});
        bc.d0 = Mat(bc.tri.dim(), Vec(bc.poly.dim(), Rat(0)));
        for (std::size_t g = 0; g < bc.poly.dim(); ++g) {
            auto [x, y] = parse2(bc.poly.basis()[g]);
            for (std::size_t f = 0; f < fmats.size(); ++f) {
                auto [xx, yy] = row_mul(ctx, x, y, fmats[f]);
                Res zz = ctx.neg(ctx.add(xx, yy));
                auto [idx, sgn] = bc.tri.project(tri_key(xx, yy, zz));
                if (idx >= 0) bc.d0[idx][g] += td.faces[f].sign * sgn;
            }
        }
    }
    return bc;
}

bool bianchi_chain_check(const BianchiComplex& bc) {
    if (bc.has_cusp && !mat_is_zero(mat_mul(bc.d2, bc.d1))) return false;
    if (bc.has_poly && !mat_is_zero(mat_mul(bc.d1, bc.d0))) return false;
    return true;
}

BianchiThetaMaps bianchi_theta_maps(const BianchiComplex& bc, long z_label) {
    if (!bc.ctx.prime)
        throw std::invalid_argument("bianchi_theta_maps: prime level required");
    if (!bc.has_cusp)
        throw std::invalid_argument("bianchi_theta_maps: cusp degree required");
    const ResidueCtx& ctx = bc.ctx;
    Res z = ctx.reduce_int(z_label);
    if (ctx.is_zero(z))
        throw std::invalid_argument("bianchi_theta_maps: z_label is not a torsion generator");

    BianchiThetaMaps tm;
    tm.qprime = bc.qprime;
    tm.hat_dim = bc.qprime + 1;
    tm.wedge_dim = tm.hat_dim * (tm.hat_dim - 1) / 2;
    tm.sym = bc.tri;

    long sdim = tm.sym.dim(), tdim = bc.tri.dim(), edim = bc.edge.dim();
    tm.theta1 = Mat(sdim, Vec(tdim, Rat(0)));
    for (long t = 0; t < tdim; ++t) {
        auto [idx, sgn] = tm.sym.project(bc.tri.basis()[t]);
        if (idx >= 0) tm.theta1[idx][t] += sgn;
    }

    auto hat = [&](Res x) -> long {
        if (ctx.is_zero(x)) return 0;
        return 1 + bc.label_pos(ctx.fold(ctx.mul(z, x)));
    };
    auto wedge_col = [&](Vec& col, long i, long j, int s) {
        if (i == j) return;
        if (i < j)
            col[pair_index(i, j, tm.hat_dim)] += s;
        else
            col[pair_index(j, i, tm.hat_dim)] -= s;
    };

    tm.theta2 = Mat(tm.wedge_dim, Vec(edim, Rat(0)));
    for (long e = 0; e < edim; ++e) {
        auto [x, y] = parse2(bc.edge.basis()[e]);
        Vec col(tm.wedge_dim, Rat(0));
        wedge_col(col, hat(x), hat(y), 1);
        for (long r = 0; r < tm.wedge_dim; ++r) tm.theta2[r][e] = col[r];
    }

    tm.theta3 = Mat(2 * bc.qprime, Vec(bc.cusp_dim(), Rat(0)));
    for (long b = 0; b < 2; ++b)
        for (long l = 0; l < bc.qprime; ++l) {
            long img = bc.label_pos(ctx.fold(ctx.mul(z, bc.labels[l])));
            tm.theta3[b * bc.qprime + img][b * bc.qprime + l] += 1;
        }

    tm.delta2 = Mat(tm.wedge_dim, Vec(sdim, Rat(0)));
    for (long s = 0; s < sdim; ++s) {
        auto [x, y, w] = parse3(tm.sym.basis()[s]);
        Vec col(tm.wedge_dim, Rat(0));
        wedge_col(col, hat(x), hat(y), 1);
        wedge_col(col, hat(y), hat(w), 1);
        wedge_col(col, hat(w), hat(x), 1);
        for (long r = 0; r < tm.wedge_dim; ++r) tm.delta2[r][s] = col[r];
    }

    tm.deltaprime = make_deltaprime(bc.qprime);
    tm.sigma = Vec(2 * bc.qprime, Rat(1));

    tm.squares_commute = mat_mul(tm.theta2, bc.d1) == mat_mul(tm.delta2, tm.theta1) &&
                         mat_mul(tm.theta3, bc.d2) == mat_mul(tm.deltaprime, tm.theta2);
    tm.theta2_bijective =
        edim == tm.wedge_dim && (long)mat_rank(tm.theta2) == tm.wedge_dim;
    tm.theta3_bijective = bc.cusp_dim() == 2 * bc.qprime &&
                          (long)mat_rank(tm.theta3) == 2 * bc.qprime;

    // scaling action of the unit-orbit classes, intertwined on every level
    tm.diamond_ok = true;
    for (const auto& a : bc.labels) {
        Mat pe(edim, Vec(edim, Rat(0)));
        for (long e = 0; e < edim; ++e) {
            auto [x, y] = parse2(bc.edge.basis()[e]);
            auto [idx, sgn] = bc.edge.project(edge_key(ctx.mul(a, x), ctx.mul(a, y)));
            if (idx >= 0) pe[idx][e] += sgn;
        }
        Mat ps(sdim, Vec(sdim, Rat(0)));
        for (long s = 0; s < sdim; ++s) {
            auto [x, y, w] = parse3(tm.sym.basis()[s]);
            auto [idx, sgn] =
                tm.sym.project(tri_key(ctx.mul(a, x), ctx.mul(a, y), ctx.mul(a, w)));
            if (idx >= 0) ps[idx][s] += sgn;
        }
        std::vector<long> lperm(bc.qprime);
        for (long l = 0; l < bc.qprime; ++l)
            lperm[l] = bc.label_pos(ctx.fold(ctx.mul(a, bc.labels[l])));
        Mat qw(tm.wedge_dim, Vec(tm.wedge_dim, Rat(0)));
        for (long i = 0; i < tm.hat_dim; ++i)
            for (long j = i + 1; j < tm.hat_dim; ++j) {
                long pi = i == 0 ? 0 : 1 + lperm[i - 1];
                long pj = j == 0 ? 0 : 1 + lperm[j - 1];
                Vec col(tm.wedge_dim, Rat(0));
                wedge_col(col, pi, pj, 1);
                long src = pair_index(i, j, tm.hat_dim);
                for (long r = 0; r < tm.wedge_dim; ++r) qw[r][src] = col[r];
            }
        Mat pc(2 * bc.qprime, Vec(2 * bc.qprime, Rat(0)));
        for (long b = 0; b < 2; ++b)
            for (long l = 0; l < bc.qprime; ++l)
                pc[b * bc.qprime + lperm[l]][b * bc.qprime + l] += 1;
        if (mat_mul(tm.theta2, pe) != mat_mul(qw, tm.theta2)) tm.diamond_ok = false;
        if (mat_mul(tm.delta2, ps) != mat_mul(qw, tm.delta2)) tm.diamond_ok = false;
        if (mat_mul(tm.theta3, pc) != mat_mul(pc, tm.theta3)) tm.diamond_ok = false;
        if (mat_mul(tm.theta1, ps) != mat_mul(ps, tm.theta1)) tm.diamond_ok = false;
    }
    return tm;
}

BianchiThetaMaps bianchi_theta_maps(int d, const ImagQuadInt& gen, long z_label) {
    BianchiComplex bc = build_bianchi_complex(d, gen);
    return bianchi_theta_maps(bc, z_label);
}

BianchiH2 bianchi_h2_dims(const BianchiComplex& bc) {
    if (!bc.ctx.prime) throw std::invalid_argument("bianchi_h2_dims: prime level required");
    const ResidueCtx& ctx = bc.ctx;
    BianchiH2 h;
    h.total = (long)bc.edge.dim() - (long)mat_rank(bc.d1);
    h.eis = 2 * bc.qprime - 1;
    h.cusp = h.total - h.eis;

    // independent route: cokernel of the label-wedge image inside the wedge
    // of the augmentation-zero subspace
    long q = bc.qprime;
    long wdim = q * (q - 1) / 2;
    Mat img;
    for (std::size_t t = 0; t < bc.tri.dim(); ++t) {
        auto [x, y, z] = parse3(bc.tri.basis()[t]);
        Vec w(wdim, Rat(0));
        auto add = [&](Res u, Res v) {
            // wedge terms involving the zero symbol die under the projection
            // onto the label part
            if (ctx.is_zero(u) || ctx.is_zero(v)) return;
            long i = bc.label_pos(ctx.fold(u)), j = bc.label_pos(ctx.fold(v));
            if (i == j) return;
            if (i < j)
                w[pair_index(i, j, q)] += 1;
            else
                w[pair_index(j, i, q)] -= 1;
        };
        add(x, y);
        add(y, z);
        add(z, x);
        img.push_back(w);
    }
    Mat uw = unit_wedge_basis(q, 0);
    std::size_t uw_rank = mat_rank(uw);
    h.image_in_unit_wedge = stacked_rank(img, uw) == uw_rank;
    long img_rank = img.empty() ? 0 : (long)mat_rank(img);
    h.coker_independent = (long)uw_rank - img_rank;
    h.agree = h.image_in_unit_wedge && h.cusp == h.coker_independent;
    return h;
}

bool bianchi_exactness_deg3(const BianchiComplex& bc) {
    if (!bc.ctx.prime)
        throw std::invalid_argument("bianchi_exactness_deg3: prime level required");
    long q = bc.qprime;
    Mat dp = make_deltaprime(q);
    long wdim = (q + 1) * q / 2;
    // augmentation annihilates the image
    for (long j = 0; j < wdim; ++j) {
        Rat s(0);
        for (long r = 0; r < 2 * q; ++r) s += dp[r][j];
        if (s != 0) return false;
    }
    // image fills the augmentation kernel
    if ((long)mat_rank(dp) != 2 * q - 1) return false;
    // kernel of delta' equals the wedge of the augmentation-zero subspace
    Mat ker = kernel_basis(dp, wdim);
    Mat uw = unit_wedge_basis(q, 1);
    long expect = (q - 1) * (q - 2) / 2;
    return (long)ker.size() == expect && (long)mat_rank(uw) == expect &&
           (long)stacked_rank(ker, uw) == expect;
}

DistributionCheck composite_distribution_check(int d, long n) {
    long n0 = d == 1 ? 2 : 3;
    if (n != n0)
        throw std::invalid_argument("composite_distribution_check: unsupported level");
    BianchiComplex bc =
        build_bianchi_complex(d, ImagQuadInt{d, n, 0}, "full-units", false, false);
    const ResidueCtx& ctx = bc.ctx;
    DistributionCheck dc;
    long nl = (long)bc.labels.size();
    dc.gens = nl + 1;
    long g = dc.gens;
    long wdim = g * (g - 1) / 2;

    // division by the ramified prime: preimage sums equal the lower symbol
    Res qr = ctx.reduce(ImagQuadInt{d, 1, 1});
    Mat rels;
    for (const auto& a : ctx.elements) {
        if (ctx.is_zero(a)) continue;
        Vec v(g, Rat(0));
        bool hit = false;
        for (const auto& x : ctx.elements)
            if (ctx.mul(qr, x) == a) {
                v[1 + bc.label_pos(ctx.fold(x))] += 1;
                hit = true;
            }
        if (!hit) continue;
        v[1 + bc.label_pos(ctx.fold(a))] -= 1;
        rels.push_back(v);
    }
    Mat relw;
    for (const auto& r : rels)
        for (long k = 0; k < g; ++k) {
            Vec w(wdim, Rat(0));
            bool nonzero = false;
            for (long i = 0; i < g; ++i) {
                if (r[i] == 0 || i == k) continue;
                nonzero = true;
                if (i < k)
                    w[pair_index(i, k, g)] += r[i];
                else
                    w[pair_index(k, i, g)] -= r[i];
            }
            if (nonzero) relw.push_back(w);
        }
    dc.rel_rank = relw.empty() ? 0 : (long)mat_rank(relw);
    dc.target_dim = wdim - dc.rel_rank;

    auto hat = [&](Res x) -> long {
        return ctx.is_zero(x) ? 0 : 1 + bc.label_pos(ctx.fold(x));
    };
    auto wedge_vec = [&](long i, long j) {
        Vec w(wdim, Rat(0));
        if (i != j) {
            if (i < j)
                w[pair_index(i, j, g)] += 1;
            else
                w[pair_index(j, i, g)] -= 1;
        }
        return w;
    };
    Mat img;
    Mat theta2(wdim, Vec(bc.edge.dim(), Rat(0)));
    for (std::size_t e = 0; e < bc.edge.dim(); ++e) {
        auto [x, y] = parse2(bc.edge.basis()[e]);
        Vec w = wedge_vec(hat(x), hat(y));
        img.push_back(w);
        for (long r = 0; r < wdim; ++r) theta2[r][e] = w[r];
    }
    long stacked = (long)stacked_rank(img, relw);
    dc.image_dim = stacked - dc.rel_rank;
    dc.surjective = stacked == wdim;

    // the square already commutes in free wedge coordinates
    Mat delta2(wdim, Vec(bc.tri.dim(), Rat(0)));
    for (std::size_t t = 0; t < bc.tri.dim(); ++t) {
        auto [x, y, z] = parse3(bc.tri.basis()[t]);
        for (const auto& side : {std::pair{x, y}, std::pair{y, z}, std::pair{z, x}}) {
            Vec w = wedge_vec(hat(side.first), hat(side.second));
            for (long r = 0; r < wdim; ++r) delta2[r][t] += w[r];
        }
    }
    dc.square_commutes = mat_mul(theta2, bc.d1) == delta2;
    return dc;
}

cdd tetrahedron_shape(const Cusp& a, const Cusp& b, const Cusp& c, const Cusp& d) {
    auto wedge = [](const Cusp& u, const Cusp& v) {
        return iq_sub(iq_mul(u.num, v.den), iq_mul(v.num, u.den));
    };
    const Cusp* pts[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (iq_norm(wedge(*pts[i], *pts[j])) == 0)
                throw std::invalid_argument("tetrahedron_shape: degenerate tuple");
    ImagQuadInt pn = iq_mul(wedge(a, c), wedge(b, d));
    ImagQuadInt qn = iq_mul(wedge(a, d), wedge(b, c));
    auto embed = [](const ImagQuadInt& x) -> cdd {
        if (x.d == 1) return cdd(dd((double)x.a), dd((double)x.b));
        dd half = dd(0.5), s3 = dd_sqrt(dd(3.0)) * half;
        return cdd(dd((double)x.a) + dd((double)x.b) * half, dd((double)x.b) * s3);
    };
    return embed(pn) / embed(qn);
}

BlochSum k3_element(int d) {
    const TessellationData& td = tessellation_data(d);
    std::vector<std::array<int, 4>> cuts;
    if (d == 1)
        cuts = {{5, 4, 0, 1}, {5, 4, 1, 3}, {5, 4, 3, 2}, {5, 4, 2, 0}};
    else if (d == 3)
        cuts = {{3, 0, 1, 2}};
    else
        throw std::invalid_argument("k3_element: d must be 1 or 3");
    BlochSum out;
    for (const auto& t : cuts)
        bloch_add(out,
                  tetrahedron_shape(td.vertices[t[0]], td.vertices[t[1]], td.vertices[t[2]],
                                    td.vertices[t[3]]),
                  Rat(1));
    return out;
}

VolumeReport volume_polyhedron(int d) {
    VolumeReport vr;
    vr.d = d;
    vr.shapes = k3_element(d);
    for (const auto& term : vr.shapes)
        if (term.arg.im.hi <= 0) {
            vr.oriented = false;
            throw std::runtime_error("volume_polyhedron: non-positive tetrahedron orientation");
        }
    vr.volume = eval_L2(vr.shapes);
    // Dehn proxy: every dihedral angle of every shape is a rational multiple
    // of pi with a small denominator
    for (const auto& term : vr.shapes) {
        std::complex<double> z(term.arg.re.hi, term.arg.im.hi);
        std::complex<double> one(1.0, 0.0);
        for (std::complex<double> w : {z, one / (one - z), (z - one) / z}) {
            double frac = std::arg(w) / 3.14159265358979323846;
            double best = 1.0;
            for (long den = 1; den <= 24; ++den) {
                double num = std::round(frac * den);
                best = std::min(best, std::fabs(frac - num / den));
            }
            vr.dehn_max_dev = std::max(vr.dehn_max_dev, best);
        }
    }
    return vr;
}

std::string bianchi_report_json(const BianchiComplex& bc) {
    nlohmann::json j;
    j["field_d"] = bc.ctx.d;
    j["ideal"] = bc.ctx.label;
    j["norm"] = bc.ctx.norm;
    j["prime"] = bc.ctx.prime;
    j["mode"] = bc.full_units ? "full-units" : "paper-literal";
    j["qprime"] = bc.qprime;
    j["dims"]["poly"] = bc.has_poly ? (long)bc.poly.dim() : -1;
    j["dims"]["tri"] = (long)bc.tri.dim();
    j["dims"]["edge"] = (long)bc.edge.dim();
    j["dims"]["cusp"] = bc.cusp_dim();
    if (bc.ctx.prime) {
        BianchiH2 h = bianchi_h2_dims(bc);
        j["h2"]["total"] = h.total;
        j["h2"]["eis"] = h.eis;
        j["h2"]["cusp"] = h.cusp;
        j["h2"]["agree"] = h.agree;
    }
    return j.dump(2);
}

} // namespace eulercx
