#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eulercx/bianchi.hpp"

#include "nlohmann/json.hpp"

#include <cmath>
#include <map>
#include <set>

using namespace eulercx;

namespace {

// independent dimension count for a signed-orbit quotient: free span on the
// raw keys modulo one relation row per identification
struct FreeQuotient {
    std::map<std::string, std::size_t> ix;
    Mat rels;
    void key(const std::string& k) {
        if (!ix.count(k)) ix.emplace(k, ix.size());
    }
    void rel(const std::string& k1, const std::string& k2, int s) {
        key(k1);
        key(k2);
        Vec v(ix.size(), Rat(0));
        v.resize(ix.size());
        v[ix[k1]] += 1;
        v[ix[k2]] -= s;
        rels.push_back(std::move(v));
    }
    std::size_t dim() {
        for (auto& r : rels) r.resize(ix.size(), Rat(0));
        return ix.size() - mat_rank(rels);
    }
};

std::string rkey(Res x, Res y) {
    return std::to_string(x.first) + "," + std::to_string(x.second) + "|" +
           std::to_string(y.first) + "," + std::to_string(y.second);
}

std::size_t brute_edge_dim(const ResidueCtx& ctx, bool full_units) {
    FreeQuotient fq;
    for (const auto& x : ctx.elements)
        for (const auto& y : ctx.elements) {
            if (!ctx.coprime(x, y)) continue;
            fq.key(rkey(x, y));
            fq.rel(rkey(x, y), rkey(y, x), -1);
            for (const auto& u : ctx.units) {
                if (full_units) {
                    fq.rel(rkey(x, y), rkey(ctx.mul(u, x), y), 1);
                    fq.rel(rkey(x, y), rkey(x, ctx.mul(u, y)), 1);
                } else {
                    fq.rel(rkey(x, y), rkey(ctx.mul(u, x), ctx.mul(u, y)), 1);
                }
            }
        }
    return fq.dim();
}

long choose2(long n) { return n * (n - 1) / 2; }

} // namespace

TEST_CASE("tessellation combinatorics") {
    const TessellationData& t1 = tessellation_data(1);
    CHECK(t1.vertices.size() == 6);
    CHECK(t1.faces.size() == 8);
    CHECK(t1.stabilizer.size() == 96);
    CHECK(t1.d1_order == 24);
    CHECK(t1.d2_order == 32);

    const TessellationData& t3 = tessellation_data(3);
    CHECK(t3.vertices.size() == 4);
    CHECK(t3.faces.size() == 4);
    CHECK(t3.stabilizer.size() == 72);
    CHECK(t3.d1_order == 36);
    CHECK(t3.d2_order == 72);

    for (int d : {1, 3}) {
        const TessellationData& td = tessellation_data(d);
        int plus = 0, minus = 0;
        for (const auto& f : td.faces) {
            // unit determinant throughout
            ImagQuadInt det = iq_sub(iq_mul(f.mat[0], f.mat[3]), iq_mul(f.mat[1], f.mat[2]));
            CHECK(iq_norm(det) == 1);
            // the matrix really carries (0, 1, inf) to the recorded vertices
            Cusp zero{ImagQuadInt{d, 0, 0}, ImagQuadInt{d, 1, 0}};
            Cusp one{ImagQuadInt{d, 1, 0}, ImagQuadInt{d, 1, 0}};
            Cusp inf{ImagQuadInt{d, 1, 0}, ImagQuadInt{d, 0, 0}};
            Cusp im0{iq_add(iq_mul(f.mat[0], zero.num), iq_mul(f.mat[1], zero.den)),
                     iq_add(iq_mul(f.mat[2], zero.num), iq_mul(f.mat[3], zero.den))};
            Cusp im1{iq_add(iq_mul(f.mat[0], one.num), iq_mul(f.mat[1], one.den)),
                     iq_add(iq_mul(f.mat[2], one.num), iq_mul(f.mat[3], one.den))};
            Cusp im2{iq_add(iq_mul(f.mat[0], inf.num), iq_mul(f.mat[1], inf.den)),
                     iq_add(iq_mul(f.mat[2], inf.num), iq_mul(f.mat[3], inf.den))};
            CHECK(cusp_eq(im0, f.verts[0]));
            CHECK(cusp_eq(im1, f.verts[1]));
            CHECK(cusp_eq(im2, f.verts[2]));
            (f.sign == 1 ? plus : minus)++;
        }
        // a closed oriented surface has equally many faces of each sign here
        CHECK(plus == minus);
        // signed faces form a 2-cycle: every edge appears twice with opposite
        // orientations
        std::map<std::pair<int, int>, int> edge_sum;
        for (const auto& f : td.faces)
            for (int s = 0; s < 3; ++s) {
                int u = f.vidx[s], v = f.vidx[(s + 1) % 3];
                edge_sum[{std::min(u, v), std::max(u, v)}] += f.sign * (u < v ? 1 : -1);
            }
        for (const auto& [e, s] : edge_sum) CHECK(s == 0);
    }

    // the face on (0, 1, inf) is normalized to the identity matrix, sign +1
    bool found = false;
    for (const auto& f : tessellation_data(1).faces)
        if (f.vidx == std::array<int, 3>{0, 1, 5}) {
            found = true;
            CHECK(f.mat == std::array<ImagQuadInt, 4>{ImagQuadInt{1, 1, 0}, ImagQuadInt{1, 0, 0},
                                                      ImagQuadInt{1, 0, 0}, ImagQuadInt{1, 1, 0}});
            CHECK(f.sign == 1);
        }
    CHECK(found);
}

TEST_CASE("field plans") {
    CHECK(field_plan(1).constructible);
    CHECK(field_plan(3).constructible);
    CHECK(field_plan(1).face_orbits == 1);
    CHECK(field_plan(3).face_orbits == 1);
    for (int d : {2, 7, 11}) {
        CHECK_FALSE(field_plan(d).constructible);
        CHECK(field_plan(d).face_orbits == 2);
    }
    CHECK_THROWS(field_plan(5));
}

TEST_CASE("residue contexts") {
    ResidueCtx c2 = residue_ctx(1, {1, 1, 1});
    CHECK(c2.prime);
    CHECK(c2.norm == 2);
    CHECK(c2.elements.size() == 2);
    CHECK(c2.units.size() == 1);

    ResidueCtx c5 = residue_ctx(1, {1, 2, 1});
    CHECK(c5.prime);
    CHECK(c5.norm == 5);
    CHECK(c5.units.size() == 4);
    // reduce respects the ring structure: i^2 = -1
    Res i5 = c5.reduce({1, 0, 1});
    CHECK(c5.mul(i5, i5) == c5.reduce({1, -1, 0}));

    ResidueCtx c9 = residue_ctx(1, {1, 3, 0});
    CHECK(c9.prime);
    CHECK(c9.norm == 9);
    CHECK(c9.elements.size() == 9);
    CHECK(c9.units.size() == 4);

    // composite level (2) over the Gaussian integers
    ResidueCtx g2 = residue_ctx(1, {1, 2, 0});
    CHECK_FALSE(g2.prime);
    CHECK(g2.elements.size() == 4);
    CHECK(g2.units.size() == 2);
    CHECK(g2.invertible({1, 0}));
    CHECK(g2.invertible({0, 1}));
    CHECK_FALSE(g2.invertible({1, 1}));
    // an associate generates the same ideal
    CHECK_FALSE(residue_ctx(1, {1, 0, 2}).prime);

    ResidueCtx e3 = residue_ctx(3, {3, 3, 0});
    CHECK_FALSE(e3.prime);
    CHECK(e3.elements.size() == 9);
    CHECK(e3.units.size() == 6);
    CHECK_FALSE(e3.invertible({1, 1}));
    CHECK(e3.invertible({0, 1}));

    // (2) stays prime over Q(rho): inert, residue field of size 4
    ResidueCtx e4 = residue_ctx(3, {3, 2, 0});
    CHECK(e4.prime);
    CHECK(e4.norm == 4);
    CHECK(e4.elements.size() == 4);
    CHECK(e4.units.size() == 3);

    CHECK_THROWS(residue_ctx(1, {1, 0, 1}));  // unit
    CHECK_THROWS(residue_ctx(1, {1, 3, 1}));  // norm 10, neither prime nor (2)
}

TEST_CASE("presented dimensions at prime levels") {
    for (int d : {1, 3})
        for (const auto& P : primes_up_to_norm(d, 13)) {
            BianchiComplex bc = build_bianchi_complex(d, P.gen);
            long q = bc.qprime;
            CHECK(q == residue_units(P).qprime);
            CHECK((long)bc.labels.size() == q);
            // folded edge classes: q zero-paired ones plus unordered label pairs
            CHECK((long)bc.edge.dim() == q + choose2(q));
            CHECK(bc.cusp_dim() == 2 * q);
            // brute-force rank route over the raw pair symbols agrees (skipped
            // at the largest norms, where the dense rref gets slow)
            if (P.norm <= 9) CHECK(bc.edge.dim() == brute_edge_dim(bc.ctx, true));
        }

    // smallest level: no surviving triangles, one edge class, two cusps
    BianchiComplex b2 = build_bianchi_complex(1, {1, 1, 1});
    CHECK(b2.tri.dim() == 0);
    CHECK(b2.edge.dim() == 1);
    CHECK(b2.cusp_dim() == 2);

    BianchiComplex b3 = build_bianchi_complex(3, {3, 1, 1});
    CHECK(b3.qprime == 1);
    CHECK(b3.tri.dim() == 0);
    CHECK(b3.cusp_dim() == 2);

    // paper-literal pair relations only identify joint scalings, so the edge
    // space can only grow
    for (int d : {1, 3}) {
        ImagQuadInt g = d == 1 ? ImagQuadInt{1, 3, 0} : ImagQuadInt{3, 1, 2};
        BianchiComplex full = build_bianchi_complex(d, g);
        BianchiComplex lit = build_bianchi_complex(d, g, "paper-literal");
        CHECK(lit.edge.dim() >= full.edge.dim());
        CHECK(lit.edge.dim() == brute_edge_dim(lit.ctx, false));
        CHECK(lit.tri.dim() == full.tri.dim());
    }

    CHECK_THROWS(build_bianchi_complex(1, {1, 1, 1}, "bogus"));
}

TEST_CASE("differentials compose to zero") {
    for (int d : {1, 3})
        for (const auto& P : primes_up_to_norm(d, 13)) {
            BianchiComplex bc = build_bianchi_complex(d, P.gen);
            CHECK(bc.poly.dim() > 0);
            CHECK(bianchi_chain_check(bc));
        }
    // the cusp-edge composite vanishes in paper-literal mode as well
    for (int d : {1, 3}) {
        ImagQuadInt g = d == 1 ? ImagQuadInt{1, 2, 1} : ImagQuadInt{3, 3, 1};
        BianchiComplex lit = build_bianchi_complex(d, g, "paper-literal", true, false);
        CHECK(bianchi_chain_check(lit));
    }
}

TEST_CASE("theta chain maps at prime levels") {
    for (int d : {1, 3})
        for (const auto& P : primes_up_to_norm(d, 13)) {
            BianchiComplex bc = build_bianchi_complex(d, P.gen);
            BianchiThetaMaps tm = bianchi_theta_maps(bc);
            CHECK(tm.squares_commute);
            CHECK(tm.theta2_bijective);
            CHECK(tm.theta3_bijective);
            CHECK(tm.diamond_ok);
            CHECK(tm.wedge_dim == (long)bc.edge.dim());
        }
    // a different torsion generator gives the same checks
    BianchiComplex b13 = build_bianchi_complex(1, {1, 3, 2});
    BianchiThetaMaps tm2 = bianchi_theta_maps(b13, 2);
    CHECK(tm2.squares_commute);
    CHECK(tm2.theta2_bijective);
    CHECK(tm2.diamond_ok);
    CHECK_THROWS(bianchi_theta_maps(build_bianchi_complex(1, {1, 2, 0}, "full-units", false,
                                                          false)));
}

TEST_CASE("cohomology split and the independent cokernel route") {
    for (int d : {1, 3})
        for (const auto& P : primes_up_to_norm(d, 13)) {
            BianchiComplex bc = build_bianchi_complex(d, P.gen);
            BianchiH2 h = bianchi_h2_dims(bc);
            CHECK(h.eis == 2 * bc.qprime - 1);
            CHECK(h.image_in_unit_wedge);
            CHECK(h.cusp == h.coker_independent);
            CHECK(h.agree);
            CHECK(h.cusp >= 0);
            CHECK(bianchi_exactness_deg3(bc));
        }
    // small fields: no cuspidal part at all
    CHECK(bianchi_h2_dims(build_bianchi_complex(1, {1, 1, 1})).cusp == 0);
    CHECK(bianchi_h2_dims(build_bianchi_complex(1, {1, 2, 1})).cusp == 0);
    CHECK(bianchi_h2_dims(build_bianchi_complex(3, {3, 1, 1})).cusp == 0);
    CHECK(bianchi_h2_dims(build_bianchi_complex(3, {3, 3, 1})).cusp == 0);
}

TEST_CASE("distribution relations at the composite levels") {
    DistributionCheck g2 = composite_distribution_check(1, 2);
    CHECK(g2.gens == 3);
    CHECK(g2.rel_rank == 2);
    CHECK(g2.target_dim == 1);
    CHECK(g2.image_dim == 1);
    CHECK(g2.surjective);
    CHECK(g2.square_commutes);

    DistributionCheck e3 = composite_distribution_check(3, 3);
    CHECK(e3.gens == 3);
    CHECK(e3.target_dim == 1);
    CHECK(e3.surjective);
    CHECK(e3.square_commutes);

    CHECK_THROWS(composite_distribution_check(1, 3));

    // no triangle symbols survive at level (2)
    BianchiComplex c2 = build_bianchi_complex(1, {1, 2, 0}, "full-units", false, false);
    CHECK(c2.tri.dim() == 0);
    CHECK(c2.edge.dim() == 2);
}

TEST_CASE("tetrahedron shapes and polyhedron volumes") {
    // normalization: the cross-ratio of (inf, 0, 1, z) is z itself
    Cusp inf{{1, 1, 0}, {1, 0, 0}}, zero{{1, 0, 0}, {1, 1, 0}}, one{{1, 1, 0}, {1, 1, 0}};
    Cusp z{{1, 2, 3}, {1, 1, 0}};
    cdd r = tetrahedron_shape(inf, zero, one, z);
    CHECK(std::fabs(r.re.hi - 2.0) < 1e-14);
    CHECK(std::fabs(r.im.hi - 3.0) < 1e-14);
    CHECK_THROWS(tetrahedron_shape(inf, zero, one, one));

    // the octahedron cuts into four tetrahedra of shape i
    BlochSum oct = k3_element(1);
    CHECK(oct.size() == 4);
    for (const auto& t : oct) {
        CHECK(std::fabs(t.arg.re.hi) < 1e-14);
        CHECK(std::fabs(t.arg.im.hi - 1.0) < 1e-14);
    }
    // the tetrahedron is regular ideal: shape at the primitive sixth root
    BlochSum tet = k3_element(3);
    CHECK(tet.size() == 1);
    CHECK(std::fabs(tet[0].arg.re.hi - 0.5) < 1e-14);
    CHECK(std::fabs(tet[0].arg.im.hi - std::sqrt(3.0) / 2) < 1e-14);

    VolumeReport v1 = volume_polyhedron(1);
    CHECK(v1.oriented);
    CHECK(v1.dehn_max_dev < 1e-12);
    // 4 G, G the lattice sum over odd n of (-1)^((n-1)/2) / n^2
    CHECK(std::fabs(v1.volume - 3.6638623767088762) < 1e-12);
    CHECK(std::fabs(v1.volume - 3.6638624) < 1e-6);

    VolumeReport v3 = volume_polyhedron(3);
    CHECK(v3.oriented);
    CHECK(v3.dehn_max_dev < 1e-12);
    CHECK(std::fabs(v3.volume - 1.0149416064096536) < 1e-12);
    CHECK(std::fabs(v3.volume - 1.0149416) < 1e-6);
}

TEST_CASE("report payload") {
    BianchiComplex bc = build_bianchi_complex(1, {1, 2, 1});
    auto j = nlohmann::json::parse(bianchi_report_json(bc));
    CHECK(j["field_d"] == 1);
    CHECK(j["norm"] == 5);
    CHECK(j["prime"] == true);
    CHECK(j["qprime"] == 1);
    CHECK(j["dims"]["edge"] == 1);
    CHECK(j["dims"]["cusp"] == 2);
    CHECK(j["h2"]["agree"] == true);
}
