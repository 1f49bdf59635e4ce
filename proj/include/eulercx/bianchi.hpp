#pragma once
// Bianchi tessellation data for the Gaussian (d=1) and Eisenstein (d=3)
// integers, coinvariant chain complexes of GL_2(O_K) at finite level, and the
// chain maps onto the elliptic-unit complexes.

#include "eulercx/bloch.hpp"
#include "eulercx/numberfield.hpp"
#include "eulercx/qlinalg.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace eulercx {

// point of P^1(K) written as num/den; infinity is (1 : 0)
struct Cusp {
    ImagQuadInt num, den;
};
bool cusp_eq(const Cusp& a, const Cusp& b);

struct FaceData {
    std::array<int, 3> vidx;         // vertex indices, in matrix image order
    std::array<Cusp, 3> verts;       // the matrix sends (0, 1, inf) to these
    std::array<ImagQuadInt, 4> mat;  // row-major, unit determinant
    int sign = 1;                    // orientation in the boundary cycle
};

struct TessellationData {
    int d = 0;
    std::vector<Cusp> vertices;
    std::vector<FaceData> faces;                         // 8 for d=1, 4 for d=3
    std::vector<std::array<ImagQuadInt, 4>> stabilizer;  // matrices preserving the vertex set
    long d1_order = 0;                                   // 6 |O_K^*|
    long d2_order = 0;                                   // 2 |O_K^*|^2
};

// cached per field; throws if the bounded matrix search does not reproduce
// the expected polyhedron combinatorics
const TessellationData& tessellation_data(int d);

// plan metadata for the five Euclidean imaginary quadratic fields; only
// d = 1, 3 carry full face data, the others record the published plans
struct FieldPlan {
    int d = 0;
    bool constructible = false;
    std::string polyhedron;
    int face_orbits = 0;
    std::string faces_note;
};
FieldPlan field_plan(int d);

// residue arithmetic for O_K/N: prime ideals use the residue-field encoding
// from numberfield; the rational levels (2) for d=1 and (3) for d=3 use
// coordinates mod n with the ring multiplication
using Res = std::pair<long, long>;

struct ResidueCtx {
    int d = 1;
    bool prime = true;
    PrimeIdeal P;               // valid when prime
    long n = 0;                 // coordinate modulus: p for prime, n for composite
    long norm = 0;
    std::vector<Res> units;     // distinct unit images mod N
    std::vector<Res> elements;  // all residues
    std::string label;          // printable ideal name

    Res reduce(const ImagQuadInt& x) const;
    Res reduce_int(long k) const;
    Res add(Res x, Res y) const;
    Res neg(Res x) const;
    Res mul(Res x, Res y) const;
    bool is_zero(Res x) const { return x.first == 0 && x.second == 0; }
    bool invertible(Res x) const;
    bool coprime(Res x, Res y) const;  // the ideal (x, y, N) is all of O_K
    Res fold(Res x) const;             // lex-least element of the unit orbit
};
ResidueCtx residue_ctx(int d, const ImagQuadInt& gen);

// coinvariant complex in degrees 0..3: polyhedra -> triangles -> edges ->
// cusps, all presented on bottom-row coordinates over O_K/N
struct BianchiComplex {
    ResidueCtx ctx;
    bool full_units = true;
    bool has_cusp = false;
    bool has_poly = false;
    long qprime = 0;         // unit-orbit count among invertible residues
    std::vector<Res> labels; // folded nonzero residues, sorted
    SignedOrbitPresentation poly, tri, edge;
    Mat d0;                  // tri_dim x poly_dim
    Mat d1;                  // edge_dim x tri_dim
    Mat d2;                  // cusp_dim x edge_dim, prime levels only
    long cusp_dim() const { return has_cusp ? 2 * qprime : 0; }
    int label_pos(Res r) const;  // index into labels, -1 if absent
};

BianchiComplex build_bianchi_complex(int d, const ImagQuadInt& gen,
                                     const std::string& mode = "full-units",
                                     bool with_cusp = true, bool with_poly = true);
bool bianchi_chain_check(const BianchiComplex& bc);

// chain map onto the elliptic-unit complex at a prime level; z_label picks
// the torsion generator identifying residues with torsion points
struct BianchiThetaMaps {
    long qprime = 0;
    long hat_dim = 0;    // qprime + 1, index 0 is the formal zero symbol
    long wedge_dim = 0;  // hat_dim choose 2
    SignedOrbitPresentation sym;  // formal degree-1 target, presented like tri
    Mat theta1;                   // sym_dim x tri_dim, identity on basis keys
    Mat theta2;                   // wedge_dim x edge_dim
    Mat theta3;                   // 2 qprime x cusp_dim
    Mat delta2;                   // wedge_dim x sym_dim
    Mat deltaprime;               // 2 qprime x wedge_dim
    Vec sigma;                    // augmentation on both summands
    bool squares_commute = false;
    bool theta2_bijective = false;
    bool theta3_bijective = false;
    bool diamond_ok = false;  // scaling action intertwined on every level
};
BianchiThetaMaps bianchi_theta_maps(const BianchiComplex& bc, long z_label = 1);
BianchiThetaMaps bianchi_theta_maps(int d, const ImagQuadInt& gen, long z_label = 1);

// H^2 of the truncated complex with its Eisenstein/cuspidal split; the cusp
// dimension is also computed independently as the cokernel of the degree-1
// map into the unit wedge, and the two routes must agree
struct BianchiH2 {
    long total = 0, eis = 0, cusp = 0;
    long coker_independent = 0;
    bool image_in_unit_wedge = false;
    bool agree = false;
};
BianchiH2 bianchi_h2_dims(const BianchiComplex& bc);

// exactness of the hat complex in degree 3, and ker(delta') = Lambda^2 C_1^un
bool bianchi_exactness_deg3(const BianchiComplex& bc);

// composite levels (2) for d=1 and (3) for d=3: distribution-mode hat space
// and surjectivity of the degree-2 map onto Lambda^2 of it
struct DistributionCheck {
    long gens = 0;        // folded labels plus the formal zero symbol
    long rel_rank = 0;    // rank of the wedged distribution relations
    long target_dim = 0;  // dim of Lambda^2 of the quotient
    long image_dim = 0;
    bool surjective = false;
    bool square_commutes = false;
};
DistributionCheck composite_distribution_check(int d, long n);

// ideal-tetrahedron shape parameter (projective cross-ratio, embedded)
cdd tetrahedron_shape(const Cusp& a, const Cusp& b, const Cusp& c, const Cusp& d);

// cut of the basic polyhedron into ideal tetrahedra as cross-ratio classes
BlochSum k3_element(int d);

struct VolumeReport {
    int d = 0;
    BlochSum shapes;
    double volume = 0;
    double dehn_max_dev = 0;  // largest distance of a dihedral angle from pi * Q
    bool oriented = true;
};
VolumeReport volume_polyhedron(int d);

// key helpers for the residue-labeled orbit presentations ("a,b|c,d|e,f")
std::string bianchi_tri_key(Res x, Res y, Res z);
std::array<Res, 3> bianchi_parse_tri(const std::string& key);
std::string bianchi_edge_key(Res x, Res y);

// numeric pipeline over the CM curve (needs the h-map kernels): theta images
// of translated polyhedron boundaries, and the conjectural vanishing report
struct AlphaReport {
    std::vector<BlochSum> elements;  // one per polyhedron coset class
    long rank = 0;                   // numeric rank of the L2 evaluation matrix
    double cycle_residual = 0;       // |sum over a fundamental-cycle family|
};
AlphaReport alpha_kp(int d, const ImagQuadInt& gen);

struct ConjectureReport {
    std::vector<double> residuals;  // per embedding
    double max_residual = 0;
};
ConjectureReport conjecture_experiment(int d, const ImagQuadInt& gen);

std::string bianchi_report_json(const BianchiComplex& bc);

} // namespace eulercx
