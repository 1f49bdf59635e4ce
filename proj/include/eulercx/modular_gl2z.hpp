#pragma once
// Coinvariant presentations of the level-N modular chain complex
// (triangles -> edges -> cusps), the map to the cyclotomic label complex,
// cuspidal cohomology dimensions, and the full-level variant.

#include "eulercx/cyclotools.hpp"
#include "eulercx/qlinalg.hpp"

#include <string>
#include <vector>

namespace eulercx {

// triangles (c,d,e), c+d+e = 0, gcd(c,d,N) = 1, fully alternating under S3 and
// invariant under global negation; edges (c,d), gcd(c,d,N) = 1, with
// (c,d) = -(d,c) and per-slot sign relations in full-units mode (joint sign
// only in diagonal mode); cusps [b,0], [0,b] with b mod +-1 (prime level only)
struct ModularComplex {
    int N = 0;
    bool full_units = true;
    bool has_cusp = false;
    int m = 0; // (N-1)/2 at prime level
    SignedOrbitPresentation tri, edge;
    Mat d1; // edge coords of triangle boundaries, edge_dim x tri_dim
    Mat d2; // cusp coords of edge boundaries, (N-1) x edge_dim, cusp degree only
};

// mode is "full-units" or "diagonal"; cusp degree is attached automatically
// for prime N when with_cusp is true and is an error for composite N
ModularComplex build_gamma1_complex(int N, const std::string& mode = "full-units",
                                    bool with_cusp = true);

// d2 * d1 == 0 (trivially true when the cusp degree is absent)
bool chain_check(const ModularComplex& mc);

// closed-form dimension of the cuspidal weight-2 space at prime level:
// (p-5)(p-7)/24 for p >= 5, zero for p < 5; used as the independent oracle
long dim_s2_gamma1_prime(int p);

// dim ker(cusp boundary) - rank(triangle boundary) at prime level
std::size_t h1_cusp_dim(int p);

// --- cyclotomic side -----------------------------------------------------------

// The degree-2 target is Lambda^2 of the (m+1)-dimensional hat space with
// basis qhat (index 0) and u(1..m), m = floor(N/2); h(c) = u(|c|) + kappa*qhat
// with kappa = 1/12 and h(0) = kappa*qhat. The degree-1 target is the formal
// triple-symbol model: symbols t(a1,a2,a3), sum zero, alternating under slot
// permutations and invariant under global negation (the same presentation as
// the triangle module); its coboundary is the cyclic wedge
// u(a1)^u(a2) + u(a2)^u(a3) + u(a3)^u(a1) with u(0) the zero symbol.
struct CyclotomicSquare {
    int N = 0, m = 0;
    SignedOrbitPresentation sym;
    Mat deg1;   // sym_dim x tri_dim
    Mat deg2;   // wedgehat_dim x edge_dim
    Mat delta2; // wedgehat_dim x sym_dim, coboundary of triple symbols
    std::size_t hat_dim() const { return (std::size_t)m + 1; }
    std::size_t wedgehat_dim() const { return (std::size_t)(m + 1) * m / 2; }
};

CyclotomicSquare build_cyclotomic_map(const ModularComplex& mc);

// deg2 * d1 == delta2 * deg1, exactly
bool cyclotomic_square_commutes(const ModularComplex& mc, const CyclotomicSquare& sq);

// diamond action a: edges (c,d) -> (ac,ad) against u(x) -> u(ax) on both
// degree-2 and degree-1 targets, exact matrix identities for every unit a
bool diamond_intertwines(const ModularComplex& mc, const CyclotomicSquare& sq);

struct IsoReport {
    int p = 0;
    std::size_t edge_dim = 0, wedgehat_dim = 0;
    bool deg2_bijective = false;
    std::size_t tri_dim = 0, sym_dim = 0;
    bool deg1_surjective = false;
    std::size_t deg1_formal_kernel = 0;
    // reference dimension of the expected true kernel, imported not computed
    std::size_t imported_k3_dim = 0;
};
IsoReport verify_iso_prime(int p, const std::string& mode = "full-units");

// composite (modular edge -> unit q-expansion -> cusp value) equals the direct
// label map on every edge generator: leading exponent gives kappa = 1/12 and
// the cusp value is (1 - zeta^c) times a root of unity
bool euler_specialization_check(int N);

// --- unit label spaces at general level ------------------------------------------

// dimension of the span of cusp unit labels; parity mode folds u(-a) = u(a)
// only, distribution mode adjoins lower-level labels u_M(b) for M | N with
// sum_{a = b mod M} u_N(a) = u_M(b). Composite-level values are upper bounds.
std::size_t cyclo_unit_label_dim(int N, bool distribution);

// --- full level (flagged variant) -------------------------------------------------

// generators are 2x2 matrices over Z/N with det = +-1; edge relations come
// from the right action of the order-8 dihedral group with its sign character,
// triangle relations from the order-12 group; d sends g to the three rotated
// classes. The bottom-row map is a surjection onto the level-N complex above.
struct FullLevelComplex {
    int N = 0;
    SignedOrbitPresentation tri, edge;
    Mat d1;
};
FullLevelComplex build_full_level(int N);

// bottom-row projection commutes with d and is surjective in both degrees
bool full_level_surjection_check(const FullLevelComplex& fl, const ModularComplex& mc);

// JSON dimension report {level, dims{tri,edge,cusp}, h1_cusp, coker, mode}
std::string modular_report_json(int p, const std::string& mode = "full-units");

} // namespace eulercx
