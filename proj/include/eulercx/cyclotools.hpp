#pragma once
// Cyclotomic chain groups in the label domain.
//
// C1(N) is spanned by classes u(a) of 1 - zeta_N^a for a != 0, taken modulo
// torsion, so u(-a) = u(a) and u(0) is the zero symbol. C2(N) is spanned by
// weight-(1,1) symbols indexed by (a, b). The coboundary of such a symbol is
// the wedge (u(a+b) - u(b)) ^ (u(a) - u(b)), which agrees with the literal
// three-fold cyclic wedge; both forms are implemented so the equality can be
// checked exactly.

#include "eulercx/qlinalg.hpp"
#include "eulercx/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace eulercx {

// canonical unit label in 1..floor(N/2); 0 encodes the zero symbol
int unit_label(int a, int N);

// formal element of Lambda^2 of the free space on unit labels,
// keys (i, j) with 0 < i < j
using Wedge2 = std::map<std::pair<int, int>, Rat>;

void wedge_add(Wedge2& w, int a, int b, int N, const Rat& c);
bool wedge_is_zero(const Wedge2& w);
Wedge2 wedge_sub(const Wedge2& a, const Wedge2& b);

// coboundary of the (1,1) symbol with parameters (a, b) at level N,
// computed from the two-factor closed form
Wedge2 coproduct_pair(int N, int a, int b);

// the same coboundary via the literal cyclic three-term wedge
Wedge2 coproduct_literal(int N, int a, int b);

// --- prime level unit space -----------------------------------------------------

// For prime p, C1(p) has basis u(1..m), m = (p-1)/2, independent classes.
// The subspace of genuine units is the kernel of the total-valuation
// functional u(a) -> 1. Lambda^2 of that kernel sits inside Lambda^2 C1(p).
struct CycloUnitSpace {
    int p;
    int m; // (p-1)/2
    explicit CycloUnitSpace(int prime);
    // coordinates of a Wedge2 on the Lambda^2 C1(p) basis (pairs i<j)
    Vec lambda2_coords(const Wedge2& w) const;
    std::size_t lambda2_dim() const { return static_cast<std::size_t>(m) * (m - 1) / 2; }
    // basis of Lambda^2 of the unit kernel, expressed in Lambda^2 C1 coordinates
    Mat lambda2_unit_basis() const;
    std::size_t lambda2_unit_dim() const {
        return static_cast<std::size_t>(m - 1) * (m - 2) / 2;
    }
};

// numeric rank of the logarithmic embedding of the u(a); equals (p-1)/2
std::size_t unit_log_rank(int p);

// cokernel dimension of the span of all triangle images (c,d,e), c+d+e=0,
// inside Lambda^2 of the genuine-unit subspace at prime p
std::size_t conclusion1_coker(int p);

// dimension of the image itself (for reporting)
std::size_t conclusion1_image_dim(int p);

} // namespace eulercx
