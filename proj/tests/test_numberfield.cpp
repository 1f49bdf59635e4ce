#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eulercx/numberfield.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace eulercx;

TEST_CASE("cyclotomic polynomials match closed forms") {
    CHECK(cyclotomic_poly(1) == QPoly{Rat(-1), Rat(1)});
    CHECK(cyclotomic_poly(2) == QPoly{Rat(1), Rat(1)});
    CHECK(cyclotomic_poly(3) == QPoly{Rat(1), Rat(1), Rat(1)});
    CHECK(cyclotomic_poly(4) == QPoly{Rat(1), Rat(0), Rat(1)});
    CHECK(cyclotomic_poly(6) == QPoly{Rat(1), Rat(-1), Rat(1)});
    CHECK(cyclotomic_poly(12) == QPoly{Rat(1), Rat(0), Rat(-1), Rat(0), Rat(1)});
    for (int n = 1; n <= 30; ++n)
        CHECK((int)cyclotomic_poly(n).size() == euler_phi(n) + 1);
}

TEST_CASE("field arithmetic in Q(zeta_N)") {
    std::mt19937_64 rng(7);
    for (int N : {3, 4, 5, 7, 8, 12}) {
        // zeta^N = 1 and powers reduce consistently
        CycloNum z = CycloNum::zeta_pow(N, 1);
        CHECK(z.pow(N) == CycloNum::one(N));
        for (int k = 0; k < 2 * N; ++k)
            CHECK(CycloNum::zeta_pow(N, k) == z.pow(k));
        // random elements invert exactly
        for (int t = 0; t < 8; ++t) {
            CycloNum x(N);
            x = x + CycloNum(N, Rat((long)(rng() % 17) - 8));
            x = x + CycloNum::zeta_pow(N, 1) * Rat((long)(rng() % 17) - 8);
            x = x + CycloNum::zeta_pow(N, 2) * Rat((long)(rng() % 5) + 1);
            if (x.is_zero()) continue;
            CHECK(x * x.inv() == CycloNum::one(N));
        }
    }
    CHECK_THROWS(CycloNum(5).inv());
}

TEST_CASE("embeddings send zeta to the expected point on the circle") {
    for (int N : {3, 5, 7, 12}) {
        for (int k = 1; k < N; ++k) {
            if (gcd_long(k, N) != 1) continue;
            cdd w = CycloNum::zeta_pow(N, 1).embed(k);
            double ang = 2.0 * M_PI * k / N;
            CHECK(std::abs(w.re.hi - std::cos(ang)) < 1e-14);
            CHECK(std::abs(w.im.hi - std::sin(ang)) < 1e-14);
        }
        // embeddings are ring maps: check on a product
        CycloNum x = CycloNum::one(N) + CycloNum::zeta_pow(N, 1) * Rat(3, 2);
        CycloNum y = CycloNum::zeta_pow(N, 2) - CycloNum(N, Rat(1, 3));
        cdd lhs = (x * y).embed(1);
        cdd a = x.embed(1), b = y.embed(1);
        cdd rhs{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
        CHECK(std::abs(lhs.re.hi - rhs.re.hi) < 1e-13);
        CHECK(std::abs(lhs.im.hi - rhs.im.hi) < 1e-13);
    }
}

TEST_CASE("root of unity detection") {
    CHECK(is_root_of_unity(CycloNum::zeta_pow(12, 5)));
    CHECK(is_root_of_unity(-CycloNum::zeta_pow(5, 2)));
    CHECK(is_root_of_unity(CycloNum::one(7)));
    CHECK_FALSE(is_root_of_unity(one_minus_zeta(5, 1)));
    CHECK_FALSE(is_root_of_unity(CycloNum(5, Rat(2))));
    CHECK_FALSE(is_root_of_unity(CycloNum(5)));
}

TEST_CASE("quadratic ring arithmetic and units") {
    // multiplication agrees with the complex embedding
    std::mt19937_64 rng(11);
    for (int d : {1, 3}) {
        for (int t = 0; t < 20; ++t) {
            ImagQuadInt x{d, (long)(rng() % 9) - 4, (long)(rng() % 9) - 4};
            ImagQuadInt y{d, (long)(rng() % 9) - 4, (long)(rng() % 9) - 4};
            auto lhs = iq_embed(iq_mul(x, y));
            auto rhs = iq_embed(x) * iq_embed(y);
            CHECK(std::abs(lhs - rhs) < 1e-9);
            CHECK(iq_norm(iq_mul(x, y)) == iq_norm(x) * iq_norm(y));
        }
        auto units = iq_units(d);
        CHECK((int)units.size() == (d == 1 ? 4 : 6));
        for (const auto& u : units) CHECK(iq_norm(u) == 1);
        std::set<ImagQuadInt> uniq(units.begin(), units.end());
        CHECK(uniq.size() == units.size());
    }
}

TEST_CASE("prime ideals up to norm 13") {
    auto g = [](const PrimeIdeal& P) { return std::pair(P.gen.a, P.gen.b); };

    auto p1 = primes_up_to_norm(1, 13);
    REQUIRE(p1.size() == 6);
    CHECK(p1[0].norm == 2);
    CHECK(p1[0].kind == "ramified");
    CHECK(g(p1[0]) == std::pair(1L, 1L));
    CHECK(p1[1].norm == 5);
    CHECK(p1[2].norm == 5);
    CHECK(p1[1].kind == "split");
    CHECK(p1[3].norm == 9);
    CHECK(p1[3].kind == "inert");
    CHECK(g(p1[3]) == std::pair(3L, 0L));
    CHECK(p1[4].norm == 13);
    CHECK(p1[5].norm == 13);

    auto p3 = primes_up_to_norm(3, 13);
    REQUIRE(p3.size() == 6);
    CHECK(p3[0].norm == 3);
    CHECK(p3[0].kind == "ramified");
    CHECK(p3[1].norm == 4);
    CHECK(p3[1].kind == "inert");
    CHECK(p3[2].norm == 7);
    CHECK(p3[3].norm == 7);
    CHECK(p3[4].norm == 13);
    CHECK(p3[5].norm == 13);

    // split pairs are genuinely distinct ideals: neither generator divides the other
    for (auto& list : {p1, p3})
        for (size_t i = 0; i + 1 < list.size(); ++i)
            if (list[i].norm == list[i + 1].norm)
                CHECK_FALSE(list[i].gen == list[i + 1].gen);
}

TEST_CASE("residue maps are ring homomorphisms killing the ideal") {
    std::mt19937_64 rng(13);
    for (int d : {1, 3}) {
        for (const auto& P : primes_up_to_norm(d, 13)) {
            CHECK(residue_is_zero(P, P.gen));
            for (int t = 0; t < 25; ++t) {
                ImagQuadInt x{d, (long)(rng() % 21) - 10, (long)(rng() % 21) - 10};
                ImagQuadInt y{d, (long)(rng() % 21) - 10, (long)(rng() % 21) - 10};
                auto rs = residue(P, iq_add(x, y));
                auto rx = residue(P, x), ry = residue(P, y);
                CHECK(rs.first == mod_pos(rx.first + ry.first, P.p));
                CHECK(rs.second == mod_pos(rx.second + ry.second, P.p));
                CHECK(residue(P, iq_mul(x, y)) == residue_mul(P, rx, ry));
            }
        }
    }
}

TEST_CASE("unit images and index q'") {
    // values derived from the unit image order in each residue field
    auto expect = [](int d, long norm, long qprime, size_t mu_size) {
        auto P = prime_of_norm(d, norm);
        REQUIRE(P.has_value());
        auto U = residue_units(*P);
        CHECK(U.qprime == qprime);
        CHECK(U.mu.size() == mu_size);
    };
    expect(1, 2, 1, 1);   // i maps to 1, all units collapse
    expect(1, 5, 1, 4);   // units fill F_5^*
    expect(1, 9, 2, 4);   // F_9^*: units give the order-4 subgroup
    expect(1, 13, 3, 4);
    expect(3, 3, 1, 2);
    expect(3, 4, 1, 3);   // F_4^*: -1 = 1, three classes
    expect(3, 7, 1, 6);
    expect(3, 13, 2, 6);
}
