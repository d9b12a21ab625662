#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pirlift/field.hpp"
#include "pirlift/linalg.hpp"
#include "pirlift/rng.hpp"

using namespace pirlift;

TEST_CASE("modulus validation") {
    CHECK_NOTHROW(FieldModulus(2));
    CHECK_NOTHROW(FieldModulus(65521));
    CHECK_THROWS_AS(FieldModulus(1), ParamError);
    CHECK_THROWS_AS(FieldModulus(6), ParamError);
    CHECK_THROWS_AS(FieldModulus(1 << 16), ParamError);
}

TEST_CASE("element arithmetic against integer reference") {
    // brute-force field axioms over small moduli
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
        for (std::uint32_t a = 0; a < q; ++a) {
            for (std::uint32_t b = 0; b < q; ++b) {
                Fp x(a, q), y(b, q);
                CHECK((x + y).value() == (a + b) % q);
                CHECK((x - y).value() == (a + q - b) % q);
                CHECK((x * y).value() == (a * b) % q);
            }
            if (a != 0) {
                Fp x(a, q);
                CHECK((x * x.inv()).value() == 1);
            }
        }
        CHECK_THROWS_AS(Fp(0, q).inv(), ParamError);
    }
}

TEST_CASE("negative values reduce canonically") {
    CHECK(Fp(-1, 5).value() == 4);
    CHECK(Fp(-10, 3).value() == 2);
    CHECK(fp_reduce(-7, 5) == 3);
}

TEST_CASE("modulus mismatch is rejected") {
    CHECK_THROWS_AS(Fp(1, 3) + Fp(1, 5), ParamError);
}

TEST_CASE("inner product") {
    auto d = make_vec({1, 2, 0}, 5);
    auto q = make_vec({3, 4, 1}, 5);
    CHECK(inner_product(d, q).value() == (3 + 8) % 5);
    CHECK_THROWS_AS(inner_product(d, make_vec({1}, 5)), ParamError);
}

TEST_CASE("rref rank and solve on hand matrices") {
    FpMat A(3, 3, 5);
    long long vals[3][3] = {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A.at(i, j) = fp_reduce(vals[i][j], 5);
    CHECK(rank_of(A) == 2); // row 2 = 2 * row 1

    FpMat B(2, 2, 7);
    B.at(0, 0) = 1; B.at(0, 1) = 2; B.at(1, 0) = 3; B.at(1, 1) = 4;
    auto x = solve(B, {5, 6});
    REQUIRE(x.has_value());
    CHECK(fp_add(fp_mul((*x)[0], 1, 7), fp_mul((*x)[1], 2, 7), 7) == 5);
    CHECK(fp_add(fp_mul((*x)[0], 3, 7), fp_mul((*x)[1], 4, 7), 7) == 6);

    auto Binv = inverse(B);
    REQUIRE(Binv.has_value());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::uint32_t acc = 0;
            for (int k = 0; k < 2; ++k)
                acc = fp_add(acc, fp_mul(B.at(i, k), Binv->at(k, j), 7), 7);
            CHECK(acc == (i == j ? 1u : 0u));
        }
}

TEST_CASE("inconsistent system yields no solution") {
    FpMat A(2, 1, 3);
    A.at(0, 0) = 1;
    A.at(1, 0) = 1;
    CHECK_FALSE(solve(A, {1, 2}).has_value());
}

TEST_CASE("row space tracks rank incrementally") {
    RowSpace s(3, 5);
    CHECK(s.add({1, 2, 3}));
    CHECK_FALSE(s.add({2, 4, 1})); // 2*(1,2,3) = (2,4,6) = (2,4,1) mod 5
    CHECK(s.add({0, 1, 0}));
    CHECK(s.rank() == 2);
    CHECK(s.contains({1, 0, 3}));      // (1,2,3) - 2*(0,1,0)
    CHECK_FALSE(s.contains({0, 0, 1}));
}

TEST_CASE("rng below is within range and deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        auto x = a.below(7);
        CHECK(x < 7);
        CHECK(x == b.below(7));
    }
    // substreams differ from the parent and from each other
    Rng base(42);
    CHECK(base.sub("x").next() != base.sub("y").next());
}
