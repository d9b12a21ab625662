#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <unistd.h>

#include "pirlift/mds.hpp"

using namespace pirlift;

namespace {

// independent oracle: all 2x2 minors by brute force
bool mds_2xN_by_minors(const std::vector<std::vector<long long>>& rows, int N,
                       std::uint32_t q) {
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
            long long det = rows[0][a] * rows[1][b] - rows[0][b] * rows[1][a];
            if (fp_reduce(det, q) == 0) return false;
        }
    return true;
}

} // namespace

TEST_CASE("explicit generators pass or fail the MDS check like the minor oracle") {
    std::vector<std::vector<long long>> good = {{1, 0, 1, 1}, {0, 1, 1, 2}};
    CHECK(mds_2xN_by_minors(good, 4, 3));
    CHECK_NOTHROW(GeneratorSpec::from_coefficients(2, 4, 3, good));

    std::vector<std::vector<long long>> bad = {{1, 0, 1}, {0, 1, 0}};
    CHECK_FALSE(mds_2xN_by_minors(bad, 3, 3)); // columns {1,3} dependent
    CHECK_THROWS_AS(GeneratorSpec::from_coefficients(2, 3, 3, bad), ValidationError);
}

TEST_CASE("identity columns are trivially MDS") {
    CHECK_NOTHROW(GeneratorSpec::from_coefficients(
        3, 3, 5, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST_CASE("evaluation-point construction") {
    CHECK_NOTHROW(GeneratorSpec::vandermonde(5, 2, 5));  // points 0..4
    CHECK_NOTHROW(GeneratorSpec::vandermonde(6, 2, 5));  // extended column
    CHECK_THROWS_AS(GeneratorSpec::vandermonde(7, 2, 5), InfeasibleError);
}

TEST_CASE("paper preset stores a+b and a+2b") {
    auto G = GeneratorSpec::coded_4_2_preset(3);
    auto W = make_vec({1, 2}, 3); // a=1, b=2
    Database db = encode({W}, G);
    CHECK(db.blocks[0][0].value() == 1);           // server 1: a
    CHECK(db.blocks[1][0].value() == 2);           // server 2: b
    CHECK(db.blocks[2][0].value() == (1 + 2) % 3); // server 3: a+b
    CHECK(db.blocks[3][0].value() == (1 + 4) % 3); // server 4: a+2b

    // decode from servers {3,4}, oracle: solve the 2x2 system by hand
    FpVec rec = decode_from_subset({{3, db.blocks[2]}, {4, db.blocks[3]}}, G);
    CHECK(rec == W);
}

TEST_CASE("replication encodes identically") {
    auto G = GeneratorSpec::from_coefficients(1, 2, 3, {{1, 1}});
    auto W = make_vec({1}, 3);
    Database db = encode({W}, G);
    CHECK(db.blocks[0] == db.blocks[1]);
    CHECK(decode_from_subset({{2, db.blocks[1]}}, G) == W);
}

TEST_CASE("all-zero messages give an all-zero database") {
    auto G = GeneratorSpec::default_for(4, 2, 5);
    Database db = encode({make_vec({0, 0, 0, 0}, 5)}, G);
    for (const auto& blk : db.blocks)
        for (const auto& e : blk) CHECK(e.value() == 0);
}

TEST_CASE("round trip over every K-subset, 100 random messages") {
    auto G = GeneratorSpec::default_for(5, 3, 7);
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        auto msgs = random_messages(2, 6, 7, rng);
        Database db = encode(msgs, G);
        for (int a = 1; a <= 5; ++a)
            for (int b = a + 1; b <= 5; ++b)
                for (int c = b + 1; c <= 5; ++c) {
                    long long w = db.block_width();
                    for (int j = 0; j < 2; ++j) {
                        auto blk = [&](int srv) {
                            return FpVec(db.blocks[srv - 1].begin() + j * w,
                                         db.blocks[srv - 1].begin() + (j + 1) * w);
                        };
                        FpVec rec = decode_from_subset(
                            {{a, blk(a)}, {b, blk(b)}, {c, blk(c)}}, G);
                        CHECK(rec == msgs[j]);
                    }
                }
    }
}

TEST_CASE("generator persistence round-trips") {
    auto G = GeneratorSpec::coded_4_2_preset(3);
    std::string path = std::string("/tmp/pirlift_gen_") + std::to_string(getpid()) + ".txt";
    G.save(path);
    auto H = GeneratorSpec::load(path);
    CHECK(H.matrix().a == G.matrix().a);
    CHECK(H.q() == 3);
    std::remove(path.c_str());
}

TEST_CASE("length violations raise parameter errors") {
    auto G = GeneratorSpec::coded_4_2_preset(3);
    CHECK_THROWS_AS(encode({make_vec({1}, 3)}, G), ParamError); // K does not divide L
    CHECK_THROWS_AS(decode_from_subset({{1, make_vec({1}, 3)}}, G), ParamError);
    CHECK_THROWS_AS(
        decode_from_subset({{1, make_vec({1}, 3)}, {1, make_vec({1}, 3)}}, G), ParamError);
}

TEST_CASE("param validation") {
    PirParams p{4, 2, 2, 3, 5, 3, 16};
    CHECK_NOTHROW(p.validate());
    p.L = 15; // K must divide L
    CHECK_THROWS_AS(p.validate(), ParamError);
    p = PirParams{4, 5, 2, 3, 5, 3, 10};
    CHECK_THROWS_AS(p.validate(), ParamError); // K > N
}
