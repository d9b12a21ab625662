#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pirlift/oneshot.hpp"

using namespace pirlift;

namespace {

std::uint32_t neg(std::uint32_t a, std::uint32_t q) { return fp_neg(a, q); }

// independent check of one decoding identity by exhaustive enumeration
// of all (database, free noise) pairs for tiny dimensions (M=2, L=K).
bool identity_holds_exhaustively(const OneShotScheme& s, int p) {
    const auto& P = s.params;
    std::uint32_t q = P.q;
    int N = P.N, K = P.K, d = s.d();
    int M = 2;
    long long w = 1, dim = M * w, L = K;
    // enumerate messages and noise together
    long long msg_states = 1;
    for (int i = 0; i < M * (int)L; ++i) msg_states *= q;
    long long noise_states = 1;
    for (int i = 0; i < d * (int)dim; ++i) noise_states *= q;
    for (long long ms = 0; ms < msg_states; ++ms) {
        long long acc = ms;
        std::vector<FpVec> msgs(M);
        for (int j = 0; j < M; ++j)
            for (int i = 0; i < (int)L; ++i) {
                msgs[j].emplace_back(acc % q, q);
                acc /= q;
            }
        Database db = encode(msgs, s.storage);
        for (long long ns = 0; ns < noise_states; ++ns) {
            long long na = ns;
            std::vector<std::vector<std::uint32_t>> z(d, std::vector<std::uint32_t>(dim));
            for (auto& zt : z)
                for (auto& e : zt) {
                    e = (std::uint32_t)(na % q);
                    na /= q;
                }
            std::vector<std::uint32_t> resp(N + 1, 0);
            for (int c = 1; c <= N; ++c) {
                std::uint64_t a = 0;
                for (long long i = 0; i < dim; ++i) {
                    std::uint64_t qi = 0;
                    for (int t = 0; t < d; ++t)
                        qi = (qi + (std::uint64_t)s.lambda.at(c - 1, t) * z[t][i]) % q;
                    a = (a + qi * db.blocks[c - 1][i].value()) % q;
                }
                resp[c] = (std::uint32_t)a;
            }
            std::uint64_t rhs = 0;
            const auto& al = s.alpha.at(p);
            for (std::size_t j = 0; j < s.noise_positions.size(); ++j)
                rhs = (rhs + (std::uint64_t)al[j] * resp[s.noise_positions[j]]) % q;
            if ((std::uint32_t)rhs != resp[p]) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("replication N=2 T=1: all-ones noise code, sum decoding equation") {
    auto s = build_secret_sharing_oneshot(2, 1, 2, 2);
    CHECK(s.lambda.rows == 2);
    CHECK(s.lambda.cols == 1);
    CHECK(s.lambda.at(0, 0) == 1);
    CHECK(s.lambda.at(1, 0) == 1);
    CHECK(s.alpha.at(2) == std::vector<std::uint32_t>{1});
    CHECK(oneshot_rate(s) == Rational(1, 2));
}

TEST_CASE("secret sharing N=4 T=2 over F_3 reproduces the worked noise rows") {
    auto s = build_secret_sharing_oneshot(4, 2, 2, 3);
    // rows: z1, z2, z1+z2, z1+2 z2
    CHECK(s.lambda.row(0) == std::vector<std::uint32_t>{1, 0});
    CHECK(s.lambda.row(1) == std::vector<std::uint32_t>{0, 1});
    CHECK(s.lambda.row(2) == std::vector<std::uint32_t>{1, 1});
    CHECK(s.lambda.row(3) == std::vector<std::uint32_t>{1, 2});
    CHECK(s.mixed_positions == std::vector<int>{3, 4});
    // <D,z1+z2> = <D,z1> + <D,z2>
    CHECK(s.alpha.at(3) == std::vector<std::uint32_t>{1, 1});
    CHECK(s.alpha.at(4) == std::vector<std::uint32_t>{1, 2});
    CHECK_NOTHROW(verify_oneshot(s, 100, 11));
}

TEST_CASE("degenerate T = N is rejected") {
    CHECK_THROWS_AS(build_secret_sharing_oneshot(3, 3, 2, 5), ParamError);
}

TEST_CASE("too-small fields are rejected as infeasible") {
    // N=5, T=2 needs >= 3 distinct evaluation points; F_2 offers 1.
    CHECK_THROWS_AS(build_secret_sharing_oneshot(5, 2, 2, 2), InfeasibleError);
}

TEST_CASE("geometrical (4,2,2) over F_3 matches the worked combination") {
    auto G = GeneratorSpec::coded_4_2_preset(3);
    auto s = build_geometrical_oneshot(4, 2, 2, 3, G);
    CHECK(s.params.r == 3);
    // q3 = 2 z1 - z2, q4 = -z1 + z2
    CHECK(s.lambda.row(2) == std::vector<std::uint32_t>{2, neg(1, 3)});
    CHECK(s.lambda.row(3) == std::vector<std::uint32_t>{neg(1, 3), 1});
    // <D4,q4> = <D1,q1> + <D2,q2> - <D3,q3>
    CHECK(s.alpha.at(4) == std::vector<std::uint32_t>{1, 1, neg(1, 3)});
    CHECK_NOTHROW(verify_oneshot(s, 100, 3));
}

TEST_CASE("geometrical K=1 with N=K+T reduces to a secret-sharing-style scheme") {
    auto G = GeneratorSpec::from_coefficients(1, 3, 5, {{1, 1, 1}});
    auto s = build_geometrical_oneshot(3, 1, 2, 5, G);
    CHECK(s.params.r == 2);
    CHECK(s.mixed_positions == std::vector<int>{3});
    CHECK_NOTHROW(verify_oneshot(s, 100, 5));
}

TEST_CASE("N = K+T single mixed position verified by brute force over F_3") {
    auto G = GeneratorSpec::coded_4_2_preset(3); // N=4=K+T
    auto s = build_geometrical_oneshot(4, 2, 2, 3, G);
    REQUIRE(s.mixed_positions == std::vector<int>{4});
    CHECK(identity_holds_exhaustively(s, 4));
}

TEST_CASE("geometrical parameter guards") {
    auto G = GeneratorSpec::coded_4_2_preset(3);
    CHECK_THROWS_AS(build_geometrical_oneshot(4, 2, 3, 3, G), ParamError); // K+T-1 >= N
}

TEST_CASE("explicit (4,2,2) instance and its decoding equations") {
    auto s = build_explicit_422(5);
    CHECK(s.params.r == 3);
    CHECK(s.mixed_positions == std::vector<int>{4});
    // p=4 over noise (1,2,3): (-1, 2, 2)
    CHECK(s.alpha.at(4) == std::vector<std::uint32_t>{neg(1, 5), 2, 2});
    // p=3 over noise (1,2,4): (-2, -1, -2), i.e. (2, -1, 2) mod 3
    auto a3 = derive_decoding_equation(s.lambda, s.storage, {1, 2, 4}, 3);
    CHECK(a3 == std::vector<std::uint32_t>{neg(2, 5), neg(1, 5), neg(2, 5)});
    auto s3 = build_explicit_422(3);
    CHECK(derive_decoding_equation(s3.lambda, s3.storage, {1, 2, 4}, 3) ==
          std::vector<std::uint32_t>{2, neg(1, 3), 2});
    CHECK_NOTHROW(verify_oneshot(s, 100, 17));
}

TEST_CASE("explicit instance works at the paper characteristic too") {
    auto s = build_explicit_422(3);
    CHECK(s.alpha.at(4) == std::vector<std::uint32_t>{neg(1, 3), 2, 2});
}

TEST_CASE("incompatible characteristic is rejected") {
    CHECK_THROWS_AS(build_explicit_422(2), InfeasibleError);
}

TEST_CASE("identity noise code with r = N-1 over replication") {
    auto G = GeneratorSpec::from_coefficients(1, 3, 3, {{1, 1, 1}});
    FpMat lambda(3, 2, 3);
    lambda.at(0, 0) = 1;
    lambda.at(1, 1) = 1;
    lambda.at(2, 0) = 1;
    lambda.at(2, 1) = 1; // row 3 = z1+z2 keeps every T=1 row nonzero
    PirParams p{3, 1, 1, 2, 3, 2, 1};
    auto s = build_explicit_oneshot(p, G, lambda, {3});
    CHECK(s.alpha.at(3) == std::vector<std::uint32_t>{1, 1});
    CHECK_NOTHROW(verify_oneshot(s, 100, 23));
}

TEST_CASE("duplicate noise rows fail the T-rank validation") {
    auto G = GeneratorSpec::from_coefficients(1, 4, 5, {{1, 1, 1, 1}});
    FpMat lambda(4, 2, 5);
    lambda.at(0, 0) = 1;
    lambda.at(1, 1) = 1;
    lambda.at(2, 0) = 1; // rows 3 and 4 equal
    lambda.at(3, 0) = 1;
    PirParams p{4, 1, 2, 2, 5, 2, 1};
    CHECK_THROWS_AS(build_explicit_oneshot(p, G, lambda, {3, 4}), ValidationError);
}

TEST_CASE("decoding equation derivation guards") {
    auto s = build_explicit_422(5);
    CHECK_THROWS_AS(derive_decoding_equation(s.lambda, s.storage, {1, 2, 3}, 2), ParamError);
    // two noise positions cannot reproduce position 4's bilinear form
    CHECK_THROWS_AS(derive_decoding_equation(s.lambda, s.storage, {1, 2}, 4),
                    NotDecodableError);
}

TEST_CASE("rotation moves the mixed slot and re-derives coefficients") {
    auto s = build_explicit_422(5);
    auto same = rotate_oneshot(s, 0);
    CHECK(same.noise_positions == s.noise_positions);
    CHECK(same.alpha == s.alpha);

    // offset 3 -> noise window {4,1,2}, mixed at 3; paper's second round
    auto r3 = rotate_oneshot(s, 3);
    CHECK(r3.mixed_positions == std::vector<int>{3});
    CHECK(r3.noise_positions == std::vector<int>{4, 1, 2});
    // same identity as the direct derivation, reordered to the new window
    CHECK(r3.alpha.at(3) ==
          derive_decoding_equation(s.lambda, s.storage, {4, 1, 2}, 3));
    CHECK(r3.alpha.at(3) ==
          std::vector<std::uint32_t>{fp_neg(2, 5), fp_neg(2, 5), fp_neg(1, 5)});

    // N single-step rotations compose to the identity
    auto acc = s;
    for (int i = 0; i < 4; ++i) acc = rotate_oneshot(acc, 1);
    CHECK(acc.noise_positions == s.noise_positions);
    CHECK(acc.mixed_positions == s.mixed_positions);
    CHECK(acc.alpha == s.alpha);
}

TEST_CASE("every rotation of every construction verifies") {
    auto check_all = [](const OneShotScheme& s) {
        for (int off = 0; off < s.params.N; ++off)
            CHECK_NOTHROW(verify_oneshot(rotate_oneshot(s, off), 20, 100 + off));
    };
    check_all(build_secret_sharing_oneshot(4, 2, 2, 3));
    check_all(build_geometrical_oneshot(4, 2, 2, 3, GeneratorSpec::coded_4_2_preset(3)));
    check_all(build_explicit_422(5));
}

TEST_CASE("rates") {
    CHECK(oneshot_rate(build_secret_sharing_oneshot(2, 1, 2, 2)) == Rational(1, 2));
    CHECK(oneshot_rate(build_explicit_422(3)) == Rational(1, 4));
}

TEST_CASE("rounds recover the message: worked (4,2,2) L=2") {
    auto s = build_explicit_422(3);
    Rng rng(404);
    for (int t = 0; t < 100; ++t) {
        auto msgs = random_messages(2, 2, 3, rng);
        Database db = encode(msgs, s.storage);
        int m = 1 + t % 2;
        FpVec got = run_oneshot_rounds(s, db, m, rng);
        CHECK(got == msgs[m - 1]);
    }
}

TEST_CASE("rounds recover the message across constructions and lengths") {
    Rng rng(505);
    auto run = [&](const OneShotScheme& s, long long L, int M) {
        for (int t = 0; t < 25; ++t) {
            auto msgs = random_messages(M, L, s.params.q, rng);
            Database db = encode(msgs, s.storage);
            int m = 1 + t % M;
            CHECK(run_oneshot_rounds(s, db, m, rng) == msgs[m - 1]);
        }
    };
    run(build_secret_sharing_oneshot(2, 1, 2, 2), 1, 2);
    run(build_secret_sharing_oneshot(4, 2, 3, 3), 4, 3);
    run(build_geometrical_oneshot(4, 2, 2, 3, GeneratorSpec::coded_4_2_preset(3)), 4, 2);
    run(build_explicit_422(5), 6, 2);
}
