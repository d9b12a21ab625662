#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pirlift/audit.hpp"

using namespace pirlift;

namespace {

SchemeConfig cfg_of(const std::string& text) { return SchemeConfig::parse(text); }

const char* kOneTimePad =
    "kind secret_sharing\nN 2\nT 1\nM 2\nq 2\npipeline oneshot\n";
const char* kRefinedN2 =
    "kind secret_sharing\nN 2\nT 1\nM 2\nq 3\npipeline lifted\n";
const char* kZeroNoise =
    "kind explicit\nN 2\nK 1\nT 1\nM 2\nq 3\npipeline oneshot\nvalidate 0\n"
    "generator\n1 1\nlambda\n0\n0\nmixed 2\n";

} // namespace

TEST_CASE("correctness suite passes on working configurations") {
    CHECK(correctness_suite(cfg_of(kRefinedN2), 20, 7).pass);
    CHECK(correctness_suite(
              cfg_of("kind geometrical\nN 4\nK 2\nT 2\nM 2\nq 3\n"), 10, 7)
              .pass);
    CHECK(correctness_suite(
              cfg_of("kind secret_sharing\nN 4\nT 2\nM 2\nq 3\npipeline oneshot\n"), 10, 7)
              .pass);
}

TEST_CASE("correctness suite detects a corrupted response") {
    auto res = correctness_suite(cfg_of(kRefinedN2), 4, 7, /*corrupt=*/true);
    CHECK_FALSE(res.pass);
    CHECK(res.detail.find("mismatch") != std::string::npos);
    CHECK_THROWS_AS(correctness_suite(cfg_of(kOneTimePad), 2, 7, true), ParamError);
}

TEST_CASE("one-time pad: exact enumeration is uniform and index-independent") {
    auto cfg = cfg_of(kOneTimePad);
    for (int j : {1, 2}) {
        auto t = enumerate_query_distribution(cfg, {j}, 1);
        CHECK(t.total == 4); // 4 pad values x the single accepted mask
        CHECK(t.counts.size() == 4);
        for (const auto& [key, c] : t.counts) CHECK(c == 1);
    }
    auto res = privacy_exact_check(cfg);
    CHECK(res.pass);
}

TEST_CASE("refined replication over F_3: exact privacy by full enumeration") {
    auto res = privacy_exact_check(cfg_of(kRefinedN2));
    CHECK(res.pass);
    CHECK(res.detail.find("every T-subset") != std::string::npos);
}

TEST_CASE("coded one-shot scheme: exact privacy for every 2-subset") {
    // (4,2,2) worked instance, bare protocol, 3^5 states per index
    auto cfg = cfg_of("kind explicit\nN 4\nK 2\nT 2\nM 2\nq 3\npipeline oneshot\n");
    CHECK(privacy_exact_check(cfg).pass);
}

TEST_CASE("zeroed noise code leaks the desired index") {
    auto cfg = cfg_of(kZeroNoise);
    auto res = privacy_exact_check(cfg);
    CHECK_FALSE(res.pass);
    CHECK(res.detail.find("differ") != std::string::npos);
}

TEST_CASE("enumeration refuses oversized state spaces") {
    auto cfg = cfg_of("kind secret_sharing\nN 4\nT 2\nM 2\nq 5\n");
    CHECK_THROWS_AS(enumerate_query_distribution(cfg, {1, 2}, 1),
                    EnumerationInfeasibleError);
    CHECK_THROWS_AS(enumerate_query_distribution(cfg_of(kOneTimePad), {0}, 1), ParamError);
}

TEST_CASE("statistical battery passes a sound scheme and fails a biased sampler") {
    // large enough that conditioning on the acceptance step leaves only a
    // negligible marginal bias
    auto cfg = cfg_of("kind secret_sharing\nN 4\nT 2\nM 2\nq 5\nseed 11\n");
    auto ok = privacy_statistical_check(cfg, 2000, 0.01);
    CHECK(ok.pass);
    CHECK_FALSE(ok.inconclusive);
    CHECK(ok.tests > 0);
    auto bad = privacy_statistical_check(cfg, 2000, 0.01, /*biased=*/true);
    CHECK_FALSE(bad.pass);
    CHECK(bad.min_p < 1e-6);
}

TEST_CASE("statistical battery reports tiny samples as inconclusive") {
    auto cfg = cfg_of("kind secret_sharing\nN 2\nT 1\nM 2\nq 5\n");
    auto res = privacy_statistical_check(cfg, 10, 0.01);
    CHECK(res.inconclusive);
    CHECK(res.pass);
}

TEST_CASE("chi-square tail values") {
    CHECK(chi_square_p_value(0.0, 5) == 1.0);
    CHECK(chi_square_p_value(3.841, 1) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(chi_square_p_value(9.488, 4) == doctest::Approx(0.05).epsilon(0.01));
    CHECK(chi_square_p_value(200.0, 4) < 1e-12);
    CHECK(chi_square_p_value(1.0, 0) == 1.0);
}

TEST_CASE("capacity examples") {
    CHECK(capacity(2, 1, 2) == Rational(2, 3));
    CHECK(capacity(4, 2, 3) == Rational(4, 7));
    CHECK(capacity(3, 1, 1) == Rational(1, 1));
    CHECK_THROWS_AS(capacity(3, 3, 2), ParamError);
}

TEST_CASE("closed-form plan rates") {
    CHECK(lifted_closed_rate(2, 1, 2) == Rational(2, 3));
    CHECK(lifted_closed_rate(4, 3, 2) == Rational(4, 7));
    CHECK(lifted_closed_rate(4, 3, 3) == Rational(16, 37));
    CHECK(lifted_closed_rate(5, 0, 4) == Rational(1, 1));
    CHECK_THROWS_AS(lifted_closed_rate(4, 4, 2), ParamError);
}

TEST_CASE("replicated construction achieves capacity at every size") {
    for (int N = 2; N <= 8; ++N)
        for (int T = 1; T < N; ++T)
            for (int M = 1; M <= 6; ++M)
                CHECK(lifted_closed_rate(N, T, M) == capacity(N, T, M));
}

TEST_CASE("published rate curve for N = 10, r = 7") {
    const double expect[] = {0.588, 0.457, 0.395, 0.361, 0.340,
                             0.3269, 0.3183, 0.3126, 0.3087};
    // M = 2..10, decreasing toward (N-r)/N = 0.3
    double prev = 1.0;
    for (int M = 2; M <= 10; ++M) {
        double v = lifted_closed_rate(10, 7, M).to_double();
        double err = v - expect[M - 2];
        CHECK(err < 0.01);
        CHECK(err > -0.01);
        CHECK(v < prev);
        CHECK(v > 0.3);
        prev = v;
    }
}

TEST_CASE("coded-rate comparison across the parameter grid") {
    for (int N = 2; N <= 7; ++N)
        for (int K = 1; K <= N; ++K)
            for (int T = 1; K + T <= N; ++T)
                for (int M = 2; M <= 4; ++M) {
                    auto rep = rate_formulas(N, K, T, M);
                    CHECK(rep.taje_le_holl);
                    CHECK(rep.taje_eq_holl == (K == 1 || N == K + T));
                    CHECK(rep.ss_achieves_capacity);
                    CHECK(rep.holl <= rep.capacity_rate);
                }
    CHECK_THROWS_AS(rate_formulas(4, 3, 2, 2), ParamError);
}

TEST_CASE("worked comparison values") {
    CHECK(taje_rate(4, 2, 2, 2) == lifted_closed_rate(8, 6, 2));
    CHECK(holl_rate(4, 2, 2, 2) == Rational(4, 7));
    CHECK(taje_rate(4, 2, 2, 2) == Rational(8, 14));
    CHECK(taje_rate(4, 2, 2, 2) == holl_rate(4, 2, 2, 2)); // N = K + T
    // strict inequality once N > K + T
    CHECK(taje_rate(5, 2, 2, 3) < holl_rate(5, 2, 2, 3));
}
