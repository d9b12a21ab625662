#pragma once

#include <map>
#include <string>
#include <vector>

#include "pirlift/config.hpp"
#include "pirlift/rational.hpp"

namespace pirlift {

/// Exact count of each observed query tuple (or fingerprint).
struct DistributionTable {
    std::map<std::string, long long> counts;
    long long total = 0;

    void record(const std::string& key) {
        ++counts[key];
        ++total;
    }
};

struct CheckResult {
    bool pass = false;
    std::string detail;
};

/// Statistical privacy outcome. inconclusive is set when the sample is
/// too small for any projection width.
struct PrivacyStats {
    bool pass = false;
    bool inconclusive = false;
    double min_p = 1.0;
    int tests = 0;
    std::string detail;
};

/// End-to-end retrieval on `trials` random databases; the desired index
/// cycles through all messages. corrupt injects a response error and is
/// expected to make the suite fail.
CheckResult correctness_suite(const SchemeConfig& cfg, int trials, std::uint64_t seed,
                              bool corrupt = false);

/// Exact joint distribution of the queries the servers in J receive, by
/// exhaustive enumeration of the sampler's free scalars. Throws
/// EnumerationInfeasibleError beyond 10^7 states.
DistributionTable enumerate_query_distribution(const SchemeConfig& cfg,
                                               const std::vector<int>& J, int m);

/// For every T-subset J, the distributions under m = 1 and m = 2 must be
/// exactly equal.
CheckResult privacy_exact_check(const SchemeConfig& cfg);

/// Chi-square battery: per-slot marginal uniformity on a coordinate
/// projection sized to the sample, plus a two-sample test on hashed
/// query-tuple fingerprints per T-subset, Bonferroni-corrected. With
/// biased set, noise scalars are drawn from {0,1} (negative control).
PrivacyStats privacy_statistical_check(const SchemeConfig& cfg, long long trials,
                                       double significance, bool biased = false);

/// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_p_value(double stat, int dof);

// Closed-form rates.
Rational capacity(int N, int T, int M);                    // (N-T)N^{M-1}/(N^M-T^M)
Rational lifted_closed_rate(int N, int r, int M);          // (N-r)N^{M-1}/(N^M-r^M)
Rational taje_rate(int N, int K, int T, int M);            // lifted at (NK, NK-N+T)
Rational holl_rate(int N, int K, int T, int M);            // lifted at (N, K+T-1)

struct RateReport {
    int N = 0, K = 1, T = 1, M = 2;
    Rational capacity_rate;
    Rational secret_sharing_rate; // lifted with r = T (K = 1 construction)
    Rational taje;
    Rational holl;
    bool ss_achieves_capacity = false;
    bool taje_le_holl = false;
    bool taje_eq_holl = false;
};

RateReport rate_formulas(int N, int K, int T, int M);

} // namespace pirlift
