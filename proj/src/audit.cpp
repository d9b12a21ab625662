#include "pirlift/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

namespace pirlift {

namespace {

long long ipow(long long b, int e) {
    long long v = 1;
    while (e-- > 0) v *= b;
    return v;
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k < 1 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i + 1) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Regularized incomplete gamma Q(a, x) by series / continued fraction.
double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1.0;
    if (x == 0) return 1.0;
    double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) series, return 1 - P.
        double ap = a, sum = 1.0 / a, del = sum;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-14) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Q(a,x) continued fraction (Lentz).
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -1.0 * i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-14) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

// One round of the bare one-shot protocol: draw everything, then accept
// iff the informative functionals reach the round's maximal rank.
std::optional<std::vector<std::vector<std::uint32_t>>> sample_oneshot_round(
    const OneShotScheme& s, int m, long long w, VariableSource& src) {
    const auto& P = s.params;
    int N = P.N, K = P.K, d = s.d(), M = P.M;
    std::uint32_t q = P.q;
    long long dim = (long long)M * w;

    std::vector<std::vector<std::uint32_t>> z(d, std::vector<std::uint32_t>(dim));
    for (auto& zt : z)
        for (auto& e : zt) e = src.draw(q);
    std::map<int, std::vector<std::uint32_t>> a;
    for (int p : s.mixed_positions) {
        a[p].resize(w);
        for (auto& e : a[p]) e = src.draw(q);
    }

    long long L = (long long)w * K;
    RowSpace probe((int)L, q);
    int best = 0;
    for (int p : s.mixed_positions)
        for (long long st = 0; st < w; ++st) {
            std::vector<std::uint32_t> cand(L, 0);
            for (int k = 0; k < K; ++k) cand[st * K + k] = s.storage.matrix().at(k, p - 1);
            if (probe.add(std::move(cand))) { ++best; break; }
        }
    RowSpace space((int)L, q);
    int got = 0;
    for (int p : s.mixed_positions) {
        std::vector<std::uint32_t> f(L, 0);
        for (long long st = 0; st < w; ++st)
            for (int k = 0; k < K; ++k)
                f[st * K + k] = fp_mul(a[p][st], s.storage.matrix().at(k, p - 1), q);
        if (space.add(std::move(f))) ++got;
    }
    if (got < best) return std::nullopt;

    std::vector<std::vector<std::uint32_t>> queries(N, std::vector<std::uint32_t>(dim, 0));
    for (int c = 1; c <= N; ++c) {
        for (long long i = 0; i < dim; ++i) {
            std::uint64_t acc = 0;
            for (int t = 0; t < d; ++t)
                acc = (acc + (std::uint64_t)s.lambda.at(c - 1, t) * z[t][i]) % q;
            queries[c - 1][i] = (std::uint32_t)acc;
        }
        if (a.count(c))
            for (long long st = 0; st < w; ++st) {
                auto& coord = queries[c - 1][(long long)(m - 1) * w + st];
                coord = fp_add(coord, a[c][st], q);
            }
    }
    return queries;
}

std::string key_of(const std::vector<std::vector<std::uint32_t>>& vectors) {
    std::string key;
    for (const auto& v : vectors) {
        for (auto e : v) key += (char)('0' + e);
        key += '|';
    }
    return key;
}

std::string key_of_servers(const QueryBatch& batch, const std::vector<int>& J) {
    std::string key;
    for (int j : J) {
        for (const auto& v : batch.queries[j - 1]) {
            for (auto e : v) key += (char)('0' + e);
            key += '|';
        }
        key += '/';
    }
    return key;
}

InstantiateResult instantiate_with(const DecodingPlan& plan, int m, Rng& rng, bool biased) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::optional<InstantiateResult> res;
        if (biased) {
            BiasedSource src{Rng(rng.next())};
            res = instantiate_once(plan, m, src);
        } else {
            RandomSource src{Rng(rng.next())};
            res = instantiate_once(plan, m, src);
        }
        if (res) return std::move(*res);
    }
    throw RetryExhaustedError("audit: sampler acceptance failed 64 times");
}

} // namespace

double chi_square_p_value(double stat, int dof) {
    if (dof < 1) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

CheckResult correctness_suite(const SchemeConfig& cfg, int trials, std::uint64_t seed,
                              bool corrupt) {
    Rng rng = Rng(seed).sub("correctness");
    if (cfg.pipeline == "oneshot") {
        if (corrupt) throw ParamError("correctness: corruption control needs the lifted pipeline");
        OneShotScheme s = build_scheme(cfg);
        long long L = 2LL * s.params.K;
        for (int trial = 0; trial < trials; ++trial) {
            auto msgs = random_messages(cfg.M, L, cfg.q, rng);
            Database db = encode(msgs, s.storage);
            int m = 1 + trial % cfg.M;
            FpVec got = run_oneshot_rounds(s, db, m, rng);
            if (got != msgs[m - 1]) {
                std::ostringstream os;
                os << "one-shot retrieval mismatch: trial " << trial << " m " << m
                   << " seed " << seed;
                return {false, os.str()};
            }
        }
        return {true, "all trials recovered the requested message"};
    }
    DecodingPlan plan = build_plan_for(cfg);
    long long L = plan.message_length();
    for (int trial = 0; trial < trials; ++trial) {
        auto msgs = random_messages(cfg.M, L, cfg.q, rng);
        Database db = encode(msgs, plan.scheme.storage);
        int m = 1 + trial % cfg.M;
        auto res = instantiate_queries(plan, m, rng);
        ResponseBatch resp = answer_batch(db, res.batch);
        if (corrupt)
            resp.responses[0][0] = fp_add(resp.responses[0][0], 1, cfg.q);
        FpVec got = decode(plan, res.state, resp);
        if (got != msgs[m - 1]) {
            std::ostringstream os;
            os << "retrieval mismatch: trial " << trial << " m " << m << " seed " << seed;
            return {false, os.str()};
        }
    }
    return {true, "all trials recovered the requested message"};
}

DistributionTable enumerate_query_distribution(const SchemeConfig& cfg,
                                               const std::vector<int>& J, int m) {
    for (int j : J)
        if (j < 1 || j > cfg.N) throw ParamError("enumerate: bad server subset");
    DistributionTable table;
    OdometerSource src;
    bool first = true;
    if (cfg.pipeline == "oneshot") {
        OneShotScheme s = build_scheme(cfg);
        long long w = 1;
        while (true) {
            src.begin();
            auto sample = sample_oneshot_round(s, m, w, src);
            if (first) {
                if (src.state_count() > 1e7)
                    throw EnumerationInfeasibleError("enumerate: state space exceeds 10^7");
                first = false;
            }
            if (sample) {
                std::vector<std::vector<std::uint32_t>> view;
                for (int j : J) view.push_back((*sample)[j - 1]);
                table.record(key_of(view));
            }
            if (!src.advance()) break;
        }
        return table;
    }
    DecodingPlan plan = build_plan_for(cfg);
    while (true) {
        src.begin();
        auto res = instantiate_once(plan, m, src);
        if (first) {
            if (src.state_count() > 1e7)
                throw EnumerationInfeasibleError("enumerate: state space exceeds 10^7");
            first = false;
        }
        if (res) table.record(key_of_servers(res->batch, J));
        if (!src.advance()) break;
    }
    return table;
}

CheckResult privacy_exact_check(const SchemeConfig& cfg) {
    CheckResult out{true, ""};
    for_each_subset(cfg.N, cfg.T, [&](const std::vector<int>& J) {
        if (!out.pass) return;
        DistributionTable t1 = enumerate_query_distribution(cfg, J, 1);
        DistributionTable t2 = enumerate_query_distribution(cfg, J, 2);
        auto fail = [&](const std::string& key) {
            std::ostringstream os;
            os << "distributions differ for servers {";
            for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i];
            os << "} at tuple " << key;
            out = {false, os.str()};
        };
        for (const auto& [key, c1] : t1.counts) {
            auto it = t2.counts.find(key);
            long long c2 = it == t2.counts.end() ? 0 : it->second;
            if ((__int128)c1 * t2.total != (__int128)c2 * t1.total) return fail(key);
        }
        for (const auto& [key, c2] : t2.counts)
            if (!t1.counts.count(key)) return fail(key);
    });
    if (out.pass) out.detail = "query distributions identical for every T-subset";
    return out;
}

PrivacyStats privacy_statistical_check(const SchemeConfig& cfg, long long trials,
                                       double significance, bool biased) {
    DecodingPlan plan = build_plan_for(cfg);
    std::uint32_t q = cfg.q;
    int N = cfg.N, T = cfg.T;
    long long L = plan.message_length();
    long long w = L / plan.scheme.params.K;

    // Per-slot coordinate projection over the slot's support blocks,
    // sized so each cell expects at least ~5 samples.
    int width = 0;
    while (width < 4) {
        double cells = std::pow((double)q, width + 1);
        if (cells * 5.0 > (double)trials) break;
        ++width;
    }
    PrivacyStats stats;
    if (width == 0) {
        stats.inconclusive = true;
        stats.pass = true;
        stats.detail = "sample too small for any projection width; inconclusive";
        return stats;
    }

    struct SlotProj {
        int server, index;
        std::vector<long long> coords;
        std::vector<std::vector<long long>> counts; // [m-1][cell]
    };
    std::vector<SlotProj> slots;
    for (int j = 1; j <= N; ++j) {
        const auto& list = plan.server_slots[j - 1];
        for (std::size_t idx = 0; idx < list.size(); ++idx) {
            SlotProj sp;
            sp.server = j;
            sp.index = (int)idx;
            for (int blk : list[idx].second) {
                for (long long s = 0; s < w && (int)sp.coords.size() < width; ++s)
                    sp.coords.push_back((long long)(blk - 1) * w + s);
                if ((int)sp.coords.size() >= width) break;
            }
            long long cells = ipow(q, (int)sp.coords.size());
            sp.counts.assign(2, std::vector<long long>(cells, 0));
            slots.push_back(std::move(sp));
        }
    }

    std::vector<std::vector<int>> subsets;
    for_each_subset(N, T, [&](const std::vector<int>& J) { subsets.push_back(J); });
    // fingerprint buckets per T-subset, per m
    std::vector<std::array<std::vector<long long>, 2>> buckets(
        subsets.size(), {std::vector<long long>(64, 0), std::vector<long long>(64, 0)});

    Rng rng = Rng(cfg.seed).sub("privacy-stat");
    for (long long trial = 0; trial < trials; ++trial) {
        for (int m = 1; m <= 2; ++m) {
            auto res = instantiate_with(plan, m, rng, biased);
            for (auto& sp : slots) {
                const auto& qv = res.batch.queries[sp.server - 1][sp.index];
                long long cell = 0;
                for (long long c : sp.coords) cell = cell * q + qv[c];
                ++sp.counts[m - 1][cell];
            }
            for (std::size_t si = 0; si < subsets.size(); ++si) {
                std::string key = key_of_servers(res.batch, subsets[si]);
                ++buckets[si][m - 1][Rng::fnv1a(key) % 64];
            }
        }
    }

    double min_p = 1.0;
    int tests = 0;
    std::string worst;
    auto consider = [&](double p, const std::string& label) {
        ++tests;
        if (p < min_p) {
            min_p = p;
            worst = label;
        }
    };
    for (const auto& sp : slots) {
        for (int m = 1; m <= 2; ++m) {
            long long cells = (long long)sp.counts[m - 1].size();
            double expect = (double)trials / (double)cells;
            double stat = 0;
            for (long long c : sp.counts[m - 1]) stat += (c - expect) * (c - expect) / expect;
            std::ostringstream os;
            os << "uniformity server " << sp.server << " slot " << sp.index << " m " << m;
            consider(chi_square_p_value(stat, (int)cells - 1), os.str());
        }
    }
    for (std::size_t si = 0; si < subsets.size(); ++si) {
        double stat = 0;
        int dof = -1;
        for (int b = 0; b < 64; ++b) {
            double c1 = (double)buckets[si][0][b], c2 = (double)buckets[si][1][b];
            if (c1 + c2 == 0) continue;
            stat += (c1 - c2) * (c1 - c2) / (c1 + c2);
            ++dof;
        }
        std::ostringstream os;
        os << "fingerprint m1-vs-m2 servers {";
        for (std::size_t i = 0; i < subsets[si].size(); ++i)
            os << (i ? "," : "") << subsets[si][i];
        os << "}";
        consider(chi_square_p_value(stat, std::max(dof, 1)), os.str());
    }

    stats.min_p = min_p;
    stats.tests = tests;
    stats.pass = min_p >= significance / tests;
    std::ostringstream os;
    os << tests << " tests, min p = " << min_p << " at [" << worst << "], threshold "
       << significance / tests;
    stats.detail = os.str();
    return stats;
}

Rational capacity(int N, int T, int M) {
    if (T >= N) throw ParamError("capacity: need T < N");
    return Rational((long long)(N - T) * checked_pow_ll(N, M - 1),
                    checked_pow_ll(N, M) - checked_pow_ll(T, M));
}

Rational lifted_closed_rate(int N, int r, int M) {
    if (r < 0 || r >= N) throw ParamError("rate: need 0 <= r < N");
    if (r == 0) return Rational(1, 1); // degenerate: every query informative
    return Rational((long long)(N - r) * checked_pow_ll(N, M - 1),
                    checked_pow_ll(N, M) - checked_pow_ll(r, M));
}

Rational taje_rate(int N, int K, int T, int M) {
    return lifted_closed_rate(N * K, N * K - N + T, M);
}

Rational holl_rate(int N, int K, int T, int M) {
    return lifted_closed_rate(N, K + T - 1, M);
}

RateReport rate_formulas(int N, int K, int T, int M) {
    if (K + T > N) throw ParamError("rates: need K + T <= N");
    RateReport rep;
    rep.N = N;
    rep.K = K;
    rep.T = T;
    rep.M = M;
    rep.capacity_rate = capacity(N, T, M);
    rep.secret_sharing_rate = lifted_closed_rate(N, T, M);
    rep.taje = taje_rate(N, K, T, M);
    rep.holl = holl_rate(N, K, T, M);
    rep.ss_achieves_capacity = rep.secret_sharing_rate == rep.capacity_rate;
    rep.taje_le_holl = rep.taje <= rep.holl;
    rep.taje_eq_holl = rep.taje == rep.holl;
    return rep;
}

} // namespace pirlift
