#include "pirlift/oneshot.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace pirlift {

namespace {

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k < 1 || k > n) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Response of server c as a bilinear form in (data stripe row, free
// noise vector): entry (k,t) = G[k,c] * lambda[c,t], flattened row-major.
std::vector<std::uint32_t> response_form(const FpMat& lambda, const GeneratorSpec& G, int c) {
    int K = G.K(), d = lambda.cols;
    std::uint32_t q = G.q();
    std::vector<std::uint32_t> v((std::size_t)K * d);
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < d; ++t)
            v[(std::size_t)k * d + t] = fp_mul(G.matrix().at(k, c - 1), lambda.at(c - 1, t), q);
    return v;
}

std::vector<int> window_positions(int N, int offset, int from, int count) {
    std::vector<int> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back((offset + from + i) % N + 1);
    return out;
}

void derive_all_equations(OneShotScheme& s) {
    s.alpha.clear();
    for (int p : s.mixed_positions)
        s.alpha[p] = derive_decoding_equation(s.lambda, s.storage, s.noise_positions, p);
}

} // namespace

std::vector<std::uint32_t> derive_decoding_equation(const FpMat& lambda,
                                                    const GeneratorSpec& G,
                                                    const std::vector<int>& noise_positions,
                                                    int p) {
    for (int n : noise_positions)
        if (n == p) throw ParamError("decoding equation: target is a noise position");
    int K = G.K(), d = lambda.cols;
    int r = (int)noise_positions.size();
    std::uint32_t q = G.q();
    FpMat A(K * d, r, q);
    for (int j = 0; j < r; ++j) {
        auto col = response_form(lambda, G, noise_positions[j]);
        for (int i = 0; i < K * d; ++i) A.at(i, j) = col[i];
    }
    auto b = response_form(lambda, G, p);
    auto x = solve(A, b);
    if (!x) {
        std::ostringstream os;
        os << "no decoding equation for position " << p << " over the given noise positions";
        throw NotDecodableError(os.str());
    }
    return *x;
}

OneShotScheme build_secret_sharing_oneshot(int N, int T, int M, std::uint32_t q) {
    if (T < 1 || T >= N) throw ParamError("secret sharing scheme: need 1 <= T < N");
    FieldModulus mod(q);
    auto G = GeneratorSpec::from_coefficients(
        1, N, q, {std::vector<long long>((std::size_t)N, 1)});

    // Noise rows: free vectors at 1..T, then evaluation points 1..N-T.
    FpMat lambda(N, T, q);
    for (int i = 0; i < T; ++i) lambda.at(i, i) = 1;
    for (int i = 1; i <= N - T; ++i) {
        std::uint32_t x = fp_reduce(i, q), pw = 1;
        for (int t = 0; t < T; ++t) {
            lambda.at(T + i - 1, t) = pw;
            pw = fp_mul(pw, x, q);
        }
    }

    OneShotScheme s{PirParams{N, 1, T, M, q, T, 1},
                    std::move(G),
                    std::move(lambda),
                    0,
                    window_positions(N, 0, 0, T),
                    window_positions(N, 0, T, N - T),
                    {}};
    derive_all_equations(s);
    try {
        validate_oneshot(s);
    } catch (const ValidationError& e) {
        throw InfeasibleError(std::string("secret sharing scheme: q too small for an (N,T) "
                                          "noise code: ") + e.what());
    }
    return s;
}

OneShotScheme build_geometrical_oneshot(int N, int K, int T, std::uint32_t q,
                                        const GeneratorSpec& G) {
    if (K + T - 1 >= N) throw ParamError("geometrical scheme: need K+T-1 < N");
    if (T < 1) throw ParamError("geometrical scheme: need T >= 1");
    if (G.K() != K || G.N() != N || G.q() != q)
        throw ParamError("geometrical scheme: generator shape/field mismatch");
    int r = K + T - 1;
    int l0 = K + T; // reference mixed position

    // lam[l][i] = coefficients of g_i in the basis {g_{T+1..K+T-1}, g_l}:
    // entries 0..K-2 are the basis-position coefficients, entry K-1 is
    // the g_l coefficient.
    std::map<int, std::vector<std::vector<std::uint32_t>>> lam;
    for (int l = l0; l <= N; ++l) {
        FpMat B(K, K, q);
        for (int j = 0; j < K - 1; ++j)
            for (int k = 0; k < K; ++k) B.at(k, j) = G.matrix().at(k, T + j);
        for (int k = 0; k < K; ++k) B.at(k, K - 1) = G.matrix().at(k, l - 1);
        auto Binv = inverse(B);
        if (!Binv) throw InternalError("geometrical scheme: basis not invertible (MDS violated)");
        std::vector<std::vector<std::uint32_t>> coeffs(T);
        for (int i = 0; i < T; ++i) {
            coeffs[i].assign(K, 0);
            for (int a = 0; a < K; ++a)
                for (int k = 0; k < K; ++k)
                    coeffs[i][a] = fp_add(
                        coeffs[i][a], fp_mul(Binv->at(a, k), G.matrix().at(k, i), q), q);
            for (int a = 0; a < K; ++a)
                if (coeffs[i][a] == 0)
                    throw InternalError("geometrical scheme: zero coefficient (MDS violated)");
        }
        lam[l] = std::move(coeffs);
    }

    // gamma[i][l] = lam^i_j(l0) / lam^i_j(l), required independent of j.
    std::map<int, std::vector<std::uint32_t>> gamma;
    for (int l = l0; l <= N; ++l) {
        std::vector<std::uint32_t> g(T);
        for (int i = 0; i < T; ++i) {
            int ref = K >= 2 ? 0 : K - 1; // fall back to the g_l coefficient when no basis slots
            g[i] = fp_mul(lam[l0][i][ref], fp_inv(lam[l][i][ref], q), q);
            for (int j = 0; j < K - 1; ++j) {
                std::uint32_t ratio = fp_mul(lam[l0][i][j], fp_inv(lam[l][i][j], q), q);
                if (ratio != g[i]) {
                    std::ostringstream os;
                    os << "geometrical scheme: ratio condition fails at (i=" << i + 1
                       << ", j=" << T + 1 + j << ", l=" << l << ")";
                    throw InfeasibleError(os.str());
                }
            }
        }
        gamma[l] = std::move(g);
    }

    FpMat lambda(N, T, q);
    for (int i = 0; i < T; ++i) lambda.at(i, i) = 1;
    for (int j = T + 1; j <= r; ++j)
        for (int t = 0; t < T; ++t) lambda.at(j - 1, t) = lam[l0][t][j - T - 1];
    for (int l = l0; l <= N; ++l)
        for (int t = 0; t < T; ++t)
            lambda.at(l - 1, t) = fp_mul(gamma[l][t], lam[l][t][K - 1], q);

    OneShotScheme s{PirParams{N, K, T, 2, q, r, (long long)K},
                    G,
                    std::move(lambda),
                    0,
                    window_positions(N, 0, 0, r),
                    window_positions(N, 0, r, N - r),
                    {}};
    derive_all_equations(s);
    validate_oneshot(s);
    return s;
}

OneShotScheme build_explicit_oneshot(const PirParams& params, const GeneratorSpec& G,
                                     const FpMat& lambda, const std::vector<int>& mixed_positions,
                                     bool validate) {
    int N = params.N;
    if (lambda.rows != N || lambda.cols < 1)
        throw ParamError("explicit scheme: lambda must have one row per server");
    if (lambda.q != params.q || G.q() != params.q || G.N() != N || G.K() != params.K)
        throw ParamError("explicit scheme: field/shape mismatch");
    std::vector<bool> is_mixed(N + 1, false);
    for (int p : mixed_positions) {
        if (p < 1 || p > N || is_mixed[p])
            throw ParamError("explicit scheme: bad mixed position list");
        is_mixed[p] = true;
    }
    int r = N - (int)mixed_positions.size();
    if (r != params.r) throw ParamError("explicit scheme: r does not match mixed positions");

    // If the noise positions form one cyclic window the scheme is
    // rotatable; record the window offset, else mark it non-rotatable.
    int offset = -1;
    for (int o = 0; o < N; ++o) {
        bool ok = true;
        for (int i = 0; i < N && ok; ++i) ok = is_mixed[(o + i) % N + 1] == (i >= r);
        if (ok) { offset = o; break; }
    }

    OneShotScheme s{params, G, lambda, offset, {}, {}, {}};
    if (offset >= 0) {
        s.noise_positions = window_positions(N, offset, 0, r);
        s.mixed_positions = window_positions(N, offset, r, N - r);
    } else {
        for (int p = 1; p <= N; ++p)
            (is_mixed[p] ? s.mixed_positions : s.noise_positions).push_back(p);
    }
    derive_all_equations(s);
    if (validate) validate_oneshot(s);
    return s;
}

OneShotScheme build_explicit_422(std::uint32_t q) {
    try {
        auto G = GeneratorSpec::coded_4_2_preset(q);
        FpMat lambda(4, 2, q);
        std::vector<std::vector<long long>> rows = {{1, 0}, {0, 1}, {1, 1}, {1, 2}};
        for (int i = 0; i < 4; ++i)
            for (int t = 0; t < 2; ++t) lambda.at(i, t) = fp_reduce(rows[i][t], q);
        return build_explicit_oneshot(PirParams{4, 2, 2, 2, q, 3, 2}, G, lambda, {4});
    } catch (const ValidationError& e) {
        std::ostringstream os;
        os << "(4,2,2) scheme needs a compatible field characteristic; over F_" << q
           << " it degenerates: " << e.what();
        throw InfeasibleError(os.str());
    }
}

void validate_oneshot(const OneShotScheme& s) {
    int N = s.params.N, T = s.params.T, d = s.d();
    int r = (int)s.noise_positions.size();
    std::uint32_t q = s.params.q;
    if (s.lambda.rows != N) throw ValidationError("scheme: lambda row count != N");
    if (r != s.params.r || r + (int)s.mixed_positions.size() != N)
        throw ValidationError("scheme: role partition inconsistent");

    for_each_subset(N, T, [&](const std::vector<int>& rows) {
        FpMat sub(T, d, q);
        for (int i = 0; i < T; ++i)
            for (int t = 0; t < d; ++t) sub.at(i, t) = s.lambda.at(rows[i], t);
        if (rank_of(sub) < T) {
            std::ostringstream os;
            os << "scheme: noise rows of servers {";
            for (std::size_t i = 0; i < rows.size(); ++i)
                os << (i ? "," : "") << rows[i] + 1;
            os << "} have rank < T (T queries not jointly uniform)";
            throw ValidationError(os.str());
        }
    });

    FpMat noise(r, d, q);
    for (int i = 0; i < r; ++i)
        for (int t = 0; t < d; ++t) noise.at(i, t) = s.lambda.at(s.noise_positions[i] - 1, t);
    if (rank_of(noise) < d)
        throw ValidationError("scheme: noise-position rows do not span the free noise space");

    for (int p : s.mixed_positions)
        if (!s.alpha.count(p))
            throw ValidationError("scheme: missing decoding equation for a mixed position");
}

OneShotScheme rotate_oneshot(const OneShotScheme& s, int offset) {
    int N = s.params.N;
    if (offset < 0 || offset >= N) throw ParamError("rotate: need 0 <= offset < N");
    if (s.offset < 0)
        throw ValidationError("rotate: noise positions are not a cyclic window");
    if (offset == 0) return s;
    OneShotScheme out = s;
    out.offset = (s.offset + offset) % N;
    out.noise_positions = window_positions(N, out.offset, 0, s.params.r);
    out.mixed_positions = window_positions(N, out.offset, s.params.r, N - s.params.r);
    derive_all_equations(out);
    validate_oneshot(out);
    return out;
}

void verify_oneshot(const OneShotScheme& s, int trials, std::uint64_t seed) {
    validate_oneshot(s);
    const auto& P = s.params;
    std::uint32_t q = P.q;
    int N = P.N, K = P.K, M = std::max(P.M, 2), d = s.d();
    long long w = 2, L = w * K; // two stripes keep the identity nontrivial
    Rng rng = Rng(seed).sub("verify");
    for (int trial = 0; trial < trials; ++trial) {
        auto msgs = random_messages(M, L, q, rng);
        Database db = encode(msgs, s.storage);
        long long dim = (long long)M * w;
        std::vector<std::vector<std::uint32_t>> z(d);
        for (int t = 0; t < d; ++t) {
            z[t].resize(dim);
            for (auto& e : z[t]) e = rng.below(q);
        }
        std::vector<std::uint32_t> resp(N + 1, 0);
        for (int c = 1; c <= N; ++c) {
            std::uint64_t acc = 0;
            for (long long i = 0; i < dim; ++i) {
                std::uint64_t qi = 0;
                for (int t = 0; t < d; ++t)
                    qi = (qi + (std::uint64_t)s.lambda.at(c - 1, t) * z[t][i]) % q;
                acc = (acc + qi * db.blocks[c - 1][i].value()) % q;
            }
            resp[c] = (std::uint32_t)acc;
        }
        for (int p : s.mixed_positions) {
            std::uint64_t rhs = 0;
            const auto& a = s.alpha.at(p);
            for (std::size_t j = 0; j < s.noise_positions.size(); ++j)
                rhs = (rhs + (std::uint64_t)a[j] * resp[s.noise_positions[j]]) % q;
            if ((std::uint32_t)rhs != resp[p]) {
                std::ostringstream os;
                os << "decoding identity fails at position " << p << " on trial " << trial;
                throw ValidationError(os.str());
            }
        }
    }
}

Rational oneshot_rate(const OneShotScheme& s) {
    return Rational(s.params.N - s.params.r, s.params.N);
}

FpVec run_oneshot_rounds(const OneShotScheme& s, const Database& db, int m, Rng& rng) {
    const auto& P = s.params;
    int N = P.N, K = P.K, d = s.d();
    std::uint32_t q = P.q;
    if (db.N != N || db.q != q) throw ParamError("rounds: database does not match scheme");
    if (m < 1 || m > db.M) throw ParamError("rounds: message index out of range");
    int nm = N - P.r;
    long long L = db.L, w = db.block_width();
    long long dim = (long long)db.M * w;
    long long rounds = std::lcm<long long>(nm, L) / nm;

    RowSpace space((int)L, q);
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<std::uint32_t> vals;

    for (long long t = 0; t < rounds; ++t) {
        int off = (int)((N - t % N) % N);
        OneShotScheme sc = rotate_oneshot(s, (off - s.offset % N + N) % N);

        // Best achievable rank growth this round: one fresh functional
        // per mixed server, each confined to span{e_s (x) g_p}.
        RowSpace probe = space;
        int best = 0;
        for (int p : sc.mixed_positions) {
            for (long long st = 0; st < w; ++st) {
                std::vector<std::uint32_t> cand(L, 0);
                for (int k = 0; k < K; ++k) cand[st * K + k] = s.storage.matrix().at(k, p - 1);
                if (probe.add(std::move(cand))) { ++best; break; }
            }
        }

        for (int attempt = 0;; ++attempt) {
            if (attempt >= 64)
                throw RetryExhaustedError("rounds: informative vectors stayed rank-deficient");
            std::vector<std::vector<std::uint32_t>> z(d);
            for (int i = 0; i < d; ++i) {
                z[i].resize(dim);
                for (auto& e : z[i]) e = rng.below(q);
            }
            std::vector<std::vector<std::uint32_t>> a(N + 1);
            for (int p : sc.mixed_positions) {
                a[p].resize(w);
                for (auto& e : a[p]) e = rng.below(q);
            }

            RowSpace trial_space = space;
            std::vector<std::vector<std::uint32_t>> trial_rows;
            int growth = 0;
            for (int p : sc.mixed_positions) {
                std::vector<std::uint32_t> f(L, 0);
                for (long long st = 0; st < w; ++st)
                    for (int k = 0; k < K; ++k)
                        f[st * K + k] = fp_mul(a[p][st], s.storage.matrix().at(k, p - 1), q);
                if (trial_space.add(f)) ++growth;
                trial_rows.push_back(std::move(f));
            }
            if (growth < best) continue;

            std::vector<std::uint32_t> resp(N + 1, 0);
            for (int c = 1; c <= N; ++c) {
                std::uint64_t acc = 0;
                for (long long i = 0; i < dim; ++i) {
                    std::uint64_t qi = 0;
                    for (int u = 0; u < d; ++u)
                        qi = (qi + (std::uint64_t)sc.lambda.at(c - 1, u) * z[u][i]) % q;
                    if (!a[c].empty() && i >= (long long)(m - 1) * w && i < (long long)m * w)
                        qi = (qi + a[c][i - (long long)(m - 1) * w]) % q;
                    acc = (acc + qi * db.blocks[c - 1][i].value()) % q;
                }
                resp[c] = (std::uint32_t)acc;
            }
            for (std::size_t pi = 0; pi < sc.mixed_positions.size(); ++pi) {
                int p = sc.mixed_positions[pi];
                std::uint64_t noise = 0;
                const auto& al = sc.alpha.at(p);
                for (std::size_t j = 0; j < sc.noise_positions.size(); ++j)
                    noise = (noise + (std::uint64_t)al[j] * resp[sc.noise_positions[j]]) % q;
                rows.push_back(std::move(trial_rows[pi]));
                vals.push_back(fp_sub(resp[p], (std::uint32_t)noise, q));
            }
            space = std::move(trial_space);
            break;
        }
    }

    if (space.rank() < (int)L)
        throw RetryExhaustedError("rounds: collected functionals do not determine the message");
    FpMat F((int)rows.size(), (int)L, q);
    for (std::size_t i = 0; i < rows.size(); ++i) F.set_row((int)i, rows[i]);
    auto x = solve(F, vals);
    if (!x) throw InternalError("rounds: inconsistent functional system");
    FpVec out;
    out.reserve(L);
    for (long long i = 0; i < L; ++i) out.emplace_back((long long)(*x)[i], q);
    return out;
}

} // namespace pirlift
