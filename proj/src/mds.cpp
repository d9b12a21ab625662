#include "pirlift/mds.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace pirlift {

void PirParams::validate() const {
    if (K < 1 || K > N) throw ParamError("params: need 1 <= K <= N");
    if (T < 1 || T > N) throw ParamError("params: need 1 <= T <= N");
    if (M < 1) throw ParamError("params: need M >= 1");
    if (r < 0 || r >= N) throw ParamError("params: need 0 <= r < N");
    FieldModulus check(q);
    if (L < 1 || L % K != 0) throw ParamError("params: K must divide L");
}

namespace {

// Enumerate K-subsets of columns and check invertibility of each.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
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

} // namespace

void GeneratorSpec::check_mds(const FpMat& m) {
    int K = m.rows, N = m.cols;
    for_each_subset(N, K, [&](const std::vector<int>& cols) {
        FpMat sub(K, K, m.q);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) sub.at(i, j) = m.at(i, cols[j]);
        if (rank_of(sub) < K) {
            std::ostringstream os;
            os << "generator is not MDS: singular column subset {";
            for (std::size_t j = 0; j < cols.size(); ++j)
                os << (j ? "," : "") << cols[j] + 1;
            os << "}";
            throw ValidationError(os.str());
        }
    });
}

GeneratorSpec GeneratorSpec::from_coefficients(int K, int N, std::uint32_t q,
                                               const std::vector<std::vector<long long>>& rows) {
    if ((int)rows.size() != K) throw ParamError("generator: expected K rows");
    FieldModulus mod(q);
    FpMat m(K, N, q);
    for (int i = 0; i < K; ++i) {
        if ((int)rows[i].size() != N) throw ParamError("generator: expected N columns per row");
        for (int j = 0; j < N; ++j) m.at(i, j) = fp_reduce(rows[i][j], q);
    }
    check_mds(m);
    return GeneratorSpec(std::move(m));
}

GeneratorSpec GeneratorSpec::vandermonde(int N, int K, std::uint32_t q) {
    FieldModulus mod(q);
    if (N > (int)q + 1)
        throw InfeasibleError("vandermonde: need N <= q+1 distinct evaluation points");
    FpMat m(K, N, q);
    int plain = std::min<int>(N, (int)q);
    for (int j = 0; j < plain; ++j) {
        std::uint32_t x = (std::uint32_t)j;
        std::uint32_t p = 1;
        for (int i = 0; i < K; ++i) {
            m.at(i, j) = p;
            p = fp_mul(p, x, q);
        }
    }
    if (N == (int)q + 1) m.at(K - 1, N - 1) = 1; // extended column e_K
    check_mds(m);
    return GeneratorSpec(std::move(m));
}

GeneratorSpec GeneratorSpec::coded_4_2_preset(std::uint32_t q) {
    return from_coefficients(2, 4, q, {{1, 0, 1, 1}, {0, 1, 1, 2}});
}

GeneratorSpec GeneratorSpec::default_for(int N, int K, std::uint32_t q) {
    return vandermonde(N, K, q);
}

std::vector<std::uint32_t> GeneratorSpec::column(int i) const {
    if (i < 1 || i > N()) throw ParamError("generator: column index out of range");
    std::vector<std::uint32_t> c(K());
    for (int k = 0; k < K(); ++k) c[k] = mat_.at(k, i - 1);
    return c;
}

void GeneratorSpec::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw ParamError("cannot open " + path + " for writing");
    f << K() << " " << N() << " " << q() << "\n";
    for (int i = 0; i < K(); ++i) {
        for (int j = 0; j < N(); ++j) f << (j ? " " : "") << mat_.at(i, j);
        f << "\n";
    }
}

GeneratorSpec GeneratorSpec::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParamError("cannot open " + path);
    int K, N;
    std::uint32_t q;
    if (!(f >> K >> N >> q)) throw ParamError("generator file: bad header");
    std::vector<std::vector<long long>> rows(K, std::vector<long long>(N));
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < N; ++j)
            if (!(f >> rows[i][j])) throw ParamError("generator file: truncated");
    return from_coefficients(K, N, q, rows);
}

Database encode(const std::vector<FpVec>& messages, const GeneratorSpec& G) {
    int M = (int)messages.size();
    if (M < 1) throw ParamError("encode: no messages");
    long long L = (long long)messages[0].size();
    int K = G.K(), N = G.N();
    std::uint32_t q = G.q();
    if (L % K != 0) throw ParamError("encode: K must divide message length");
    long long w = L / K;
    for (const auto& msg : messages) {
        if ((long long)msg.size() != L) throw ParamError("encode: message lengths differ");
        for (const auto& e : msg)
            if (e.modulus() != q) throw ParamError("encode: modulus mismatch");
    }

    Database db;
    db.N = N;
    db.M = M;
    db.K = K;
    db.L = L;
    db.q = q;
    db.blocks.assign(N, FpVec());
    for (int i = 0; i < N; ++i) {
        FpVec d;
        d.reserve((std::size_t)M * w);
        for (int j = 0; j < M; ++j) {
            for (long long s = 0; s < w; ++s) {
                std::uint64_t acc = 0;
                for (int k = 0; k < K; ++k)
                    acc = (acc + (std::uint64_t)G.matrix().at(k, i) *
                                     messages[j][s * K + k].value()) % q;
                d.emplace_back((long long)acc, q);
            }
        }
        db.blocks[i] = std::move(d);
    }
    return db;
}

FpVec decode_from_subset(const std::vector<std::pair<int, FpVec>>& shares,
                         const GeneratorSpec& G) {
    int K = G.K();
    std::uint32_t q = G.q();
    if ((int)shares.size() != K) throw ParamError("decode: need exactly K shares");
    for (std::size_t i = 0; i < shares.size(); ++i)
        for (std::size_t j = i + 1; j < shares.size(); ++j)
            if (shares[i].first == shares[j].first)
                throw ParamError("decode: duplicate column index");

    long long w = (long long)shares[0].second.size();
    FpMat A(K, K, q); // A[t][k] = G[k, col_t]
    for (int t = 0; t < K; ++t) {
        int col = shares[t].first;
        if (col < 1 || col > G.N()) throw ParamError("decode: column index out of range");
        if ((long long)shares[t].second.size() != w)
            throw ParamError("decode: share lengths differ");
        for (int k = 0; k < K; ++k) A.at(t, k) = G.matrix().at(k, col - 1);
    }
    auto Ainv = inverse(A);
    if (!Ainv) throw InternalError("decode: singular K-subset (MDS invariant violated)");

    FpVec out((std::size_t)(w * K), Fp(0, q));
    for (long long s = 0; s < w; ++s) {
        for (int k = 0; k < K; ++k) {
            std::uint64_t acc = 0;
            for (int t = 0; t < K; ++t)
                acc = (acc + (std::uint64_t)Ainv->at(k, t) *
                                 shares[t].second[s].value()) % q;
            out[s * K + k] = Fp((long long)acc, q);
        }
    }
    return out;
}

std::vector<FpVec> random_messages(int M, long long L, std::uint32_t q, Rng& rng) {
    std::vector<FpVec> msgs(M);
    for (int j = 0; j < M; ++j) {
        msgs[j].reserve(L);
        for (long long s = 0; s < L; ++s) msgs[j].emplace_back(rng.below(q), q);
    }
    return msgs;
}

} // namespace pirlift
