#include "pirlift/symbolic.hpp"

#include <algorithm>
#include <sstream>

namespace pirlift {

namespace {

long long ipow(long long b, int e) {
    long long v = 1;
    while (e-- > 0) v *= b;
    return v;
}

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

} // namespace

SymbolicMatrix shift_columns(const SymbolicMatrix& S) {
    SymbolicMatrix out = S;
    for (auto& row : out.rows) std::rotate(row.begin(), row.begin() + 1, row.end());
    return out;
}

std::vector<std::pair<int, int>> entries_with_value(const SymbolicMatrix& S, int k) {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= S.row_count(); ++i)
        for (int j = 1; j <= S.N; ++j)
            if (S.at(i, j) == k) out.emplace_back(i, j);
    return out;
}

std::pair<int, int> tau_shift(int k, std::pair<int, int> pos, int N) {
    auto [i, j] = pos;
    return {i + k, j >= 2 ? j - 1 : N};
}

std::set<int> column_projection(const std::vector<std::pair<int, int>>& B) {
    std::set<int> cols;
    for (const auto& p : B) cols.insert(p.second);
    return cols;
}

SymbolicMatrix lift_once(const SymbolicMatrix& S) {
    int N = S.N, r = S.r, M = S.M;
    int l = S.row_count();

    SymbolicMatrix out;
    out.N = N;
    out.r = r;
    out.M = M + 1;
    out.rows.reserve((std::size_t)r * l + ipow(r, M - 1));
    SymbolicMatrix copy = S;
    for (int t = 0; t < r; ++t) {
        out.rows.insert(out.rows.end(), copy.rows.begin(), copy.rows.end());
        copy = shift_columns(copy);
    }

    // Each value-M entry b_i of the pre-lift matrix seeds the chain
    // B_i = {b_i, tau_l(b_i), ..., tau_l^{r-1}(b_i)} through the stacked
    // copies; B_i yields one new row with M+1 outside its columns.
    auto tops_stacked = entries_with_value(out, M);
    std::set<std::pair<int, int>> unused(tops_stacked.begin(), tops_stacked.end());
    for (const auto& b : entries_with_value(S, M)) {
        std::vector<std::pair<int, int>> chain;
        std::pair<int, int> pos = b;
        for (int t = 0; t < r; ++t) {
            if (!unused.count(pos))
                throw InternalError("lift: chain hit a used or non-top entry");
            unused.erase(pos);
            chain.push_back(pos);
            pos = tau_shift(l, pos, N);
        }
        auto cols = column_projection(chain);
        if ((int)cols.size() != r) throw InternalError("lift: chain columns not distinct");
        std::vector<int> row(N, 0);
        for (int j = 1; j <= N; ++j)
            if (!cols.count(j)) row[j - 1] = M + 1;
        out.rows.push_back(std::move(row));
    }
    if (!unused.empty()) throw InternalError("lift: uncovered top-value entries");
    return out;
}

SymbolicMatrix build_symbolic(int N, int r, int M) {
    if (N < 2) throw ParamError("symbolic: need N >= 2");
    if (r < 1 || r >= N) throw ParamError("symbolic: need 1 <= r < N");
    if (M < 2) throw ParamError("symbolic: need M >= 2");
    SymbolicMatrix S;
    S.N = N;
    S.r = r;
    S.M = 2;
    std::vector<int> base(N, 2);
    std::fill(base.begin(), base.begin() + r, 1);
    S.rows.push_back(std::move(base));
    while (S.M < M) S = lift_once(S);
    return S;
}

long long count_value(const SymbolicMatrix& S, int k) {
    long long c = 0;
    for (const auto& row : S.rows) c += std::count(row.begin(), row.end(), k);
    if (S.M >= 2 && k >= 1 && k <= S.M) {
        long long expect = ipow(S.r, S.M - k) * ipow(S.N - S.r, k - 1);
        if (c != expect) throw InternalError("symbolic: entry count disagrees with closed form");
    }
    return c;
}

long long total_queries(int N, int r, int M) {
    SymbolicMatrix S = build_symbolic(N, r, M);
    long long total = 0;
    for (int k = 1; k <= M; ++k) total += count_value(S, k) * binom(M, k);
    if (total != (ipow(N, M) - ipow(r, M)) / (N - r))
        throw InternalError("symbolic: total query count disagrees with closed form");
    return total;
}

long long informative_queries(int N, int r, int M) {
    SymbolicMatrix S = build_symbolic(N, r, M);
    long long total = 0;
    // Subsets through a fixed message index m: C(M-1, k-1) per value-k entry.
    for (int k = 1; k <= M; ++k) total += count_value(S, k) * binom(M - 1, k - 1);
    if (total != ipow(N, M - 1))
        throw InternalError("symbolic: informative count disagrees with closed form");
    return total;
}

std::string to_text(const SymbolicMatrix& S) {
    std::ostringstream os;
    os << S.N << " " << S.r << " " << S.M << " " << S.row_count() << "\n";
    for (const auto& row : S.rows) {
        for (int j = 0; j < S.N; ++j) os << (j ? " " : "") << row[j];
        os << "\n";
    }
    return os.str();
}

SymbolicMatrix from_text(const std::string& text) {
    std::istringstream is(text);
    SymbolicMatrix S;
    int nrows;
    if (!(is >> S.N >> S.r >> S.M >> nrows)) throw ParamError("symbolic text: bad header");
    if (S.N < 1 || nrows < 1) throw ParamError("symbolic text: bad dimensions");
    S.rows.assign(nrows, std::vector<int>(S.N));
    for (auto& row : S.rows)
        for (auto& e : row)
            if (!(is >> e) || e < 0) throw ParamError("symbolic text: bad entry");
    return S;
}

} // namespace pirlift
