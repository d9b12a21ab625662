#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pirlift/errors.hpp"

namespace pirlift {

/// Nonnegative-integer query-structure matrix. Zero encodes an empty
/// slot (the papers' blank). Positions are 1-based throughout.
struct SymbolicMatrix {
    int N = 0; // columns (servers)
    int r = 0; // codimension, when built by the recursion
    int M = 0; // message count, when built by the recursion
    std::vector<std::vector<int>> rows;

    int row_count() const { return (int)rows.size(); }
    int at(int i, int j) const { return rows[i - 1][j - 1]; } // 1-based
};

/// Cyclic left shift of the columns.
SymbolicMatrix shift_columns(const SymbolicMatrix& S);

/// All positions with value k, in row-major (lexicographic) order.
std::vector<std::pair<int, int>> entries_with_value(const SymbolicMatrix& S, int k);

/// tau_k: (i,j) -> (i+k, j-1) for j >= 2, (i+k, N) for j = 1.
std::pair<int, int> tau_shift(int k, std::pair<int, int> pos, int N);

/// Column projection pi(B).
std::set<int> column_projection(const std::vector<std::pair<int, int>>& B);

/// One lift step: stack sigma^0..sigma^{r-1} copies and append A.
SymbolicMatrix lift_once(const SymbolicMatrix& S);

/// S(N, M, r) = lift^{M-2}(S_2).
SymbolicMatrix build_symbolic(int N, int r, int M);

/// Number of value-k entries, by enumeration; asserts the closed form
/// r^{M-k} (N-r)^{k-1}.
long long count_value(const SymbolicMatrix& S, int k);

/// Slot totals by enumeration, asserted against (N^M - r^M)/(N-r)
/// and N^{M-1} respectively.
long long total_queries(int N, int r, int M);
long long informative_queries(int N, int r, int M);

/// Text format: header "N r M rows", then one line per row,
/// space-separated with explicit zeros.
std::string to_text(const SymbolicMatrix& S);
SymbolicMatrix from_text(const std::string& text);

} // namespace pirlift
