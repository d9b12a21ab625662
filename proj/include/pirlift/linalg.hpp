#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pirlift/field.hpp"

namespace pirlift {

/// Dense matrix over F_q with raw residue storage, row-major.
struct FpMat {
    std::uint32_t q = 0;
    int rows = 0, cols = 0;
    std::vector<std::uint32_t> a;

    FpMat() = default;
    FpMat(int r, int c, std::uint32_t mod) : q(mod), rows(r), cols(c), a((std::size_t)r * c, 0) {}

    std::uint32_t& at(int i, int j) { return a[(std::size_t)i * cols + j]; }
    std::uint32_t at(int i, int j) const { return a[(std::size_t)i * cols + j]; }

    std::vector<std::uint32_t> row(int i) const {
        return {a.begin() + (std::size_t)i * cols, a.begin() + (std::size_t)(i + 1) * cols};
    }
    void set_row(int i, const std::vector<std::uint32_t>& r) {
        for (int j = 0; j < cols; ++j) at(i, j) = r[j] % q;
    }
};

/// In-place row reduction; returns rank.
inline int rref(FpMat& m) {
    int rank = 0;
    for (int col = 0; col < m.cols && rank < m.rows; ++col) {
        int piv = -1;
        for (int i = rank; i < m.rows; ++i)
            if (m.at(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(rank, j), m.at(piv, j));
        std::uint32_t inv = fp_inv(m.at(rank, col), m.q);
        for (int j = col; j < m.cols; ++j) m.at(rank, j) = fp_mul(m.at(rank, j), inv, m.q);
        for (int i = 0; i < m.rows; ++i) {
            if (i == rank || m.at(i, col) == 0) continue;
            std::uint32_t f = m.at(i, col);
            for (int j = col; j < m.cols; ++j)
                m.at(i, j) = fp_sub(m.at(i, j), fp_mul(f, m.at(rank, j), m.q), m.q);
        }
        ++rank;
    }
    return rank;
}

inline int rank_of(FpMat m) { return rref(m); }

/// Solve A x = b exactly. Returns one solution, or nullopt if inconsistent.
inline std::optional<std::vector<std::uint32_t>> solve(const FpMat& A,
                                                       const std::vector<std::uint32_t>& b) {
    if ((int)b.size() != A.rows) throw ParamError("solve: size mismatch");
    FpMat aug(A.rows, A.cols + 1, A.q);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols) = b[i] % A.q;
    }
    rref(aug);
    std::vector<std::uint32_t> x(A.cols, 0);
    for (int i = 0; i < aug.rows; ++i) {
        int lead = -1;
        for (int j = 0; j <= A.cols; ++j)
            if (aug.at(i, j) != 0) { lead = j; break; }
        if (lead < 0) continue;
        if (lead == A.cols) return std::nullopt; // 0 = nonzero
        x[lead] = aug.at(i, A.cols);
    }
    return x;
}

/// Inverse of a square matrix, nullopt if singular.
inline std::optional<FpMat> inverse(const FpMat& A) {
    if (A.rows != A.cols) throw ParamError("inverse: matrix not square");
    int n = A.rows;
    FpMat aug(n, 2 * n, A.q);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n + i) = 1;
    }
    if (rref(aug) < n) return std::nullopt;
    FpMat inv(n, n, A.q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

/// Incrementally maintained row space, for rank-growth acceptance checks.
class RowSpace {
public:
    RowSpace(int dim, std::uint32_t q) : dim_(dim), q_(q) {}

    int rank() const { return (int)basis_.size(); }

    /// Reduce v against the basis; if independent, absorb it and return true.
    bool add(std::vector<std::uint32_t> v) {
        reduce(v);
        int lead = lead_of(v);
        if (lead < 0) return false;
        std::uint32_t inv = fp_inv(v[lead], q_);
        for (auto& x : v) x = fp_mul(x, inv, q_);
        basis_.push_back(std::move(v));
        leads_.push_back(lead);
        return true;
    }

    bool contains(std::vector<std::uint32_t> v) const {
        reduce(v);
        return lead_of(v) < 0;
    }

private:
    int dim_;
    std::uint32_t q_;
    std::vector<std::vector<std::uint32_t>> basis_; // normalized, leading 1
    std::vector<int> leads_;

    void reduce(std::vector<std::uint32_t>& v) const {
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            std::uint32_t f = v[leads_[i]];
            if (f == 0) continue;
            for (int j = 0; j < dim_; ++j)
                v[j] = fp_sub(v[j], fp_mul(f, basis_[i][j], q_), q_);
        }
    }
    static int lead_of(const std::vector<std::uint32_t>& v) {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) return (int)j;
        return -1;
    }
};

} // namespace pirlift
