#pragma once

#include <string>
#include <vector>

#include "pirlift/field.hpp"
#include "pirlift/linalg.hpp"
#include "pirlift/rng.hpp"

namespace pirlift {

/// Global scheme parameters. L is the number of symbols per message;
/// each server stores L/K symbols of each message.
struct PirParams {
    int N = 0;          // servers
    int K = 1;          // storage code dimension
    int T = 1;          // collusion bound
    int M = 1;          // messages
    std::uint32_t q = 2;
    int r = 0;          // one-shot codimension
    long long L = 1;    // symbols per message, K | L

    void validate() const;
    long long block_width() const { return L / K; } // symbols per message per server
};

/// An (N,K)-MDS generator: column j encodes server j. Every KxK column
/// submatrix is invertible (checked exhaustively at construction).
class GeneratorSpec {
public:
    static GeneratorSpec from_coefficients(int K, int N, std::uint32_t q,
                                           const std::vector<std::vector<long long>>& rows);
    /// Evaluation-point construction: columns (1, x, ..., x^{K-1}) at
    /// points 0..N-1 for N <= q; for N = q+1 the last column is the
    /// extended column e_K.
    static GeneratorSpec vandermonde(int N, int K, std::uint32_t q);
    /// The (4,2) generator from the worked coded-data example.
    static GeneratorSpec coded_4_2_preset(std::uint32_t q = 3);
    /// vandermonde when feasible, otherwise the q+1 extension.
    static GeneratorSpec default_for(int N, int K, std::uint32_t q);

    int K() const { return mat_.rows; }
    int N() const { return mat_.cols; }
    std::uint32_t q() const { return mat_.q; }
    const FpMat& matrix() const { return mat_; }
    /// Column for server i (1-based), length K.
    std::vector<std::uint32_t> column(int i) const;

    void save(const std::string& path) const;
    static GeneratorSpec load(const std::string& path);

private:
    explicit GeneratorSpec(FpMat m) : mat_(std::move(m)) {}
    FpMat mat_; // K x N

    static void check_mds(const FpMat& m);
};

/// Per-server data blocks. blocks[i] has length M * L/K laid out as M
/// message blocks of L/K symbols each.
struct Database {
    int N = 0, M = 0, K = 1;
    long long L = 1;
    std::uint32_t q = 2;
    std::vector<FpVec> blocks; // N entries

    long long block_width() const { return L / K; }
};

/// Encode M messages (each of length L) onto N servers.
Database encode(const std::vector<FpVec>& messages, const GeneratorSpec& G);

/// Reconstruct one message from K shares. Each share is the message-j
/// block of some server, tagged with its 1-based column index.
FpVec decode_from_subset(const std::vector<std::pair<int, FpVec>>& shares,
                         const GeneratorSpec& G);

/// Uniform random messages, for tests and simulation.
std::vector<FpVec> random_messages(int M, long long L, std::uint32_t q, Rng& rng);

} // namespace pirlift
