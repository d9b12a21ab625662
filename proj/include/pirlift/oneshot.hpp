#pragma once

#include <map>
#include <vector>

#include "pirlift/mds.hpp"
#include "pirlift/rational.hpp"

namespace pirlift {

/// A one-shot scheme: one query per server, r servers receive pure noise
/// and the other N-r receive noise plus an informative part.
///
/// The noise is generated from d free vectors z_1..z_d: server c's noise
/// is sum_t lambda[c,t] * z_t. d is the number of genuinely free noise
/// vectors (d = T for all shipped constructions); the noise-only window
/// still has r servers. Invariants:
///   - every T x d row submatrix of lambda has rank T (T-privacy),
///   - the r noise-position rows have rank d (pure responses determine
///     every noise functional),
///   - every mixed position has a decoding equation.
struct OneShotScheme {
    PirParams params;
    GeneratorSpec storage; // K x N
    FpMat lambda;          // N x d, rows fixed per server position
    int offset = 0;        // rotation of the role window
    std::vector<int> noise_positions; // r servers, cyclic window order, 1-based
    std::vector<int> mixed_positions; // N-r servers, cyclic order after the window
    // mixed position -> coefficients aligned with noise_positions:
    // <D_p, q_p> = sum_j alpha[p][j] <D_{n_j}, q_{n_j}> identically.
    std::map<int, std::vector<std::uint32_t>> alpha;

    int d() const { return lambda.cols; }
};

/// Solve for the decoding coefficients of position p against the given
/// noise positions, treating the response as the bilinear form
/// g_c (outer) lambda_c indexed by (storage row, free-noise index).
/// Throws NotDecodableError when no identity exists.
std::vector<std::uint32_t> derive_decoding_equation(const FpMat& lambda,
                                                    const GeneratorSpec& G,
                                                    const std::vector<int>& noise_positions,
                                                    int p);

/// Replicated storage (K = 1), r = T: free queries at servers 1..T and
/// evaluation-point combinations at the rest, forming an (N,T)-MDS noise
/// code. Throws InfeasibleError when q is too small for the MDS property.
OneShotScheme build_secret_sharing_oneshot(int N, int T, int M, std::uint32_t q);

/// Coded storage, r = K + T - 1. Noise rows are built from the lambda
/// coefficients expressing column g_i (i <= T) in the basis
/// {g_{T+1..K+T-1}, g_l}; requires the gamma ratio condition
/// lambda^i_j(l0)/lambda^i_j(l) independent of j (l0 = K+T), which is
/// checked and reported via InfeasibleError when violated.
OneShotScheme build_geometrical_oneshot(int N, int K, int T, std::uint32_t q,
                                        const GeneratorSpec& G);

/// Assemble a scheme from explicit data. With validate set, all scheme
/// invariants are checked (ValidationError on failure); decoding
/// equations are always derived.
OneShotScheme build_explicit_oneshot(const PirParams& params, const GeneratorSpec& G,
                                     const FpMat& lambda, const std::vector<int>& mixed_positions,
                                     bool validate = true);

/// The worked (4,2,2) instance: (4,2) preset storage, noise rows
/// (z1, z2, z1+z2, z1+2z2), mixed position 4. Fields whose
/// characteristic collapses the construction are rejected with
/// InfeasibleError (q = 2 folds row 4 onto row 1).
OneShotScheme build_explicit_422(std::uint32_t q);

/// Structural invariants only (rank conditions, role partition).
void validate_oneshot(const OneShotScheme& s);

/// Cyclically advance the noise/mixed role window by offset and re-derive
/// the decoding equations. offset 0 returns an identical scheme; N
/// single-step rotations compose to the identity.
OneShotScheme rotate_oneshot(const OneShotScheme& s, int offset);

/// Rank conditions plus decoding identities on `trials` random
/// (database, free-noise) pairs. Throws ValidationError with a
/// description on failure.
void verify_oneshot(const OneShotScheme& s, int trials, std::uint64_t seed);

/// (N - r) / N.
Rational oneshot_rate(const OneShotScheme& s);

/// Run lcm(N-r, L)/(N-r) rotated rounds against db and recover message m
/// (1-based). Informative vectors are resampled (budget 64) until each
/// round attains its maximal rank growth.
FpVec run_oneshot_rounds(const OneShotScheme& s, const Database& db, int m, Rng& rng);

} // namespace pirlift
