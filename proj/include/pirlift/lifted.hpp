#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "pirlift/oneshot.hpp"
#include "pirlift/symbolic.hpp"

namespace pirlift {

struct EntryRef {
    int row = 0, col = 0; // 1-based position in the symbolic matrix
    friend bool operator<(const EntryRef& a, const EntryRef& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
    friend bool operator==(const EntryRef& a, const EntryRef& b) {
        return a.row == b.row && a.col == b.col;
    }
};

/// One rotated instance of the one-shot scheme inside the symbolic
/// matrix: r pure-noise slots (entry value = level) and N-r mixed slots
/// (entry value = level+1) on N distinct columns. Slot lists are kept in
/// the rotated window order so they align with the rotated scheme's
/// noise/mixed position lists.
struct NoiseGroup {
    int level = 1;    // subset size served by the pure slots
    int rotation = 0; // noise window starts at column rotation+1
    std::vector<EntryRef> pure_slots;
    std::vector<EntryRef> mixed_slots;
    // mixed column -> decoding coefficients over the pure slots, in order.
    std::map<int, std::vector<std::uint32_t>> alpha;
};

/// A slot's place in the transmitted per-server query lists.
struct SlotRef {
    int server = 0; // 1-based
    int index = 0;  // 0-based position within the server's list
};

struct DecodingPlan {
    SymbolicMatrix symbolic;
    OneShotScheme scheme; // canonical rotation (offset 0)
    std::vector<NoiseGroup> groups;
    // Per-server slot catalog, canonical order (row-major entry, then
    // lexicographic subset). Independent of the desired index.
    // server_slots[j-1][idx] = (entry, message subset).
    std::vector<std::vector<std::pair<EntryRef, std::vector<int>>>> server_slots;

    long long message_length() const; // L = N^{M-1}
    long long total_slots() const;
    SlotRef slot_of(const EntryRef& e, const std::vector<int>& subset) const;
};

struct QueryBatch {
    std::uint32_t q = 0;
    long long dim = 0; // M * L/K entries per query vector
    std::vector<std::vector<std::vector<std::uint32_t>>> queries; // [server][idx][coord]
};

struct ResponseBatch {
    std::uint32_t q = 0;
    std::vector<std::vector<std::uint32_t>> responses; // [server][idx]
};

/// Client-side bookkeeping; never transmitted.
struct InformativeSlot {
    SlotRef slot;
    std::vector<std::uint32_t> functional; // length L, row of the final system
    // (coefficient, pure slot) corrections cancelling the group noise.
    std::vector<std::pair<std::uint32_t, SlotRef>> noise_correction;
};

struct DecodeState {
    int m = 1;
    std::vector<InformativeSlot> slots; // exactly L of them
};

/// Scalar stream feeding the sampler. Abstracted so audits can
/// enumerate or bias the exact randomness the sampler consumes.
class VariableSource {
public:
    virtual ~VariableSource() = default;
    virtual std::uint32_t draw(std::uint32_t q) = 0;
};

class RandomSource : public VariableSource {
public:
    explicit RandomSource(Rng rng) : rng_(rng) {}
    std::uint32_t draw(std::uint32_t q) override { return rng_.below(q); }

private:
    Rng rng_;
};

/// Negative control: draws only from {0,1} regardless of the field.
class BiasedSource : public VariableSource {
public:
    explicit BiasedSource(Rng rng) : rng_(rng) {}
    std::uint32_t draw(std::uint32_t q) override { return rng_.below(q < 2 ? q : 2); }

private:
    Rng rng_;
};

/// Exhaustive enumeration of a fixed-length scalar sequence. Usage:
/// begin(); feed to the sampler; advance() steps to the next assignment
/// and returns false once all have been visited.
class OdometerSource : public VariableSource {
public:
    void begin() { pos_ = 0; }
    std::uint32_t draw(std::uint32_t q) override;
    bool advance();
    double state_count() const; // product of arities

private:
    std::vector<std::uint32_t> digits_, arity_;
    std::size_t pos_ = 0;
};

/// The refinement transform: the M = 2 plan (one noise group, rate
/// N/(N+r)). Requires K | N.
DecodingPlan refine(const OneShotScheme& s);

/// Build the decoding plan for S with the given one-shot scheme,
/// constructing noise groups recursively alongside the lift.
DecodingPlan build_plan(const SymbolicMatrix& S, const OneShotScheme& s);

/// One sampling pass for desired message m: draw every free variable
/// from src, apply the acceptance conditions (independent group noise,
/// full-rank informative functionals), and return nullopt on rejection.
struct InstantiateResult {
    QueryBatch batch;
    DecodeState state;
};
std::optional<InstantiateResult> instantiate_once(const DecodingPlan& plan, int m,
                                                  VariableSource& src);

/// Rejection-sample instantiate_once with a budget of 64 passes.
InstantiateResult instantiate_queries(const DecodingPlan& plan, int m, Rng& rng);

/// Per-query inner products against the stored blocks, order preserved.
ResponseBatch answer_batch(const Database& db, const QueryBatch& batch);

/// Cancel group noise via the decoding equations, then solve the L x L
/// informative system for W^m.
FpVec decode(const DecodingPlan& plan, const DecodeState& state, const ResponseBatch& responses);

/// informative/total as an exact rational; asserted equal to
/// (N-r) N^{M-1} / (N^M - r^M).
Rational measured_rate(const DecodingPlan& plan);

/// Human-readable dump: per-server transmitted vectors and responses,
/// plus a separate private-state section.
void dump_transcript(std::ostream& os, const DecodingPlan& plan, const QueryBatch& batch,
                     const ResponseBatch* responses, const DecodeState* state);

} // namespace pirlift
