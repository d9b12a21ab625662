#include "pirlift/lifted.hpp"

#include <algorithm>
#include <ostream>
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

// k-subsets of {1..M} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int M, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > M) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i + 1;
    while (true) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == M - k + i + 1) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

bool contains(const std::vector<int>& v, int x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

} // namespace

long long DecodingPlan::message_length() const {
    return ipow(symbolic.N, symbolic.M - 1);
}

long long DecodingPlan::total_slots() const {
    long long t = 0;
    for (const auto& list : server_slots) t += (long long)list.size();
    return t;
}

SlotRef DecodingPlan::slot_of(const EntryRef& e, const std::vector<int>& subset) const {
    const auto& list = server_slots[e.col - 1];
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i].first == e && list[i].second == subset)
            return SlotRef{e.col, (int)i};
    throw InternalError("plan: slot lookup failed");
}

std::uint32_t OdometerSource::draw(std::uint32_t q) {
    if (pos_ == digits_.size()) {
        digits_.push_back(0);
        arity_.push_back(q);
    } else if (arity_[pos_] != q) {
        throw InternalError("odometer: draw sequence changed between passes");
    }
    return digits_[pos_++];
}

bool OdometerSource::advance() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
        if (++digits_[i] < arity_[i]) return true;
        digits_[i] = 0;
    }
    return false;
}

double OdometerSource::state_count() const {
    double p = 1;
    for (auto a : arity_) p *= (double)a;
    return p;
}

DecodingPlan build_plan(const SymbolicMatrix& S, const OneShotScheme& s) {
    int N = S.N, r = S.r, M = S.M;
    if (N != s.params.N || r != s.params.r)
        throw ParamError("plan: symbolic matrix and scheme disagree on (N, r)");
    if (M < 2) throw ParamError("plan: need M >= 2");
    if (s.offset != 0) throw ParamError("plan: scheme must be in canonical rotation");

    // Rebuild the lift chain, carrying the noise groups along: each copy
    // sigma^t shifts slot rows by t*l and columns by -t, and each chain
    // B_i plus its A-row becomes a new top-level group.
    DecodingPlan plan{S, s, {}, {}};

    std::vector<NoiseGroup> groups;
    {
        NoiseGroup base;
        base.level = 1;
        base.rotation = 0;
        for (int j = 1; j <= r; ++j) base.pure_slots.push_back({1, j});
        for (int j = r + 1; j <= N; ++j) base.mixed_slots.push_back({1, j});
        groups.push_back(std::move(base));
    }
    SymbolicMatrix cur = build_symbolic(N, r, 2);
    for (int Mp = 2; Mp < M; ++Mp) {
        int l = cur.row_count();
        std::vector<NoiseGroup> next;
        for (int t = 0; t < r; ++t) {
            for (const auto& g : groups) {
                NoiseGroup c = g;
                c.rotation = (g.rotation - t % N + N) % N;
                auto shift = [&](EntryRef& e) {
                    e.row += t * l;
                    e.col = ((e.col - 1 - t) % N + N) % N + 1;
                };
                for (auto& e : c.pure_slots) shift(e);
                for (auto& e : c.mixed_slots) shift(e);
                next.push_back(std::move(c));
            }
        }
        auto tops = entries_with_value(cur, Mp);
        for (std::size_t bi = 0; bi < tops.size(); ++bi) {
            NoiseGroup g;
            g.level = Mp;
            g.rotation = ((tops[bi].second - r) % N + N) % N;
            std::pair<int, int> pos = tops[bi];
            std::set<int> cols;
            for (int u = 0; u < r; ++u) {
                g.pure_slots.push_back({pos.first, pos.second});
                cols.insert(pos.second);
                pos = tau_shift(l, pos, N);
            }
            for (int j = 1; j <= N; ++j)
                if (!cols.count(j)) g.mixed_slots.push_back({r * l + (int)bi + 1, j});
            next.push_back(std::move(g));
        }
        groups = std::move(next);
        cur = lift_once(cur);
    }
    if (cur.rows != S.rows)
        throw InternalError("plan: rebuilt lift chain disagrees with the input matrix");

    // Normalize slot order to the rotated window order and attach the
    // rotated decoding coefficients.
    std::map<int, OneShotScheme> rotations;
    for (auto& g : groups) {
        if (!rotations.count(g.rotation)) {
            try {
                rotations.emplace(g.rotation, rotate_oneshot(s, g.rotation));
            } catch (const Error& e) {
                throw InfeasibleError(std::string("plan: scheme is not liftable, rotation "
                                                  "failed: ") + e.what());
            }
        }
        const auto& sc = rotations.at(g.rotation);
        auto reorder = [&](std::vector<EntryRef>& slots, const std::vector<int>& cols) {
            std::vector<EntryRef> out;
            for (int c : cols) {
                auto it = std::find_if(slots.begin(), slots.end(),
                                       [&](const EntryRef& e) { return e.col == c; });
                if (it == slots.end())
                    throw InternalError("plan: group columns do not match rotation window");
                out.push_back(*it);
            }
            slots = std::move(out);
        };
        reorder(g.pure_slots, sc.noise_positions);
        reorder(g.mixed_slots, sc.mixed_positions);
        g.alpha = sc.alpha;
        for (const auto& e : g.pure_slots)
            if (S.at(e.row, e.col) != g.level)
                throw InternalError("plan: pure slot value != group level");
        for (const auto& e : g.mixed_slots)
            if (S.at(e.row, e.col) != g.level + 1)
                throw InternalError("plan: mixed slot value != group level + 1");
    }
    plan.groups = std::move(groups);

    // Level census against the counting proposition.
    for (int v = 1; v < M; ++v) {
        long long n = 0;
        for (const auto& g : plan.groups) n += g.level == v;
        if (n * r != count_value(S, v))
            throw InternalError("plan: group count disagrees with entry census");
    }

    plan.server_slots.assign(N, {});
    for (int i = 1; i <= S.row_count(); ++i) {
        for (int j = 1; j <= N; ++j) {
            int v = S.at(i, j);
            if (v < 1) continue;
            for (auto& sub : k_subsets(M, v))
                plan.server_slots[j - 1].push_back({EntryRef{i, j}, std::move(sub)});
        }
    }
    return plan;
}

DecodingPlan refine(const OneShotScheme& s) {
    int N = s.params.N, K = s.params.K;
    if (N % K != 0)
        throw InfeasibleError("refine: K must divide N (L = N); repeat the scheme to pad "
                              "the message length");
    return build_plan(build_symbolic(N, s.params.r, 2), s);
}

std::optional<InstantiateResult> instantiate_once(const DecodingPlan& plan, int m,
                                                  VariableSource& src) {
    const SymbolicMatrix& S = plan.symbolic;
    const OneShotScheme& sch = plan.scheme;
    int N = S.N, M = S.M, K = sch.params.K, d = sch.d();
    std::uint32_t q = sch.params.q;
    if (m < 1 || m > M) throw ParamError("instantiate: message index out of range");
    long long L = plan.message_length();
    if (L % K != 0)
        throw InfeasibleError("instantiate: K must divide N^{M-1}; repeat the scheme");
    long long w = L / K;
    long long dim = (long long)M * w;

    // Draw everything first so every pass consumes the same number of
    // scalars; acceptance is then applied to the full assignment.
    // Group noise: d free vectors per (group, V), supported on V's blocks.
    std::vector<std::vector<std::pair<std::vector<int>, FpMat>>> noise(plan.groups.size());
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
        int v = plan.groups[gi].level;
        for (auto& V : k_subsets(M, v)) {
            if (contains(V, m)) continue;
            FpMat z(d, (int)(v * w), q);
            for (int t = 0; t < d; ++t)
                for (int i = 0; i < (int)(v * w); ++i) z.at(t, i) = src.draw(q);
            noise[gi].push_back({V, std::move(z)});
        }
    }
    // Informative vectors: one length-w draw per slot whose subset
    // contains m, in canonical global order.
    std::map<std::pair<int, int>, std::vector<std::uint32_t>> informative;
    for (int j = 1; j <= N; ++j) {
        const auto& list = plan.server_slots[j - 1];
        for (std::size_t idx = 0; idx < list.size(); ++idx) {
            if (!contains(list[idx].second, m)) continue;
            std::vector<std::uint32_t> a(w);
            for (auto& e : a) e = src.draw(q);
            informative[{j, (int)idx}] = std::move(a);
        }
    }

    // Acceptance 1: each (group, V) noise block has full rank d.
    for (const auto& per_group : noise)
        for (const auto& [V, z] : per_group)
            if (rank_of(z) < d) return std::nullopt;

    // Acceptance 2: the informative functionals a (x) g_col jointly
    // determine the whole message.
    RowSpace space((int)L, q);
    std::map<std::pair<int, int>, std::vector<std::uint32_t>> functionals;
    for (const auto& [key, a] : informative) {
        std::vector<std::uint32_t> f(L, 0);
        for (long long s = 0; s < w; ++s)
            for (int k = 0; k < K; ++k)
                f[s * K + k] = fp_mul(a[s], sch.storage.matrix().at(k, key.first - 1), q);
        space.add(f);
        functionals[key] = std::move(f);
    }
    if (space.rank() < (int)L) return std::nullopt;

    // Assemble the transmitted vectors.
    QueryBatch batch;
    batch.q = q;
    batch.dim = dim;
    batch.queries.resize(N);
    for (int j = 1; j <= N; ++j)
        batch.queries[j - 1].assign(plan.server_slots[j - 1].size(),
                                    std::vector<std::uint32_t>(dim, 0));
    for (const auto& [key, a] : informative) {
        auto& qv = batch.queries[key.first - 1][key.second];
        for (long long s = 0; s < w; ++s) qv[(long long)(m - 1) * w + s] = a[s];
    }

    // Pour each (group, V) noise instance into its N slots; record the
    // decoding corrections for the mixed ones.
    std::map<std::pair<int, int>, std::vector<std::pair<std::uint32_t, SlotRef>>> corrections;
    std::vector<std::vector<int>> touched(N);
    for (int j = 0; j < N; ++j) touched[j].assign(plan.server_slots[j].size(), 0);
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
        const NoiseGroup& g = plan.groups[gi];
        for (const auto& [V, z] : noise[gi]) {
            auto add_noise = [&](const EntryRef& e, const SlotRef& ref) {
                auto& qv = batch.queries[ref.server - 1][ref.index];
                for (int t = 0; t < d; ++t) {
                    std::uint32_t c = sch.lambda.at(e.col - 1, t);
                    if (c == 0) continue;
                    for (std::size_t vi = 0; vi < V.size(); ++vi)
                        for (long long s = 0; s < w; ++s) {
                            auto& coord = qv[(long long)(V[vi] - 1) * w + s];
                            coord = fp_add(coord, fp_mul(c, z.at(t, (int)(vi * w + s)), q), q);
                        }
                }
                ++touched[ref.server - 1][ref.index];
            };
            std::vector<SlotRef> pure_refs;
            for (const auto& e : g.pure_slots) {
                SlotRef ref = plan.slot_of(e, V);
                add_noise(e, ref);
                pure_refs.push_back(ref);
            }
            std::vector<int> Vm = V;
            Vm.insert(std::lower_bound(Vm.begin(), Vm.end(), m), m);
            for (const auto& e : g.mixed_slots) {
                SlotRef ref = plan.slot_of(e, Vm);
                add_noise(e, ref);
                const auto& al = g.alpha.at(e.col);
                auto& corr = corrections[{ref.server, ref.index}];
                for (std::size_t u = 0; u < pure_refs.size(); ++u)
                    corr.push_back({al[u], pure_refs[u]});
            }
        }
    }

    // Every slot not supported on block m carries exactly one noise
    // instance; mixed slots carry one on top of their informative part.
    for (int j = 1; j <= N; ++j) {
        const auto& list = plan.server_slots[j - 1];
        for (std::size_t idx = 0; idx < list.size(); ++idx) {
            bool has_m = contains(list[idx].second, m);
            int expect = (has_m && list[idx].second.size() == 1) ? 0 : 1;
            if (touched[j - 1][idx] != expect)
                throw InternalError("instantiate: slot noise coverage violated");
        }
    }

    DecodeState state;
    state.m = m;
    for (const auto& [key, f] : functionals) {
        InformativeSlot slot;
        slot.slot = SlotRef{key.first, key.second};
        slot.functional = f;
        auto it = corrections.find(key);
        if (it != corrections.end()) slot.noise_correction = it->second;
        state.slots.push_back(std::move(slot));
    }
    if ((long long)state.slots.size() != L)
        throw InternalError("instantiate: informative slot count != L");
    return InstantiateResult{std::move(batch), std::move(state)};
}

InstantiateResult instantiate_queries(const DecodingPlan& plan, int m, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        RandomSource src{Rng(rng.next())};
        auto res = instantiate_once(plan, m, src);
        if (res) return std::move(*res);
    }
    throw RetryExhaustedError("instantiate: acceptance conditions failed 64 times");
}

ResponseBatch answer_batch(const Database& db, const QueryBatch& batch) {
    if ((int)batch.queries.size() != db.N || batch.q != db.q)
        throw ParamError("answer: batch does not match database");
    ResponseBatch out;
    out.q = db.q;
    out.responses.resize(db.N);
    for (int j = 0; j < db.N; ++j) {
        const auto& D = db.blocks[j];
        for (const auto& qv : batch.queries[j]) {
            if ((long long)qv.size() != (long long)D.size())
                throw ParamError("answer: query dimension mismatch");
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < qv.size(); ++i)
                acc = (acc + (std::uint64_t)qv[i] * D[i].value()) % db.q;
            out.responses[j].push_back((std::uint32_t)acc);
        }
    }
    return out;
}

FpVec decode(const DecodingPlan& plan, const DecodeState& state, const ResponseBatch& responses) {
    std::uint32_t q = plan.scheme.params.q;
    long long L = plan.message_length();
    FpMat F((int)state.slots.size(), (int)L, q);
    std::vector<std::uint32_t> vals;
    for (std::size_t i = 0; i < state.slots.size(); ++i) {
        const auto& slot = state.slots[i];
        std::uint32_t v = responses.responses[slot.slot.server - 1][slot.slot.index];
        for (const auto& [coef, pure] : slot.noise_correction)
            v = fp_sub(v, fp_mul(coef, responses.responses[pure.server - 1][pure.index], q), q);
        F.set_row((int)i, slot.functional);
        vals.push_back(v);
    }
    auto x = solve(F, vals);
    if (!x) throw InternalError("decode: informative system inconsistent");
    FpVec out;
    out.reserve(L);
    for (long long i = 0; i < L; ++i) out.emplace_back((long long)(*x)[i], q);
    return out;
}

Rational measured_rate(const DecodingPlan& plan) {
    const SymbolicMatrix& S = plan.symbolic;
    long long total = plan.total_slots();
    long long inf = 0;
    for (const auto& row : S.rows)
        for (int v : row)
            if (v >= 1) inf += binom(S.M - 1, v - 1);
    Rational measured(inf, total);
    long long NM = ipow(S.N, S.M), rM = ipow(S.r, S.M);
    if (!(measured == Rational((S.N - S.r) * ipow(S.N, S.M - 1), NM - rM)))
        throw InternalError("rate: measured plan rate disagrees with the closed form");
    return measured;
}

void dump_transcript(std::ostream& os, const DecodingPlan& plan, const QueryBatch& batch,
                     const ResponseBatch* responses, const DecodeState* state) {
    int N = plan.symbolic.N;
    os << "transcript N=" << N << " M=" << plan.symbolic.M << " r=" << plan.symbolic.r
       << " q=" << batch.q << "\n";
    for (int j = 1; j <= N; ++j) {
        os << "server " << j << "\n";
        for (std::size_t idx = 0; idx < batch.queries[j - 1].size(); ++idx) {
            os << "  query " << idx << ":";
            for (auto e : batch.queries[j - 1][idx]) os << " " << e;
            if (responses) os << "  -> " << responses->responses[j - 1][idx];
            os << "\n";
        }
    }
    if (state) {
        os << "private state (not transmitted), m=" << state->m << "\n";
        for (const auto& slot : state->slots) {
            os << "  informative slot server " << slot.slot.server << " index "
               << slot.slot.index << " corrections";
            for (const auto& [c, ref] : slot.noise_correction)
                os << " " << c << "*(" << ref.server << "," << ref.index << ")";
            os << "\n";
        }
    }
}

} // namespace pirlift
