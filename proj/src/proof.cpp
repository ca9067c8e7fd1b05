#include "solvhe/proof.hpp"

#include <sstream>

#include "solvhe/errors.hpp"
#include "solvhe/numtheory.hpp"

namespace solvhe {

GroupWord apply_transformation(const GroupWord& w, const ElementaryTransformation& t) {
    const auto& ctx = *w.context();
    if (t.kernel_factor >= ctx.factor_count())
        throw InvalidArgument("apply_transformation: kernel factor out of range");
    Letter inserted{t.kernel_factor, ctx.power_map(t.kernel_factor, t.witness)};

    std::vector<Letter> out = w.letters();
    if (!t.split) {
        if (t.position > out.size())
            throw InvalidArgument("apply_transformation: insertion position out of range");
        out.insert(out.begin() + t.position, inserted);
    } else {
        if (t.position >= out.size())
            throw InvalidArgument("apply_transformation: split position out of range");
        const Letter& target = out[t.position];
        if (target.factor != t.split->factor)
            throw InvalidArgument("apply_transformation: split factor does not match the letter");
        if (ctx.mul(target.factor, t.split->left, t.split->right) != target.value)
            throw InvalidArgument("apply_transformation: split parts do not multiply to the letter");
        std::vector<Letter> replacement;
        if (!ctx.is_identity(target.factor, t.split->left))
            replacement.push_back(Letter{target.factor, t.split->left});
        replacement.push_back(inserted);
        if (!ctx.is_identity(target.factor, t.split->right))
            replacement.push_back(Letter{target.factor, t.split->right});
        out.erase(out.begin() + t.position);
        out.insert(out.begin() + t.position, replacement.begin(), replacement.end());
    }
    return GroupWord(w.context(), std::move(out));
}

GroupWord eval_proof(const Proof& pf) {
    if (!pf.claimed.context()) throw InvalidArgument("eval_proof: proof without ambient product");
    GroupWord raw = GroupWord::empty(pf.claimed.context());
    for (const auto& step : pf.steps) raw = apply_transformation(raw, step);
    GroupWord result = canonicalize(raw);
    if (!(result == pf.claimed))
        throw InvalidArgument("eval_proof: replay does not reproduce the claimed word");
    return result;
}

Proof sample_kernel(std::size_t length_budget, std::shared_ptr<const FreeProduct> ctx, Rng& rng) {
    Proof pf;
    GroupWord raw = GroupWord::empty(ctx);
    for (std::size_t i = 0; i < length_budget; ++i) {
        ElementaryTransformation t;
        t.position = rng.u64_below(raw.size() + 1);
        t.kernel_factor = static_cast<unsigned>(rng.u64_below(ctx->factor_count()));
        const auto* rf = std::get_if<ResidueFactor>(&ctx->factor(t.kernel_factor));
        if (!rf) throw InvalidArgument("sample_kernel: factor without a blinding alphabet");
        t.witness = rng.unit_mod(rf->n);
        raw = apply_transformation(raw, t);
        pf.steps.push_back(std::move(t));
    }
    pf.claimed = canonicalize(raw);
    return pf;
}

namespace {

struct Reduction {
    bool vanished = false;
    Letter left, right;
};

struct DeletionEvent {
    std::size_t index = 0;  // of the deleted letter in the pre-deletion state
    Letter deleted;
    Int witness;
    std::vector<Reduction> reductions;  // innermost first
};

Letter identity_letter(const FreeProduct& ctx, unsigned factor) {
    return Letter{factor, ctx.identity(factor)};
}

}  // namespace

std::optional<ExtractResult> extract_proof(const GroupWord& g, const KernelOracle& oracle) {
    const auto& ctx_ptr = g.context();
    const FreeProduct& ctx = *ctx_ptr;
    GroupWord canon = canonicalize(g);
    std::vector<Letter> state = canon.letters();
    std::uint64_t calls = 0;

    std::vector<DeletionEvent> events;
    while (!state.empty()) {
        std::optional<std::size_t> hit;
        Int witness;
        for (std::size_t i = 0; i < state.size(); ++i) {
            ++calls;
            auto a = oracle(state[i].factor, state[i].value);
            if (a) {
                hit = i;
                witness = *a;
                break;
            }
        }
        if (!hit) return std::nullopt;  // a canonical word with no kernel letter

        DeletionEvent ev;
        ev.index = *hit;
        ev.deleted = state[*hit];
        ev.witness = witness;
        state.erase(state.begin() + *hit);

        // local reductions around the gap; only the last one can be a
        // proper merge, everything before it vanishes
        long l = static_cast<long>(*hit) - 1;
        long r = static_cast<long>(*hit);
        while (l >= 0 && r < static_cast<long>(state.size()) &&
               state[l].factor == state[r].factor) {
            Reduction red;
            red.left = state[l];
            red.right = state[r];
            Int merged = ctx.mul(state[l].factor, state[l].value, state[r].value);
            red.vanished = ctx.is_identity(state[l].factor, merged);
            ev.reductions.push_back(red);
            if (red.vanished) {
                state.erase(state.begin() + l, state.begin() + l + 2);
                --l;
                r = l + 1;
            } else {
                state[l].value = merged;
                state.erase(state.begin() + r);
                break;
            }
        }
        events.push_back(std::move(ev));
    }

    // replay the deletions backwards as insertions; the raw replay word
    // equals the canonical state at every event boundary
    ExtractResult result;
    result.oracle_calls = calls;
    std::vector<Letter> raw;
    auto replace_with_triple = [&](std::size_t pos, const Reduction& red, const Letter& carrier) {
        raw.erase(raw.begin() + pos);
        raw.insert(raw.begin() + pos, {red.left, carrier, red.right});
    };
    for (auto ev = events.rbegin(); ev != events.rend(); ++ev) {
        const std::size_t T = ev->reductions.size();
        // carrier chain: the undo of reduction j inserts the carrier of
        // reduction j-1; the innermost carrier is the deleted letter
        auto carrier_for = [&](std::size_t j) -> ElementaryTransformation {
            ElementaryTransformation t;
            if (j == 0) {
                t.kernel_factor = ev->deleted.factor;
                t.witness = ev->witness;
            } else {
                t.kernel_factor = ev->reductions[j - 1].left.factor;
                t.witness = 1;
            }
            return t;
        };
        auto carrier_letter = [&](std::size_t j) -> Letter {
            if (j == 0) return ev->deleted;
            return identity_letter(ctx, ev->reductions[j - 1].left.factor);
        };
        if (T == 0) {
            ElementaryTransformation t = carrier_for(0);
            t.position = ev->index;
            raw.insert(raw.begin() + ev->index, ev->deleted);
            result.proof.steps.push_back(std::move(t));
            continue;
        }
        const std::size_t pos = ev->index - T;  // merged letter / boundary in the post state
        const Reduction& outer = ev->reductions[T - 1];
        if (outer.vanished) {
            // materialize an identity letter at the boundary, then split it
            ElementaryTransformation ins;
            ins.position = pos;
            ins.kernel_factor = outer.left.factor;
            ins.witness = 1;
            raw.insert(raw.begin() + pos, identity_letter(ctx, outer.left.factor));
            result.proof.steps.push_back(std::move(ins));
        }
        ElementaryTransformation split_outer = carrier_for(T - 1);
        split_outer.position = pos;
        split_outer.split = LetterSplit{outer.left.factor, outer.left.value, outer.right.value};
        replace_with_triple(pos, outer, carrier_letter(T - 1));
        result.proof.steps.push_back(std::move(split_outer));

        std::size_t carrier_pos = pos + 1;
        for (std::size_t j = T - 1; j-- > 0;) {
            const Reduction& red = ev->reductions[j];
            ElementaryTransformation t = carrier_for(j);
            t.position = carrier_pos;
            t.split = LetterSplit{red.left.factor, red.left.value, red.right.value};
            replace_with_triple(carrier_pos, red, carrier_letter(j));
            result.proof.steps.push_back(std::move(t));
            carrier_pos += 1;
        }
    }

    result.proof.claimed = canon;
    // internal consistency: the reconstruction must replay exactly
    eval_proof(result.proof);
    return result;
}

Int reduce_to_factor(const Proof& pf, unsigned factor) {
    const auto& ctx = *pf.claimed.context();
    const auto* rf = std::get_if<ResidueFactor>(&ctx.factor(factor));
    if (!rf) throw InvalidArgument("reduce_to_factor: factor without a witness group");
    Int acc = 1;
    for (const auto& step : pf.steps) {
        if (step.kernel_factor != factor || (step.split && step.split->factor != factor))
            throw InvalidArgument("reduce_to_factor: proof mixes factors");
        acc = acc * step.witness % rf->n;
    }
    return acc;
}

std::string serialize_proof(const Proof& pf) {
    std::ostringstream out;
    for (const auto& step : pf.steps) {
        out << "pos=" << step.position;
        if (step.split) {
            out << " split=" << (step.split->factor + 1) << ":" << to_hex(step.split->left) << ":"
                << to_hex(step.split->right);
        } else {
            out << " ins";
        }
        out << " j=" << (step.kernel_factor + 1) << " a=" << to_hex(step.witness) << "\n";
    }
    return out.str();
}

}  // namespace solvhe
