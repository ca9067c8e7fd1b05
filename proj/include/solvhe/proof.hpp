#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "solvhe/free_product.hpp"

namespace solvhe {

/// Optional split of the target letter: the letter at `position` equals
/// left * right in its factor, and the inserted kernel value goes
/// between the parts. An all-identity split encodes pure insertion and
/// is represented by an absent split instead.
struct LetterSplit {
    unsigned factor = 0;
    Int left, right;
};

/// One rewriting step w1 x w2 -> w1 (x1 P_j(a) x2) w2. Without a split,
/// `position` is a boundary index (0..|w|) and P_j(a) is inserted there;
/// with a split, `position` names the letter being split.
struct ElementaryTransformation {
    std::size_t position = 0;
    std::optional<LetterSplit> split;
    unsigned kernel_factor = 0;  // j
    Int witness;                 // a, an element of A_j
};

/// A certificate that claimed_result lies in ker(f*): replaying the
/// steps from the empty word and canonicalizing yields claimed_result.
struct Proof {
    std::vector<ElementaryTransformation> steps;
    GroupWord claimed;  // canonical; carries the ambient product
};

/// Applies one transformation to a raw word. The result is NOT
/// canonicalized: replay states live in raw words. Identity split parts
/// are dropped; the inserted kernel letter is kept even when it is the
/// identity.
GroupWord apply_transformation(const GroupWord& w, const ElementaryTransformation& t);

/// Replays all steps from the empty word, canonicalizes once at the
/// end, and checks the claim. Returns the canonical result.
GroupWord eval_proof(const Proof& pf);

/// s random pure insertions at random positions; the evaluated word
/// lies in ker(f*). Requires residue factors (the blinding alphabet).
Proof sample_kernel(std::size_t length_budget, std::shared_ptr<const FreeProduct> ctx, Rng& rng);

/// Q_i combined over factors: a witness a with P_i(a) = value for
/// kernel letters, nullopt otherwise.
using KernelOracle = std::function<std::optional<Int>(unsigned factor, const Int& value)>;

struct ExtractResult {
    Proof proof;
    std::uint64_t oracle_calls = 0;
};

/// Membership test + proof extraction: alternate canonicalization and
/// leftmost kernel-letter deletion, then replay the history backwards as
/// insertions (merge undos become splits). Returns nullopt when the word
/// does not empty. Oracle calls stay within |g|^2; extracted proofs have
/// at most |g| steps.
std::optional<ExtractResult> extract_proof(const GroupWord& g, const KernelOracle& oracle);

/// For a proof whose steps all live in factor i: the product of the
/// witnesses, a single preimage of the proven element under P_i.
Int reduce_to_factor(const Proof& pf, unsigned factor);

/// Debug/audit dump, one step per line.
std::string serialize_proof(const Proof& pf);

}  // namespace solvhe
