#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "solvhe/bignum.hpp"
#include "solvhe/table_group.hpp"

namespace solvhe {

/// Units of Z_n^* with the power map P(a) = a^m.
struct ResidueFactor {
    Int n;
    unsigned m = 0;
};

/// A finite group by table; values are element indices.
struct TableFactor {
    std::shared_ptr<const TableGroup> group;
};

using FactorDescriptor = std::variant<ResidueFactor, TableFactor>;

/// Ambient free product description: an ordered list of pairwise
/// disjoint factor groups. Disjointness is realized by tagging letters
/// with factor indices, so residue factors may share integer values.
class FreeProduct {
public:
    explicit FreeProduct(std::vector<FactorDescriptor> factors);

    unsigned factor_count() const { return static_cast<unsigned>(factors_.size()); }
    const FactorDescriptor& factor(unsigned i) const { return factors_.at(i); }

    Int identity(unsigned i) const;
    bool is_identity(unsigned i, const Int& v) const;
    bool is_element(unsigned i, const Int& v) const;
    Int mul(unsigned i, const Int& a, const Int& b) const;
    Int inv(unsigned i, const Int& a) const;

    /// P_i(a); defined for residue factors only.
    Int power_map(unsigned i, const Int& a) const;

private:
    std::vector<FactorDescriptor> factors_;
};

struct Letter {
    unsigned factor = 0;  // 0-based; serialized 1-based
    Int value;

    bool operator==(const Letter&) const = default;
};

/// A word over the free product. Canonical words contain no identity
/// letters and no two adjacent letters of the same factor; raw words
/// (proof replay states) may contain both.
class GroupWord {
public:
    GroupWord() = default;
    GroupWord(std::shared_ptr<const FreeProduct> ctx, std::vector<Letter> letters);

    static GroupWord empty(std::shared_ptr<const FreeProduct> ctx);

    const std::shared_ptr<const FreeProduct>& context() const { return ctx_; }
    const std::vector<Letter>& letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty_word() const { return letters_.empty(); }
    bool canonical() const { return canonical_; }

    bool operator==(const GroupWord& other) const {
        return letters_ == other.letters_;
    }

private:
    friend GroupWord canonicalize(const GroupWord&);
    std::shared_ptr<const FreeProduct> ctx_;
    std::vector<Letter> letters_;
    bool canonical_ = false;
};

/// Merges adjacent same-factor letters and drops identities until none
/// remain; idempotent and length-nonincreasing.
GroupWord canonicalize(const GroupWord& w);

/// Free product group law: concatenate, then canonicalize.
GroupWord multiply(const GroupWord& w1, const GroupWord& w2);

/// Reverse the word and invert each letter.
GroupWord invert(const GroupWord& w);

/// Per-factor homomorphism oracle: maps a value of factor i of the
/// source product to a value of factor i of the target product.
using LetterMap = std::function<Int(const Int&)>;

/// The lifted homomorphism f*: apply the factor map letterwise, then
/// canonicalize in the target product.
GroupWord lift_map(const GroupWord& w, const std::vector<LetterMap>& letter_maps,
                   std::shared_ptr<const FreeProduct> target);

/// Replaces each letter k of factor i by reps[i][k]; the unique
/// transversal word mapping to k under f*.
GroupWord representative_word(const GroupWord& k, const std::vector<std::vector<Int>>& reps,
                              std::shared_ptr<const FreeProduct> target);

struct TransversalParts {
    GroupWord kernel_part;  // in ker(f*)
    GroupWord rep_part;     // in the transversal R*
};

/// g = g0 * r with r = representative_word(lift_map(g)) and g0 in
/// ker(f*).
TransversalParts transversal_decompose(const GroupWord& g, const std::vector<LetterMap>& letter_maps,
                                       const std::vector<std::vector<Int>>& reps,
                                       std::shared_ptr<const FreeProduct> k_ctx);

/// Wire format: space-separated "factor:value_hex" tokens (1-based
/// factors); the empty word is the literal "e".
std::string serialize_word(const GroupWord& w);
GroupWord parse_word(const std::string& text, std::shared_ptr<const FreeProduct> ctx);

}  // namespace solvhe
