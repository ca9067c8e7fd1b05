#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solvhe/table_group.hpp"

namespace solvhe {

/// Iterated semidirect product of prime-order cyclic factors.
///
/// Factors are grouped into contiguous "levels"; each level is an inner
/// direct product of its factors, and the tail group (all deeper levels)
/// acts on the level block by conjugation. When every level holds a
/// single factor this is exactly the classical nested form where
/// K^(i) = Pi(K_{i+1},...,K_m) acts on K_i through Aut(K_i); multi-factor
/// levels additionally allow coordinate-permuting actions, which is what
/// wreath products need.
///
/// Actions must be monomial: the image of a coordinate subgroup is again
/// a coordinate subgroup. This keeps every word-rewriting step a
/// letter-for-letter replacement, so intermediate words never grow.
struct SemidirectSpec {
    std::vector<unsigned> factor_orders;  // primes m_1..m_M
    std::vector<unsigned> level_sizes;    // contiguous blocks, sums to M

    // actions[l][t] is the permutation of level-l block elements induced
    // by conjugation with tail element t (an element of the group formed
    // by levels l+1..L-1). actions.size() == L-1.
    std::vector<std::vector<std::vector<unsigned>>> actions;

    static SemidirectSpec trivial(const std::vector<unsigned>& primes);
};

std::string serialize_spec(const SemidirectSpec& spec);
SemidirectSpec parse_spec(const std::string& text);

/// A letter of a word over the free product K_1 * ... * K_M of the
/// spec's cyclic factors: factor index (0-based) plus a nonzero value.
struct KLetter {
    unsigned factor = 0;
    unsigned value = 0;
};

struct ProjectStats {
    std::size_t input_length = 0;
    std::size_t max_intermediate = 0;
};

/// Validated spec with the derived multiplication structure. Elements
/// are mixed-radix indices over the factor digits (first factor most
/// significant); index 0 is the identity.
class SemidirectGroup {
public:
    explicit SemidirectGroup(SemidirectSpec spec);

    const SemidirectSpec& spec() const { return spec_; }
    std::uint64_t order() const { return order_; }
    unsigned factor_count() const { return static_cast<unsigned>(spec_.factor_orders.size()); }
    unsigned level_count() const { return static_cast<unsigned>(spec_.level_sizes.size()); }
    unsigned factor_order(unsigned j) const { return spec_.factor_orders[j]; }
    unsigned level_of_factor(unsigned j) const { return level_of_factor_[j]; }

    std::uint64_t block_order(unsigned level) const { return block_order_[level]; }
    /// Order of the group formed by levels level..end (suffix_order(0) == order()).
    std::uint64_t suffix_order(unsigned level) const { return suffix_order_[level]; }
    unsigned level_start(unsigned level) const { return level_start_[level]; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t inv(std::uint64_t a) const;

    /// Digits (k_1,...,k_M) of an element; the unique sorted-word
    /// factorization.
    std::vector<unsigned> decompose_element(std::uint64_t idx) const;
    std::uint64_t compose(const std::vector<unsigned>& digits) const;

    /// The representative word of an element: one letter per nonzero
    /// digit, in factor order.
    std::vector<KLetter> element_word(std::uint64_t idx) const;

    /// Evaluates a word by plain group multiplication (the reference
    /// route; project_q must agree).
    std::uint64_t eval_word(const std::vector<KLetter>& word) const;

    /// The reduction epimorphism Q: K_1 * ... * K_M -> H, computed by the
    /// rewriting procedure (commute level letters leftward through
    /// conjugation relations, merge, recurse on the tail). Intermediate
    /// words never exceed the input length; the optional stats output
    /// records the observed maximum.
    std::uint64_t project_q(const std::vector<KLetter>& word, ProjectStats* stats = nullptr) const;

    /// Materialized multiplication table; requires order() <= max_order.
    TableGroup to_table(std::uint64_t max_order = 4096) const;

private:
    friend SemidirectSpec wreath_spec(const SemidirectGroup&, unsigned);
    friend SemidirectSpec append_top_level(const SemidirectGroup&, unsigned,
                                           const std::vector<std::uint64_t>&);

    SemidirectSpec spec_;
    std::uint64_t order_ = 1;
    std::vector<unsigned> level_of_factor_;
    std::vector<std::uint64_t> block_order_;    // per level
    std::vector<std::uint64_t> suffix_order_;   // suffix_order_[l] = order of levels l..end
    std::vector<unsigned> level_start_;         // first factor of each level

    std::uint64_t mul_from(unsigned level, std::uint64_t a, std::uint64_t b) const;
    std::uint64_t block_mul(unsigned level, std::uint64_t a, std::uint64_t b) const;
    std::uint64_t block_inv(unsigned level, std::uint64_t a) const;
    std::uint64_t tail_index_of_letter(unsigned level, unsigned factor, unsigned value) const;
    KLetter conj_letter(unsigned level, const KLetter& deeper, const KLetter& letter) const;
    void validate() const;
};

/// Spec of the wreath product (inner)^p x| Z_p with Z_p rotating the
/// copies: every inner level is replicated p times (copy-major) and a
/// final [Z_p] level is appended.
SemidirectSpec wreath_spec(const SemidirectGroup& inner, unsigned p);

/// Spec of inner x| Z_p where the generator of Z_p acts by the given
/// automorphism beta (element index map). beta must be level-preserving
/// and monomial; its order must divide p.
SemidirectSpec append_top_level(const SemidirectGroup& inner, unsigned p,
                                const std::vector<std::uint64_t>& beta);

/// Checks whether an automorphism given as an index map is
/// level-preserving and monomial with respect to the spec's blocks.
bool is_level_monomial(const SemidirectGroup& g, const std::vector<std::uint64_t>& beta);

/// Merges the contiguous level range [first, last] into one block.
/// Throws InvalidArgument when an in-range level acts nontrivially on a
/// shallower in-range level.
SemidirectSpec merge_levels(const SemidirectGroup& g, unsigned first, unsigned last);

}  // namespace solvhe
