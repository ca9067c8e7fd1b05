#pragma once

#include <functional>
#include <string>
#include <vector>

namespace solvhe {

/// A finite group given by its multiplication table. Identity is always
/// element 0. Immutable after validation.
class TableGroup {
public:
    TableGroup(unsigned order, std::vector<unsigned> table, std::vector<std::string> names = {});

    unsigned order() const { return order_; }
    unsigned mul(unsigned a, unsigned b) const { return table_[a * order_ + b]; }
    unsigned inv(unsigned a) const { return inverse_[a]; }
    unsigned element_order(unsigned a) const;
    bool is_abelian() const;

    /// Label of an element; defaults to its decimal index.
    const std::string& name(unsigned a) const { return names_[a]; }
    /// Index of the element with the given label (or decimal index).
    unsigned element_by_name(const std::string& label) const;

    /// Multiset of element orders, sorted; a cheap isomorphism invariant.
    std::vector<unsigned> order_profile() const;

private:
    unsigned order_;
    std::vector<unsigned> table_;
    std::vector<unsigned> inverse_;
    std::vector<std::string> names_;
};

/// File format: "order=<dec>" then order rows of order decimal indices.
std::string serialize_table(const TableGroup& g);
TableGroup parse_table(const std::string& text);

struct SubgroupResult {
    TableGroup group;
    std::vector<unsigned> inclusion;  // subgroup index -> parent index
};

/// Smallest subgroup of g containing the generators.
SubgroupResult subgroup_of(const TableGroup& g, const std::vector<unsigned>& generators);

/// Closure of a generating set, as sorted parent-element indices.
std::vector<unsigned> subgroup_closure(const TableGroup& g, std::vector<unsigned> generators);

/// Derived series G >= G' >= G'' >= ... until stabilization; each entry
/// is a sorted element list in g's numbering.
std::vector<std::vector<unsigned>> derived_series(const TableGroup& g);

bool is_solvable(const TableGroup& g);

struct CompositionSeries {
    // chain[0] = {identity}, chain.back() = whole group; chain[i] is
    // normal in chain[i+1] with quotient of prime order.
    std::vector<std::vector<unsigned>> chain;
    std::vector<unsigned> quotient_orders;  // quotient_orders[i] = |chain[i+1]| / |chain[i]|
};

/// Refines the derived series to prime cyclic quotients. Throws
/// NotSolvable for non-solvable input. Ties between candidate subgroups
/// break toward the lexicographically smallest element list.
CompositionSeries composition_series(const TableGroup& g);

/// All subgroups of g as sorted element lists (exhaustive closure walk;
/// meant for small orders).
std::vector<std::vector<unsigned>> all_subgroups(const TableGroup& g);

bool is_normal_subgroup(const TableGroup& g, const std::vector<unsigned>& elements);

/// An injective homomorphism from a table group into a target given by
/// an opaque multiplication callback (table or semidirect induced).
struct GroupEmbedding {
    std::vector<unsigned> map;  // source index -> target element index
};

/// Exhaustive injectivity + homomorphism check; throws on violation.
void validate_embedding(const TableGroup& source, const std::vector<unsigned>& map,
                        const std::function<unsigned(unsigned, unsigned)>& target_mul);

// Built-in fixtures.
TableGroup make_cyclic_group(unsigned n);
TableGroup make_symmetric3();
TableGroup make_dihedral4();
TableGroup make_quaternion8();
TableGroup make_alternating5();

/// Resolves "S3", "Z4", "Z6", "D4", "Q8" (case-sensitive).
TableGroup builtin_group(const std::string& name);

}  // namespace solvhe
