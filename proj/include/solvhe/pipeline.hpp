#pragma once

#include "solvhe/composite.hpp"
#include "solvhe/semidirect.hpp"
#include "solvhe/table_group.hpp"

namespace solvhe {

struct WreathEmbedding {
    TableGroup wreath;        // A wr B, materialized
    GroupEmbedding embedding; // E -> wreath
};

/// Krasner-Kaloujnine: embeds an extension E of A by B into A wr B.
/// `projection` maps E onto B with kernel A; `a_in_e` identifies A's
/// elements inside E. The embedding is validated exhaustively.
WreathEmbedding wreath_embed(const TableGroup& quotient, const TableGroup& normal,
                             const std::vector<unsigned>& a_in_e, const TableGroup& extension,
                             const std::vector<unsigned>& projection);

struct PiRealization {
    SemidirectSpec spec;
    std::shared_ptr<const SemidirectGroup> group;
    std::vector<std::uint64_t> embed;  // source index -> group element
};

/// Realizes a solvable group inside an iterated semidirect product of
/// prime cyclic factors: walk the composition series bottom-up, extend
/// in place when the next quotient splits off compatibly, fall back to
/// the wreath construction otherwise.
PiRealization solvable_to_pi(const TableGroup& g, std::uint64_t order_budget = 1ull << 16);

/// keygen for a table-presented plaintext group: solvability check,
/// tower realization, composite keygen, restriction onto the image.
CompositeKey keygen_for_group(const TableGroup& g, unsigned N, unsigned blinding_s, Rng& rng,
                              const CompositeKeygenOptions& opts = {},
                              std::uint64_t order_budget = 1ull << 16);

}  // namespace solvhe
