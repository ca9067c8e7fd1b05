#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solvhe/cyclic.hpp"
#include "solvhe/free_product.hpp"
#include "solvhe/proof.hpp"
#include "solvhe/semidirect.hpp"

namespace solvhe {

/// The full cryptosystem over H = Pi(K_1,...,K_M): one cyclic-factor
/// system per prime factor, ciphertexts are words over the free product
/// of the factor unit groups, and decryption composes the letterwise
/// coset maps with the reduction onto H.
///
/// A restriction (the Theorem-3 subgroup construction) narrows the
/// plaintext set to an embedded copy of a user group while the ambient
/// machinery stays unchanged.
struct CompositeKey {
    struct Restriction {
        TableGroup user_group;             // what the user addresses
        std::vector<std::uint64_t> embed;  // user index -> H element
    };

    std::shared_ptr<const SemidirectGroup> group;  // H
    unsigned N = 0;                                // factor modulus bit length
    unsigned blinding_s = 8;
    std::vector<CyclicPublic> factor_pubs;
    std::optional<std::vector<CyclicSecret>> factor_secs;
    std::optional<Restriction> restriction;

    std::shared_ptr<const FreeProduct> g_ctx;  // ciphertext product (residue factors)
    std::shared_ptr<const FreeProduct> k_ctx;  // plaintext-side product (cyclic factors)
    std::string fingerprint;

    bool has_secret() const { return factor_secs.has_value(); }
    CyclicKeyPair factor_pair(unsigned i) const;

    unsigned plaintext_count() const;
    std::uint64_t to_h_index(unsigned plaintext) const;
    std::optional<unsigned> from_h_index(std::uint64_t h) const;
    std::string plaintext_label(unsigned plaintext) const;
    unsigned plaintext_by_label(const std::string& label) const;

    /// Representative word of an H element, derived from the factor
    /// representative lists.
    GroupWord rep_word(std::uint64_t h) const;

    /// Per-factor coset-index oracles (secret).
    std::vector<LetterMap> secret_letter_maps() const;

    /// Recomputes the public-material fingerprint.
    void refresh_fingerprint();
};

struct Ciphertext {
    GroupWord word;      // canonical, over the key's g_ctx
    std::string key_id;  // fingerprint of the public key
};

struct CompositeKeygenOptions {
    bool deterministic_reps = false;
    FindModulusOptions modulus;
};

CompositeKey keygen_composite(const SemidirectSpec& spec, unsigned N, unsigned blinding_s, Rng& rng,
                              const CompositeKeygenOptions& opts = {});

/// Assembles a system from existing factor key pairs (fixtures, parsed
/// files). Moduli must be pairwise distinct.
CompositeKey composite_from_factors(const SemidirectSpec& spec, std::vector<CyclicKeyPair> factors,
                                    unsigned N, unsigned blinding_s);

Ciphertext encrypt(const CompositeKey& key, unsigned plaintext, Rng& rng);
unsigned decrypt(const CompositeKey& key, const Ciphertext& c);

Ciphertext eval_multiply(const CompositeKey& key, const Ciphertext& c1, const Ciphertext& c2);
Ciphertext eval_invert(const CompositeKey& key, const Ciphertext& c);

/// Same plaintext, fresh blinding.
Ciphertext rerandomize(const CompositeKey& key, const Ciphertext& c, Rng& rng);

/// The Theorem-3 subgroup system: plaintexts narrow to the given
/// nonidentity subgroup of H (element 0 of `elements` must be the
/// identity if present; a user table is built from the element list when
/// none is supplied).
CompositeKey restrict_to_subgroup(const CompositeKey& key, const std::vector<std::uint64_t>& elements,
                                  std::optional<CompositeKey::Restriction> named = std::nullopt);

}  // namespace solvhe
