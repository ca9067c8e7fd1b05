#include "solvhe/composite.hpp"

#include <algorithm>
#include <set>

#include "solvhe/errors.hpp"
#include "solvhe/keyio.hpp"

namespace solvhe {

CyclicKeyPair CompositeKey::factor_pair(unsigned i) const {
    if (!factor_secs) throw InvalidArgument("composite key: secret half required");
    CyclicKeyPair kp;
    kp.N = N;
    kp.pub = factor_pubs.at(i);
    kp.sec = factor_secs->at(i);
    return kp;
}

unsigned CompositeKey::plaintext_count() const {
    if (restriction) return restriction->user_group.order();
    return static_cast<unsigned>(group->order());
}

std::uint64_t CompositeKey::to_h_index(unsigned plaintext) const {
    if (plaintext >= plaintext_count())
        throw InvalidArgument("composite key: plaintext index out of range");
    return restriction ? restriction->embed[plaintext] : plaintext;
}

std::optional<unsigned> CompositeKey::from_h_index(std::uint64_t h) const {
    if (!restriction) {
        if (h >= group->order()) return std::nullopt;
        return static_cast<unsigned>(h);
    }
    for (unsigned i = 0; i < restriction->embed.size(); ++i)
        if (restriction->embed[i] == h) return i;
    return std::nullopt;
}

std::string CompositeKey::plaintext_label(unsigned plaintext) const {
    if (restriction) return restriction->user_group.name(plaintext);
    return std::to_string(plaintext);
}

unsigned CompositeKey::plaintext_by_label(const std::string& label) const {
    if (restriction) return restriction->user_group.element_by_name(label);
    try {
        std::size_t used = 0;
        unsigned long v = std::stoul(label, &used);
        if (used == label.size() && v < plaintext_count()) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("unknown plaintext element '" + label + "'");
}

GroupWord CompositeKey::rep_word(std::uint64_t h) const {
    auto digits = group->decompose_element(h);
    std::vector<Letter> letters;
    for (unsigned j = 0; j < digits.size(); ++j)
        if (digits[j] != 0) letters.push_back(Letter{j, factor_pubs[j].reps[digits[j]]});
    return canonicalize(GroupWord(g_ctx, std::move(letters)));
}

std::vector<LetterMap> CompositeKey::secret_letter_maps() const {
    if (!factor_secs) throw InvalidArgument("composite key: secret half required");
    std::vector<LetterMap> maps;
    for (unsigned j = 0; j < factor_pubs.size(); ++j) {
        CyclicKeyPair kp = factor_pair(j);
        maps.push_back([kp](const Int& v) { return Int(coset_index(kp, v)); });
    }
    return maps;
}

void CompositeKey::refresh_fingerprint() {
    fingerprint.clear();
    fingerprint = fingerprint_of_public(*this);
}

namespace {

std::shared_ptr<const FreeProduct> make_g_context(const std::vector<CyclicPublic>& pubs) {
    std::vector<FactorDescriptor> factors;
    for (const auto& pk : pubs) factors.push_back(ResidueFactor{pk.n, pk.m});
    return std::make_shared<FreeProduct>(std::move(factors));
}

std::shared_ptr<const FreeProduct> make_k_context(const SemidirectGroup& group) {
    std::vector<FactorDescriptor> factors;
    for (unsigned j = 0; j < group.factor_count(); ++j) {
        auto cyclic = std::make_shared<TableGroup>(make_cyclic_group(group.factor_order(j)));
        factors.push_back(TableFactor{std::move(cyclic)});
    }
    return std::make_shared<FreeProduct>(std::move(factors));
}

void check_distinct_moduli(const std::vector<CyclicPublic>& pubs) {
    std::set<Int> seen;
    for (const auto& pk : pubs)
        if (!seen.insert(pk.n).second)
            throw InvalidArgument("composite key: factor moduli must be pairwise distinct");
}

std::vector<KLetter> to_k_letters(const GroupWord& k_word) {
    std::vector<KLetter> out;
    out.reserve(k_word.size());
    for (const Letter& l : k_word.letters())
        out.push_back(KLetter{l.factor, static_cast<unsigned>(l.value.get_ui())});
    return out;
}

/// Blinding word with trivial image in H: a random transversal word
/// times the inverse of the representative of its own image.
GroupWord sample_rep_blinding(const CompositeKey& key, Rng& rng) {
    std::size_t len = static_cast<std::size_t>(rng.u64_below(key.blinding_s + 1));
    std::vector<Letter> k_letters;
    unsigned M = key.group->factor_count();
    for (std::size_t i = 0; i < len; ++i) {
        unsigned j = static_cast<unsigned>(rng.u64_below(M));
        unsigned m = key.group->factor_order(j);
        unsigned v = 1 + static_cast<unsigned>(rng.u64_below(m - 1));
        k_letters.push_back(Letter{j, Int(v)});
    }
    GroupWord k = canonicalize(GroupWord(key.k_ctx, std::move(k_letters)));
    GroupWord r = representative_word(k, [&] {
        std::vector<std::vector<Int>> reps;
        for (const auto& pk : key.factor_pubs) reps.push_back(pk.reps);
        return reps;
    }(), key.g_ctx);
    std::uint64_t image = key.group->project_q(to_k_letters(k));
    return multiply(r, invert(key.rep_word(image)));
}

}  // namespace

CompositeKey keygen_composite(const SemidirectSpec& spec, unsigned N, unsigned blinding_s, Rng& rng,
                              const CompositeKeygenOptions& opts) {
    CompositeKey key;
    key.group = std::make_shared<SemidirectGroup>(spec);
    key.N = N;
    key.blinding_s = blinding_s;

    std::vector<CyclicKeyPair> pairs;
    std::set<Int> moduli;
    CyclicKeygenOptions cyc_opts;
    cyc_opts.deterministic_reps = opts.deterministic_reps;
    cyc_opts.modulus = opts.modulus;
    for (unsigned j = 0; j < key.group->factor_count(); ++j) {
        for (int attempt = 0;; ++attempt) {
            CyclicKeyPair kp = keygen_cyclic(key.group->factor_order(j), N, rng, cyc_opts);
            if (moduli.insert(kp.pub.n).second) {
                kp.pub.label = j + 1;
                pairs.push_back(std::move(kp));
                break;
            }
            if (attempt > 256)
                throw SearchExhausted("keygen_composite: cannot find distinct factor moduli");
        }
    }
    std::vector<CyclicKeyPair> moved = std::move(pairs);
    std::vector<CyclicPublic> pubs;
    std::vector<CyclicSecret> secs;
    for (auto& kp : moved) {
        pubs.push_back(kp.pub);
        secs.push_back(kp.sec);
    }
    key.factor_pubs = std::move(pubs);
    key.factor_secs = std::move(secs);
    key.g_ctx = make_g_context(key.factor_pubs);
    key.k_ctx = make_k_context(*key.group);
    key.refresh_fingerprint();
    return key;
}

CompositeKey composite_from_factors(const SemidirectSpec& spec, std::vector<CyclicKeyPair> factors,
                                    unsigned N, unsigned blinding_s) {
    CompositeKey key;
    key.group = std::make_shared<SemidirectGroup>(spec);
    key.N = N;
    key.blinding_s = blinding_s;
    if (factors.size() != key.group->factor_count())
        throw InvalidArgument("composite key: need one cyclic system per factor");
    for (unsigned j = 0; j < factors.size(); ++j) {
        if (factors[j].pub.m != key.group->factor_order(j))
            throw InvalidArgument("composite key: factor plaintext order mismatch");
        factors[j].pub.label = j + 1;
    }
    std::vector<CyclicPublic> pubs;
    std::vector<CyclicSecret> secs;
    for (auto& kp : factors) {
        pubs.push_back(kp.pub);
        secs.push_back(kp.sec);
    }
    check_distinct_moduli(pubs);
    key.factor_pubs = std::move(pubs);
    key.factor_secs = std::move(secs);
    key.g_ctx = make_g_context(key.factor_pubs);
    key.k_ctx = make_k_context(*key.group);
    key.refresh_fingerprint();
    return key;
}

Ciphertext encrypt(const CompositeKey& key, unsigned plaintext, Rng& rng) {
    std::uint64_t h = key.to_h_index(plaintext);
    Proof blinding = sample_kernel(key.blinding_s, key.g_ctx, rng);
    GroupWord word = multiply(eval_proof(blinding), key.rep_word(h));
    if (key.restriction) word = multiply(sample_rep_blinding(key, rng), word);
    return Ciphertext{std::move(word), key.fingerprint};
}

namespace {

void check_ciphertext(const CompositeKey& key, const Ciphertext& c) {
    if (c.key_id != key.fingerprint)
        throw KeyMismatch("ciphertext was produced under a different key");
    for (const Letter& l : c.word.letters()) {
        const auto* rf = std::get_if<ResidueFactor>(&key.g_ctx->factor(l.factor));
        if (!rf || !is_unit(l.value, rf->n))
            throw InvalidArgument("ciphertext letter is not a unit of its factor");
    }
}

}  // namespace

unsigned decrypt(const CompositeKey& key, const Ciphertext& c) {
    check_ciphertext(key, c);
    GroupWord k = lift_map(canonicalize(c.word), key.secret_letter_maps(), key.k_ctx);
    std::uint64_t h = key.group->project_q(to_k_letters(k));
    auto plaintext = key.from_h_index(h);
    if (!plaintext) throw DecryptError("ciphertext decrypts outside the plaintext subgroup");
    return *plaintext;
}

Ciphertext eval_multiply(const CompositeKey& key, const Ciphertext& c1, const Ciphertext& c2) {
    check_ciphertext(key, c1);
    check_ciphertext(key, c2);
    return Ciphertext{multiply(c1.word, c2.word), key.fingerprint};
}

Ciphertext eval_invert(const CompositeKey& key, const Ciphertext& c) {
    check_ciphertext(key, c);
    return Ciphertext{invert(c.word), key.fingerprint};
}

Ciphertext rerandomize(const CompositeKey& key, const Ciphertext& c, Rng& rng) {
    check_ciphertext(key, c);
    Proof blinding = sample_kernel(key.blinding_s, key.g_ctx, rng);
    GroupWord word = multiply(eval_proof(blinding), c.word);
    if (key.restriction) word = multiply(sample_rep_blinding(key, rng), word);
    return Ciphertext{std::move(word), key.fingerprint};
}

CompositeKey restrict_to_subgroup(const CompositeKey& key, const std::vector<std::uint64_t>& elements,
                                  std::optional<CompositeKey::Restriction> named) {
    if (key.restriction)
        throw InvalidArgument("restrict_to_subgroup: the system is already restricted");
    if (elements.size() <= 1)
        throw InvalidArgument("restrict_to_subgroup: the subgroup must not be the identity");

    CompositeKey out = key;
    if (named) {
        if (named->embed.size() != named->user_group.order())
            throw InvalidArgument("restrict_to_subgroup: embedding size mismatch");
        out.restriction = std::move(named);
    } else {
        // closure check + subgroup table from the element list
        std::vector<std::uint64_t> sorted = elements;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        auto find = [&](std::uint64_t v) -> unsigned {
            auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
            if (it == sorted.end() || *it != v)
                throw InvalidArgument("restrict_to_subgroup: element set is not closed");
            return static_cast<unsigned>(it - sorted.begin());
        };
        unsigned n = static_cast<unsigned>(sorted.size());
        if (sorted[0] != 0)
            throw InvalidArgument("restrict_to_subgroup: the identity must belong to the subgroup");
        std::vector<unsigned> table(static_cast<std::size_t>(n) * n);
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = 0; b < n; ++b)
                table[a * n + b] = find(key.group->mul(sorted[a], sorted[b]));
        CompositeKey::Restriction r{TableGroup(n, std::move(table)), sorted};
        out.restriction = std::move(r);
    }
    // sanity: the embedding is a homomorphism into H
    const auto& r = *out.restriction;
    validate_embedding(
        r.user_group,
        std::vector<unsigned>(r.embed.begin(), r.embed.end()),
        [&](unsigned a, unsigned b) { return static_cast<unsigned>(key.group->mul(a, b)); });
    out.refresh_fingerprint();
    return out;
}

}  // namespace solvhe
