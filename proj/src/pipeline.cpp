#include "solvhe/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "solvhe/errors.hpp"

namespace solvhe {

namespace {

// Wreath product A wr B as index arithmetic: element = (F, b) with
// F: B -> A; index = (((F(0)*|A| + F(1))...)*|A| + F(|B|-1))*|B| + b.
struct WreathIndex {
    unsigned a_order, b_order;

    std::uint64_t order() const {
        std::uint64_t n = b_order;
        for (unsigned i = 0; i < b_order; ++i) n *= a_order;
        return n;
    }
    std::uint64_t encode(const std::vector<unsigned>& f, unsigned b) const {
        std::uint64_t idx = 0;
        for (unsigned i = 0; i < b_order; ++i) idx = idx * a_order + f[i];
        return idx * b_order + b;
    }
    void decode(std::uint64_t idx, std::vector<unsigned>& f, unsigned& b) const {
        b = static_cast<unsigned>(idx % b_order);
        idx /= b_order;
        f.assign(b_order, 0);
        for (unsigned i = b_order; i-- > 0;) {
            f[i] = static_cast<unsigned>(idx % a_order);
            idx /= a_order;
        }
    }
};

}  // namespace

WreathEmbedding wreath_embed(const TableGroup& quotient, const TableGroup& normal,
                             const std::vector<unsigned>& a_in_e, const TableGroup& extension,
                             const std::vector<unsigned>& projection) {
    const unsigned eo = extension.order();
    if (projection.size() != eo) throw InvalidArgument("wreath_embed: projection size mismatch");
    if (a_in_e.size() != normal.order()) throw InvalidArgument("wreath_embed: inclusion size mismatch");
    // projection must be a homomorphism onto the quotient with kernel A
    for (unsigned x = 0; x < eo; ++x) {
        if (projection[x] >= quotient.order()) throw InvalidArgument("wreath_embed: projection range");
        for (unsigned y = 0; y < eo; ++y)
            if (projection[extension.mul(x, y)] != quotient.mul(projection[x], projection[y]))
                throw InvalidArgument("wreath_embed: projection is not a homomorphism");
    }
    std::vector<long> a_index(eo, -1);
    for (unsigned i = 0; i < normal.order(); ++i) {
        unsigned e = a_in_e[i];
        if (e >= eo || a_index[e] != -1) throw InvalidArgument("wreath_embed: bad inclusion");
        a_index[e] = static_cast<long>(i);
        // the inclusion must be a homomorphism
        for (unsigned j = 0; j < normal.order(); ++j)
            if (a_in_e[normal.mul(i, j)] != extension.mul(a_in_e[i], a_in_e[j]))
                throw InvalidArgument("wreath_embed: inclusion is not a homomorphism");
    }
    unsigned kernel = 0;
    for (unsigned x = 0; x < eo; ++x)
        if (projection[x] == 0) {
            ++kernel;
            if (a_index[x] == -1)
                throw InvalidArgument("wreath_embed: kernel element outside the normal subgroup");
        }
    if (kernel != normal.order())
        throw InvalidArgument("wreath_embed: |ker(projection)| != |A|");
    if (extension.order() != normal.order() * quotient.order())
        throw InvalidArgument("wreath_embed: |E| != |A| * |B|");

    WreathIndex W{normal.order(), quotient.order()};
    if (W.order() > 4096)
        throw SizeBudgetExceeded("wreath_embed: materialized wreath product too large");
    const unsigned wo = static_cast<unsigned>(W.order());

    // multiplication table of A wr B: (F, x)(G, y) = (b -> F(b) G(bx), xy)
    std::vector<unsigned> table(static_cast<std::size_t>(wo) * wo);
    std::vector<unsigned> f, g, h;
    unsigned bx, by;
    for (unsigned x = 0; x < wo; ++x) {
        W.decode(x, f, bx);
        for (unsigned y = 0; y < wo; ++y) {
            W.decode(y, g, by);
            h.assign(W.b_order, 0);
            for (unsigned b = 0; b < W.b_order; ++b)
                h[b] = normal.mul(f[b], g[quotient.mul(b, bx)]);
            table[static_cast<std::size_t>(x) * wo + y] =
                static_cast<unsigned>(W.encode(h, quotient.mul(bx, by)));
        }
    }
    TableGroup wreath(wo, std::move(table));

    // transversal: smallest preimage per quotient element (0 -> identity)
    std::vector<unsigned> t(quotient.order(), eo);
    for (unsigned x = 0; x < eo; ++x)
        if (t[projection[x]] == eo) t[projection[x]] = x;
    for (unsigned b = 0; b < quotient.order(); ++b)
        if (t[b] == eo) throw InvalidArgument("wreath_embed: projection is not onto");

    GroupEmbedding emb;
    emb.map.resize(eo);
    std::vector<unsigned> func(quotient.order());
    for (unsigned e = 0; e < eo; ++e) {
        unsigned pe = projection[e];
        for (unsigned b = 0; b < quotient.order(); ++b) {
            unsigned v = extension.mul(extension.mul(t[b], e), extension.inv(t[quotient.mul(b, pe)]));
            long ai = a_index[v];
            if (ai < 0) throw Error("wreath_embed: twisted component escaped the normal subgroup");
            func[b] = static_cast<unsigned>(ai);
        }
        emb.map[e] = static_cast<unsigned>(W.encode(func, pe));
    }
    validate_embedding(extension, emb.map,
                       [&](unsigned a, unsigned b) { return wreath.mul(a, b); });
    return WreathEmbedding{std::move(wreath), std::move(emb)};
}

namespace {

struct Stage {
    std::shared_ptr<const SemidirectGroup> W;
    std::vector<std::uint64_t> mu;     // parent-group element -> W element (partial: only chain members)
    std::vector<bool> in_domain;       // which parent elements mu covers
};

// conjugation automorphism of W transported through mu
std::vector<std::uint64_t> transport_conjugation(const TableGroup& g, const Stage& stage,
                                                 const std::vector<unsigned>& domain, unsigned y) {
    std::vector<std::uint64_t> beta(stage.W->order());
    std::vector<unsigned> mu_inv(stage.W->order(), 0);
    for (unsigned e : domain) mu_inv[stage.mu[e]] = e;
    unsigned y_inv = g.inv(y);
    for (std::uint64_t w = 0; w < stage.W->order(); ++w) {
        unsigned conj = g.mul(g.mul(y, mu_inv[w]), y_inv);
        beta[w] = stage.mu[conj];
    }
    return beta;
}

}  // namespace

PiRealization solvable_to_pi(const TableGroup& g, std::uint64_t order_budget) {
    if (g.order() == 1) throw InvalidArgument("solvable_to_pi: the group must be nonidentity");
    CompositionSeries series = composition_series(g);  // throws NotSolvable

    Stage stage;
    stage.mu.assign(g.order(), 0);
    stage.in_domain.assign(g.order(), false);

    // base: chain[1] is cyclic of prime order
    {
        const auto& base = series.chain[1];
        unsigned p = static_cast<unsigned>(base.size());
        stage.W = std::make_shared<SemidirectGroup>(SemidirectSpec::trivial({p}));
        unsigned gen = 0;
        for (unsigned e : base)
            if (e != 0) {
                gen = e;
                break;
            }
        unsigned x = 0;
        for (unsigned k = 0; k < p; ++k) {
            stage.mu[x] = k;
            stage.in_domain[x] = true;
            x = g.mul(x, gen);
        }
    }

    for (std::size_t step = 2; step < series.chain.size(); ++step) {
        const auto& prev = series.chain[step - 1];
        const auto& cur = series.chain[step];
        unsigned p = static_cast<unsigned>(cur.size() / prev.size());

        // coset map onto Z_p through a fixed coset representative
        unsigned x1 = 0;
        for (unsigned e : cur)
            if (!stage.in_domain[e]) {
                x1 = e;
                break;
            }
        std::vector<unsigned> pi(g.order(), p);
        {
            // pi(e) = b iff e * x1^-b lies in prev
            unsigned x1_inv = g.inv(x1);
            for (unsigned e : cur) {
                unsigned v = e;
                for (unsigned b = 0; b < p; ++b) {
                    if (stage.in_domain[v]) {
                        pi[e] = b;
                        break;
                    }
                    v = g.mul(v, x1_inv);
                }
                if (pi[e] == p) throw Error("solvable_to_pi: coset map failed");
            }
        }

        // try the in-place extension: needs mu surjective onto W and a
        // complement whose conjugation transports to a level-monomial map
        bool extended = false;
        if (prev.size() == stage.W->order()) {
            unsigned y = g.order();
            for (unsigned e : cur) {
                if (stage.in_domain[e]) continue;
                if (g.element_order(e) == p) {
                    y = e;
                    break;
                }
            }
            if (y != g.order()) {
                std::vector<std::uint64_t> beta = transport_conjugation(g, stage, prev, y);
                std::shared_ptr<const SemidirectGroup> base = stage.W;
                if (!is_level_monomial(*base, beta)) {
                    // cross-level coordinate moves may be fixable by
                    // merging the touched level range
                    unsigned lmin = base->level_count(), lmax = 0;
                    bool single_coord = true;
                    for (unsigned j = 0; j < base->factor_count() && single_coord; ++j) {
                        std::vector<unsigned> digits(base->factor_count(), 0);
                        digits[j] = 1;
                        auto img = base->decompose_element(beta[base->compose(digits)]);
                        unsigned count = 0, where = 0;
                        for (unsigned c = 0; c < img.size(); ++c)
                            if (img[c]) {
                                ++count;
                                where = c;
                            }
                        if (count != 1) {
                            single_coord = false;
                            break;
                        }
                        unsigned la = base->level_of_factor(j), lb = base->level_of_factor(where);
                        if (la != lb) {
                            lmin = std::min({lmin, la, lb});
                            lmax = std::max({lmax, la, lb});
                        }
                    }
                    if (single_coord && lmin <= lmax) {
                        try {
                            auto merged =
                                std::make_shared<SemidirectGroup>(merge_levels(*base, lmin, lmax));
                            if (is_level_monomial(*merged, beta)) base = merged;
                        } catch (const InvalidArgument&) {
                            // fall through to the wreath construction
                        }
                    }
                }
                if (is_level_monomial(*base, beta)) {
                    try {
                        auto newW =
                            std::make_shared<SemidirectGroup>(append_top_level(*base, p, beta));
                        Stage next;
                        next.W = newW;
                        next.mu.assign(g.order(), 0);
                        next.in_domain.assign(g.order(), false);
                        // decompose along the complement: e = base * y^b
                        std::vector<unsigned> powers(p);
                        unsigned yb = 0;
                        for (unsigned b = 0; b < p; ++b) {
                            powers[b] = yb;
                            yb = g.mul(yb, y);
                        }
                        for (unsigned e : cur) {
                            unsigned b = p;
                            for (unsigned probe = 0; probe < p; ++probe) {
                                if (stage.in_domain[g.mul(e, g.inv(powers[probe]))]) {
                                    b = probe;
                                    break;
                                }
                            }
                            if (b == p) throw Error("solvable_to_pi: complement coset map failed");
                            unsigned base_elt = g.mul(e, g.inv(powers[b]));
                            next.mu[e] = stage.mu[base_elt] * p + b;
                            next.in_domain[e] = true;
                        }
                        stage = std::move(next);
                        extended = true;
                    } catch (const InvalidArgument&) {
                        extended = false;
                    }
                }
            }
        }

        if (!extended) {
            // wreath fallback: cur embeds into prev wr Z_p, lifted
            // coordinatewise through mu into W wr Z_p
            const SemidirectGroup& inW = *stage.W;
            std::uint64_t new_order = p;
            for (unsigned c = 0; c < p; ++c) {
                new_order *= inW.order();
                if (new_order > order_budget)
                    throw SizeBudgetExceeded("solvable_to_pi: tower order exceeds the budget");
            }
            auto newW = std::make_shared<SemidirectGroup>(wreath_spec(inW, p));
            if (newW->order() > order_budget)
                throw SizeBudgetExceeded("solvable_to_pi: tower order exceeds the budget");

            std::vector<unsigned> powers(p);
            {
                unsigned x1b = 0;
                for (unsigned b = 0; b < p; ++b) {
                    powers[b] = x1b;
                    x1b = g.mul(x1b, x1);
                }
            }
            // index of a wreath element from per-copy W elements + top digit
            unsigned L = inW.level_count();
            auto wreath_index = [&](const std::vector<std::uint64_t>& parts, unsigned b) {
                std::uint64_t idx = 0;
                for (unsigned l = 0; l < L; ++l) {
                    std::uint64_t blk_order = 1, suffix = 1;
                    // recompute block/suffix orders from the spec
                    for (unsigned j = 0; j < inW.factor_count(); ++j)
                        if (inW.level_of_factor(j) == l) blk_order *= inW.factor_order(j);
                    for (unsigned l2 = l + 1; l2 < L; ++l2)
                        for (unsigned j = 0; j < inW.factor_count(); ++j)
                            if (inW.level_of_factor(j) == l2) suffix *= inW.factor_order(j);
                    for (unsigned c = 0; c < p; ++c)
                        idx = idx * blk_order + parts[c] / suffix % blk_order;
                }
                return idx * p + b;
            };

            Stage next;
            next.W = newW;
            next.mu.assign(g.order(), 0);
            next.in_domain.assign(g.order(), false);
            std::vector<std::uint64_t> parts(p);
            for (unsigned e : cur) {
                unsigned pe = pi[e];
                for (unsigned c = 0; c < p; ++c) {
                    unsigned tc = powers[c];
                    unsigned tce = g.mul(tc, e);
                    unsigned back = powers[(c + pe) % p];
                    unsigned comp = g.mul(tce, g.inv(back));
                    if (!stage.in_domain[comp])
                        throw Error("solvable_to_pi: twisted component escaped the subgroup");
                    parts[c] = stage.mu[comp];
                }
                next.mu[e] = wreath_index(parts, pe);
                next.in_domain[e] = true;
            }
            stage = std::move(next);
        }

        // exhaustive hom + injectivity check on the current embedding
        {
            std::vector<std::uint64_t> image;
            for (unsigned e : cur) image.push_back(stage.mu[e]);
            std::sort(image.begin(), image.end());
            if (std::adjacent_find(image.begin(), image.end()) != image.end())
                throw Error("solvable_to_pi: embedding is not injective");
            for (unsigned a : cur)
                for (unsigned b : cur)
                    if (stage.mu[g.mul(a, b)] != stage.W->mul(stage.mu[a], stage.mu[b]))
                        throw Error("solvable_to_pi: embedding is not a homomorphism");
        }
    }

    PiRealization out;
    out.spec = stage.W->spec();
    out.group = stage.W;
    out.embed.resize(g.order());
    for (unsigned e = 0; e < g.order(); ++e) out.embed[e] = stage.mu[e];
    return out;
}

CompositeKey keygen_for_group(const TableGroup& g, unsigned N, unsigned blinding_s, Rng& rng,
                              const CompositeKeygenOptions& opts, std::uint64_t order_budget) {
    if (!is_solvable(g)) {
        const std::vector<unsigned> stabilized = derived_series(g).back();
        std::ostringstream msg;
        msg << "group is not solvable: derived series stabilizes at a perfect subgroup of order "
            << stabilized.size() << " {";
        for (std::size_t i = 0; i < std::min<std::size_t>(stabilized.size(), 8); ++i) {
            if (i) msg << ",";
            msg << stabilized[i];
        }
        if (stabilized.size() > 8) msg << ",...";
        msg << "}";
        throw NotSolvable(msg.str());
    }
    PiRealization pi = solvable_to_pi(g, order_budget);
    CompositeKey base = keygen_composite(pi.spec, N, blinding_s, rng, opts);
    CompositeKey::Restriction r{g, pi.embed};
    return restrict_to_subgroup(base, pi.embed, std::move(r));
}

}  // namespace solvhe
