#include "solvhe/semidirect.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "solvhe/errors.hpp"

namespace solvhe {

namespace {

bool is_small_prime(unsigned m) {
    if (m < 2) return false;
    for (unsigned d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

}  // namespace

SemidirectSpec SemidirectSpec::trivial(const std::vector<unsigned>& primes) {
    SemidirectSpec spec;
    spec.factor_orders = primes;
    spec.level_sizes.assign(primes.size(), 1);
    if (primes.size() > 1) {
        spec.actions.resize(primes.size() - 1);
        std::uint64_t tail = 1;
        for (std::size_t l = primes.size(); l-- > 0;) {
            if (l + 1 < primes.size()) {
                std::vector<unsigned> id(primes[l]);
                std::iota(id.begin(), id.end(), 0u);
                spec.actions[l].assign(tail, id);
            }
            tail *= primes[l];
        }
    }
    return spec;
}

SemidirectGroup::SemidirectGroup(SemidirectSpec spec) : spec_(std::move(spec)) {
    const auto& f = spec_.factor_orders;
    if (f.empty()) throw InvalidArgument("semidirect spec: no factors");
    unsigned total = 0;
    for (unsigned sz : spec_.level_sizes) {
        if (sz == 0) throw InvalidArgument("semidirect spec: empty level");
        total += sz;
    }
    if (total != f.size()) throw InvalidArgument("semidirect spec: level sizes do not cover factors");
    for (unsigned m : f)
        if (!is_small_prime(m)) throw InvalidArgument("semidirect spec: factor order must be prime");

    unsigned L = static_cast<unsigned>(spec_.level_sizes.size());
    level_start_.resize(L);
    block_order_.resize(L);
    level_of_factor_.resize(f.size());
    unsigned j = 0;
    for (unsigned l = 0; l < L; ++l) {
        level_start_[l] = j;
        std::uint64_t blk = 1;
        for (unsigned c = 0; c < spec_.level_sizes[l]; ++c, ++j) {
            level_of_factor_[j] = l;
            blk *= f[j];
        }
        block_order_[l] = blk;
    }
    suffix_order_.assign(L + 1, 1);
    for (unsigned l = L; l-- > 0;) suffix_order_[l] = suffix_order_[l + 1] * block_order_[l];
    order_ = suffix_order_[0];

    if (spec_.actions.size() != static_cast<std::size_t>(L - 1))
        throw InvalidArgument("semidirect spec: need one action table per non-final level");
    validate();
}

std::uint64_t SemidirectGroup::block_mul(unsigned level, std::uint64_t a, std::uint64_t b) const {
    // blocks are direct products of cyclic factors: add digits
    std::uint64_t result = 0;
    std::uint64_t place = 1;
    unsigned start = level_start_[level];
    for (unsigned c = spec_.level_sizes[level]; c-- > 0;) {
        unsigned m = spec_.factor_orders[start + c];
        result += place * ((a % m + b % m) % m);
        a /= m;
        b /= m;
        place *= m;
    }
    return result;
}

std::uint64_t SemidirectGroup::block_inv(unsigned level, std::uint64_t a) const {
    std::uint64_t result = 0;
    std::uint64_t place = 1;
    unsigned start = level_start_[level];
    for (unsigned c = spec_.level_sizes[level]; c-- > 0;) {
        unsigned m = spec_.factor_orders[start + c];
        std::uint64_t d = a % m;
        result += place * (d == 0 ? 0 : m - d);
        a /= m;
        place *= m;
    }
    return result;
}

std::uint64_t SemidirectGroup::mul_from(unsigned level, std::uint64_t a, std::uint64_t b) const {
    if (level + 1 == level_count()) return block_mul(level, a, b);
    std::uint64_t tail = suffix_order_[level + 1];
    std::uint64_t ab = a / tail, at = a % tail;
    std::uint64_t bb = b / tail, bt = b % tail;
    std::uint64_t acted = spec_.actions[level][at][bb];
    return block_mul(level, ab, acted) * tail + mul_from(level + 1, at, bt);
}

std::uint64_t SemidirectGroup::mul(std::uint64_t a, std::uint64_t b) const {
    return mul_from(0, a, b);
}

std::uint64_t SemidirectGroup::inv(std::uint64_t a) const {
    // (d, t)^-1 = (act(t^-1)(d^-1), t^-1), bottom-up over levels
    unsigned L = level_count();
    std::uint64_t tail_inv = 0;  // inverse of the suffix processed so far
    for (unsigned l = L; l-- > 0;) {
        std::uint64_t blk = a / suffix_order_[l + 1] % block_order_[l];
        std::uint64_t binv = block_inv(l, blk);
        std::uint64_t acted = (l + 1 == L) ? binv : spec_.actions[l][tail_inv][binv];
        tail_inv += acted * suffix_order_[l + 1];
    }
    return tail_inv;
}

std::vector<unsigned> SemidirectGroup::decompose_element(std::uint64_t idx) const {
    std::vector<unsigned> digits(factor_count());
    for (unsigned j = factor_count(); j-- > 0;) {
        digits[j] = static_cast<unsigned>(idx % spec_.factor_orders[j]);
        idx /= spec_.factor_orders[j];
    }
    return digits;
}

std::uint64_t SemidirectGroup::compose(const std::vector<unsigned>& digits) const {
    if (digits.size() != factor_count()) throw InvalidArgument("compose: wrong digit count");
    std::uint64_t idx = 0;
    for (unsigned j = 0; j < factor_count(); ++j) {
        if (digits[j] >= spec_.factor_orders[j]) throw InvalidArgument("compose: digit out of range");
        idx = idx * spec_.factor_orders[j] + digits[j];
    }
    return idx;
}

std::vector<KLetter> SemidirectGroup::element_word(std::uint64_t idx) const {
    std::vector<KLetter> word;
    auto digits = decompose_element(idx);
    for (unsigned j = 0; j < digits.size(); ++j)
        if (digits[j] != 0) word.push_back(KLetter{j, digits[j]});
    return word;
}

std::uint64_t SemidirectGroup::eval_word(const std::vector<KLetter>& word) const {
    std::uint64_t acc = 0;
    for (const KLetter& letter : word) {
        if (letter.factor >= factor_count() || letter.value >= spec_.factor_orders[letter.factor])
            throw InvalidArgument("eval_word: malformed letter");
        std::vector<unsigned> digits(factor_count(), 0);
        digits[letter.factor] = letter.value;
        acc = mul(acc, compose(digits));
    }
    return acc;
}

std::uint64_t SemidirectGroup::tail_index_of_letter(unsigned level, unsigned factor,
                                                    unsigned value) const {
    // index of the single-letter element inside the group formed by
    // levels level+1..L-1
    std::uint64_t idx = 0;
    unsigned lx = level_of_factor_[factor];
    for (unsigned l = level + 1; l < level_count(); ++l) {
        std::uint64_t blk = 0;
        if (l == lx) {
            std::uint64_t place = 1;
            unsigned start = level_start_[l];
            for (unsigned c = spec_.level_sizes[l]; c-- > 0;) {
                if (start + c == factor) blk += place * value;
                place *= spec_.factor_orders[start + c];
            }
        }
        idx = idx * block_order_[l] + blk;
    }
    return idx;
}

KLetter SemidirectGroup::conj_letter(unsigned level, const KLetter& deeper,
                                     const KLetter& letter) const {
    std::uint64_t tail_idx = tail_index_of_letter(level, deeper.factor, deeper.value);
    std::uint64_t blk = 0;
    {
        std::uint64_t place = 1;
        unsigned start = level_start_[level];
        for (unsigned c = spec_.level_sizes[level]; c-- > 0;) {
            if (start + c == letter.factor) blk += place * letter.value;
            place *= spec_.factor_orders[start + c];
        }
    }
    std::uint64_t image = spec_.actions[level][tail_idx][blk];
    // decode; monomial actions guarantee a single nonzero coordinate
    KLetter out;
    unsigned nonzero = 0;
    unsigned start = level_start_[level];
    for (unsigned c = spec_.level_sizes[level]; c-- > 0;) {
        unsigned m = spec_.factor_orders[start + c];
        unsigned d = static_cast<unsigned>(image % m);
        image /= m;
        if (d != 0) {
            ++nonzero;
            out = KLetter{start + c, d};
        }
    }
    if (nonzero != 1) throw Error("project_q: non-monomial action encountered");
    return out;
}

std::uint64_t SemidirectGroup::project_q(const std::vector<KLetter>& word,
                                         ProjectStats* stats) const {
    for (const KLetter& letter : word) {
        if (letter.factor >= factor_count() || letter.value == 0 ||
            letter.value >= spec_.factor_orders[letter.factor])
            throw InvalidArgument("project_q: malformed letter");
    }
    const std::size_t budget = word.size();
    ProjectStats local{budget, budget};

    std::vector<KLetter> w = word;
    std::vector<unsigned> digits(factor_count(), 0);
    std::size_t collected = 0;  // nonzero digits already split off

    auto observe = [&]() {
        std::size_t len = collected + w.size();
        local.max_intermediate = std::max(local.max_intermediate, len);
        if (len > budget) throw Error("project_q: intermediate word grew beyond the input");
    };

    for (unsigned level = 0; level < level_count(); ++level) {
        bool changed = true;
        while (changed) {
            changed = false;
            // canonical pass: merge adjacent same-factor letters
            for (std::size_t i = 0; i + 1 < w.size();) {
                if (w[i].factor == w[i + 1].factor) {
                    unsigned m = spec_.factor_orders[w[i].factor];
                    unsigned v = (w[i].value + w[i + 1].value) % m;
                    if (v == 0) {
                        w.erase(w.begin() + i, w.begin() + i + 2);
                        if (i > 0) --i;
                    } else {
                        w[i].value = v;
                        w.erase(w.begin() + i + 1);
                    }
                    observe();
                } else {
                    ++i;
                }
            }
            // one rewrite: commute a level letter leftward
            for (std::size_t i = 1; i < w.size(); ++i) {
                unsigned li = level_of_factor_[w[i].factor];
                unsigned lp = level_of_factor_[w[i - 1].factor];
                bool deeper_before_level = (li == level && lp > level);
                bool unsorted_within_level =
                    (li == level && lp == level && w[i - 1].factor > w[i].factor);
                if (deeper_before_level) {
                    KLetter moved = conj_letter(level, w[i - 1], w[i]);
                    w[i] = w[i - 1];
                    w[i - 1] = moved;
                    observe();
                    changed = true;
                    break;
                }
                if (unsorted_within_level) {
                    std::swap(w[i - 1], w[i]);  // same block: coordinates commute
                    observe();
                    changed = true;
                    break;
                }
            }
        }
        // the word now starts with the sorted level letters: collect them
        std::size_t head = 0;
        while (head < w.size() && level_of_factor_[w[head].factor] == level) {
            digits[w[head].factor] = w[head].value;
            ++collected;
            ++head;
        }
        w.erase(w.begin(), w.begin() + head);
        for (const KLetter& rest : w)
            if (level_of_factor_[rest.factor] <= level)
                throw Error("project_q: rewriting left a shallow letter behind");
    }
    if (!w.empty()) throw Error("project_q: rewriting failed to empty the word");
    if (stats) *stats = local;
    return compose(digits);
}

TableGroup SemidirectGroup::to_table(std::uint64_t max_order) const {
    if (order_ > max_order)
        throw SizeBudgetExceeded("semidirect group of order " + std::to_string(order_) +
                                 " exceeds table materialization cap");
    unsigned n = static_cast<unsigned>(order_);
    std::vector<unsigned> table(static_cast<std::size_t>(n) * n);
    for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) table[a * n + b] = static_cast<unsigned>(mul(a, b));
    return TableGroup(n, std::move(table));
}

void SemidirectGroup::validate() const {
    unsigned L = level_count();
    for (unsigned l = 0; l + 1 < L; ++l) {
        const auto& acts = spec_.actions[l];
        std::uint64_t tail = suffix_order_[l + 1];
        std::uint64_t blk = block_order_[l];
        if (acts.size() != tail)
            throw InvalidArgument("semidirect spec: action table has wrong tail size");
        for (const auto& perm : acts) {
            if (perm.size() != blk)
                throw InvalidArgument("semidirect spec: action permutation has wrong size");
            std::vector<bool> seen(blk, false);
            for (unsigned img : perm) {
                if (img >= blk || seen[img])
                    throw InvalidArgument("semidirect spec: action is not a permutation");
                seen[img] = true;
            }
        }
        // identity tail element acts trivially
        for (std::uint64_t x = 0; x < blk; ++x)
            if (acts[0][x] != x)
                throw InvalidArgument("semidirect spec: identity action is not trivial");
        // each action is a block automorphism
        for (const auto& perm : acts) {
            if (perm[0] != 0) throw InvalidArgument("semidirect spec: action moves the identity");
            for (std::uint64_t x = 0; x < blk; ++x)
                for (std::uint64_t y = 0; y < blk; ++y)
                    if (perm[block_mul(l, x, y)] != block_mul(l, perm[x], perm[y]))
                        throw InvalidArgument("semidirect spec: action is not an automorphism");
        }
        // monomial: each coordinate generator maps to a single coordinate
        // of the same order
        unsigned start = level_start_[l];
        for (const auto& perm : acts) {
            std::uint64_t place = 1;
            for (unsigned c = spec_.level_sizes[l]; c-- > 0;) {
                unsigned m = spec_.factor_orders[start + c];
                std::uint64_t image = perm[place];  // image of the generator e_c
                unsigned nonzero_order = 0;
                unsigned count = 0;
                for (unsigned c2 = spec_.level_sizes[l]; c2-- > 0;) {
                    unsigned m2 = spec_.factor_orders[start + c2];
                    if (image % m2 != 0) {
                        ++count;
                        nonzero_order = m2;
                    }
                    image /= m2;
                }
                if (count != 1 || nonzero_order != m)
                    throw InvalidArgument("semidirect spec: action is not monomial");
                place *= m;
            }
        }
        // homomorphism: act(t * u) = act(t) o act(u) in the tail group
        for (std::uint64_t t = 0; t < tail; ++t)
            for (std::uint64_t u = 0; u < tail; ++u) {
                std::uint64_t tu = mul_from(l + 1, t, u);
                for (std::uint64_t x = 0; x < blk; ++x)
                    if (acts[tu][x] != acts[t][acts[u][x]])
                        throw InvalidArgument("semidirect spec: action is not a homomorphism");
            }
    }
}

SemidirectSpec wreath_spec(const SemidirectGroup& inner, unsigned p) {
    if (!is_small_prime(p)) throw InvalidArgument("wreath_spec: top order must be prime");
    const SemidirectSpec& in = inner.spec_;
    unsigned L = inner.level_count();
    SemidirectSpec out;
    for (unsigned l = 0; l < L; ++l) {
        for (unsigned copy = 0; copy < p; ++copy)
            for (unsigned c = 0; c < in.level_sizes[l]; ++c)
                out.factor_orders.push_back(in.factor_orders[inner.level_start_[l] + c]);
        out.level_sizes.push_back(in.level_sizes[l] * p);
    }
    out.factor_orders.push_back(p);
    out.level_sizes.push_back(1);

    // tail of new level l: levels l+1..L-1 (p copies each, copy-major
    // inside the level) followed by the rotating Z_p on top
    out.actions.resize(L);
    for (unsigned l = 0; l < L; ++l) {
        std::uint64_t in_blk = inner.block_order_[l];
        std::uint64_t in_tail = inner.suffix_order_[l + 1];
        std::uint64_t new_blk = 1;
        for (unsigned copy = 0; copy < p; ++copy) new_blk *= in_blk;
        std::uint64_t new_tail = p;
        for (unsigned copy = 0; copy < p; ++copy) new_tail *= in_tail;

        out.actions[l].assign(new_tail, std::vector<unsigned>(new_blk));
        for (std::uint64_t t = 0; t < new_tail; ++t) {
            unsigned b = static_cast<unsigned>(t % p);
            std::uint64_t rest = t / p;
            // per-level, per-copy digit blocks, most significant first
            std::vector<std::vector<std::uint64_t>> dig(L, std::vector<std::uint64_t>(p, 0));
            for (unsigned l2 = L; l2-- > l + 1;) {
                for (unsigned copy = p; copy-- > 0;) {
                    dig[l2][copy] = rest % inner.block_order_[l2];
                    rest /= inner.block_order_[l2];
                }
            }
            // copy c's inner tail element below level l
            std::vector<std::uint64_t> tc(p, 0);
            for (unsigned copy = 0; copy < p; ++copy)
                for (unsigned l2 = l + 1; l2 < L; ++l2)
                    tc[copy] = tc[copy] * inner.block_order_[l2] + dig[l2][copy];

            for (std::uint64_t x = 0; x < new_blk; ++x) {
                std::uint64_t xr = x;
                std::vector<std::uint64_t> comp(p);
                for (unsigned copy = p; copy-- > 0;) {
                    comp[copy] = xr % in_blk;
                    xr /= in_blk;
                }
                std::uint64_t img = 0;
                for (unsigned copy = 0; copy < p; ++copy) {
                    std::uint64_t source = comp[(copy + b) % p];
                    std::uint64_t moved =
                        (l + 1 == L) ? source : in.actions[l][tc[copy]][source];
                    img = img * in_blk + moved;
                }
                out.actions[l][t][x] = static_cast<unsigned>(img);
            }
        }
    }
    return out;
}

SemidirectSpec append_top_level(const SemidirectGroup& inner, unsigned p,
                                const std::vector<std::uint64_t>& beta) {
    if (!is_small_prime(p)) throw InvalidArgument("append_top_level: top order must be prime");
    if (beta.size() != inner.order())
        throw InvalidArgument("append_top_level: automorphism has wrong size");
    if (!is_level_monomial(inner, beta))
        throw InvalidArgument("append_top_level: automorphism is not level monomial");
    {
        std::vector<std::uint64_t> power(inner.order());
        std::iota(power.begin(), power.end(), std::uint64_t{0});
        for (unsigned i = 0; i < p; ++i)
            for (std::uint64_t& v : power) v = beta[v];
        for (std::uint64_t x = 0; x < inner.order(); ++x)
            if (power[x] != x)
                throw InvalidArgument("append_top_level: automorphism order does not divide p");
    }

    const SemidirectSpec& in = inner.spec_;
    unsigned L = inner.level_count();
    SemidirectSpec out;
    out.factor_orders = in.factor_orders;
    out.factor_orders.push_back(p);
    out.level_sizes = in.level_sizes;
    out.level_sizes.push_back(1);
    out.actions.resize(L);

    for (unsigned l = 0; l < L; ++l) {
        std::uint64_t blk = inner.block_order_[l];
        std::uint64_t in_tail = inner.suffix_order_[l + 1];
        std::uint64_t new_tail = in_tail * p;
        std::vector<std::uint64_t> beta_l(blk);
        for (std::uint64_t x = 0; x < blk; ++x) {
            std::uint64_t full = beta[x * inner.suffix_order_[l + 1]];
            if (full % inner.suffix_order_[l + 1] != 0 ||
                full / inner.suffix_order_[l + 1] >= blk)
                throw InvalidArgument("append_top_level: automorphism crosses levels");
            beta_l[x] = full / inner.suffix_order_[l + 1];
        }

        out.actions[l].assign(new_tail, std::vector<unsigned>(blk));
        for (std::uint64_t t = 0; t < new_tail; ++t) {
            unsigned b = static_cast<unsigned>(t % p);
            std::uint64_t t_in = t / p;
            for (std::uint64_t x = 0; x < blk; ++x) {
                std::uint64_t y = x;
                for (unsigned i = 0; i < b; ++i) y = beta_l[y];
                std::uint64_t moved = (l + 1 == L) ? y : in.actions[l][t_in][y];
                out.actions[l][t][x] = static_cast<unsigned>(moved);
            }
        }
    }
    return out;
}

bool is_level_monomial(const SemidirectGroup& g, const std::vector<std::uint64_t>& beta) {
    if (beta.size() != g.order()) return false;
    const auto& spec = g.spec();
    for (unsigned j = 0; j < g.factor_count(); ++j) {
        std::vector<unsigned> digits(g.factor_count(), 0);
        digits[j] = 1;
        std::uint64_t image = beta[g.compose(digits)];
        auto img_digits = g.decompose_element(image);
        unsigned count = 0;
        unsigned where = 0;
        for (unsigned c = 0; c < img_digits.size(); ++c)
            if (img_digits[c] != 0) {
                ++count;
                where = c;
            }
        if (count != 1) return false;
        if (g.level_of_factor(where) != g.level_of_factor(j)) return false;
        if (spec.factor_orders[where] != spec.factor_orders[j]) return false;
    }
    return true;
}

SemidirectSpec merge_levels(const SemidirectGroup& g, unsigned first, unsigned last) {
    const SemidirectSpec& in = g.spec();
    unsigned L = g.level_count();
    if (first > last || last >= L) throw InvalidArgument("merge_levels: bad range");
    if (first == last) return in;

    // legality: deeper in-range levels must act trivially on shallower
    // in-range blocks (pure in-range tail elements suffice: the action is
    // a homomorphism of the tail group)
    std::uint64_t below = g.suffix_order(last + 1);
    for (unsigned l = first; l < last; ++l) {
        std::uint64_t deep_range = g.suffix_order(l + 1) / below;
        for (std::uint64_t ranged = 1; ranged < deep_range; ++ranged) {
            std::uint64_t t = ranged * below;
            for (std::uint64_t x = 0; x < g.block_order(l); ++x)
                if (in.actions[l][t][x] != x)
                    throw InvalidArgument("merge_levels: nontrivial action inside the merged range");
        }
    }

    SemidirectSpec out;
    out.factor_orders = in.factor_orders;
    for (unsigned l = 0; l < L; ++l) {
        if (l == first) {
            unsigned sz = 0;
            for (unsigned l2 = first; l2 <= last; ++l2) sz += in.level_sizes[l2];
            out.level_sizes.push_back(sz);
        } else if (l > first && l <= last) {
            continue;
        } else {
            out.level_sizes.push_back(in.level_sizes[l]);
        }
    }
    unsigned newL = static_cast<unsigned>(out.level_sizes.size());
    out.actions.resize(newL > 0 ? newL - 1 : 0);

    // shallower levels: identical tail groups and indexing
    for (unsigned l = 0; l < first; ++l) out.actions[l] = in.actions[l];
    // merged level: tail is everything below `last`; the in-range digit
    // positions of the old tail index are zero there, so old tables can
    // be consulted at index t directly
    if (first + 1 < newL) {
        std::uint64_t merged_blk = 1;
        for (unsigned l2 = first; l2 <= last; ++l2) merged_blk *= g.block_order(l2);
        out.actions[first].assign(below, std::vector<unsigned>(merged_blk));
        for (std::uint64_t t = 0; t < below; ++t) {
            for (std::uint64_t x = 0; x < merged_blk; ++x) {
                std::uint64_t xr = x;
                std::vector<std::uint64_t> comp(last - first + 1);
                for (unsigned l2 = last + 1; l2-- > first;) {
                    comp[l2 - first] = xr % g.block_order(l2);
                    xr /= g.block_order(l2);
                }
                std::uint64_t img = 0;
                for (unsigned l2 = first; l2 <= last; ++l2) {
                    std::uint64_t moved = (l2 + 1 == L) ? comp[l2 - first]
                                                        : in.actions[l2][t][comp[l2 - first]];
                    img = img * g.block_order(l2) + moved;
                }
                out.actions[first][t][x] = static_cast<unsigned>(img);
            }
        }
    }
    // deeper levels shift up unchanged
    for (unsigned l = last + 1; l + 1 < L; ++l) out.actions[first + 1 + (l - last - 1)] = in.actions[l];
    return out;
}

std::string serialize_spec(const SemidirectSpec& spec) {
    std::ostringstream out;
    out << "factors=";
    for (std::size_t j = 0; j < spec.factor_orders.size(); ++j) {
        if (j) out << ",";
        out << spec.factor_orders[j];
    }
    out << "\n";
    bool blocked = false;
    for (unsigned sz : spec.level_sizes)
        if (sz != 1) blocked = true;
    if (blocked) {
        out << "levels=";
        for (std::size_t l = 0; l < spec.level_sizes.size(); ++l) {
            if (l) out << ",";
            out << spec.level_sizes[l];
        }
        out << "\n";
    }
    for (std::size_t l = 0; l < spec.actions.size(); ++l) {
        for (std::size_t t = 0; t < spec.actions[l].size(); ++t) {
            out << "action " << (l + 1) << " " << t << " ->";
            for (unsigned img : spec.actions[l][t]) out << " " << img;
            out << "\n";
        }
    }
    return out.str();
}

namespace {

std::vector<unsigned> parse_uint_list(const std::string& s, const char* what) {
    std::vector<unsigned> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(static_cast<unsigned>(std::stoul(tok)));
        } catch (const std::exception&) {
            throw ParseError(std::string("semidirect spec: bad ") + what + " entry '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

SemidirectSpec parse_spec(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    SemidirectSpec spec;
    if (!std::getline(in, line) || line.rfind("factors=", 0) != 0)
        throw ParseError("semidirect spec: missing factors= line");
    spec.factor_orders = parse_uint_list(line.substr(8), "factor");

    bool have_line = static_cast<bool>(std::getline(in, line));
    if (have_line && line.rfind("levels=", 0) == 0) {
        spec.level_sizes = parse_uint_list(line.substr(7), "level");
        have_line = static_cast<bool>(std::getline(in, line));
    } else {
        spec.level_sizes.assign(spec.factor_orders.size(), 1);
    }

    unsigned L = static_cast<unsigned>(spec.level_sizes.size());
    spec.actions.resize(L > 0 ? L - 1 : 0);
    while (have_line) {
        if (!line.empty()) {
            std::istringstream ls(line);
            std::string kw, arrow;
            unsigned level;
            std::uint64_t tail_idx;
            if (!(ls >> kw >> level >> tail_idx >> arrow) || kw != "action" || arrow != "->")
                throw ParseError("semidirect spec: bad action line '" + line + "'");
            if (level == 0 || level > spec.actions.size())
                throw ParseError("semidirect spec: action level out of range");
            auto& table = spec.actions[level - 1];
            if (table.size() <= tail_idx) table.resize(tail_idx + 1);
            std::vector<unsigned> perm;
            unsigned v;
            while (ls >> v) perm.push_back(v);
            table[tail_idx] = std::move(perm);
        }
        have_line = static_cast<bool>(std::getline(in, line));
    }
    return spec;
}

}  // namespace solvhe
