#include "solvhe/free_product.hpp"

#include <sstream>

#include "solvhe/errors.hpp"
#include "solvhe/numtheory.hpp"

namespace solvhe {

FreeProduct::FreeProduct(std::vector<FactorDescriptor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InvalidArgument("free product: no factors");
    for (const auto& f : factors_) {
        if (const auto* r = std::get_if<ResidueFactor>(&f)) {
            if (r->n < 2 || r->m < 2) throw InvalidArgument("free product: bad residue factor");
        } else if (!std::get<TableFactor>(f).group) {
            throw InvalidArgument("free product: null table factor");
        }
    }
}

Int FreeProduct::identity(unsigned i) const {
    return std::holds_alternative<ResidueFactor>(factor(i)) ? Int(1) : Int(0);
}

bool FreeProduct::is_identity(unsigned i, const Int& v) const {
    return v == identity(i);
}

bool FreeProduct::is_element(unsigned i, const Int& v) const {
    if (const auto* r = std::get_if<ResidueFactor>(&factor(i)))
        return v > 0 && v < r->n && is_unit(v, r->n);
    const auto& g = *std::get<TableFactor>(factor(i)).group;
    return v >= 0 && v < g.order();
}

Int FreeProduct::mul(unsigned i, const Int& a, const Int& b) const {
    if (const auto* r = std::get_if<ResidueFactor>(&factor(i))) return a * b % r->n;
    const auto& g = *std::get<TableFactor>(factor(i)).group;
    return Int(g.mul(a.get_ui(), b.get_ui()));
}

Int FreeProduct::inv(unsigned i, const Int& a) const {
    if (const auto* r = std::get_if<ResidueFactor>(&factor(i))) return invmod(a, r->n);
    const auto& g = *std::get<TableFactor>(factor(i)).group;
    return Int(g.inv(a.get_ui()));
}

Int FreeProduct::power_map(unsigned i, const Int& a) const {
    const auto* r = std::get_if<ResidueFactor>(&factor(i));
    if (!r) throw InvalidArgument("power_map: factor has no power structure");
    if (!is_unit(a, r->n)) throw InvalidArgument("power_map: witness is not a unit");
    return powmod(a, Int(r->m), r->n);
}

GroupWord::GroupWord(std::shared_ptr<const FreeProduct> ctx, std::vector<Letter> letters)
    : ctx_(std::move(ctx)), letters_(std::move(letters)) {
    if (!ctx_) throw InvalidArgument("group word: null context");
    for (const Letter& l : letters_) {
        if (l.factor >= ctx_->factor_count())
            throw InvalidArgument("group word: letter factor out of range");
        if (!ctx_->is_element(l.factor, l.value) && !ctx_->is_identity(l.factor, l.value))
            throw InvalidArgument("group word: letter value is not a factor element");
    }
}

GroupWord GroupWord::empty(std::shared_ptr<const FreeProduct> ctx) {
    GroupWord w(std::move(ctx), {});
    w.canonical_ = true;
    return w;
}

GroupWord canonicalize(const GroupWord& w) {
    const auto& ctx = *w.context();
    std::vector<Letter> stack;
    stack.reserve(w.size());
    for (const Letter& next : w.letters()) {
        if (ctx.is_identity(next.factor, next.value)) continue;
        Letter cur = next;
        while (!stack.empty() && stack.back().factor == cur.factor) {
            cur.value = ctx.mul(cur.factor, stack.back().value, cur.value);
            stack.pop_back();
            if (ctx.is_identity(cur.factor, cur.value)) break;
        }
        if (!ctx.is_identity(cur.factor, cur.value)) stack.push_back(std::move(cur));
    }
    GroupWord out(w.context(), std::move(stack));
    out.canonical_ = true;
    return out;
}

GroupWord multiply(const GroupWord& w1, const GroupWord& w2) {
    if (w1.context() != w2.context())
        throw InvalidArgument("multiply: words from different ambient products");
    std::vector<Letter> cat = w1.letters();
    cat.insert(cat.end(), w2.letters().begin(), w2.letters().end());
    return canonicalize(GroupWord(w1.context(), std::move(cat)));
}

GroupWord invert(const GroupWord& w) {
    const auto& ctx = *w.context();
    std::vector<Letter> rev;
    rev.reserve(w.size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
        rev.push_back(Letter{it->factor, ctx.inv(it->factor, it->value)});
    return canonicalize(GroupWord(w.context(), std::move(rev)));
}

GroupWord lift_map(const GroupWord& w, const std::vector<LetterMap>& letter_maps,
                   std::shared_ptr<const FreeProduct> target) {
    if (letter_maps.size() != w.context()->factor_count())
        throw InvalidArgument("lift_map: need one oracle per factor");
    std::vector<Letter> mapped;
    mapped.reserve(w.size());
    for (const Letter& l : w.letters())
        mapped.push_back(Letter{l.factor, letter_maps[l.factor](l.value)});
    return canonicalize(GroupWord(std::move(target), std::move(mapped)));
}

GroupWord representative_word(const GroupWord& k, const std::vector<std::vector<Int>>& reps,
                              std::shared_ptr<const FreeProduct> target) {
    if (reps.size() != k.context()->factor_count())
        throw InvalidArgument("representative_word: need one rep list per factor");
    std::vector<Letter> out;
    out.reserve(k.size());
    for (const Letter& l : k.letters()) {
        const auto& list = reps[l.factor];
        unsigned long idx = l.value.get_ui();
        if (idx >= list.size()) throw InvalidArgument("representative_word: letter out of range");
        out.push_back(Letter{l.factor, list[idx]});
    }
    return canonicalize(GroupWord(std::move(target), std::move(out)));
}

TransversalParts transversal_decompose(const GroupWord& g, const std::vector<LetterMap>& letter_maps,
                                       const std::vector<std::vector<Int>>& reps,
                                       std::shared_ptr<const FreeProduct> k_ctx) {
    GroupWord k = lift_map(g, letter_maps, std::move(k_ctx));
    GroupWord r = representative_word(k, reps, g.context());
    GroupWord g0 = multiply(canonicalize(g), invert(r));
    return TransversalParts{std::move(g0), std::move(r)};
}

std::string serialize_word(const GroupWord& w) {
    if (w.empty_word()) return "e";
    std::ostringstream out;
    for (std::size_t i = 0; i < w.letters().size(); ++i) {
        if (i) out << " ";
        out << (w.letters()[i].factor + 1) << ":" << to_hex(w.letters()[i].value);
    }
    return out.str();
}

GroupWord parse_word(const std::string& text, std::shared_ptr<const FreeProduct> ctx) {
    if (text == "e") return canonicalize(GroupWord::empty(std::move(ctx)));
    std::istringstream in(text);
    std::string token;
    std::vector<Letter> letters;
    while (in >> token) {
        std::size_t colon = token.find(':');
        if (colon == std::string::npos) throw ParseError("word: token without ':' in '" + text + "'");
        unsigned factor = 0;
        try {
            factor = static_cast<unsigned>(std::stoul(token.substr(0, colon)));
        } catch (const std::exception&) {
            throw ParseError("word: bad factor index in '" + token + "'");
        }
        if (factor == 0) throw ParseError("word: factor indices are 1-based");
        letters.push_back(Letter{factor - 1, from_hex(token.substr(colon + 1))});
    }
    if (letters.empty()) throw ParseError("word: empty input (the empty word is 'e')");
    try {
        return canonicalize(GroupWord(std::move(ctx), std::move(letters)));
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("word: ") + e.what());
    }
}

}  // namespace solvhe
