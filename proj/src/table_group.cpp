#include "solvhe/table_group.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "solvhe/errors.hpp"

namespace solvhe {

TableGroup::TableGroup(unsigned order, std::vector<unsigned> table, std::vector<std::string> names)
    : order_(order), table_(std::move(table)), names_(std::move(names)) {
    if (order_ == 0) throw InvalidArgument("table group: empty");
    if (table_.size() != static_cast<std::size_t>(order_) * order_)
        throw InvalidArgument("table group: table size != order^2");
    for (unsigned v : table_)
        if (v >= order_) throw InvalidArgument("table group: entry out of range");
    for (unsigned a = 0; a < order_; ++a) {
        if (mul(0, a) != a || mul(a, 0) != a)
            throw InvalidArgument("table group: element 0 is not the identity");
    }
    inverse_.assign(order_, order_);
    for (unsigned a = 0; a < order_; ++a) {
        for (unsigned b = 0; b < order_; ++b) {
            if (mul(a, b) == 0 && mul(b, a) == 0) {
                inverse_[a] = b;
                break;
            }
        }
        if (inverse_[a] == order_) throw InvalidArgument("table group: element without inverse");
    }
    if (order_ <= 64) {
        for (unsigned a = 0; a < order_; ++a)
            for (unsigned b = 0; b < order_; ++b)
                for (unsigned c = 0; c < order_; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw InvalidArgument("table group: associativity fails");
    }
    if (names_.empty()) {
        names_.reserve(order_);
        for (unsigned a = 0; a < order_; ++a) names_.push_back(std::to_string(a));
    } else if (names_.size() != order_) {
        throw InvalidArgument("table group: wrong number of names");
    }
}

unsigned TableGroup::element_order(unsigned a) const {
    unsigned k = 1;
    unsigned x = a;
    while (x != 0) {
        x = mul(x, a);
        ++k;
    }
    return k;
}

bool TableGroup::is_abelian() const {
    for (unsigned a = 0; a < order_; ++a)
        for (unsigned b = a + 1; b < order_; ++b)
            if (mul(a, b) != mul(b, a)) return false;
    return true;
}

unsigned TableGroup::element_by_name(const std::string& label) const {
    for (unsigned a = 0; a < order_; ++a)
        if (names_[a] == label) return a;
    // fall back to a decimal index
    try {
        std::size_t used = 0;
        unsigned long v = std::stoul(label, &used);
        if (used == label.size() && v < order_) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidArgument("unknown group element '" + label + "'");
}

std::vector<unsigned> TableGroup::order_profile() const {
    std::vector<unsigned> profile(order_);
    for (unsigned a = 0; a < order_; ++a) profile[a] = element_order(a);
    std::sort(profile.begin(), profile.end());
    return profile;
}

std::string serialize_table(const TableGroup& g) {
    std::ostringstream out;
    out << "order=" << g.order() << "\n";
    for (unsigned a = 0; a < g.order(); ++a) {
        for (unsigned b = 0; b < g.order(); ++b) {
            if (b) out << " ";
            out << g.mul(a, b);
        }
        out << "\n";
    }
    return out.str();
}

TableGroup parse_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("order=", 0) != 0)
        throw ParseError("table group: missing order= line");
    unsigned order = 0;
    try {
        order = static_cast<unsigned>(std::stoul(line.substr(6)));
    } catch (const std::exception&) {
        throw ParseError("table group: bad order value");
    }
    std::vector<unsigned> table;
    table.reserve(static_cast<std::size_t>(order) * order);
    for (unsigned a = 0; a < order; ++a) {
        if (!std::getline(in, line)) throw ParseError("table group: truncated table");
        std::istringstream row(line);
        unsigned v;
        unsigned count = 0;
        while (row >> v) {
            table.push_back(v);
            ++count;
        }
        if (count != order) throw ParseError("table group: row with wrong width");
    }
    try {
        return TableGroup(order, std::move(table));
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("table group: ") + e.what());
    }
}

std::vector<unsigned> subgroup_closure(const TableGroup& g, std::vector<unsigned> generators) {
    std::vector<bool> in(g.order(), false);
    in[0] = true;
    std::vector<unsigned> elems{0};
    std::vector<unsigned> queue{0};
    for (unsigned x : generators) {
        if (x >= g.order()) throw InvalidArgument("subgroup_closure: generator out of range");
        if (!in[x]) {
            in[x] = true;
            elems.push_back(x);
            queue.push_back(x);
        }
    }
    // closure under products; inverses come for free in a finite group
    std::size_t head = 0;
    while (head < queue.size()) {
        unsigned a = queue[head++];
        for (std::size_t i = 0; i < elems.size(); ++i) {
            unsigned b = elems[i];
            for (unsigned prod : {g.mul(a, b), g.mul(b, a)}) {
                if (!in[prod]) {
                    in[prod] = true;
                    elems.push_back(prod);
                    queue.push_back(prod);
                }
            }
        }
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

SubgroupResult subgroup_of(const TableGroup& g, const std::vector<unsigned>& generators) {
    std::vector<unsigned> elems = subgroup_closure(g, generators);
    std::vector<unsigned> pos(g.order(), 0);
    for (std::size_t i = 0; i < elems.size(); ++i) pos[elems[i]] = static_cast<unsigned>(i);
    unsigned n = static_cast<unsigned>(elems.size());
    std::vector<unsigned> table(static_cast<std::size_t>(n) * n);
    std::vector<std::string> names(n);
    for (unsigned i = 0; i < n; ++i) {
        names[i] = g.name(elems[i]);
        for (unsigned j = 0; j < n; ++j) table[i * n + j] = pos[g.mul(elems[i], elems[j])];
    }
    return SubgroupResult{TableGroup(n, std::move(table), std::move(names)), std::move(elems)};
}

namespace {

std::vector<unsigned> commutator_subgroup(const TableGroup& g, const std::vector<unsigned>& elems) {
    std::vector<unsigned> gens;
    for (unsigned a : elems)
        for (unsigned b : elems) {
            unsigned c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            gens.push_back(c);
        }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return subgroup_closure(g, gens);
}

}  // namespace

std::vector<std::vector<unsigned>> derived_series(const TableGroup& g) {
    std::vector<std::vector<unsigned>> series;
    std::vector<unsigned> cur(g.order());
    std::iota(cur.begin(), cur.end(), 0);
    series.push_back(cur);
    while (true) {
        std::vector<unsigned> next = commutator_subgroup(g, series.back());
        if (next == series.back()) break;
        series.push_back(next);
        if (next.size() == 1) break;
    }
    return series;
}

bool is_solvable(const TableGroup& g) {
    return derived_series(g).back().size() == 1;
}

std::vector<std::vector<unsigned>> all_subgroups(const TableGroup& g) {
    std::set<std::vector<unsigned>> found;
    found.insert(std::vector<unsigned>{0});
    std::vector<std::vector<unsigned>> queue{{0}};
    std::size_t head = 0;
    while (head < queue.size()) {
        std::vector<unsigned> h = queue[head++];
        std::vector<bool> in(g.order(), false);
        for (unsigned x : h) in[x] = true;
        for (unsigned x = 1; x < g.order(); ++x) {
            if (in[x]) continue;
            std::vector<unsigned> gens = h;
            gens.push_back(x);
            std::vector<unsigned> bigger = subgroup_closure(g, gens);
            if (found.insert(bigger).second) queue.push_back(bigger);
        }
    }
    return std::vector<std::vector<unsigned>>(found.begin(), found.end());
}

bool is_normal_subgroup(const TableGroup& g, const std::vector<unsigned>& elements) {
    std::vector<bool> in(g.order(), false);
    for (unsigned x : elements) in[x] = true;
    for (unsigned s = 0; s < g.order(); ++s)
        for (unsigned h : elements)
            if (!in[g.mul(g.mul(s, h), g.inv(s))]) return false;
    return true;
}

CompositionSeries composition_series(const TableGroup& g) {
    if (!is_solvable(g)) throw NotSolvable("composition_series: group is not solvable");
    CompositionSeries out;
    // Build top-down by maximal normal subgroups, then reverse.
    std::vector<std::vector<unsigned>> descending;
    std::vector<unsigned> cur(g.order());
    std::iota(cur.begin(), cur.end(), 0);
    descending.push_back(cur);
    while (descending.back().size() > 1) {
        SubgroupResult sub = subgroup_of(g, descending.back());
        // work inside the current subgroup, then translate back
        std::vector<std::vector<unsigned>> candidates;
        for (const auto& h : all_subgroups(sub.group)) {
            if (h.size() == sub.group.order()) continue;
            if (!is_normal_subgroup(sub.group, h)) continue;
            candidates.push_back(h);
        }
        std::size_t best_size = 0;
        for (const auto& h : candidates) best_size = std::max(best_size, h.size());
        std::vector<std::vector<unsigned>> maximal;
        for (auto& h : candidates)
            if (h.size() == best_size) maximal.push_back(std::move(h));
        std::sort(maximal.begin(), maximal.end());
        const std::vector<unsigned>& chosen = maximal.front();
        std::vector<unsigned> translated;
        translated.reserve(chosen.size());
        for (unsigned idx : chosen) translated.push_back(sub.inclusion[idx]);
        std::sort(translated.begin(), translated.end());
        descending.push_back(std::move(translated));
    }
    out.chain.assign(descending.rbegin(), descending.rend());
    for (std::size_t i = 0; i + 1 < out.chain.size(); ++i)
        out.quotient_orders.push_back(
            static_cast<unsigned>(out.chain[i + 1].size() / out.chain[i].size()));
    return out;
}

void validate_embedding(const TableGroup& source, const std::vector<unsigned>& map,
                        const std::function<unsigned(unsigned, unsigned)>& target_mul) {
    if (map.size() != source.order()) throw InvalidArgument("embedding: wrong map size");
    for (unsigned a = 0; a < source.order(); ++a)
        for (unsigned b = a + 1; b < source.order(); ++b)
            if (map[a] == map[b]) throw InvalidArgument("embedding: not injective");
    for (unsigned a = 0; a < source.order(); ++a)
        for (unsigned b = 0; b < source.order(); ++b)
            if (map[source.mul(a, b)] != target_mul(map[a], map[b]))
                throw InvalidArgument("embedding: not a homomorphism");
}

TableGroup make_cyclic_group(unsigned n) {
    if (n == 0) throw InvalidArgument("cyclic group: order 0");
    std::vector<unsigned> table(static_cast<std::size_t>(n) * n);
    for (unsigned a = 0; a < n; ++a)
        for (unsigned b = 0; b < n; ++b) table[a * n + b] = (a + b) % n;
    return TableGroup(n, std::move(table));
}

TableGroup make_symmetric3() {
    // elements b^d a^t with b of order 3, a of order 2, a b a = b^2;
    // index = d + 3t
    auto idx = [](unsigned d, unsigned t) { return d + 3 * t; };
    std::vector<unsigned> table(36);
    for (unsigned d = 0; d < 3; ++d)
        for (unsigned t = 0; t < 2; ++t)
            for (unsigned e = 0; e < 3; ++e)
                for (unsigned u = 0; u < 2; ++u) {
                    unsigned shifted = t ? (3 - e) % 3 : e;
                    table[idx(d, t) * 6 + idx(e, u)] = idx((d + shifted) % 3, (t + u) % 2);
                }
    return TableGroup(6, std::move(table), {"e", "b", "b2", "a", "ba", "b2a"});
}

TableGroup make_dihedral4() {
    // r^a s^b, s r s = r^-1; index = a + 4b
    auto idx = [](unsigned a, unsigned b) { return a + 4 * b; };
    std::vector<unsigned> table(64);
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 2; ++b)
            for (unsigned c = 0; c < 4; ++c)
                for (unsigned d = 0; d < 2; ++d) {
                    unsigned shifted = b ? (4 - c) % 4 : c;
                    table[idx(a, b) * 8 + idx(c, d)] = idx((a + shifted) % 4, (b + d) % 2);
                }
    return TableGroup(8, std::move(table), {"e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"});
}

TableGroup make_quaternion8() {
    // 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    auto enc = [](int sign, unsigned axis) -> unsigned {
        // axis: 0 scalar, 1 i, 2 j, 3 k
        unsigned base = axis == 0 ? 0 : 2 * axis;
        return base + (sign < 0 ? 1 : 0);
    };
    // axis multiplication: (sign, axis) for each ordered pair
    static const int sign_tab[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    static const unsigned axis_tab[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    std::vector<unsigned> table(64);
    for (unsigned x = 0; x < 8; ++x)
        for (unsigned y = 0; y < 8; ++y) {
            // decode: 0,1 -> scalar; 2,3 -> i; 4,5 -> j; 6,7 -> k
            unsigned axa = x / 2;
            unsigned axb = y / 2;
            int sa = (x % 2) ? -1 : 1;
            int sb = (y % 2) ? -1 : 1;
            int s = sa * sb * sign_tab[axa][axb];
            table[x * 8 + y] = enc(s, axis_tab[axa][axb]);
        }
    return TableGroup(8, std::move(table), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

namespace {

std::vector<std::array<unsigned, 5>> even_permutations5() {
    std::array<unsigned, 5> p{0, 1, 2, 3, 4};
    std::vector<std::array<unsigned, 5>> out;
    do {
        unsigned inversions = 0;
        for (unsigned i = 0; i < 5; ++i)
            for (unsigned j = i + 1; j < 5; ++j)
                if (p[i] > p[j]) ++inversions;
        if (inversions % 2 == 0) out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TableGroup make_alternating5() {
    auto perms = even_permutations5();
    std::vector<unsigned> table(static_cast<std::size_t>(60) * 60);
    auto find = [&](const std::array<unsigned, 5>& p) -> unsigned {
        return static_cast<unsigned>(
            std::lower_bound(perms.begin(), perms.end(), p) - perms.begin());
    };
    std::vector<std::string> names;
    for (unsigned a = 0; a < 60; ++a) {
        std::string nm;
        for (unsigned v : perms[a]) nm += static_cast<char>('0' + v);
        names.push_back(nm);
        for (unsigned b = 0; b < 60; ++b) {
            std::array<unsigned, 5> comp;
            for (unsigned i = 0; i < 5; ++i) comp[i] = perms[a][perms[b][i]];
            table[a * 60 + b] = find(comp);
        }
    }
    return TableGroup(60, std::move(table), std::move(names));
}

TableGroup builtin_group(const std::string& name) {
    if (name == "S3") return make_symmetric3();
    if (name == "Z4") return make_cyclic_group(4);
    if (name == "Z6") return make_cyclic_group(6);
    if (name == "D4") return make_dihedral4();
    if (name == "Q8") return make_quaternion8();
    throw InvalidArgument("unknown builtin group '" + name + "'");
}

}  // namespace solvhe
