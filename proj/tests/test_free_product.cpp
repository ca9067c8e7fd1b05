#include "doctest.h"

#include <memory>

#include "solvhe/cyclic.hpp"
#include "solvhe/errors.hpp"
#include "solvhe/free_product.hpp"

using namespace solvhe;

namespace {

// ambient product of the desk fixtures: Z_77^* (cubes) * Z_21^* (squares)
std::shared_ptr<const FreeProduct> desk_ctx() {
    return std::make_shared<FreeProduct>(
        std::vector<FactorDescriptor>{ResidueFactor{77, 3}, ResidueFactor{21, 2}});
}

// plaintext-side product Z_3 * Z_2 as cyclic table factors
std::shared_ptr<const FreeProduct> k_ctx() {
    return std::make_shared<FreeProduct>(std::vector<FactorDescriptor>{
        TableFactor{std::make_shared<TableGroup>(make_cyclic_group(3))},
        TableFactor{std::make_shared<TableGroup>(make_cyclic_group(2))}});
}

GroupWord word(std::shared_ptr<const FreeProduct> ctx, std::vector<Letter> letters) {
    return GroupWord(std::move(ctx), std::move(letters));
}

std::vector<LetterMap> secret_maps() {
    CyclicKeyPair kp77 = make_cyclic_keypair(3, 3, 7, 11, 45, {1, 45, 23});
    CyclicKeyPair kp21 = make_cyclic_keypair(3, 2, 3, 7, 20, {1, 20});
    return {[kp77](const Int& v) { return Int(coset_index(kp77, v)); },
            [kp21](const Int& v) { return Int(coset_index(kp21, v)); }};
}

std::vector<std::vector<Int>> fixture_reps() { return {{1, 45, 23}, {1, 20}}; }

GroupWord random_word(std::shared_ptr<const FreeProduct> ctx, Rng& rng, std::size_t max_len) {
    std::vector<Letter> letters;
    std::size_t len = rng.u64_below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
        unsigned f = static_cast<unsigned>(rng.u64_below(2));
        Int n = f == 0 ? 77 : 21;
        letters.push_back(Letter{f, rng.unit_mod(n)});
    }
    return GroupWord(std::move(ctx), std::move(letters));
}

}  // namespace

TEST_CASE("canonicalize") {
    auto ctx = desk_ctx();
    SUBCASE("merges same-factor neighbours") {
        GroupWord w = canonicalize(word(ctx, {{0, 8}, {0, 48}}));
        CHECK(w.letters() == std::vector<Letter>{{0, 76}});
        CHECK(w.canonical());
    }
    SUBCASE("keeps already canonical words") {
        GroupWord w = canonicalize(word(ctx, {{0, 45}, {1, 17}}));
        CHECK(w.letters() == std::vector<Letter>{{0, 45}, {1, 17}});
    }
    SUBCASE("collapses inverse pairs to the empty word") {
        GroupWord w = canonicalize(word(ctx, {{0, 45}, {0, 12}}));
        CHECK(w.empty_word());
    }
    SUBCASE("drops identity letters") {
        GroupWord w = canonicalize(word(ctx, {{0, 45}, {1, 1}, {0, 12}}));
        CHECK(w.empty_word());
    }
    SUBCASE("idempotent and length-nonincreasing on random words") {
        Rng rng(31);
        for (int t = 0; t < 500; ++t) {
            GroupWord w = random_word(ctx, rng, 8);
            GroupWord c = canonicalize(w);
            CHECK(c.size() <= w.size());
            CHECK(canonicalize(c) == c);
        }
    }
}

TEST_CASE("multiply and invert satisfy the group axioms") {
    auto ctx = desk_ctx();
    GroupWord e = GroupWord::empty(ctx);
    SUBCASE("examples") {
        GroupWord w = canonicalize(word(ctx, {{0, 45}, {1, 17}}));
        CHECK(multiply(w, e) == w);
        CHECK(multiply(e, w) == w);
        CHECK(invert(w).letters() == std::vector<Letter>{{1, 5}, {0, 12}});
        CHECK(multiply(w, invert(w)).empty_word());
    }
    SUBCASE("random associativity / inverse laws") {
        Rng rng(37);
        for (int t = 0; t < 400; ++t) {
            GroupWord a = canonicalize(random_word(ctx, rng, 8));
            GroupWord b = canonicalize(random_word(ctx, rng, 8));
            GroupWord c = canonicalize(random_word(ctx, rng, 8));
            CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
            CHECK(multiply(a, invert(a)).empty_word());
            CHECK(multiply(invert(a), a).empty_word());
            CHECK(multiply(a, e) == a);
        }
    }
    SUBCASE("context mismatch is refused") {
        auto other = desk_ctx();
        CHECK_THROWS_AS(multiply(GroupWord::empty(ctx), GroupWord::empty(other)), InvalidArgument);
    }
}

TEST_CASE("lift_map applies the factor homomorphisms letterwise") {
    auto ctx = desk_ctx();
    auto target = k_ctx();
    auto maps = secret_maps();
    SUBCASE("examples") {
        GroupWord w = canonicalize(word(ctx, {{0, 45}, {1, 17}}));
        GroupWord k = lift_map(w, maps, target);
        CHECK(k.letters() == std::vector<Letter>{{0, 1}, {1, 1}});
        CHECK(lift_map(GroupWord::empty(ctx), maps, target).empty_word());
        CHECK(lift_map(canonicalize(word(ctx, {{0, 8}})), maps, target).empty_word());
    }
    SUBCASE("homomorphism on random pairs") {
        Rng rng(41);
        for (int t = 0; t < 300; ++t) {
            GroupWord a = canonicalize(random_word(ctx, rng, 6));
            GroupWord b = canonicalize(random_word(ctx, rng, 6));
            CHECK(lift_map(multiply(a, b), maps, target) ==
                  multiply(lift_map(a, maps, target), lift_map(b, maps, target)));
        }
    }
}

TEST_CASE("representative_word is the transversal section") {
    auto ctx = desk_ctx();
    auto target = k_ctx();
    auto reps = fixture_reps();
    GroupWord k = canonicalize(word(target, {{0, 1}, {1, 1}}));
    GroupWord r = representative_word(k, reps, ctx);
    CHECK(r.letters() == std::vector<Letter>{{0, 45}, {1, 20}});
    CHECK(representative_word(GroupWord::empty(target), reps, ctx).empty_word());
    GroupWord k2 = canonicalize(word(target, {{0, 2}}));
    CHECK(representative_word(k2, reps, ctx).letters() == std::vector<Letter>{{0, 23}});
    // a section of the lifted map: lift(rep(k)) == k
    auto maps = secret_maps();
    CHECK(lift_map(r, maps, target) == k);
}

TEST_CASE("transversal_decompose") {
    auto ctx = desk_ctx();
    auto target = k_ctx();
    auto maps = secret_maps();
    auto reps = fixture_reps();
    SUBCASE("example: 52 = 8 * 45") {
        GroupWord g = canonicalize(word(ctx, {{0, 52}}));
        TransversalParts parts = transversal_decompose(g, maps, reps, target);
        CHECK(parts.rep_part.letters() == std::vector<Letter>{{0, 45}});
        CHECK(parts.kernel_part.letters() == std::vector<Letter>{{0, 8}});
    }
    SUBCASE("transversal elements decompose trivially") {
        GroupWord g = canonicalize(word(ctx, {{0, 45}, {1, 20}}));
        TransversalParts parts = transversal_decompose(g, maps, reps, target);
        CHECK(parts.kernel_part.empty_word());
        CHECK(parts.rep_part == g);
    }
    SUBCASE("kernel elements decompose trivially") {
        GroupWord g = canonicalize(word(ctx, {{0, 8}}));
        TransversalParts parts = transversal_decompose(g, maps, reps, target);
        CHECK(parts.rep_part.empty_word());
        CHECK(parts.kernel_part == g);
    }
    SUBCASE("recomposition is exact and the kernel part is in the kernel") {
        Rng rng(43);
        for (int t = 0; t < 300; ++t) {
            GroupWord g = canonicalize(random_word(ctx, rng, 8));
            TransversalParts parts = transversal_decompose(g, maps, reps, target);
            CHECK(multiply(parts.kernel_part, parts.rep_part) == g);
            CHECK(lift_map(parts.kernel_part, maps, target).empty_word());
        }
    }
}

TEST_CASE("word wire format") {
    auto ctx = desk_ctx();
    GroupWord w = canonicalize(word(ctx, {{0, 52}, {1, 17}}));
    CHECK(serialize_word(w) == "1:34 2:11");
    CHECK(parse_word("1:34 2:11", ctx) == w);
    CHECK(serialize_word(GroupWord::empty(ctx)) == "e");
    CHECK(parse_word("e", ctx).empty_word());
    Rng rng(47);
    for (int t = 0; t < 100; ++t) {
        GroupWord g = canonicalize(random_word(ctx, rng, 8));
        CHECK(parse_word(serialize_word(g), ctx) == g);
    }
    CHECK_THROWS_AS(parse_word("", ctx), ParseError);
    CHECK_THROWS_AS(parse_word("0:11", ctx), ParseError);       // factors are 1-based
    CHECK_THROWS_AS(parse_word("1:zz", ctx), ParseError);
    CHECK_THROWS_AS(parse_word("3:11", ctx), ParseError);       // no such factor
    CHECK_THROWS_AS(parse_word("1:b", ctx), ParseError);        // 11 divides 77
}

TEST_CASE("letter validity is enforced") {
    auto ctx = desk_ctx();
    CHECK_THROWS_AS(word(ctx, {{0, 7}}), InvalidArgument);   // gcd(7,77) > 1
    CHECK_THROWS_AS(word(ctx, {{0, 77}}), InvalidArgument);  // out of range
    CHECK_THROWS_AS(word(ctx, {{2, 1}}), InvalidArgument);   // no such factor
}
