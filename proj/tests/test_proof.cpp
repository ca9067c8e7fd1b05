#include "doctest.h"

#include <memory>

#include "solvhe/cyclic.hpp"
#include "solvhe/errors.hpp"
#include "solvhe/numtheory.hpp"
#include "solvhe/proof.hpp"

using namespace solvhe;

namespace {

std::shared_ptr<const FreeProduct> desk_ctx() {
    return std::make_shared<FreeProduct>(
        std::vector<FactorDescriptor>{ResidueFactor{77, 3}, ResidueFactor{21, 2}});
}

KernelOracle desk_oracle(std::uint64_t seed = 51) {
    auto rng = std::make_shared<Rng>(seed);
    ModulusParams p77{3, 3, 7, 11, 77};
    ModulusParams p21{3, 2, 3, 7, 21};
    return [rng, p77, p21](unsigned factor, const Int& v) {
        return mth_root_mod_n(v, factor == 0 ? p77 : p21, *rng);
    };
}

std::vector<LetterMap> secret_maps() {
    CyclicKeyPair kp77 = make_cyclic_keypair(3, 3, 7, 11, 45, {1, 45, 23});
    CyclicKeyPair kp21 = make_cyclic_keypair(3, 2, 3, 7, 20, {1, 20});
    return {[kp77](const Int& v) { return Int(coset_index(kp77, v)); },
            [kp21](const Int& v) { return Int(coset_index(kp21, v)); }};
}

std::shared_ptr<const FreeProduct> k_ctx() {
    return std::make_shared<FreeProduct>(std::vector<FactorDescriptor>{
        TableFactor{std::make_shared<TableGroup>(make_cyclic_group(3))},
        TableFactor{std::make_shared<TableGroup>(make_cyclic_group(2))}});
}

ElementaryTransformation insertion(std::size_t pos, unsigned j, Int witness) {
    ElementaryTransformation t;
    t.position = pos;
    t.kernel_factor = j;
    t.witness = std::move(witness);
    return t;
}

}  // namespace

TEST_CASE("apply_transformation") {
    auto ctx = desk_ctx();
    GroupWord empty = GroupWord::empty(ctx);
    SUBCASE("pure insertion of a power value") {
        GroupWord w = apply_transformation(empty, insertion(0, 0, 2));
        CHECK(w.letters() == std::vector<Letter>{{0, 8}});
    }
    SUBCASE("degenerate right split") {
        GroupWord base(ctx, {{0, 45}});
        ElementaryTransformation t = insertion(0, 0, 2);
        t.split = LetterSplit{0, 45, 1};
        GroupWord w = apply_transformation(base, t);
        CHECK(w.letters() == std::vector<Letter>{{0, 45}, {0, 8}});
    }
    SUBCASE("inserting P(1) leaves an identity letter in the raw word") {
        GroupWord base(ctx, {{0, 45}, {1, 17}});
        GroupWord w = apply_transformation(base, insertion(1, 1, 1));
        CHECK(w.size() == 3);
        CHECK(w.letters()[1] == Letter{1, 1});
        CHECK(canonicalize(w) == canonicalize(base));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(apply_transformation(empty, insertion(1, 0, 2)), InvalidArgument);
        GroupWord base(ctx, {{0, 45}});
        ElementaryTransformation bad_split = insertion(0, 0, 2);
        bad_split.split = LetterSplit{0, 45, 2};  // 45*2 != 45
        CHECK_THROWS_AS(apply_transformation(base, bad_split), InvalidArgument);
        ElementaryTransformation wrong_factor = insertion(0, 0, 2);
        wrong_factor.split = LetterSplit{1, 45, 1};
        CHECK_THROWS_AS(apply_transformation(base, wrong_factor), InvalidArgument);
    }
}

TEST_CASE("eval_proof") {
    auto ctx = desk_ctx();
    SUBCASE("single insertion") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.claimed = canonicalize(GroupWord(ctx, {{0, 8}}));
        CHECK(eval_proof(pf) == pf.claimed);
    }
    SUBCASE("empty proof") {
        Proof pf;
        pf.claimed = GroupWord::empty(ctx);
        CHECK(eval_proof(pf).empty_word());
    }
    SUBCASE("two insertions merge canonically: 8 * 27 = 62") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.steps.push_back(insertion(1, 0, 3));
        pf.claimed = canonicalize(GroupWord(ctx, {{0, 62}}));
        CHECK(eval_proof(pf) == pf.claimed);
    }
    SUBCASE("replay mismatch is detected") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.claimed = canonicalize(GroupWord(ctx, {{0, 62}}));
        CHECK_THROWS_AS(eval_proof(pf), InvalidArgument);
    }
}

TEST_CASE("sample_kernel") {
    auto ctx = desk_ctx();
    auto maps = secret_maps();
    auto target = k_ctx();
    Rng rng(53);
    SUBCASE("zero budget gives the empty proof") {
        Proof pf = sample_kernel(0, ctx, rng);
        CHECK(pf.steps.empty());
        CHECK(pf.claimed.empty_word());
    }
    SUBCASE("single step lands in the kernel letterwise") {
        ModulusParams p77{3, 3, 7, 11, 77};
        auto single = std::make_shared<FreeProduct>(
            std::vector<FactorDescriptor>{ResidueFactor{77, 3}});
        for (int t = 0; t < 50; ++t) {
            Proof pf = sample_kernel(1, single, rng);
            REQUIRE(pf.steps.size() == 1);
            if (!pf.claimed.empty_word()) {
                REQUIRE(pf.claimed.size() == 1);
                CHECK(residue_test(pf.claimed.letters()[0].value, p77));
            }
        }
    }
    SUBCASE("samples evaluate into ker(f*)") {
        for (int t = 0; t < 200; ++t) {
            Proof pf = sample_kernel(rng.u64_below(9), ctx, rng);
            GroupWord value = eval_proof(pf);
            CHECK(lift_map(value, maps, target).empty_word());
        }
    }
}

TEST_CASE("extract_proof") {
    auto ctx = desk_ctx();
    auto oracle = desk_oracle();
    SUBCASE("single kernel letter") {
        GroupWord g = canonicalize(GroupWord(ctx, {{0, 8}}));
        auto res = extract_proof(g, oracle);
        REQUIRE(res.has_value());
        CHECK(res->proof.steps.size() == 1);
        Int w = res->proof.steps[0].witness;
        CHECK(powmod(w, 3, 77) == 8);
        CHECK(eval_proof(res->proof) == g);
        CHECK(res->oracle_calls <= 1);
    }
    SUBCASE("non-member") {
        GroupWord g = canonicalize(GroupWord(ctx, {{0, 45}}));
        CHECK_FALSE(extract_proof(g, oracle).has_value());
    }
    SUBCASE("empty word") {
        auto res = extract_proof(GroupWord::empty(ctx), oracle);
        REQUIRE(res.has_value());
        CHECK(res->proof.steps.empty());
    }
    SUBCASE("merge undo: [45, y, 23] with 45*23 = 34 a cube") {
        GroupWord g = canonicalize(GroupWord(ctx, {{0, 45}, {1, 4}, {0, 23}}));
        auto res = extract_proof(g, oracle);
        REQUIRE(res.has_value());
        CHECK(eval_proof(res->proof) == g);
        CHECK(res->proof.steps.size() <= g.size());
        CHECK(res->oracle_calls <= g.size() * g.size());
    }
    SUBCASE("vanish undo: [45, y, 12] with 45*12 = 1") {
        GroupWord g = canonicalize(GroupWord(ctx, {{0, 45}, {1, 4}, {0, 12}}));
        auto res = extract_proof(g, oracle);
        REQUIRE(res.has_value());
        CHECK(eval_proof(res->proof) == g);
        CHECK(res->proof.steps.size() <= g.size());
    }
    SUBCASE("cascading vanish: [5, 45, y, 12, 17]") {
        // deleting y makes 45*12 vanish, then 5*17 = 85 = 1 mod 21 vanish
        GroupWord g = canonicalize(GroupWord(ctx, {{1, 5}, {0, 45}, {1, 4}, {0, 12}, {1, 17}}));
        REQUIRE(g.size() == 5);
        auto res = extract_proof(g, oracle);
        REQUIRE(res.has_value());
        CHECK(eval_proof(res->proof) == g);
        CHECK(res->proof.steps.size() <= g.size());
        CHECK(res->oracle_calls <= g.size() * g.size());
    }
    SUBCASE("cascade ending in a merge: [5, 45, y, 12, 20]") {
        // 45*12 vanishes, then 5*20 = 100 = 16 mod 21 merges to a square
        GroupWord g = canonicalize(GroupWord(ctx, {{1, 5}, {0, 45}, {1, 4}, {0, 12}, {1, 20}}));
        REQUIRE(g.size() == 5);
        auto res = extract_proof(g, oracle);
        REQUIRE(res.has_value());
        CHECK(eval_proof(res->proof) == g);
        CHECK(res->proof.steps.size() <= g.size());
    }
    SUBCASE("random sampled kernel elements extract and round trip") {
        Rng rng(59);
        for (int t = 0; t < 200; ++t) {
            Proof sampled = sample_kernel(rng.u64_below(7), ctx, rng);
            GroupWord g = sampled.claimed;
            auto res = extract_proof(g, oracle);
            REQUIRE(res.has_value());
            CHECK(eval_proof(res->proof) == g);
            CHECK(res->proof.steps.size() <= std::max<std::size_t>(g.size(), 0));
            CHECK(res->oracle_calls <= g.size() * g.size() + 1);
        }
    }
}

TEST_CASE("reduce_to_factor") {
    auto ctx = desk_ctx();
    SUBCASE("single witness") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.claimed = canonicalize(GroupWord(ctx, {{0, 8}}));
        CHECK(reduce_to_factor(pf, 0) == 2);
    }
    SUBCASE("witness product: 2 * 3 = 6 and 6^3 = 62") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.steps.push_back(insertion(1, 0, 3));
        pf.claimed = canonicalize(GroupWord(ctx, {{0, 62}}));
        CHECK(reduce_to_factor(pf, 0) == 6);
        CHECK(powmod(6, 3, 77) == 62);
    }
    SUBCASE("inverse witnesses cancel") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.steps.push_back(insertion(1, 0, invmod(2, 77)));
        pf.claimed = GroupWord::empty(ctx);
        CHECK(reduce_to_factor(pf, 0) == 1);
    }
    SUBCASE("mixed factors are rejected") {
        Proof pf;
        pf.steps.push_back(insertion(0, 0, 2));
        pf.steps.push_back(insertion(1, 1, 2));
        pf.claimed = canonicalize(GroupWord(ctx, {{0, 8}, {1, 4}}));
        CHECK_THROWS_AS(reduce_to_factor(pf, 0), InvalidArgument);
    }
}

TEST_CASE("proof serialization format") {
    auto ctx = desk_ctx();
    Proof pf;
    pf.steps.push_back(insertion(0, 0, 2));  // raw becomes [8]
    ElementaryTransformation t = insertion(0, 1, 2);
    t.split = LetterSplit{0, 2, 4};  // 8 = 2 * 4, P_2(2) between
    pf.steps.push_back(t);
    GroupWord raw = apply_transformation(GroupWord::empty(ctx), pf.steps[0]);
    raw = apply_transformation(raw, pf.steps[1]);
    pf.claimed = canonicalize(raw);
    std::string dump = serialize_proof(pf);
    CHECK(dump == "pos=0 ins j=1 a=2\npos=0 split=1:2:4 j=2 a=2\n");
}
