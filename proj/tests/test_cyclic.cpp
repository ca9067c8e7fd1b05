#include "doctest.h"

#include <numeric>
#include <set>

#include "solvhe/cyclic.hpp"
#include "solvhe/errors.hpp"

using namespace solvhe;

namespace {

// Desk fixtures from the 77/21 toy moduli.
CyclicKeyPair fixture77() { return make_cyclic_keypair(3, 3, 7, 11, 45, {1, 45, 23}); }
CyclicKeyPair fixture21() { return make_cyclic_keypair(3, 2, 3, 7, 20, {1, 20}); }

std::vector<unsigned long> units(unsigned long n) {
    std::vector<unsigned long> out;
    for (unsigned long g = 1; g < n; ++g)
        if (std::gcd(g, n) == 1) out.push_back(g);
    return out;
}

}  // namespace

TEST_CASE("fixture key pairs validate") {
    CHECK_NOTHROW(fixture77());
    CHECK_NOTHROW(fixture21());
    // wrong class ordering is rejected
    CHECK_THROWS_AS(make_cyclic_keypair(3, 3, 7, 11, 45, {1, 23, 45}), InvalidArgument);
    // rep outside the unit group is rejected
    CHECK_THROWS_AS(make_cyclic_keypair(3, 3, 7, 11, 45, {1, 45, 22}), InvalidArgument);
}

TEST_CASE("keygen_cyclic") {
    SUBCASE("desk m=3 always lands on n=77") {
        Rng rng(101);
        CyclicKeyPair kp = keygen_cyclic(3, 3, rng);
        CHECK(kp.pub.n == 77);
        CHECK(kp.pub.reps.size() == 3);
        CHECK(residue_test(kp.pub.reps[0], kp.params()));
    }
    SUBCASE("deterministic reps mode gives the power sequence") {
        Rng rng(102);
        CyclicKeygenOptions opts;
        opts.deterministic_reps = true;
        CyclicKeyPair kp = keygen_cyclic(3, 3, rng, opts);
        CHECK(kp.pub.reps[0] == 1);
        CHECK(kp.pub.reps[1] == kp.sec.s);
        CHECK(kp.pub.reps[2] == kp.sec.s * kp.sec.s % 77);
    }
    SUBCASE("quadratic variant") {
        Rng rng(103);
        CyclicKeyPair kp = keygen_cyclic(2, 4, rng);
        CHECK(kp.pub.reps.size() == 2);
        CHECK(jacobi(kp.sec.s, kp.pub.n) == 1);
        CHECK_FALSE(residue_test(kp.sec.s, kp.params()));
        CHECK(residue_test(kp.pub.reps[0], kp.params()));
    }
    SUBCASE("a larger prime order") {
        Rng rng(104);
        CyclicKeyPair kp = keygen_cyclic(5, 16, rng);
        CHECK(kp.pub.reps.size() == 5);
        for (unsigned i = 0; i < 5; ++i) CHECK(coset_index(kp, kp.pub.reps[i]) == i);
    }
}

TEST_CASE("encrypt / decrypt round trips") {
    Rng rng(7);
    for (const CyclicKeyPair& kp : {fixture77(), fixture21()}) {
        for (unsigned h = 0; h < kp.pub.m; ++h) {
            for (int trial = 0; trial < 64; ++trial) {
                Int c = encrypt_cyclic(kp.pub, h, rng);
                CHECK(decrypt_cyclic(kp, c) == h);
                CHECK(coset_index(kp, c) == h);
            }
        }
    }
    CHECK_THROWS_AS(encrypt_cyclic(fixture77().pub, 3, rng), InvalidArgument);
}

TEST_CASE("spec'd example values") {
    CyclicKeyPair kp77 = fixture77();
    CHECK(Int(8) * 45 % 77 == 52);  // the a=2, h=1 ciphertext
    CHECK(decrypt_cyclic(kp77, 52) == 1);
    CHECK(decrypt_cyclic(kp77, 1) == 0);
    CHECK(multiply_ciphertexts(kp77.pub, 52, 52) == 9);
    CHECK(decrypt_cyclic(kp77, 9) == 2);

    CyclicKeyPair kp21 = fixture21();
    CHECK(Int(4) * 20 % 21 == 17);  // the a=2, h=1 ciphertext
    CHECK(decrypt_cyclic(kp21, 17) == 1);

    CHECK(coset_index(kp77, 45) == 1);
    CHECK(coset_index(kp77, 8) == 0);
    CHECK(coset_index(kp77, 1) == 0);
}

TEST_CASE("coset_index is additive on every unit") {
    CyclicKeyPair kp21 = fixture21();
    auto u21 = units(21);
    for (unsigned long a : u21)
        for (unsigned long b : u21) {
            unsigned lhs = coset_index(kp21, Int(a * b % 21));
            unsigned rhs = (coset_index(kp21, Int(a)) + coset_index(kp21, Int(b))) % 2;
            CHECK(lhs == rhs);
        }
    CyclicKeyPair kp77 = fixture77();
    auto u77 = units(77);
    for (unsigned long a : u77)
        for (unsigned long b : u77) {
            unsigned lhs = coset_index(kp77, Int(a * b % 77));
            unsigned rhs = (coset_index(kp77, Int(a)) + coset_index(kp77, Int(b))) % 3;
            CHECK(lhs == rhs);
        }
}

TEST_CASE("ciphertexts of h form exactly the coset reps[h] * powers") {
    CyclicKeyPair kp = fixture77();
    for (unsigned h = 0; h < 3; ++h) {
        std::set<unsigned long> coset;
        std::set<unsigned long> image;
        for (unsigned long a : units(77)) {
            image.insert((a * a % 77) * a % 77 * kp.pub.reps[h].get_ui() % 77);
            if (coset_index(kp, Int(a)) == 0) coset.insert(a * kp.pub.reps[h].get_ui() % 77);
        }
        CHECK(image == coset);
        CHECK(image.size() == 20);
    }
}

TEST_CASE("kernel of the index map is the power subgroup") {
    CyclicKeyPair kp = fixture77();
    for (unsigned long g : units(77)) {
        bool in_kernel = coset_index(kp, Int(g)) == 0;
        CHECK(in_kernel == residue_test(Int(g), kp.params()));
    }
}

TEST_CASE("decryption failure paths") {
    CyclicKeyPair kp21 = fixture21();
    // 2 has Jacobi symbol -1 mod 21: it sits outside both rep cosets
    CHECK(jacobi(2, 21) == -1);
    CHECK_THROWS_AS(decrypt_cyclic(kp21, 2), DecryptError);
    CHECK_THROWS_AS(decrypt_cyclic(kp21, 7), InvalidArgument);  // non-unit
}

TEST_CASE("key serialization is bit exact") {
    CyclicKeyPair kp = fixture77();
    std::string pub = serialize_cyclic(kp, false);
    CHECK(pub == "CYCKEY v1\nm=3\nn=4d\nreps=1,2d,17\n");
    std::string sec = serialize_cyclic(kp, true);
    CHECK(sec == "CYCKEY v1\nm=3\nn=4d\nreps=1,2d,17\np=7\nq=b\ns=2d\n");

    ParsedCyclic round = parse_cyclic(sec);
    CHECK(round.pub.n == 77);
    CHECK(round.pub.m == 3);
    CHECK(round.pub.reps == std::vector<Int>{1, 45, 23});
    REQUIRE(round.sec.has_value());
    CHECK(round.sec->p == 7);
    CHECK(round.sec->q == 11);
    CHECK(round.sec->s == 45);
    CHECK_NOTHROW(round.require_secret());

    ParsedCyclic pub_only = parse_cyclic(pub);
    CHECK_FALSE(pub_only.sec.has_value());
    CHECK_THROWS_AS(pub_only.require_secret(), InvalidArgument);

    CHECK_THROWS_AS(parse_cyclic("CYCKEY v2\n"), ParseError);
    CHECK_THROWS_AS(parse_cyclic("CYCKEY v1\nm=3\nn=4d\nreps=1,2d\n"), ParseError);
}
