#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "solvhe/errors.hpp"
#include "solvhe/numtheory.hpp"

using namespace solvhe;

namespace {

// Independent oracles: trial division, factorization-based Jacobi, and
// exhaustive power enumeration. Slow and simple on purpose.
bool naive_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int naive_legendre(long a, unsigned long p) {
    long r = a % static_cast<long>(p);
    if (r < 0) r += p;
    if (r == 0) return 0;
    // Euler criterion by repeated multiplication
    unsigned long acc = 1;
    for (unsigned long i = 0; i < (p - 1) / 2; ++i) acc = acc * static_cast<unsigned long>(r) % p;
    return acc == 1 ? 1 : -1;
}

int naive_jacobi(long a, unsigned long n) {
    int result = 1;
    for (unsigned long p = 2; n > 1; ++p) {
        while (n % p == 0) {
            n /= p;
            result *= naive_legendre(a, p);
        }
    }
    return result;
}

std::set<unsigned long> naive_mth_powers(unsigned long n, unsigned m) {
    std::set<unsigned long> powers;
    for (unsigned long g = 1; g < n; ++g) {
        if (std::gcd(g, n) != 1) continue;
        unsigned long acc = 1;
        for (unsigned i = 0; i < m; ++i) acc = acc * g % n;
        powers.insert(acc);
    }
    return powers;
}

ModulusParams params77() { return ModulusParams{3, 3, 7, 11, 77}; }
ModulusParams params21() { return ModulusParams{3, 2, 3, 7, 21}; }

}  // namespace

TEST_CASE("jacobi matches the factorization oracle") {
    CHECK(jacobi(20, 21) == 1);
    CHECK(jacobi(1, 21) == 1);
    CHECK(jacobi(7, 21) == 0);
    for (unsigned long n = 3; n <= 61; n += 2) {
        for (long a = -5; a < static_cast<long>(2 * n); ++a)
            CHECK(jacobi(Int(a), Int(n)) == naive_jacobi(a, n));
    }
    CHECK_THROWS_AS(jacobi(3, 10), InvalidArgument);
    CHECK_THROWS_AS(jacobi(3, 1), InvalidArgument);
}

TEST_CASE("probable prime testing") {
    Rng rng(1);
    for (unsigned long n = 0; n < 300; ++n)
        CHECK(is_probable_prime(Int(n), rng) == naive_prime(n));
    CHECK(is_probable_prime(Int("561"), rng) == false);        // Carmichael
    CHECK(is_probable_prime(Int("1105"), rng) == false);       // Carmichael
    CHECK(is_probable_prime(Int("2147483647"), rng) == true);  // 2^31 - 1
    CHECK(is_probable_prime((Int(1) << 89) - 1, rng) == true);
    CHECK(is_probable_prime((Int(1) << 67) - 1, rng) == false);
}

TEST_CASE("crt_combine") {
    CHECK(crt_combine(3, 1, 7, 11) == 45);
    CHECK(crt_combine(0, 0, 7, 11) == 0);
    CHECK(crt_combine(1, 1, 7, 11) == 1);
    // two-sided inverse of componentwise reduction mod 77
    for (unsigned long x = 0; x < 77; ++x) {
        CHECK(crt_combine(Int(x % 7), Int(x % 11), 7, 11) == x);
    }
    CHECK_THROWS_AS(crt_combine(1, 1, 6, 9), InvalidArgument);
}

TEST_CASE("find_modulus at desk scale") {
    Rng rng(7);
    SUBCASE("m=3, N=3 has the single outcome 77") {
        ModulusParams p = find_modulus(3, 3, rng);
        CHECK(p.p == 7);
        CHECK(p.q == 11);
        CHECK(p.n == 77);
        check_modulus(p, rng);
    }
    SUBCASE("m=2, N=3 satisfies the invariants") {
        ModulusParams p = find_modulus(3, 2, rng);
        CHECK(p.p < p.q);
        CHECK(p.p >= 3);
        check_modulus(p, rng);
    }
    SUBCASE("impossible congruence exhausts the budget") {
        CHECK_THROWS_AS(find_modulus(3, 23, rng), SearchExhausted);
    }
    SUBCASE("m must be prime") {
        CHECK_THROWS_AS(find_modulus(8, 4, rng), InvalidArgument);
    }
}

TEST_CASE("find_modulus at full scale") {
    Rng rng(11);
    ModulusParams p = find_modulus(64, 3, rng);
    CHECK(bit_length(p.p) == 64);
    CHECK(bit_length(p.q) == 64);
    CHECK((p.p - 1) % 3 == 0);
    CHECK((p.q - 1) % 3 != 0);
    check_modulus(p, rng);
}

TEST_CASE("residue_test against enumeration") {
    auto cubes = naive_mth_powers(77, 3);
    CHECK(cubes.size() == 20);  // index exactly m in the 60-element unit group
    for (unsigned long g = 1; g < 77; ++g) {
        if (std::gcd(g, 77ul) != 1) continue;
        CHECK(residue_test(Int(g), params77()) == (cubes.count(g) > 0));
    }
    auto squares = naive_mth_powers(21, 2);
    CHECK(squares.size() == 3);
    for (unsigned long g = 1; g < 21; ++g) {
        if (std::gcd(g, 21ul) != 1) continue;
        CHECK(residue_test(Int(g), params21()) == (squares.count(g) > 0));
    }
    CHECK(residue_test(8, params77()));
    CHECK_FALSE(residue_test(45, params77()));
    CHECK(residue_test(1, params77()));
    CHECK_THROWS_AS(residue_test(7, params77()), InvalidArgument);
}

TEST_CASE("mth_root_mod_prime") {
    Rng rng(3);
    SUBCASE("unique root through the exponent inverse") {
        auto r = mth_root_mod_prime(8, 11, 3, rng);
        REQUIRE(r.has_value());
        CHECK(*r == 2);
    }
    SUBCASE("root of unity") {
        auto r = mth_root_mod_prime(1, 7, 3, rng);
        REQUIRE(r.has_value());
        CHECK((*r == 1 || *r == 2 || *r == 4));
    }
    SUBCASE("non-residue") {
        CHECK_FALSE(mth_root_mod_prime(3, 7, 3, rng).has_value());
    }
    SUBCASE("agrees with enumeration over small primes") {
        for (unsigned long p : {7ul, 11ul, 13ul, 31ul, 43ul}) {
            for (unsigned m : {2u, 3u, 5u, 7u}) {
                auto powers = naive_mth_powers(p, m);
                for (unsigned long g = 1; g < p; ++g) {
                    auto root = mth_root_mod_prime(Int(g), Int(p), m, rng);
                    if (powers.count(g)) {
                        REQUIRE(root.has_value());
                        CHECK(powmod(*root, Int(m), Int(p)) == g);
                    } else {
                        CHECK_FALSE(root.has_value());
                    }
                }
            }
        }
    }
}

TEST_CASE("mth_root_mod_n implements the split-root-recombine procedure") {
    Rng rng(5);
    auto r = mth_root_mod_n(8, params77(), rng);
    REQUIRE(r.has_value());
    CHECK((*r == 2 || *r == 46 || *r == 57));
    CHECK(powmod(*r, 3, 77) == 8);
    CHECK(mth_root_mod_n(1, params77(), rng).has_value());
    CHECK_FALSE(mth_root_mod_n(45, params77(), rng).has_value());
    CHECK_THROWS_AS(mth_root_mod_n(11, params77(), rng), InvalidArgument);

    // a root exists exactly when residue_test passes, and roots are roots
    auto cubes = naive_mth_powers(77, 3);
    for (unsigned long g = 1; g < 77; ++g) {
        if (std::gcd(g, 77ul) != 1) continue;
        auto root = mth_root_mod_n(Int(g), params77(), rng);
        CHECK(root.has_value() == (cubes.count(g) > 0));
        if (root) CHECK(powmod(*root, 3, 77) == g);
    }
    auto squares = naive_mth_powers(21, 2);
    for (unsigned long g = 1; g < 21; ++g) {
        if (std::gcd(g, 21ul) != 1) continue;
        auto root = mth_root_mod_n(Int(g), params21(), rng);
        CHECK(root.has_value() == (squares.count(g) > 0));
        if (root) CHECK(powmod(*root, 2, 21) == g);
    }
}

TEST_CASE("factor_from_root_oracle") {
    SUBCASE("factors 77 with the honest oracle") {
        Rng rng(17);
        Rng oracle_rng(18);
        RootOracle oracle = [&](const Int& g) { return mth_root_mod_n(g, params77(), oracle_rng); };
        FactorResult fr = factor_from_root_oracle(77, 3, oracle, rng);
        CHECK(fr.p == 7);
        CHECK(fr.q == 11);
        CHECK(fr.iterations >= 1);
    }
    SUBCASE("factors 21 in the quadratic case") {
        Rng rng(19);
        Rng oracle_rng(20);
        RootOracle oracle = [&](const Int& g) { return mth_root_mod_n(g, params21(), oracle_rng); };
        FactorResult fr = factor_from_root_oracle(21, 2, oracle, rng);
        CHECK(fr.p == 3);
        CHECK(fr.q == 7);
    }
    SUBCASE("mean iteration count is geometric with success >= (m-1)/m") {
        Rng rng(23);
        Rng oracle_rng(24);
        RootOracle oracle = [&](const Int& g) { return mth_root_mod_n(g, params77(), oracle_rng); };
        std::uint64_t total = 0;
        const int trials = 2000;
        for (int t = 0; t < trials; ++t)
            total += factor_from_root_oracle(77, 3, oracle, rng).iterations;
        double mean = static_cast<double>(total) / trials;
        CHECK(mean <= 1.6);  // expected 1.5
        CHECK(mean >= 1.3);
    }
    SUBCASE("a lying oracle is reported") {
        Rng rng(29);
        RootOracle bad = [](const Int& g) { return std::optional<Int>(g + 1); };
        CHECK_THROWS_AS(factor_from_root_oracle(77, 3, bad, rng), Error);
    }
}

TEST_CASE("hex wire format") {
    CHECK(to_hex(Int(0)) == "0");
    CHECK(to_hex(Int(52)) == "34");
    CHECK(from_hex("34") == 52);
    CHECK(from_hex("abcdef0123456789") == Int("0xabcdef0123456789"));
    CHECK_THROWS_AS(from_hex(""), ParseError);
    CHECK_THROWS_AS(from_hex("XYZ"), ParseError);
    CHECK_THROWS_AS(from_hex("AB"), ParseError);  // uppercase is not canonical
}
