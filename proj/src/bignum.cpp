#include "solvhe/bignum.hpp"

#include <cctype>
#include <random>

#include "solvhe/errors.hpp"

namespace solvhe {

std::string to_hex(const Int& x) {
    if (sgn(x) < 0) throw InvalidArgument("to_hex: negative value");
    char* raw = mpz_get_str(nullptr, 16, x.get_mpz_t());
    std::string out(raw);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(raw, out.size() + 1);
    return out;
}

Int from_hex(const std::string& s) {
    if (s.empty()) throw ParseError("from_hex: empty string");
    for (char c : s) {
        if (!std::isxdigit(static_cast<unsigned char>(c)) || std::isupper(static_cast<unsigned char>(c)))
            throw ParseError("from_hex: bad digit in '" + s + "'");
    }
    Int x;
    if (mpz_set_str(x.get_mpz_t(), s.c_str(), 16) != 0)
        throw ParseError("from_hex: cannot parse '" + s + "'");
    return x;
}

std::size_t bit_length(const Int& x) {
    if (x == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

Rng::Rng(std::uint64_t seed) : state_(gmp_randinit_mt) {
    Int s;
    mpz_import(s.get_mpz_t(), 1, 1, sizeof(seed), 0, 0, &seed);
    state_.seed(s);
}

Rng Rng::from_entropy() {
    std::random_device rd;
    std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return Rng(seed);
}

Int Rng::below(const Int& bound) {
    if (bound <= 0) throw InvalidArgument("Rng::below: bound must be positive");
    return state_.get_z_range(bound);
}

Int Rng::exact_bits(unsigned bits) {
    if (bits == 0) throw InvalidArgument("Rng::exact_bits: zero width");
    Int x = state_.get_z_bits(bits);
    mpz_setbit(x.get_mpz_t(), bits - 1);
    return x;
}

std::uint64_t Rng::u64_below(std::uint64_t bound) {
    return below(Int(static_cast<unsigned long>(bound))).get_ui();
}

Int Rng::unit_mod(const Int& n) {
    if (n < 2) throw InvalidArgument("Rng::unit_mod: modulus too small");
    while (true) {
        Int a = below(n);
        if (a == 0) continue;
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
        if (g == 1) return a;
    }
}

}  // namespace solvhe
