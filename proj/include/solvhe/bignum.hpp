#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace solvhe {

using Int = mpz_class;

/// Lowercase big-endian hex, no leading zeros ("0" for zero).
std::string to_hex(const Int& x);

/// Parses the wire hex format; throws ParseError on junk.
Int from_hex(const std::string& s);

std::size_t bit_length(const Int& x);

/// Deterministic randomness source. Every randomized operation in the
/// library takes one of these explicitly; a fixed seed reproduces the
/// exact byte stream of draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Seeded from OS entropy.
    static Rng from_entropy();

    /// Uniform in [0, bound).
    Int below(const Int& bound);

    /// Uniform with exactly `bits` significant bits (top bit set).
    Int exact_bits(unsigned bits);

    /// Uniform in [0, bound) for small bounds.
    std::uint64_t u64_below(std::uint64_t bound);

    /// Uniform unit of Z_n^* (rejection on gcd).
    Int unit_mod(const Int& n);

private:
    gmp_randclass state_;
};

}  // namespace solvhe
