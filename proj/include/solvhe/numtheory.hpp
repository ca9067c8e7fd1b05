#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "solvhe/bignum.hpp"

namespace solvhe {

Int powmod(const Int& base, const Int& exp, const Int& mod);
Int invmod(const Int& a, const Int& n);
bool is_unit(const Int& a, const Int& n);

/// Miller-Rabin with random bases; error probability <= 4^-rounds.
/// 40 rounds give the 2^-80 bound used throughout.
bool is_probable_prime(const Int& n, Rng& rng, unsigned rounds = 40);

/// Jacobi symbol (a/n) for odd n >= 3, via binary reciprocity.
int jacobi(const Int& a, const Int& n);

/// Parameters of one factor modulus n = p*q.
///
/// For odd m: m | p-1 and gcd(m, q-1) = 1, so the m-th powers have index
/// exactly m in Z_n^* and all of the index sits in the p-component.
/// For m = 2 both primes are merely odd and distinct (the quadratic
/// residue variant); the square classes are tracked through the
/// p-component character.
struct ModulusParams {
    unsigned N = 0;  // requested prime bit length
    unsigned m = 0;  // plaintext order, prime
    Int p, q, n;

    bool desk_scale() const { return N < 16; }
};

struct FindModulusOptions {
    // Total candidate draws before giving up; 0 means 64*N.
    std::uint64_t budget = 0;
};

/// Rejection sampling for ModulusParams. Congruence constraints are
/// checked before any primality testing. At desk scale (N < 16) the
/// bit-length constraint relaxes to [2, N+1] bits with p, q >= 3 so that
/// toy moduli exist.
ModulusParams find_modulus(unsigned N, unsigned m, Rng& rng, const FindModulusOptions& opts = {});

/// Validates all ModulusParams invariants (primality at the 2^-80 bound).
void check_modulus(const ModulusParams& params, Rng& rng);

/// CRT: the unique x mod pq with x = sp (mod p), x = sq (mod q).
Int crt_combine(const Int& sp, const Int& sq, const Int& p, const Int& q);

/// True iff g is an m-th power in Z_n^*. Needs the factorization.
bool residue_test(const Int& g, const ModulusParams& params);

struct RootOptions {
    // Attempts at finding a non-residue for the Tonelli-Shanks style
    // search; the paper leaves the failure budget open, so it is a knob.
    unsigned nonresidue_attempts = 128;
};

/// Some m-th root of g mod prime p, or nullopt when g is not an m-th
/// power. gcd(m, p-1) = 1 uses the exponent inverse; m | p-1 runs the
/// Adleman-Manders-Miller reduction (with exhaustive scan as a last
/// resort below 2^16).
std::optional<Int> mth_root_mod_prime(const Int& g, const Int& p, unsigned m, Rng& rng,
                                      const RootOptions& opts = {});

/// Lemma-style root extraction mod n = pq: split by CRT, take prime
/// field roots, recombine.
std::optional<Int> mth_root_mod_n(const Int& g, const ModulusParams& params, Rng& rng,
                                  const RootOptions& opts = {});

/// An oracle mapping an m-th power mod n to one of its m-th roots.
using RootOracle = std::function<std::optional<Int>(const Int&)>;

struct FactorResult {
    Int p, q;                 // p < q
    std::uint64_t iterations = 0;
};

struct FactorOptions {
    std::uint64_t budget = 0;  // 0 means 64 * bits(n)
};

/// Reduction from factoring n to m-th root extraction: draw x, ask the
/// oracle for a root y of x^m, and split n via gcd(x - y, n).
FactorResult factor_from_root_oracle(const Int& n, unsigned m, const RootOracle& oracle, Rng& rng,
                                     const FactorOptions& opts = {});

}  // namespace solvhe
