#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solvhe/numtheory.hpp"

namespace solvhe {

/// Public half of one cyclic-factor cryptosystem: plaintexts are Z_m^+,
/// ciphertexts units of Z_n^*, reps[i] encodes plaintext i.
struct CyclicPublic {
    Int n;
    unsigned m = 0;
    std::vector<Int> reps;  // size m, reps[0] in the m-th power subgroup
    unsigned label = 1;     // factor identifier inside a composite key
};

struct CyclicSecret {
    Int p, q;
    Int s;  // coset seed: reps[i] lies in the class of s^i
};

struct CyclicKeyPair {
    unsigned N = 0;
    CyclicPublic pub;
    CyclicSecret sec;

    ModulusParams params() const;
};

struct CyclicKeygenOptions {
    bool deterministic_reps = false;  // t_i = 1, for reproducible fixtures
    FindModulusOptions modulus;
};

CyclicKeyPair keygen_cyclic(unsigned m, unsigned N, Rng& rng, const CyclicKeygenOptions& opts = {});

/// Rebuilds a key pair from known parts (fixtures, file parsing) and
/// validates the representative-class invariants.
CyclicKeyPair make_cyclic_keypair(unsigned N, unsigned m, const Int& p, const Int& q, const Int& s,
                                  std::vector<Int> reps, unsigned label = 1);

/// Probabilistic encryption: a^m * reps[h] for a fresh random unit a.
Int encrypt_cyclic(const CyclicPublic& pk, unsigned h, Rng& rng);

/// Loops over the m coset representatives; the residue test identifies
/// the class, no root extraction involved.
unsigned decrypt_cyclic(const CyclicKeyPair& kp, const Int& c);

/// The group operation of Z_n^*, which carries the homomorphic property.
Int multiply_ciphertexts(const CyclicPublic& pk, const Int& c1, const Int& c2);

/// The secret epimorphism f: Z_n^* -> Z_m^+ itself, computed through the
/// p-component character. Defined on every unit, and additive there;
/// agrees with decrypt_cyclic on well-formed ciphertexts.
unsigned coset_index(const CyclicKeyPair& kp, const Int& g);

struct ParsedCyclic {
    unsigned N = 0;
    CyclicPublic pub;
    std::optional<CyclicSecret> sec;

    CyclicKeyPair require_secret() const;
};

/// Line-oriented key block ("CYCKEY v1"). Secret half included only
/// when with_secret is set. Bit-exact wire format.
std::string serialize_cyclic(const CyclicKeyPair& kp, bool with_secret);

/// Parses a CYCKEY block; secret lines may be absent.
ParsedCyclic parse_cyclic(const std::string& text);

}  // namespace solvhe
