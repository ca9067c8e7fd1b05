#include "solvhe/cyclic.hpp"

#include <sstream>

#include "solvhe/errors.hpp"

namespace solvhe {

ModulusParams CyclicKeyPair::params() const {
    return ModulusParams{N, pub.m, sec.p, sec.q, pub.n};
}

namespace {

// Order-m element of Z_p^* generated by the seed's p-component; the
// coset index of g is the discrete log of g_p^((p-1)/m) in <omega>.
unsigned index_via_character(const Int& g, const ModulusParams& params, const Int& s) {
    Int exp = (params.p - 1) / params.m;
    Int omega = powmod(s % params.p, exp, params.p);
    Int v = powmod(g % params.p, exp, params.p);
    Int acc = 1;
    for (unsigned i = 0; i < params.m; ++i) {
        if (acc == v) return i;
        acc = acc * omega % params.p;
    }
    throw Error("coset_index: character value outside <omega>; corrupted key");
}

void validate_reps(const CyclicKeyPair& kp) {
    const auto& pub = kp.pub;
    if (pub.reps.size() != pub.m) throw InvalidArgument("cyclic key: |reps| != m");
    ModulusParams params = kp.params();
    for (unsigned i = 0; i < pub.m; ++i) {
        if (!is_unit(pub.reps[i], pub.n)) throw InvalidArgument("cyclic key: rep is not a unit");
        if (index_via_character(pub.reps[i], params, kp.sec.s) != i)
            throw InvalidArgument("cyclic key: reps[" + std::to_string(i) +
                                  "] is in the wrong residue class");
    }
}

}  // namespace

CyclicKeyPair keygen_cyclic(unsigned m, unsigned N, Rng& rng, const CyclicKeygenOptions& opts) {
    ModulusParams params = find_modulus(N, m, rng, opts.modulus);
    CyclicKeyPair kp;
    kp.N = N;
    kp.pub.n = params.n;
    kp.pub.m = m;
    kp.sec.p = params.p;
    kp.sec.q = params.q;

    Int mm(m);
    if (m == 2) {
        // Quadratic-residue variant: the non-trivial representative is a
        // non-square with Jacobi symbol 1.
        Int g0;
        do {
            g0 = rng.unit_mod(params.n);
        } while (jacobi(g0, params.n) != 1 || residue_test(g0, params));
        kp.sec.s = g0;
        Int t0 = opts.deterministic_reps ? Int(1) : rng.unit_mod(params.n);
        Int t1 = opts.deterministic_reps ? Int(1) : rng.unit_mod(params.n);
        kp.pub.reps = {t0 * t0 % params.n, g0 * (t1 * t1) % params.n};
    } else {
        Int sp;
        do {
            sp = rng.unit_mod(params.p);
        } while (powmod(sp, (params.p - 1) / mm, params.p) == 1);
        Int sq = rng.unit_mod(params.q);
        Int s = crt_combine(sp, sq, params.p, params.q);
        kp.sec.s = s;
        kp.pub.reps.reserve(m);
        Int si = 1;
        for (unsigned i = 0; i < m; ++i) {
            Int ti = opts.deterministic_reps ? Int(1) : rng.unit_mod(params.n);
            kp.pub.reps.push_back(si * powmod(ti, mm, params.n) % params.n);
            si = si * s % params.n;
        }
    }
    validate_reps(kp);
    return kp;
}

CyclicKeyPair make_cyclic_keypair(unsigned N, unsigned m, const Int& p, const Int& q, const Int& s,
                                  std::vector<Int> reps, unsigned label) {
    CyclicKeyPair kp;
    kp.N = N;
    kp.pub.n = p * q;
    kp.pub.m = m;
    kp.pub.reps = std::move(reps);
    kp.pub.label = label;
    kp.sec = {p, q, s};
    Rng check(0);
    check_modulus(kp.params(), check);
    validate_reps(kp);
    return kp;
}

Int encrypt_cyclic(const CyclicPublic& pk, unsigned h, Rng& rng) {
    if (h >= pk.m) throw InvalidArgument("encrypt_cyclic: plaintext out of range");
    Int a = rng.unit_mod(pk.n);
    return powmod(a, Int(pk.m), pk.n) * pk.reps[h] % pk.n;
}

unsigned decrypt_cyclic(const CyclicKeyPair& kp, const Int& c) {
    if (!is_unit(c, kp.pub.n)) throw InvalidArgument("decrypt_cyclic: ciphertext is not a unit");
    ModulusParams params = kp.params();
    for (unsigned i = 0; i < kp.pub.m; ++i) {
        if (residue_test(c * invmod(kp.pub.reps[i], kp.pub.n) % kp.pub.n, params)) return i;
    }
    throw DecryptError("decrypt_cyclic: no representative class matched");
}

Int multiply_ciphertexts(const CyclicPublic& pk, const Int& c1, const Int& c2) {
    return c1 * c2 % pk.n;
}

unsigned coset_index(const CyclicKeyPair& kp, const Int& g) {
    if (!is_unit(g, kp.pub.n)) throw InvalidArgument("coset_index: g is not a unit");
    return index_via_character(g, kp.params(), kp.sec.s);
}

std::string serialize_cyclic(const CyclicKeyPair& kp, bool with_secret) {
    std::ostringstream out;
    out << "CYCKEY v1\n";
    out << "m=" << kp.pub.m << "\n";
    out << "n=" << to_hex(kp.pub.n) << "\n";
    out << "reps=";
    for (std::size_t i = 0; i < kp.pub.reps.size(); ++i) {
        if (i) out << ",";
        out << to_hex(kp.pub.reps[i]);
    }
    out << "\n";
    if (with_secret) {
        out << "p=" << to_hex(kp.sec.p) << "\n";
        out << "q=" << to_hex(kp.sec.q) << "\n";
        out << "s=" << to_hex(kp.sec.s) << "\n";
    }
    return out.str();
}

namespace {

std::string expect_prefix(const std::string& line, const std::string& prefix) {
    if (line.rfind(prefix, 0) != 0)
        throw ParseError("cyclic key: expected '" + prefix + "' line, got '" + line + "'");
    return line.substr(prefix.size());
}

}  // namespace

ParsedCyclic parse_cyclic(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&]() -> bool { return static_cast<bool>(std::getline(in, line)); };
    if (!next_line() || line != "CYCKEY v1") throw ParseError("cyclic key: missing CYCKEY v1 header");

    ParsedCyclic out;
    if (!next_line()) throw ParseError("cyclic key: truncated");
    out.pub.m = static_cast<unsigned>(std::stoul(expect_prefix(line, "m=")));
    if (!next_line()) throw ParseError("cyclic key: truncated");
    out.pub.n = from_hex(expect_prefix(line, "n="));

    if (!next_line()) throw ParseError("cyclic key: truncated");
    std::string reps = expect_prefix(line, "reps=");
    std::size_t pos = 0;
    while (pos <= reps.size()) {
        std::size_t comma = reps.find(',', pos);
        std::string tok = reps.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.pub.reps.push_back(from_hex(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.pub.reps.size() != out.pub.m) throw ParseError("cyclic key: |reps| != m");

    if (next_line() && !line.empty()) {
        CyclicSecret sec;
        sec.p = from_hex(expect_prefix(line, "p="));
        if (!next_line()) throw ParseError("cyclic key: truncated secret");
        sec.q = from_hex(expect_prefix(line, "q="));
        if (!next_line()) throw ParseError("cyclic key: truncated secret");
        sec.s = from_hex(expect_prefix(line, "s="));
        out.sec = sec;
    }
    out.N = static_cast<unsigned>(bit_length(out.pub.n) / 2);
    return out;
}

CyclicKeyPair ParsedCyclic::require_secret() const {
    if (!sec) throw InvalidArgument("cyclic key: secret half required but absent");
    CyclicKeyPair kp;
    kp.N = N;
    kp.pub = pub;
    kp.sec = *sec;
    return kp;
}

}  // namespace solvhe
