#include "solvhe/numtheory.hpp"

#include <array>

#include "solvhe/errors.hpp"

namespace solvhe {

namespace {

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,
    67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

bool miller_rabin_round(const Int& n, const Int& base, const Int& d, unsigned long r) {
    Int x = powmod(base, d, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < r; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

Int powmod(const Int& base, const Int& exp, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

Int invmod(const Int& a, const Int& n) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0)
        throw InvalidArgument("invmod: " + to_hex(a) + " is not a unit mod " + to_hex(n));
    return r;
}

bool is_unit(const Int& a, const Int& n) {
    if (a <= 0 || a >= n) {
        Int r = a % n;
        if (r < 0) r += n;
        return is_unit(r, n);
    }
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return g == 1;
}

bool is_probable_prime(const Int& n, Rng& rng, unsigned rounds) {
    if (n < 2) return false;
    for (unsigned p : kSmallPrimes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // n > 251 and odd here.
    Int d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    for (unsigned i = 0; i < rounds; ++i) {
        Int base = rng.below(n - 3) + 2;  // [2, n-2]
        if (!miller_rabin_round(n, base, d, r)) return false;
    }
    return true;
}

int jacobi(const Int& a, const Int& n) {
    if (n < 3 || mpz_even_p(n.get_mpz_t()))
        throw InvalidArgument("jacobi: modulus must be odd and >= 3");
    Int x = a % n;
    if (x < 0) x += n;
    Int y = n;
    int sign = 1;
    while (x != 0) {
        unsigned long twos = mpz_scan1(x.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), twos);
        if (twos % 2 == 1) {
            unsigned long y8 = mpz_fdiv_ui(y.get_mpz_t(), 8);
            if (y8 == 3 || y8 == 5) sign = -sign;
        }
        // x, y both odd: quadratic reciprocity flip.
        if (mpz_fdiv_ui(x.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(y.get_mpz_t(), 4) == 3) sign = -sign;
        std::swap(x, y);
        x %= y;
    }
    return (y == 1) ? sign : 0;
}

Int crt_combine(const Int& sp, const Int& sq, const Int& p, const Int& q) {
    Int g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw InvalidArgument("crt_combine: moduli not coprime");
    Int n = p * q;
    Int ap = sp % p;
    if (ap < 0) ap += p;
    Int aq = sq % q;
    if (aq < 0) aq += q;
    // x = ap + p * ((aq - ap) * p^-1 mod q)
    Int t = ((aq - ap) % q) * invmod(p % q, q) % q;
    if (t < 0) t += q;
    Int x = ap + p * t;
    return x % n;
}

namespace {

struct BitRange {
    unsigned lo, hi;  // inclusive bit lengths
};

BitRange sample_range(unsigned N) {
    if (N < 16) return {2, N + 1};  // desk scale: let toy moduli like 77 exist
    return {N, N};
}

Int draw_candidate(const BitRange& range, Rng& rng) {
    unsigned bits = range.lo == range.hi
                        ? range.lo
                        : range.lo + static_cast<unsigned>(rng.u64_below(range.hi - range.lo + 1));
    Int c = rng.exact_bits(bits);
    mpz_setbit(c.get_mpz_t(), 0);  // odd
    return c;
}

}  // namespace

ModulusParams find_modulus(unsigned N, unsigned m, Rng& rng, const FindModulusOptions& opts) {
    if (N < 3) throw InvalidArgument("find_modulus: N must be >= 3");
    {
        Rng check(0);
        if (m < 2 || !is_probable_prime(Int(m), check))
            throw InvalidArgument("find_modulus: m must be a prime >= 2");
    }
    const std::uint64_t budget = opts.budget ? opts.budget : 64ull * N;
    const BitRange range = sample_range(N);

    std::uint64_t draws = 0;
    auto next = [&](bool want_one_mod_m) -> std::optional<Int> {
        while (draws < budget) {
            ++draws;
            Int c = draw_candidate(range, rng);
            if (c < 3) continue;
            if (m != 2) {
                unsigned long rem = mpz_fdiv_ui(c.get_mpz_t(), m);
                if (want_one_mod_m != (rem == 1)) continue;
            }
            if (!is_probable_prime(c, rng)) continue;
            return c;
        }
        return std::nullopt;
    };

    while (draws < budget) {
        auto p = next(true);
        if (!p) break;
        auto q = next(false);
        if (!q) break;
        if (*p == *q) continue;
        if (m == 2 && *p > *q) std::swap(*p, *q);  // same constraint set, safe to order
        if (*p >= *q) continue;                    // odd m: constraints differ, redraw
        ModulusParams params{N, m, *p, *q, (*p) * (*q)};
        return params;
    }
    throw SearchExhausted("find_modulus: no valid (p, q) within " + std::to_string(budget) +
                          " draws; N may be too small for m");
}

void check_modulus(const ModulusParams& params, Rng& rng) {
    const auto& [N, m, p, q, n] = params;
    if (p >= q) throw InvalidArgument("check_modulus: requires p < q");
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || mpz_even_p(q.get_mpz_t()))
        throw InvalidArgument("check_modulus: p, q must be odd and >= 3");
    if (n != p * q) throw InvalidArgument("check_modulus: n != p*q");
    if (!is_probable_prime(p, rng) || !is_probable_prime(q, rng))
        throw InvalidArgument("check_modulus: p or q fails primality");
    if (m != 2) {
        if ((p - 1) % m != 0) throw InvalidArgument("check_modulus: m does not divide p-1");
        Int g;
        Int mm(m);
        Int q1 = q - 1;
        mpz_gcd(g.get_mpz_t(), mm.get_mpz_t(), q1.get_mpz_t());
        if (g != 1) throw InvalidArgument("check_modulus: gcd(m, q-1) != 1");
    }
    const BitRange range = sample_range(N);
    for (const Int* v : {&p, &q}) {
        auto bits = bit_length(*v);
        if (bits < range.lo || bits > range.hi)
            throw InvalidArgument("check_modulus: prime bit length outside range");
    }
}

bool residue_test(const Int& g, const ModulusParams& params) {
    if (!is_unit(g, params.n)) throw InvalidArgument("residue_test: g is not a unit mod n");
    Int gp = g % params.p;
    if (params.m == 2) {
        Int gq = g % params.q;
        return powmod(gp, (params.p - 1) / 2, params.p) == 1 &&
               powmod(gq, (params.q - 1) / 2, params.q) == 1;
    }
    return powmod(gp, (params.p - 1) / params.m, params.p) == 1;
}

namespace {

// m-th root mod p in the hard case m | p-1: Adleman-Manders-Miller,
// i.e. Tonelli-Shanks generalized to prime index m.
std::optional<Int> amm_root(const Int& g, const Int& p, unsigned m, Rng& rng,
                            const RootOptions& opts) {
    const Int mm(m);
    if (powmod(g, (p - 1) / mm, p) != 1) return std::nullopt;

    // p - 1 = m^t * s with m not dividing s
    Int s = p - 1;
    unsigned t = 0;
    while (s % mm == 0) {
        s /= mm;
        ++t;
    }

    // non-residue eta gives a generator xi of the Sylow-m subgroup
    Int xi = 0;
    for (unsigned i = 0; i < opts.nonresidue_attempts; ++i) {
        Int eta = rng.unit_mod(p);
        if (powmod(eta, (p - 1) / mm, p) != 1) {
            xi = powmod(eta, s, p);
            break;
        }
    }
    if (xi == 0) {
        if (p < 65536) {
            // exhaustive fallback at toy sizes
            for (Int x = 1; x < p; ++x)
                if (powmod(x, mm, p) == g) return x;
            return std::nullopt;
        }
        throw SearchExhausted("mth_root_mod_prime: no non-residue found within budget");
    }

    // split the exponent group Z_{p-1} = Z_{m^t} x Z_s
    Int mt;
    mpz_ui_pow_ui(mt.get_mpz_t(), m, t);
    Int u = invmod(s % mt, mt);
    Int proj = s * u;                    // = 1 mod m^t, = 0 mod s
    Int g_m = powmod(g, proj, p);        // Sylow-m component
    Int g_s = g * invmod(g_m, p) % p;    // s-torsion component

    Int root_s = powmod(g_s, invmod(mm % s, s), p);

    // Pohlig-Hellman digits of log_xi(g_m), base m
    Int e = 0;
    Int xi_inv = invmod(xi, p);
    Int cur = g_m;
    Int digit_base = 1;
    for (unsigned i = 0; i < t; ++i) {
        Int probe = powmod(cur, mt / (digit_base * mm), p);
        // probe = (xi^(m^(t-1)))^digit
        Int gen = powmod(xi, mt / mm, p);
        unsigned digit = 0;
        Int acc = 1;
        while (acc != probe) {
            acc = acc * gen % p;
            if (++digit >= m) throw Error("mth_root_mod_prime: dlog digit search failed");
        }
        e += digit_base * digit;
        cur = cur * powmod(xi_inv, digit_base * digit, p) % p;
        digit_base *= mm;
    }
    if (e % mm != 0) return std::nullopt;  // not a residue (cannot happen after the test above)
    Int root_m = powmod(xi, e / mm, p);
    return root_s * root_m % p;
}

}  // namespace

std::optional<Int> mth_root_mod_prime(const Int& g, const Int& p, unsigned m, Rng& rng,
                                      const RootOptions& opts) {
    if (p < 2) throw InvalidArgument("mth_root_mod_prime: p must be prime");
    Int gp = g % p;
    if (gp < 0) gp += p;
    if (gp == 0) return Int(0);
    const Int mm(m);
    Int p1 = p - 1;
    Int gcd_mp;
    mpz_gcd(gcd_mp.get_mpz_t(), mm.get_mpz_t(), p1.get_mpz_t());
    if (gcd_mp == 1) return powmod(gp, invmod(mm % p1, p1), p);
    return amm_root(gp, p, m, rng, opts);
}

std::optional<Int> mth_root_mod_n(const Int& g, const ModulusParams& params, Rng& rng,
                                  const RootOptions& opts) {
    if (!is_unit(g, params.n)) throw InvalidArgument("mth_root_mod_n: g is not a unit mod n");
    auto hp = mth_root_mod_prime(g % params.p, params.p, params.m, rng, opts);
    if (!hp) return std::nullopt;
    auto hq = mth_root_mod_prime(g % params.q, params.q, params.m, rng, opts);
    if (!hq) return std::nullopt;
    return crt_combine(*hp, *hq, params.p, params.q);
}

FactorResult factor_from_root_oracle(const Int& n, unsigned m, const RootOracle& oracle, Rng& rng,
                                     const FactorOptions& opts) {
    const std::uint64_t budget = opts.budget ? opts.budget : 64ull * bit_length(n);
    const Int mm(m);
    FactorResult result;
    while (result.iterations < budget) {
        ++result.iterations;
        Int x = rng.unit_mod(n);
        Int power = powmod(x, mm, n);
        auto y = oracle(power);
        if (!y) throw Error("factor_from_root_oracle: oracle failed on an m-th power");
        if (powmod(*y, mm, n) != power)
            throw Error("factor_from_root_oracle: oracle returned a non-root");
        if (x == *y) continue;
        Int d = x - *y;
        Int g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (g < 0) g = -g;
        if (g == 1 || g == n) continue;  // trivial split (possible only for m = 2)
        Int other = n / g;
        result.p = std::min(g, other);
        result.q = std::max(g, other);
        return result;
    }
    throw SearchExhausted("factor_from_root_oracle: budget of " + std::to_string(budget) +
                          " iterations exceeded");
}

}  // namespace solvhe
