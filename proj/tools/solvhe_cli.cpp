#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "solvhe/errors.hpp"
#include "solvhe/keyio.hpp"
#include "solvhe/numtheory.hpp"
#include "solvhe/pipeline.hpp"

namespace {

using namespace solvhe;

constexpr int kExitNotSolvable = 2;
constexpr int kExitSizeBudget = 3;
constexpr int kExitKeyMismatch = 4;
constexpr int kExitMalformed = 5;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << data;
}

Rng make_rng(const std::optional<std::uint64_t>& seed) {
    return seed ? Rng(*seed) : Rng::from_entropy();
}

struct GroupSpecInput {
    enum class Kind { Cyclic, Builtin, Table, Semidirect } kind;
    unsigned prime = 0;
    std::string name_or_path;
};

GroupSpecInput parse_group_spec(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw ParseError("group spec must be cyclic:<p> | builtin:<name> | table:<file> | "
                         "semidirect:<file>");
    std::string kind = s.substr(0, colon);
    std::string rest = s.substr(colon + 1);
    GroupSpecInput out;
    out.name_or_path = rest;
    if (kind == "cyclic") {
        out.kind = GroupSpecInput::Kind::Cyclic;
        try {
            out.prime = static_cast<unsigned>(std::stoul(rest));
        } catch (const std::exception&) {
            throw ParseError("cyclic:<p> needs a numeric prime");
        }
    } else if (kind == "builtin") {
        out.kind = GroupSpecInput::Kind::Builtin;
    } else if (kind == "table") {
        out.kind = GroupSpecInput::Kind::Table;
    } else if (kind == "semidirect") {
        out.kind = GroupSpecInput::Kind::Semidirect;
    } else {
        throw ParseError("unknown group spec kind '" + kind + "'");
    }
    return out;
}

CompositeKey run_keygen(const GroupSpecInput& spec, unsigned bits, unsigned blinding, Rng& rng) {
    switch (spec.kind) {
        case GroupSpecInput::Kind::Cyclic:
            return keygen_composite(SemidirectSpec::trivial({spec.prime}), bits, blinding, rng);
        case GroupSpecInput::Kind::Builtin:
            return keygen_for_group(builtin_group(spec.name_or_path), bits, blinding, rng);
        case GroupSpecInput::Kind::Table:
            return keygen_for_group(parse_table(read_file(spec.name_or_path)), bits, blinding, rng);
        case GroupSpecInput::Kind::Semidirect:
            return keygen_composite(parse_spec(read_file(spec.name_or_path)), bits, blinding, rng);
    }
    throw Error("unreachable");
}

struct BenchRow {
    std::string op, group;
    unsigned bits;
    double mean_ms, p95_ms;
};

BenchRow summarize(std::string op, std::string group, unsigned bits, std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    double mean = 0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(samples.size());
    std::size_t p95_at = static_cast<std::size_t>(0.95 * static_cast<double>(samples.size() - 1));
    return BenchRow{std::move(op), std::move(group), bits, mean, samples[p95_at]};
}

int run_bench(const std::vector<unsigned>& bit_sizes, const std::vector<std::string>& groups,
              unsigned trials, const std::string& format, const std::string& out_path,
              std::optional<std::uint64_t> seed) {
    using clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    std::uint64_t seed_base = seed ? *seed : 1;
    for (const std::string& group : groups) {
        for (unsigned bits : bit_sizes) {
            std::vector<double> t_keygen, t_encrypt, t_eval, t_decrypt;
            for (unsigned trial = 0; trial < trials; ++trial) {
                Rng rng(seed_base + 1000003ull * trial);
                auto spec = parse_group_spec(group);
                auto t0 = clock::now();
                CompositeKey key = run_keygen(spec, bits, 8, rng);
                auto t1 = clock::now();
                Ciphertext c1 = encrypt(key, key.plaintext_count() > 1 ? 1 : 0, rng);
                auto t2 = clock::now();
                Ciphertext c2 = eval_multiply(key, c1, c1);
                auto t3 = clock::now();
                (void)decrypt(key, c2);
                auto t4 = clock::now();
                auto ms = [](auto a, auto b) {
                    return std::chrono::duration<double, std::milli>(b - a).count();
                };
                t_keygen.push_back(ms(t0, t1));
                t_encrypt.push_back(ms(t1, t2));
                t_eval.push_back(ms(t2, t3));
                t_decrypt.push_back(ms(t3, t4));
            }
            std::string label = group.substr(group.find(':') + 1);
            rows.push_back(summarize("keygen", label, bits, t_keygen));
            rows.push_back(summarize("encrypt", label, bits, t_encrypt));
            rows.push_back(summarize("eval", label, bits, t_eval));
            rows.push_back(summarize("decrypt", label, bits, t_decrypt));
        }
    }
    std::ostringstream out;
    if (format == "csv") {
        out << "op,group,bits,mean_ms,p95_ms\n";
        for (const auto& r : rows)
            out << r.op << "," << r.group << "," << r.bits << "," << r.mean_ms << "," << r.p95_ms
                << "\n";
    } else {
        for (const auto& r : rows) {
            std::ostringstream line;
            line << r.op << " " << r.group << " " << r.bits << "b";
            out << line.str() << std::string(line.str().size() < 28 ? 28 - line.str().size() : 1, ' ')
                << "mean " << r.mean_ms << " ms, p95 " << r.p95_ms << " ms\n";
        }
    }
    if (out_path.empty())
        std::cout << out.str();
    else
        write_file(out_path, out.str());
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"homomorphic encryption over finite solvable groups"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "deterministic randomness seed")->expected(1);

    // keygen
    auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
    std::string group_spec = "builtin:S3";
    unsigned bits = 256, blinding = 8;
    std::string pub_path = "key.pub", sec_path = "key.sec";
    keygen_cmd->add_option("--group", group_spec, "cyclic:<p> | builtin:<name> | table:<file> | semidirect:<file>");
    keygen_cmd->add_option("--bits", bits, "factor prime bit length");
    keygen_cmd->add_option("--blinding", blinding, "kernel blinding length s");
    keygen_cmd->add_option("--pub", pub_path, "public key output path");
    keygen_cmd->add_option("--sec", sec_path, "secret key output path");

    // encrypt
    auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt one group element");
    std::string element;
    std::string enc_pub, enc_out = "c.ct";
    encrypt_cmd->add_option("element", element, "plaintext element label or index")->required();
    encrypt_cmd->add_option("--pub", enc_pub, "public key file")->required();
    encrypt_cmd->add_option("--out", enc_out, "ciphertext output path");

    // decrypt
    auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a ciphertext");
    std::string dec_sec, dec_in;
    decrypt_cmd->add_option("--sec", dec_sec, "secret key file")->required();
    decrypt_cmd->add_option("--in", dec_in, "ciphertext file")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "homomorphic evaluation: mul c1 c2 | inv c");
    std::vector<std::string> eval_args;
    std::string eval_pub, eval_out = "c.ct";
    eval_cmd->add_option("op", eval_args, "mul <c1> <c2> or inv <c>")->expected(-1);
    eval_cmd->add_option("--pub", eval_pub, "public key file")->required();
    eval_cmd->add_option("--out", eval_out, "ciphertext output path");

    // attack
    auto* attack_cmd = app.add_subcommand("attack", "factor a modulus through the root oracle");
    std::string atk_sec;
    unsigned atk_trials = 1;
    attack_cmd->add_option("--sec", atk_sec, "secret key file (provides the oracle)")->required();
    attack_cmd->add_option("--trials", atk_trials, "number of seeded runs");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "timing table");
    std::string bench_format = "text", bench_out;
    std::vector<unsigned> bench_bits{256, 512, 1024};
    std::vector<std::string> bench_groups{"cyclic:2", "builtin:S3", "builtin:D4"};
    unsigned bench_trials = 3;
    bench_cmd->add_option("--format", bench_format, "csv|text")
        ->check(CLI::IsMember({"csv", "text"}));
    bench_cmd->add_option("--out", bench_out, "output path (default stdout)");
    bench_cmd->add_option("--sizes", bench_bits, "bit sizes");
    bench_cmd->add_option("--groups", bench_groups, "group specs");
    bench_cmd->add_option("--trials", bench_trials, "trials per cell");

    CLI11_PARSE(app, argc, argv);

    if (keygen_cmd->parsed()) {
        Rng rng = make_rng(seed);
        CompositeKey key = run_keygen(parse_group_spec(group_spec), bits, blinding, rng);
        write_file(pub_path, serialize_composite(key, false));
        write_file(sec_path, serialize_composite(key, true));
        std::cout << "fingerprint " << key.fingerprint << "\n";
        return 0;
    }
    if (encrypt_cmd->parsed()) {
        Rng rng = make_rng(seed);
        CompositeKey key = parse_composite(read_file(enc_pub));
        unsigned plaintext = key.plaintext_by_label(element);
        Ciphertext c = encrypt(key, plaintext, rng);
        write_file(enc_out, serialize_ciphertext(c));
        return 0;
    }
    if (decrypt_cmd->parsed()) {
        CompositeKey key = parse_composite(read_file(dec_sec));
        if (!key.has_secret()) throw InvalidArgument("decrypt needs the secret key file");
        Ciphertext c = parse_ciphertext(read_file(dec_in), key);
        unsigned plaintext = decrypt(key, c);
        std::cout << key.plaintext_label(plaintext) << " " << plaintext << "\n";
        return 0;
    }
    if (eval_cmd->parsed()) {
        CompositeKey key = parse_composite(read_file(eval_pub));
        if (eval_args.size() == 3 && eval_args[0] == "mul") {
            Ciphertext c1 = parse_ciphertext(read_file(eval_args[1]), key);
            Ciphertext c2 = parse_ciphertext(read_file(eval_args[2]), key);
            write_file(eval_out, serialize_ciphertext(eval_multiply(key, c1, c2)));
            return 0;
        }
        if (eval_args.size() == 2 && eval_args[0] == "inv") {
            Ciphertext c = parse_ciphertext(read_file(eval_args[1]), key);
            write_file(eval_out, serialize_ciphertext(eval_invert(key, c)));
            return 0;
        }
        throw ParseError("eval expects 'mul <c1> <c2>' or 'inv <c>'");
    }
    if (attack_cmd->parsed()) {
        CompositeKey key = parse_composite(read_file(atk_sec));
        if (!key.has_secret()) throw InvalidArgument("attack needs the secret key file");
        CyclicKeyPair kp = key.factor_pair(0);
        ModulusParams params = kp.params();
        std::uint64_t total_iterations = 0;
        FactorResult last;
        for (unsigned t = 0; t < atk_trials; ++t) {
            Rng rng = seed ? Rng(*seed + t) : Rng::from_entropy();
            RootOracle oracle = [&](const Int& g) { return mth_root_mod_n(g, params, rng); };
            last = factor_from_root_oracle(kp.pub.n, kp.pub.m, oracle, rng);
            total_iterations += last.iterations;
        }
        std::cout << to_hex(last.p) << " " << to_hex(last.q) << " "
                  << (static_cast<double>(total_iterations) / atk_trials) << "\n";
        return 0;
    }
    if (bench_cmd->parsed()) {
        return run_bench(bench_bits, bench_groups, bench_trials, bench_format, bench_out, seed);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const NotSolvable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotSolvable;
    } catch (const SizeBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSizeBudget;
    } catch (const KeyMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitKeyMismatch;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
