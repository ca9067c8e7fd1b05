#include "solvhe/keyio.hpp"

#include <cstdint>
#include <sstream>

#include "solvhe/errors.hpp"

namespace solvhe {

namespace {

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string public_body(const CompositeKey& key) {
    std::ostringstream out;
    out << "COMPKEY v1\n";
    out << "s=" << key.blinding_s << "\n";
    out << "bits=" << key.N << "\n";
    out << serialize_spec(key.group->spec());
    for (unsigned j = 0; j < key.factor_pubs.size(); ++j) {
        CyclicKeyPair kp;
        kp.N = key.N;
        kp.pub = key.factor_pubs[j];
        out << serialize_cyclic(kp, false);
    }
    out << "reps:\n";
    unsigned count = key.plaintext_count();
    for (unsigned i = 0; i < count; ++i)
        out << i << "=" << serialize_word(key.rep_word(key.to_h_index(i))) << "\n";
    if (key.restriction) {
        const auto& r = *key.restriction;
        out << "restrict:\n";
        out << serialize_table(r.user_group);
        out << "names=";
        for (unsigned i = 0; i < r.user_group.order(); ++i) {
            if (i) out << ",";
            out << r.user_group.name(i);
        }
        out << "\n";
        out << "embed=";
        for (std::size_t i = 0; i < r.embed.size(); ++i) {
            if (i) out << ",";
            out << r.embed[i];
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

std::string fingerprint_of_public(const CompositeKey& key) {
    std::uint64_t h = fnv1a(public_body(key));
    std::ostringstream out;
    out << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4) out << ((h >> shift) & 0xf);
    return out.str();
}

std::string serialize_composite(const CompositeKey& key, bool with_secret) {
    std::string body = public_body(key);
    if (!with_secret) return body + "end\n";
    if (!key.has_secret())
        throw InvalidArgument("serialize_composite: no secret half available");
    std::ostringstream out;
    out << body << "secrets:\n";
    for (unsigned j = 0; j < key.factor_pubs.size(); ++j) {
        const auto& sec = (*key.factor_secs)[j];
        out << "p=" << to_hex(sec.p) << "\n";
        out << "q=" << to_hex(sec.q) << "\n";
        out << "s=" << to_hex(sec.s) << "\n";
    }
    out << "end\n";
    return out.str();
}

namespace {

std::string take_prefix(const std::string& line, const std::string& prefix, const char* what) {
    if (line.rfind(prefix, 0) != 0)
        throw ParseError(std::string("composite key: expected ") + what + ", got '" + line + "'");
    return line.substr(prefix.size());
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        out.push_back(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

CompositeKey parse_composite(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto need = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(std::string("composite key: truncated at ") + what);
    };
    need("header");
    if (line != "COMPKEY v1") throw ParseError("composite key: missing COMPKEY v1 header");

    CompositeKey key;
    need("s=");
    key.blinding_s = static_cast<unsigned>(std::stoul(take_prefix(line, "s=", "s=")));
    need("bits=");
    key.N = static_cast<unsigned>(std::stoul(take_prefix(line, "bits=", "bits=")));

    // spec block: factors=, optional levels=, action lines until CYCKEY
    std::ostringstream spec_text;
    need("factors=");
    spec_text << take_prefix(line, "", "factors=") << "\n";
    while (std::getline(in, line)) {
        if (line == "CYCKEY v1") break;
        spec_text << line << "\n";
    }
    key.group = std::make_shared<SemidirectGroup>(parse_spec(spec_text.str()));

    // CYCKEY blocks (line currently == "CYCKEY v1")
    std::vector<CyclicPublic> pubs;
    for (unsigned j = 0; j < key.group->factor_count(); ++j) {
        std::ostringstream block;
        block << "CYCKEY v1\n";
        for (int want = 0; want < 3; ++want) {
            need("cyclic key line");
            block << line << "\n";
        }
        ParsedCyclic pc = parse_cyclic(block.str());
        pc.pub.label = j + 1;
        pubs.push_back(std::move(pc.pub));
        if (j + 1 < key.group->factor_count()) {
            need("next CYCKEY");
            if (line != "CYCKEY v1") throw ParseError("composite key: expected CYCKEY v1 block");
        }
    }
    key.factor_pubs = std::move(pubs);
    {
        std::vector<FactorDescriptor> factors;
        for (const auto& pk : key.factor_pubs) factors.push_back(ResidueFactor{pk.n, pk.m});
        key.g_ctx = std::make_shared<FreeProduct>(std::move(factors));
        std::vector<FactorDescriptor> kfactors;
        for (unsigned j = 0; j < key.group->factor_count(); ++j)
            kfactors.push_back(
                TableFactor{std::make_shared<TableGroup>(make_cyclic_group(key.group->factor_order(j)))});
        key.k_ctx = std::make_shared<FreeProduct>(std::move(kfactors));
    }

    need("reps:");
    if (line != "reps:") throw ParseError("composite key: missing reps: block");
    std::vector<std::string> rep_lines;
    while (std::getline(in, line)) {
        if (line == "restrict:" || line == "secrets:" || line == "end") break;
        rep_lines.push_back(line);
    }

    if (line == "restrict:") {
        need("order=");
        unsigned order = static_cast<unsigned>(std::stoul(take_prefix(line, "order=", "order=")));
        std::ostringstream table_text;
        table_text << "order=" << order << "\n";
        for (unsigned r = 0; r < order; ++r) {
            need("table row");
            table_text << line << "\n";
        }
        TableGroup bare = parse_table(table_text.str());
        need("names=");
        std::vector<std::string> names = split_commas(take_prefix(line, "names=", "names="));
        if (names.size() != order) throw ParseError("composite key: wrong number of names");
        // rebuild with names
        std::vector<unsigned> table(static_cast<std::size_t>(order) * order);
        for (unsigned a = 0; a < order; ++a)
            for (unsigned b = 0; b < order; ++b) table[a * order + b] = bare.mul(a, b);
        TableGroup user(order, std::move(table), std::move(names));
        need("embed=");
        std::vector<std::uint64_t> embed;
        for (const auto& tok : split_commas(take_prefix(line, "embed=", "embed=")))
            embed.push_back(std::stoull(tok));
        if (embed.size() != order) throw ParseError("composite key: wrong embedding size");
        key.restriction = CompositeKey::Restriction{std::move(user), std::move(embed)};
        need("closing line");
    }

    if (line == "secrets:") {
        std::vector<CyclicSecret> secs;
        for (unsigned j = 0; j < key.factor_pubs.size(); ++j) {
            CyclicSecret sec;
            need("p=");
            sec.p = from_hex(take_prefix(line, "p=", "p="));
            need("q=");
            sec.q = from_hex(take_prefix(line, "q=", "q="));
            need("s=");
            sec.s = from_hex(take_prefix(line, "s=", "s="));
            secs.push_back(std::move(sec));
        }
        key.factor_secs = std::move(secs);
        need("end");
    }
    if (line != "end") throw ParseError("composite key: missing end marker");

    // cross-check the published representative table
    if (rep_lines.size() != key.plaintext_count())
        throw ParseError("composite key: reps block has wrong size");
    for (unsigned i = 0; i < rep_lines.size(); ++i) {
        std::string expect = std::to_string(i) + "=";
        if (rep_lines[i].rfind(expect, 0) != 0)
            throw ParseError("composite key: bad reps line '" + rep_lines[i] + "'");
        GroupWord w = parse_word(rep_lines[i].substr(expect.size()), key.g_ctx);
        if (!(w == key.rep_word(key.to_h_index(i))))
            throw ParseError("composite key: reps entry disagrees with factor representatives");
    }

    key.refresh_fingerprint();
    return key;
}

std::string serialize_ciphertext(const Ciphertext& c) {
    std::ostringstream out;
    out << "CTEXT v1\n";
    out << "key=" << c.key_id << "\n";
    out << serialize_word(c.word) << "\n";
    return out.str();
}

Ciphertext parse_ciphertext(const std::string& text, const CompositeKey& key) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "CTEXT v1")
        throw ParseError("ciphertext: missing CTEXT v1 header");
    if (!std::getline(in, line) || line.rfind("key=", 0) != 0)
        throw ParseError("ciphertext: missing key= line");
    std::string key_id = line.substr(4);
    if (key_id != key.fingerprint)
        throw KeyMismatch("ciphertext was produced under a different key");
    if (!std::getline(in, line)) throw ParseError("ciphertext: missing word line");
    GroupWord word = parse_word(line, key.g_ctx);
    return Ciphertext{std::move(word), std::move(key_id)};
}

}  // namespace solvhe
