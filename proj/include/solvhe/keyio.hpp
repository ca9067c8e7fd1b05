#pragma once

#include <string>

#include "solvhe/composite.hpp"

namespace solvhe {

/// 64-bit FNV-1a of the serialized public material, as 16 hex digits.
std::string fingerprint_of_public(const CompositeKey& key);

/// COMPKEY v1 file: blinding length, the group spec, one CYCKEY block
/// per factor, the representative table and, for restricted systems,
/// the user group with its embedding.
std::string serialize_composite(const CompositeKey& key, bool with_secret);
CompositeKey parse_composite(const std::string& text);

/// CTEXT v1 file.
std::string serialize_ciphertext(const Ciphertext& c);
Ciphertext parse_ciphertext(const std::string& text, const CompositeKey& key);

}  // namespace solvhe
