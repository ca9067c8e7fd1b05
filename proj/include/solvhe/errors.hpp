#pragma once

#include <stdexcept>
#include <string>

namespace solvhe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rejection sampling ran out of its attempt budget.
struct SearchExhausted : Error {
    using Error::Error;
};

/// An argument failed a precondition (non-unit residue, bad index, ...).
struct InvalidArgument : Error {
    using Error::Error;
};

/// Ciphertext did not decrypt under the given key.
struct DecryptError : Error {
    using Error::Error;
};

/// Ciphertext / key fingerprint mismatch.
struct KeyMismatch : Error {
    using Error::Error;
};

/// Malformed file or wire input.
struct ParseError : Error {
    using Error::Error;
};

/// Group construction exceeded the configured size budget.
struct SizeBudgetExceeded : Error {
    using Error::Error;
};

/// Input group is not solvable.
struct NotSolvable : Error {
    using Error::Error;
};

}  // namespace solvhe
