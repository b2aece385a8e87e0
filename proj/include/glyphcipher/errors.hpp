#pragma once

#include <stdexcept>
#include <string>

namespace glyphcipher {

// Base class for all library failures that a caller can act on.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data: bad file contents, invalid characters,
// out-of-range values, block-length mismatches.
struct FormatError : Error {
    using Error::Error;
};

// A key matrix whose determinant shares a factor with the modulus.
struct NotInvertibleError : Error {
    using Error::Error;
};

// Training reached a non-finite MSE.
struct TrainingDivergedError : Error {
    using Error::Error;
};

} // namespace glyphcipher
