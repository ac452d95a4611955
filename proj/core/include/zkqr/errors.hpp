#pragma once

#include <stdexcept>

namespace zkqr {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unsupported or out-of-range argument (bad bit length, zero iterations, ...).
struct ParameterError : Error { using Error::Error; };

// Arithmetic domain violation (e.g. modulus below 2).
struct DomainError : Error { using Error::Error; };

// The random source could not produce bytes.
struct EntropyError : Error { using Error::Error; };

// Reading or writing a backing file failed.
struct StorageError : Error { using Error::Error; };

// register_key on an already-taken key id.
struct ConflictError : Error { using Error::Error; };

// lookup_key on an unknown key id.
struct NotFoundError : Error { using Error::Error; };

// Malformed input value, e.g. an empty key id.
struct ValidationError : Error { using Error::Error; };

// Input is not syntactically valid JSON.
struct ParseError : Error { using Error::Error; };

// JSON parsed but does not match the expected document shape.
struct SchemaError : Error { using Error::Error; };

// Field content violates the canonical encoding (hex width, case, ...).
struct EncodingError : Error { using Error::Error; };

// Payload does not fit any QR version at the requested EC level.
struct CapacityError : Error { using Error::Error; };

// Matrix or image could not be read back as a QR symbol.
struct QrDecodeError : Error { using Error::Error; };

// Key material and group parameters belong to different parameter sets.
struct ParamsMismatchError : Error { using Error::Error; };

}  // namespace zkqr
