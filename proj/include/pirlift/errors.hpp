#pragma once

#include <stdexcept>
#include <string>

namespace pirlift {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad call arguments: mismatched moduli, wrong lengths, out-of-range values.
struct ParamError : Error {
    using Error::Error;
};

/// The requested parameters cannot support the construction
/// (field too small, incompatible characteristic, divisibility violated).
struct InfeasibleError : Error {
    using Error::Error;
};

/// Explicit input fails a structural invariant (non-MDS generator,
/// rank-deficient noise code, broken decoding identity).
struct ValidationError : Error {
    using Error::Error;
};

/// No decoding equation exists for the requested mixed position.
struct NotDecodableError : Error {
    using Error::Error;
};

/// Rejection-sampling budget exhausted without an acceptable draw.
struct RetryExhaustedError : Error {
    using Error::Error;
};

/// An internal consistency check failed; indicates a bug upstream.
struct InternalError : Error {
    using Error::Error;
};

/// Exact enumeration would exceed the state-space budget.
struct EnumerationInfeasibleError : Error {
    using Error::Error;
};

} // namespace pirlift
