#pragma once

#include <stdexcept>
#include <string>

namespace guandan {

/// Base class for all errors raised by the library.
struct GuandanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed argument or configuration value.
struct InvalidInputError : GuandanError {
    using GuandanError::GuandanError;
};

/// Card multiset does not match the declared combo shape.
struct InvalidComboError : GuandanError {
    using GuandanError::GuandanError;
};

/// Wildcard assignment is malformed (non-wildcard key, joker target, ...).
struct InvalidWildError : GuandanError {
    using GuandanError::GuandanError;
};

/// Operation not applicable to the current game state.
struct InvalidStateError : GuandanError {
    using GuandanError::GuandanError;
};

/// LLM backend failure after exhausting retries.
struct BackendError : GuandanError {
    using GuandanError::GuandanError;
};

}  // namespace guandan
