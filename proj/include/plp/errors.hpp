#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace plp {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A build-time knob (sieve limit, oracle limit) is outside its allowed range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An argument is outside the operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A required parameter is missing or malformed (CLI and file inputs).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A generator cannot produce the requested sequence.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// The requested interval width is not reachable at working precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

/// A certifier's hypothesis is certifiably violated by the input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A certifier that assumes all-composite input was handed a prime term.
class NotAllCompositeError : public PreconditionError {
public:
    explicit NotAllCompositeError(mpz_class term)
        : PreconditionError("sequence contains the prime term " + term.get_str()
                            + "; the composite reciprocal bound assumes every term is composite"),
          term_(std::move(term)) {}

    const mpz_class& term() const { return term_; }

private:
    mpz_class term_;
};

/// A state the underlying theorems rule out; always an implementation bug.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace plp
