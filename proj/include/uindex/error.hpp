#pragma once

#include <stdexcept>
#include <string>

namespace uindex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a precondition (bad parameters, pattern shorter than ell, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Input data is unusable: unreadable file, empty text, malformed FASTA.
class DataError : public Error {
public:
    using Error::Error;
};

/// Serialized index is corrupt, truncated or from an incompatible version.
class FormatError : public DataError {
public:
    using DataError::DataError;
};

} // namespace uindex
