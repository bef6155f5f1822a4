#pragma once

#include <stdexcept>
#include <string>

namespace tmss {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument or degenerate request (odd state at r = 0, bad factor index, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Operands whose factor shapes do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

// The truncated Fock space cannot hold the requested state.
class TruncationError : public Error {
public:
    using Error::Error;
};

// A runtime numerical guard tripped (norm drift, non-Hermitian sample, cutoff overflow).
class NumericalGuardError : public Error {
public:
    using Error::Error;
};

}  // namespace tmss
