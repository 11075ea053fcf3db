#pragma once

#include <stdexcept>
#include <string>

namespace steiner {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: parse errors, bad vertex ids, violated preconditions.
class InputError : public Error {
public:
    using Error::Error;
};

/// No Steiner tree exists (terminals in different components).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Request exceeds a configured capacity (terminal caps, index l).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Checked weight arithmetic overflowed.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Index file cannot be loaded (bad magic, version, hash, truncation).
class FormatError : public Error {
public:
    using Error::Error;
};

/// An internal invariant was broken. Always a bug, never bad input.
class InvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace steiner
