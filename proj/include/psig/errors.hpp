#pragma once

#include <stdexcept>
#include <string>

namespace psig {

/// Invalid user input or configuration (bad parameters, empty series, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// File access or parse failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a valid result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace psig
