#pragma once

#include <stdexcept>
#include <string>

namespace bootperc {

// Bad arguments or preconditions supplied by the caller.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration oracle was asked for more than it can brute-force.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// A result contradicts an invariant that must hold for every valid input.
// Raised loudly; never swallowed.
class InternalFault : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bootperc
