#pragma once

#include <stdexcept>
#include <string>

namespace tsca {

// Bad user input: malformed rule files, out-of-range states, invalid grids.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AlphabetMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// A table, word space or permutation would exceed the hard size limit.
class BudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

// The rule does not act bijectively on the requested cyclic configurations.
class NotBijective : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An internal re-verification failed. Always a bug, never a user error.
class VerificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace tsca
