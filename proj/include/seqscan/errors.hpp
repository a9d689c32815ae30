#pragma once

#include <stdexcept>
#include <string>

namespace seqscan {

/// Malformed or inconsistent user input (files, parameters).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad indices, unsorted change points).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace seqscan
