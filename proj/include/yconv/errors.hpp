#pragma once

#include <stdexcept>
#include <string>

namespace yconv {

/// Malformed or out-of-contract input (bad exponent, descriptor mismatch, ...).
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A configured size or iteration budget was exceeded.
struct resource_limit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative procedure collapsed to an all-zero state.
struct degenerate_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace yconv
