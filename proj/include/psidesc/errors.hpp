#pragma once

#include <stdexcept>
#include <string>

namespace psidesc {

/// Malformed or out-of-contract input (bad indices, unstable (g,n), parse errors).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An exhaustive operation was refused because the search space exceeds the
/// configured budget. `required` is the size that would have been needed.
struct budget_error : std::runtime_error {
    std::string required;
    budget_error(std::string required_size, const std::string& what)
        : std::runtime_error(what), required(std::move(required_size)) {}
};

/// A cache import found a record disagreeing with an already-cached value.
struct conflict_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace psidesc
