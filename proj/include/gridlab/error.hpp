#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridlab {

/// Base for all gridlab failures that are thrown (never thrown during
/// evaluation; evaluation reports failures as error values).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed formula or script text. `offset` is the 0-based character
/// position of the offending token.
struct SyntaxError : Error {
    size_t offset;
    SyntaxError(const std::string& what, size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
};

/// Function name outside the supported set.
struct UnknownFunction : Error {
    size_t offset;
    std::string name;
    UnknownFunction(std::string name, size_t offset)
        : Error("unknown function '" + name + "'"), offset(offset), name(std::move(name)) {}
};

/// A reference resolves outside the grid, or an address exceeds the bounds.
struct RefOutOfGrid : Error {
    using Error::Error;
};

struct OutOfBounds : Error {
    using Error::Error;
};

/// Move destination partially overlaps the source block.
struct OverlapError : Error {
    using Error::Error;
};

/// Values-mode trend fill over a non-numeric seed.
struct NonNumericSeed : Error {
    using Error::Error;
};

/// Fill target does not contain the seed or extends it on both axes.
struct InvalidFill : Error {
    using Error::Error;
};

/// The strict circular policy refused an edit that would create a cycle.
struct EditRejected : Error {
    using Error::Error;
};

} // namespace gridlab
