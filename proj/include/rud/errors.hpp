#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rud {

/// Raised when an iterate, gradient or objective value becomes non-finite
/// or leaves the representable range.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long iteration = -1)
        : std::runtime_error(what), iteration_(iteration) {}

    /// Iteration index at which the failure was detected, or -1 if unknown.
    long iteration() const noexcept { return iteration_; }

private:
    long iteration_;
};

/// Raised when two independent routes to the same answer disagree.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed binary input. `offset` is the byte position of the problem.
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace rud
