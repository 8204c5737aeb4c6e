#pragma once

#include <stdexcept>
#include <string>

namespace dirkkl {

// Bad argument to an operation (coordinate out of range, duplicate
// assignment, malformed bit string, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A size guard was exceeded (arity cap, network guard, brute-force guard).
class CapacityError : public std::length_error {
public:
    CapacityError(const std::string& guard, const std::string& what)
        : std::length_error(what), guard_(guard) {}

    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

// Input does not have the structure an operation requires.
class StructureError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A ratio whose denominator vanishes was requested directly.
class UndefinedRatioError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace dirkkl
