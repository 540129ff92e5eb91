#pragma once

#include <stdexcept>
#include <string>

namespace fpcav
{
// Bad input: violated precondition, unknown name, malformed document.
class InvalidArgument : public std::invalid_argument
{
public:
    explicit InvalidArgument(const std::string &what) : std::invalid_argument(what) {}
};

// The numerics could not produce a meaningful answer for valid input.
class NumericalFailure : public std::runtime_error
{
public:
    explicit NumericalFailure(const std::string &what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string &message)
{
    if (!condition)
        throw InvalidArgument(message);
}
} // namespace fpcav
