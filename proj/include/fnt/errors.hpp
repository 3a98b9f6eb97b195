#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fnt {

/// Decoding failed because the held coefficient vectors do not reach rank k.
class InsufficientRankError : public std::runtime_error {
public:
    InsufficientRankError(std::size_t rank, std::size_t required)
        : std::runtime_error("insufficient rank " + std::to_string(rank) + " of " +
                             std::to_string(required)),
          rank_(rank),
          required_(required) {}

    std::size_t rank() const { return rank_; }
    std::size_t required() const { return required_; }

private:
    std::size_t rank_;
    std::size_t required_;
};

/// Two inputs that must agree (duplicate blocks, coord vs. explicit
/// coefficients) do not.
class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed share container bytes.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The overlay graph cannot grow (or hold) the requested positions.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reduction preconditions not met for the current overlay state.
class CannotReduceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file rejected; line is 1-based.
class ScenarioParseError : public std::runtime_error {
public:
    ScenarioParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace fnt
