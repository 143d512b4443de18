#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chd {

// Base for every error raised by the library. The C API maps each subclass
// onto a distinct status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file or record.
class ParseError : public Error {
public:
    using Error::Error;
};

// A caller broke an operation's precondition (mismatched lengths, bad
// split index, mixed feature kinds, ...).
class ContractViolation : public Error {
public:
    using Error::Error;
};

// Not enough reviews / sequence points for the requested computation.
class SequenceTooShort : public Error {
public:
    SequenceTooShort(std::size_t actual, std::size_t required)
        : Error("sequence too short: have " + std::to_string(actual) + ", need at least " +
                std::to_string(required)),
          actual_(actual),
          required_(required) {}

    std::size_t actual() const noexcept { return actual_; }
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t actual_;
    std::size_t required_;
};

// Sampling pool cannot satisfy a dataset construction request.
class InsufficientPool : public Error {
public:
    using Error::Error;
};

}  // namespace chd
