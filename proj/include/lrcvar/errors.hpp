#pragma once

#include <stdexcept>
#include <string>

namespace lrcvar {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input: bad files, invalid parameters, instances
/// that violate a precondition. The CLI maps these to exit code 2.
class InputError : public Error {
  public:
    using Error::Error;
};

/// Instance file could not be parsed. Carries the line (1-based, 0 when not
/// applicable) and the field path that failed.
class ParseError : public InputError {
  public:
    ParseError(const std::string& message, std::size_t line, std::string field)
        : InputError(message), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

  private:
    std::size_t line_;
    std::string field_;
};

/// The chain under some policy does not have the structure an operation
/// requires (e.g. a unique stationary distribution).
class ChainError : public InputError {
  public:
    using InputError::InputError;
};

/// Numerical or internal failure inside a solver. Never reported as success.
/// The CLI maps these to exit code 3.
class SolverError : public Error {
  public:
    using Error::Error;
};

} // namespace lrcvar
