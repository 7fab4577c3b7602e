#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace obsv {

enum class ErrorKind {
    SyntaxError,
    UnknownSymbol,
    NonIntegerExponent,
    DivisionByZero,
    TranscendentalNode,
    DomainError,
    MissingEquation,
    DuplicateEquation,
    NotAffineIn,
    ZeroCoefficient,
    NotAffine,
    SingularSystem,
    NotSquare,
    AllPointsDegenerate,
    EvaluationError,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` distinguishes the failure.
/// `position()` is a 0-based character offset for parser errors, or npos.
class Error : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Error(ErrorKind kind, const std::string& message, std::size_t position = npos)
        : std::runtime_error(message), kind_(kind), position_(position) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t position() const noexcept { return position_; }

    /// True for errors caused by malformed user input (parse-level problems).
    bool is_input_error() const noexcept;

private:
    ErrorKind kind_;
    std::size_t position_;
};

}  // namespace obsv
