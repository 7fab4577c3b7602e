#include "obsv/error.hpp"

namespace obsv {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::NonIntegerExponent: return "NonIntegerExponent";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::TranscendentalNode: return "TranscendentalNode";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::MissingEquation: return "MissingEquation";
    case ErrorKind::DuplicateEquation: return "DuplicateEquation";
    case ErrorKind::NotAffineIn: return "NotAffineIn";
    case ErrorKind::ZeroCoefficient: return "ZeroCoefficient";
    case ErrorKind::NotAffine: return "NotAffine";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::AllPointsDegenerate: return "AllPointsDegenerate";
    case ErrorKind::EvaluationError: return "EvaluationError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool Error::is_input_error() const noexcept
{
    switch (kind_) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownSymbol:
    case ErrorKind::NonIntegerExponent:
    case ErrorKind::MissingEquation:
    case ErrorKind::DuplicateEquation:
    case ErrorKind::InvalidArgument:
        return true;
    default:
        return false;
    }
}

}  // namespace obsv
