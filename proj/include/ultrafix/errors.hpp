#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ultrafix {

enum class ErrorKind {
    DivisionByZero,
    PrecisionExhausted,
    FieldMismatch,
    InvalidField,
    InvalidArgument,
    DimensionMismatch,
    SingularMatrix,
    NotAContraction,
    DomainViolation,
    NotAdmissible,
    DomainEscape,
    NotConverged,
    NotAFixedPoint,
    SingularA,
    NotCertifiable,
    TargetOutsideGuarantee,
    OutsideWindow,
    WindowNotFound,
    IdentityFailure,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `details` carries the quantitative
/// context (e.g. the strictness bound and the threshold it failed to beat)
/// as exact strings so the CLI can report it without reformatting.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::map<std::string, std::string> details = {})
        : std::runtime_error(message), kind_(kind), details_(std::move(details)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::map<std::string, std::string>& details() const noexcept { return details_; }

private:
    ErrorKind kind_;
    std::map<std::string, std::string> details_;
};

}  // namespace ultrafix
