#pragma once

#include <stdexcept>
#include <string>

namespace shiftscan {

enum class ErrorCode {
    InvalidSeries,
    ConfigurationInvalid,
    DegenerateSeries,
    UnsupportedLevel,
    InvalidCount,
    SingularFit,
    InsufficientOverlap,
    InvalidArgument,
    SearchTooLarge,
    Parse,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace shiftscan
